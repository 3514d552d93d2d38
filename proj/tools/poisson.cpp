// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/driver.hpp"
#include "tensorfem/mesh_io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>

using namespace tensorfem;

// Exit codes: 0 success, 2 configuration error, 3 solver non-convergence,
// 4 I/O error.
int main(int argc, char **argv)
{
   CLI::App app{"High-order Poisson solver on quadrilateral meshes"};
   RunConfig config;
   std::string mesh_path, vtk_path, table_path;
   std::string assembly = "partial", prec = "jacobi", solution = "sine";

   auto *mesh_opt = app.add_option("--mesh", mesh_path, "native mesh file");
   auto *cart_opt =
      app.add_option("--cartesian", config.cartesian_n,
                     "n for an n-by-n unit-square mesh")
         ->capture_default_str();
   mesh_opt->excludes(cart_opt);
   cart_opt->excludes(mesh_opt);
   app.add_option("--order", config.order, "polynomial order")
      ->capture_default_str();
   app.add_option("--assembly", assembly, "full|partial")
      ->check(CLI::IsMember({"full", "partial"}))
      ->capture_default_str();
   app.add_option("--prec", prec, "none|jacobi")
      ->check(CLI::IsMember({"none", "jacobi"}))
      ->capture_default_str();
   app.add_option("--tol", config.tol, "relative CG tolerance")
      ->capture_default_str();
   app.add_option("--max-iters", config.max_iters, "CG iteration cap")
      ->capture_default_str();
   app.add_option("--amr-iters", config.amr.iters,
                  "adaptive refinement rounds")
      ->capture_default_str();
   app.add_option("--theta", config.amr.theta,
                  "refinement threshold in (0,1]")
      ->capture_default_str();
   app.add_option("--max-irregularity", config.amr.irregularity_limit,
                  "hanging-chain depth bound, 0 = unlimited")
      ->capture_default_str();
   app.add_flag("--aniso", config.amr.anisotropic,
                "directional refinement splits");
   app.add_option("--solution", solution, "sine|front")
      ->check(CLI::IsMember({"sine", "front"}))
      ->capture_default_str();
   app.add_option("--vtk", vtk_path, "write the solution as legacy VTK");
   app.add_option("--table", table_path, "write the report table to a file");
   app.add_option("--threads", config.threads, "element-loop threads")
      ->capture_default_str();
   app.add_option("--convergence", config.convergence_levels,
                  "uniform refinement levels")
      ->capture_default_str();

   try {
      app.parse(argc, argv);
   } catch (const CLI::CallForHelp &e) {
      return app.exit(e);
   } catch (const CLI::ParseError &e) {
      app.exit(e);
      return 2;
   }
   config.mesh_path = mesh_path;
   config.assembly =
      assembly == "full" ? AssemblyMode::Full : AssemblyMode::Partial;
   config.prec =
      prec == "jacobi" ? Preconditioner::Jacobi : Preconditioner::None;
   config.solution =
      solution == "front" ? SolutionId::Front : SolutionId::Sine;

   // Classify unreadable or malformed mesh files before the run.
   if (!config.mesh_path.empty()) {
      try {
         load_native_file(config.mesh_path);
      } catch (const std::exception &e) {
         std::fprintf(stderr, "error: %s\n", e.what());
         return 4;
      }
   }

   RunResult result;
   try {
      validate(config);
      if (config.convergence_levels > 0) {
         result = convergence_study(config);
      } else if (config.amr.iters > 0) {
         result = amr_loop(config);
      } else {
         result = solve_poisson(config);
      }
   } catch (const std::invalid_argument &e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
   } catch (const std::exception &e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return std::string_view(e.what()).starts_with("cg_solve") ? 3 : 2;
   }

   const std::string table = report(result.rows);
   std::fputs(table.c_str(), stdout);
   try {
      if (!table_path.empty()) {
         std::ofstream out(table_path);
         out << table;
         if (!out.flush()) {
            throw std::runtime_error("cannot write table file '" +
                                     table_path + "'");
         }
      }
      if (!vtk_path.empty() && result.u) {
         write_solution_vtk(*result.u, manufactured_solution(config.solution),
                            vtk_path);
      }
   } catch (const std::exception &e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 4;
   }
   if (!result.converged) {
      std::fprintf(stderr, "error: linear solver did not converge\n");
      return 3;
   }
   return 0;
}
