// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#ifndef TENSORFEM_DRIVER_HPP
#define TENSORFEM_DRIVER_HPP

#include "tensorfem/forms.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tensorfem {

/// Built-in exact solutions for the Poisson driver.  Sine is smooth and
/// uniformly resolved; Front has a sharp circular layer that rewards local
/// refinement.
enum class SolutionId { Sine, Front };

enum class Preconditioner { None, Jacobi };

/// Exact solution with its gradient and the matching source f = -lap(u).
struct ManufacturedSolution {
   std::function<double(Vec2)> u;
   std::function<Vec2(Vec2)> grad;
   std::function<double(Vec2)> f;
};

ManufacturedSolution manufactured_solution(SolutionId id);

struct AmrOptions {
   /// Number of refinement rounds; the loop produces iters+1 solve rows.
   int iters = 0;
   /// Elements with error >= theta * max error are refined.
   double theta = 0.9;
   /// Hanging-chain depth bound handed to the forest; 0 means unlimited.
   int irregularity_limit = 0;
   /// Pick X/Y splits from directional error indicators instead of Iso.
   bool anisotropic = false;
};

struct RunConfig {
   /// Native mesh file; empty selects an n-by-n unit-square mesh.
   std::string mesh_path;
   int cartesian_n = 8;
   int order = 1;
   AssemblyMode assembly = AssemblyMode::Partial;
   Preconditioner prec = Preconditioner::Jacobi;
   double tol = 1e-12;
   int max_iters = 2000;
   AmrOptions amr;
   SolutionId solution = SolutionId::Sine;
   /// Uniform-refinement levels for a convergence study; 0 disables.
   int convergence_levels = 0;
   int threads = 1;
};

/// Throws std::invalid_argument for out-of-range configuration values.
void validate(const RunConfig &config);

/// One line of a run report.
struct ConvergenceRow {
   int n_true_dofs = 0;
   /// Largest element diameter.
   double h = 0.0;
   double l2_error = 0.0;
   /// log2 error ratio against the previous row; NaN on the first row.
   double order = 0.0;
   int cg_iterations = 0;
   /// Wall-clock time of the linear solve alone.
   double solve_seconds = 0.0;
   /// Point-factor storage of the assembled forms; 0 in full assembly.
   std::int64_t pa_stored_reals = 0;
};

/// Result of one solve or of a refinement sequence.  The space member keeps
/// the grid function's backing space alive.
struct RunResult {
   std::vector<ConvergenceRow> rows;
   std::shared_ptr<NcForest> forest;
   std::shared_ptr<const FeSpace> space;
   std::optional<GridFunction> u;
   bool converged = true;
};

/// Solves -div(grad u) = f on the given space with Dirichlet data taken from
/// the exact solution on every boundary attribute.  The linear system is
/// homogenized so essential values are reproduced exactly; the CG iteration
/// then starts from zero.
RunResult solve_on_space(std::shared_ptr<const FeSpace> space,
                         const ManufacturedSolution &sol,
                         const RunConfig &config);

/// Single solve on the configured mesh.
RunResult solve_poisson(const RunConfig &config);

/// Uniform-refinement study over config.convergence_levels levels, halving h
/// each level.  Requires a straight-sided mesh.
RunResult convergence_study(const RunConfig &config);

/// Solve/estimate/mark/refine loop driven by exact per-element errors.
/// Requires a straight-sided mesh.
RunResult amr_loop(const RunConfig &config);

/// Per-element L2 errors of a discrete solution against an exact one, and
/// optionally the directional split of the error-gradient energy along the
/// reference axes (used to choose anisotropic refinements).
struct ElementErrors {
   std::vector<double> l2;
   std::vector<Vec2> directional;
};

ElementErrors element_errors(const GridFunction &u,
                             const ManufacturedSolution &sol,
                             bool with_directional);

/// Elements whose error reaches theta times the maximum, with the split kind
/// chosen from the directional indicators when given: a direction wins an
/// anisotropic split when its indicator is at least twice the other one.
/// All errors zero selects nothing.
std::vector<std::pair<int, SplitKind>>
select_refinements(const std::vector<double> &errors,
                   const std::vector<Vec2> &directional, double theta);

/// Aligned ASCII table of the rows, 3 significant digits for h and errors.
/// with_timing=false omits the wall-clock column so tables can be compared
/// across runs.
std::string report(const std::vector<ConvergenceRow> &rows,
                   bool with_timing = true);

/// Writes the solution and its pointwise error as legacy VTK, sampling each
/// element on an order-by-order lattice.
void write_solution_vtk(const GridFunction &u, const ManufacturedSolution &sol,
                        const std::string &path);

} // namespace tensorfem

#endif
