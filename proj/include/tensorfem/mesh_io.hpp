// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#ifndef TENSORFEM_MESH_IO_HPP
#define TENSORFEM_MESH_IO_HPP

#include "tensorfem/mesh.hpp"

#include <string>
#include <vector>

namespace tensorfem {

/// Parse failure with the 1-based line it occurred on.
class MeshParseError : public std::runtime_error {
public:
   MeshParseError(int line, const std::string &what)
      : std::runtime_error("mesh parse error at line " + std::to_string(line) +
                           ": " + what),
        line_(line) {}
   int line() const { return line_; }

private:
   int line_;
};

/// Serializes to the native text format; coordinates carry 17 significant
/// digits so a save/load round trip is bitwise exact.
std::string save_native(const Mesh &mesh);

/// Parses the native text format.
Mesh load_native(const std::string &text);

Mesh load_native_file(const std::string &path);
void save_native_file(const Mesh &mesh, const std::string &path);

/// Scalar field sampled on the VTK output lattice.
struct VtkField {
   std::string name;
   /// value at reference point (xh, yh) of element k
   std::function<double(int k, double xh, double yh)> sample;
};

/// Legacy VTK (version 2.0, ASCII, unstructured grid).  Every element is
/// sampled on an (s+1)^2 lattice and emitted as s^2 quad cells; fields become
/// POINT_DATA on the same lattice.
std::string print_vtk(const Mesh &mesh, const std::vector<VtkField> &fields,
                      int subdivisions);

void print_vtk_file(const Mesh &mesh, const std::vector<VtkField> &fields,
                    int subdivisions, const std::string &path);

} // namespace tensorfem

#endif
