// Copyright (c) 2026, the tensorfem authors. All rights reserved.
// SPDX-License-Identifier: BSD-3-Clause

#include "tensorfem/mesh_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tensorfem {

// Private access for the loader: node fields are attached after the vertex
// and element sections have validated the mesh.
class MeshIo {
public:
   static void set_nodes(Mesh &mesh, NodalField nodes)
   {
      mesh.set_nodes(std::move(nodes));
   }
};

namespace {

std::string fmt17(double v)
{
   char buf[32];
   std::snprintf(buf, sizeof(buf), "%.17g", v);
   return buf;
}

// Line-oriented tokenizer that tracks the current 1-based line number and
// skips blank lines.
class LineReader {
public:
   explicit LineReader(const std::string &text) : in_(text) {}

   int line() const { return line_; }

   bool next_line()
   {
      std::string raw;
      while (std::getline(in_, raw)) {
         line_++;
         tokens_.clear();
         std::istringstream ls(raw);
         std::string tok;
         while (ls >> tok) { tokens_.push_back(tok); }
         if (!tokens_.empty()) { return true; }
      }
      return false;
   }

   const std::vector<std::string> &tokens() const { return tokens_; }

   void expect_line(const std::string &what)
   {
      if (!next_line()) {
         throw MeshParseError(line_ + 1, "unexpected end of file, expected " +
                                          what);
      }
   }

private:
   std::istringstream in_;
   int line_ = 0;
   std::vector<std::string> tokens_;
};

int parse_int(const std::string &tok, int line, const char *what)
{
   size_t pos = 0;
   int v = 0;
   try {
      v = std::stoi(tok, &pos);
   }
   catch (const std::exception &) {
      pos = 0;
   }
   if (pos != tok.size()) {
      throw MeshParseError(line, std::string("expected ") + what + ", got '" +
                                    tok + "'");
   }
   return v;
}

double parse_double(const std::string &tok, int line, const char *what)
{
   size_t pos = 0;
   double v = 0.0;
   try {
      v = std::stod(tok, &pos);
   }
   catch (const std::exception &) {
      pos = 0;
   }
   if (pos != tok.size()) {
      throw MeshParseError(line, std::string("expected ") + what + ", got '" +
                                    tok + "'");
   }
   return v;
}

int parse_count(LineReader &r, const char *keyword)
{
   r.expect_line(std::string("'") + keyword + " <count>'");
   const auto &t = r.tokens();
   if (t.size() != 2 || t[0] != keyword) {
      throw MeshParseError(r.line(), std::string("expected '") + keyword +
                                        " <count>'");
   }
   const int n = parse_int(t[1], r.line(), "count");
   if (n < 0) { throw MeshParseError(r.line(), "negative count"); }
   return n;
}

} // namespace

std::string save_native(const Mesh &mesh)
{
   std::ostringstream out;
   out << "tensorfem-mesh v1\n";
   out << "dimension 2\n";
   out << "vertices " << mesh.n_vertices() << "\n";
   for (int i = 0; i < mesh.n_vertices(); i++) {
      out << fmt17(mesh.vertex(i).x) << " " << fmt17(mesh.vertex(i).y) << "\n";
   }
   out << "elements " << mesh.n_elements() << "\n";
   for (int k = 0; k < mesh.n_elements(); k++) {
      const MeshElement &e = mesh.element(k);
      out << e.attribute << " quad " << e.v[0] << " " << e.v[1] << " "
          << e.v[2] << " " << e.v[3] << "\n";
   }
   out << "boundary " << mesh.n_boundary() << "\n";
   for (int i = 0; i < mesh.n_boundary(); i++) {
      const BoundarySegment &s = mesh.boundary(i);
      out << s.attribute << " segment " << s.v[0] << " " << s.v[1] << "\n";
   }
   if (const NodalField *nodes = mesh.nodes()) {
      out << "nodes order " << nodes->order << " kind "
          << (nodes->kind == NodeKind::GaussLobatto ? "gausslobatto"
                                                    : "uniform")
          << "\n";
      const int n1 = nodes->order + 1;
      for (int k = 0; k < mesh.n_elements(); k++) {
         auto dofs = nodes->layout.dofs(k);
         for (int i = 0; i < n1 * n1; i++) {
            const Vec2 &c = nodes->coords[dofs[i]];
            out << fmt17(c.x) << " " << fmt17(c.y) << "\n";
         }
      }
   }
   return out.str();
}

Mesh load_native(const std::string &text)
{
   LineReader r(text);

   r.expect_line("'tensorfem-mesh v1'");
   {
      const auto &t = r.tokens();
      if (t.size() != 2 || t[0] != "tensorfem-mesh" || t[1] != "v1") {
         throw MeshParseError(r.line(), "bad header, expected "
                                        "'tensorfem-mesh v1'");
      }
   }
   r.expect_line("'dimension 2'");
   {
      const auto &t = r.tokens();
      if (t.size() != 2 || t[0] != "dimension" ||
          parse_int(t[1], r.line(), "dimension") != 2) {
         throw MeshParseError(r.line(), "expected 'dimension 2'");
      }
   }

   const int nv = parse_count(r, "vertices");
   std::vector<Vec2> vertices(nv);
   for (int i = 0; i < nv; i++) {
      r.expect_line("vertex coordinates");
      const auto &t = r.tokens();
      if (t.size() != 2) {
         throw MeshParseError(r.line(), "expected '<x> <y>'");
      }
      vertices[i] = {parse_double(t[0], r.line(), "coordinate"),
                     parse_double(t[1], r.line(), "coordinate")};
   }

   const int ne = parse_count(r, "elements");
   std::vector<MeshElement> elements(ne);
   for (int k = 0; k < ne; k++) {
      r.expect_line("element record");
      const auto &t = r.tokens();
      if (t.size() != 6) {
         throw MeshParseError(r.line(),
                              "expected '<attribute> quad <v0> <v1> <v2> "
                              "<v3>'");
      }
      if (t[1] != "quad") {
         throw MeshParseError(r.line(), "unsupported element type '" + t[1] +
                                           "'");
      }
      elements[k].attribute = parse_int(t[0], r.line(), "attribute");
      for (int i = 0; i < 4; i++) {
         const int v = parse_int(t[2 + i], r.line(), "vertex index");
         if (v < 0 || v >= nv) {
            throw MeshParseError(r.line(), "vertex index " +
                                              std::to_string(v) +
                                              " out of range");
         }
         elements[k].v[i] = v;
      }
   }

   const int nb = parse_count(r, "boundary");
   std::vector<BoundarySegment> boundary(nb);
   for (int i = 0; i < nb; i++) {
      r.expect_line("boundary record");
      const auto &t = r.tokens();
      if (t.size() != 4 || t[1] != "segment") {
         throw MeshParseError(r.line(),
                              "expected '<attribute> segment <v0> <v1>'");
      }
      boundary[i].attribute = parse_int(t[0], r.line(), "attribute");
      for (int j = 0; j < 2; j++) {
         const int v = parse_int(t[2 + j], r.line(), "vertex index");
         if (v < 0 || v >= nv) {
            throw MeshParseError(r.line(), "vertex index " +
                                              std::to_string(v) +
                                              " out of range");
         }
         boundary[i].v[j] = v;
      }
   }

   Mesh mesh(std::move(vertices), std::move(elements), std::move(boundary));

   if (r.next_line()) {
      const auto &t = r.tokens();
      const int header_line = r.line();
      if (t.size() != 5 || t[0] != "nodes" || t[1] != "order" ||
          t[3] != "kind") {
         throw MeshParseError(header_line,
                              "expected 'nodes order <m> kind <kind>'");
      }
      NodalField nodes;
      nodes.order = parse_int(t[2], header_line, "order");
      if (nodes.order < 1) {
         throw MeshParseError(header_line, "nodes order must be >= 1");
      }
      if (t[4] == "gausslobatto") {
         nodes.kind = NodeKind::GaussLobatto;
      }
      else if (t[4] == "uniform") {
         nodes.kind = NodeKind::Uniform;
      }
      else {
         throw MeshParseError(header_line, "unknown node kind '" + t[4] + "'");
      }
      nodes.layout = build_h1_layout(mesh.n_vertices(), mesh.topology(),
                                     mesh.elements(), nodes.order);
      nodes.coords.resize(nodes.layout.n_dofs);
      std::vector<bool> seen(nodes.layout.n_dofs, false);
      const int n1 = nodes.order + 1;
      for (int k = 0; k < mesh.n_elements(); k++) {
         auto dofs = nodes.layout.dofs(k);
         for (int i = 0; i < n1 * n1; i++) {
            r.expect_line("control point");
            const auto &ct = r.tokens();
            if (ct.size() != 2) {
               throw MeshParseError(r.line(), "expected '<x> <y>'");
            }
            const Vec2 c{parse_double(ct[0], r.line(), "coordinate"),
                         parse_double(ct[1], r.line(), "coordinate")};
            const int dof = dofs[i];
            if (seen[dof]) {
               const Vec2 &prev = nodes.coords[dof];
               const double scale =
                  std::max({1.0, std::abs(prev.x), std::abs(prev.y)});
               if (std::abs(prev.x - c.x) > 1e-12 * scale ||
                   std::abs(prev.y - c.y) > 1e-12 * scale) {
                  throw MeshParseError(r.line(),
                                       "inconsistent shared control point");
               }
            }
            else {
               nodes.coords[dof] = c;
               seen[dof] = true;
            }
         }
      }
      if (r.next_line()) {
         throw MeshParseError(r.line(), "trailing content after nodes");
      }
      MeshIo::set_nodes(mesh, std::move(nodes));
   }
   return mesh;
}

Mesh load_native_file(const std::string &path)
{
   std::ifstream in(path);
   if (!in) {
      throw std::runtime_error("cannot open mesh file '" + path + "'");
   }
   std::ostringstream buf;
   buf << in.rdbuf();
   return load_native(buf.str());
}

void save_native_file(const Mesh &mesh, const std::string &path)
{
   std::ofstream out(path);
   if (!out) {
      throw std::runtime_error("cannot write mesh file '" + path + "'");
   }
   out << save_native(mesh);
}

std::string print_vtk(const Mesh &mesh, const std::vector<VtkField> &fields,
                      int subdivisions)
{
   if (subdivisions < 1) {
      throw std::invalid_argument("print_vtk: need subdivisions >= 1");
   }
   const int s = subdivisions;
   const int pts_per_elem = (s + 1) * (s + 1);
   const int n_points = mesh.n_elements() * pts_per_elem;
   const int n_cells = mesh.n_elements() * s * s;

   std::ostringstream out;
   out << "# vtk DataFile Version 2.0\n";
   out << "tensorfem output\n";
   out << "ASCII\n";
   out << "DATASET UNSTRUCTURED_GRID\n";
   out << "POINTS " << n_points << " double\n";
   char buf[80];
   for (int k = 0; k < mesh.n_elements(); k++) {
      const ElementTransformation tr = mesh.transformation(k);
      for (int j = 0; j <= s; j++) {
         for (int i = 0; i <= s; i++) {
            const Vec2 p = tr.point(double(i) / s, double(j) / s);
            std::snprintf(buf, sizeof(buf), "%.12g %.12g 0\n", p.x, p.y);
            out << buf;
         }
      }
   }
   out << "CELLS " << n_cells << " " << 5 * n_cells << "\n";
   for (int k = 0; k < mesh.n_elements(); k++) {
      const int base = k * pts_per_elem;
      for (int j = 0; j < s; j++) {
         for (int i = 0; i < s; i++) {
            const int p0 = base + i + j * (s + 1);
            out << "4 " << p0 << " " << p0 + 1 << " " << p0 + s + 2 << " "
                << p0 + s + 1 << "\n";
         }
      }
   }
   out << "CELL_TYPES " << n_cells << "\n";
   for (int c = 0; c < n_cells; c++) { out << "9\n"; }
   if (!fields.empty()) {
      out << "POINT_DATA " << n_points << "\n";
      for (const VtkField &f : fields) {
         out << "SCALARS " << f.name << " double 1\n";
         out << "LOOKUP_TABLE default\n";
         for (int k = 0; k < mesh.n_elements(); k++) {
            for (int j = 0; j <= s; j++) {
               for (int i = 0; i <= s; i++) {
                  std::snprintf(buf, sizeof(buf), "%.12g\n",
                                f.sample(k, double(i) / s, double(j) / s));
                  out << buf;
               }
            }
         }
      }
   }
   return out.str();
}

void print_vtk_file(const Mesh &mesh, const std::vector<VtkField> &fields,
                    int subdivisions, const std::string &path)
{
   std::ofstream out(path);
   if (!out) {
      throw std::runtime_error("cannot write VTK file '" + path + "'");
   }
   out << print_vtk(mesh, fields, subdivisions);
}

} // namespace tensorfem
