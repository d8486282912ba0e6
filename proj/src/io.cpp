#include "sdg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sdg/error.hpp"
#include "sdg/fields.hpp"

namespace sdg {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

}  // namespace

const std::vector<std::string>& history_columns() {
  static const std::vector<std::string> cols = {
      "iteration", "N",     "T1",    "T2",      "T3", "T4",         "T5",  "T6",         "T7",         "T8",
      "eta",       "osc",   "err_Q", "err_V",   "err_sdg",          "EI",  "n_elements", "rho_E",      "t_solve_ms",
      "t_estimate_ms"};
  return cols;
}

std::string format_history_csv(const ConvergenceHistory& history) {
  std::ostringstream os;
  const auto& cols = history_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const IterationRecord& r : history.records) {
    os << r.iteration << ',' << r.n_dofs;
    for (double t : r.terms) os << ',' << num(t);
    os << ',' << num(r.eta) << ',' << num(r.osc);
    if (r.error) {
      os << ',' << num(r.error->flux_q) << ',' << num(r.error->v_norm) << ',' << num(r.error->total) << ','
         << num(r.error->effectivity);
    } else {
      os << ",,,,";
    }
    os << ',' << r.n_elements << ',' << num(r.rho_E) << ',' << short_num(r.t_solve_ms) << ','
       << short_num(r.t_estimate_ms) << '\n';
  }
  return os.str();
}

void write_history_csv(const std::string& path, const ConvergenceHistory& history) {
  write_text(path, format_history_csv(history));
}

std::string format_convergence_svg(const ConvergenceHistory& history, int order, const std::string& title) {
  const double W = 640, H = 480, L = 70, R = 160, T = 40, B = 60;
  std::vector<std::pair<double, double>> eta;
  std::vector<std::pair<double, double>> err;
  for (const IterationRecord& r : history.records) {
    const double n = static_cast<double>(r.n_dofs);
    if (r.eta > 0.0) eta.emplace_back(std::log10(n), std::log10(r.eta));
    if (r.error && r.error->total > 0.0) err.emplace_back(std::log10(n), std::log10(r.error->total));
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  for (const auto* s : {&eta, &err}) {
    for (auto [x, y] : *s) {
      if (first) {
        x0 = x1 = x;
        y0 = y1 = y;
        first = false;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  x0 = std::floor(x0);
  x1 = std::max(std::ceil(x1), x0 + 1);
  y0 = std::floor(y0);
  y1 = std::max(std::ceil(y1), y0 + 1);
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(x0); d <= static_cast<int>(x1); ++d) {
    os << "<text x=\"" << px(d) << "\" y=\"" << H - B + 20 << "\" text-anchor=\"middle\" font-size=\"12\">1e" << d
       << "</text>\n";
  }
  for (int d = static_cast<int>(y0); d <= static_cast<int>(y1); ++d) {
    os << "<text x=\"" << L - 8 << "\" y=\"" << py(d) + 4 << "\" text-anchor=\"end\" font-size=\"12\">1e" << d
       << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\" font-size=\"13\">N</text>\n";

  auto polyline = [&](const std::vector<std::pair<double, double>>& s, const char* color, const char* label,
                      int row) {
    if (s.empty()) return;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (auto [x, y] : s) os << px(x) << ',' << py(y) << ' ';
    os << "\"/>\n";
    for (auto [x, y] : s) os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    const double ly = T + 20 + 20 * row;
    os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 40 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R + 45 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << label << "</text>\n";
  };
  polyline(eta, "#1f77b4", "estimator", 0);
  polyline(err, "#d62728", "error", 1);

  // Reference slope -k/2 anchored at the first estimator point.
  if (!eta.empty()) {
    const double slope = -0.5 * order;
    const auto [ax, ay] = eta.front();
    double bx = x1;
    double by = ay + slope * (bx - ax);
    if (by < y0) {
      by = y0;
      bx = ax + (by - ay) / slope;
    }
    os << "<line x1=\"" << px(ax) << "\" y1=\"" << py(ay) << "\" x2=\"" << px(bx) << "\" y2=\"" << py(by)
       << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    const double ly = T + 60;
    os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 40 << "\" y2=\"" << ly
       << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    os << "<text x=\"" << W - R + 45 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">slope " << short_num(slope)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_convergence_svg(const std::string& path, const ConvergenceHistory& history, int order,
                           const std::string& title) {
  write_text(path, format_convergence_svg(history, order, title));
}

void write_solution_vtk(const std::string& path, const PolygonalMesh& mesh, const DofMaps& dofs,
                        const DiscreteSolution& sol) {
  const FieldEvaluator fields(mesh, dofs, sol);
  const std::size_t nt = mesh.triangles.size();
  std::ostringstream os;
  os << "# vtk DataFile Version 3.0\nsdg solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << 3 * nt << " double\n";
  for (const SubTriangle& t : mesh.triangles)
    for (int v : t.pts) os << num(mesh.points[v].x) << ' ' << num(mesh.points[v].y) << " 0\n";
  os << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (std::size_t t = 0; t < nt; ++t) os << "3 " << 3 * t << ' ' << 3 * t + 1 << ' ' << 3 * t + 2 << '\n';
  os << "CELL_TYPES " << nt << '\n';
  for (std::size_t t = 0; t < nt; ++t) os << "5\n";
  os << "POINT_DATA " << 3 * nt << "\nSCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (std::size_t t = 0; t < nt; ++t)
    for (int v : mesh.triangles[t].pts) os << num(fields.pressure(t, mesh.points[v])) << '\n';
  os << "CELL_DATA " << nt << "\nVECTORS flux double\n";
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& p = mesh.triangles[t].pts;
    const Point c = (1.0 / 3.0) * (mesh.points[p[0]] + mesh.points[p[1]] + mesh.points[p[2]]);
    const Vec2 u = fields.flux(t, c);
    os << num(u.x) << ' ' << num(u.y) << " 0\n";
  }
  os << "SCALARS element int 1\nLOOKUP_TABLE default\n";
  for (const SubTriangle& t : mesh.triangles) os << t.element << '\n';
  os << "SCALARS side int 1\nLOOKUP_TABLE default\n";
  for (const SubTriangle& t : mesh.triangles) os << t.side << '\n';
  write_text(path, os.str());
}

void write_fracture_vtk(const std::string& path, const PolygonalMesh& mesh, const DofMaps& dofs,
                        const DiscreteSolution& sol) {
  const FieldEvaluator fields(mesh, dofs, sol);
  const std::size_t ns = dofs.W.slot_edge.size();
  std::ostringstream os;
  os << "# vtk DataFile Version 3.0\nsdg fracture pressure\nASCII\nDATASET POLYDATA\n";
  os << "POINTS " << 2 * ns << " double\n";
  for (std::size_t s = 0; s < ns; ++s) {
    const auto [a, b] = fields.fracture_segment(s);
    os << num(a.x) << ' ' << num(a.y) << " 0\n" << num(b.x) << ' ' << num(b.y) << " 0\n";
  }
  os << "LINES " << ns << ' ' << 3 * ns << '\n';
  for (std::size_t s = 0; s < ns; ++s) os << "2 " << 2 * s << ' ' << 2 * s + 1 << '\n';
  os << "POINT_DATA " << 2 * ns << "\nSCALARS fracture_pressure double 1\nLOOKUP_TABLE default\n";
  for (std::size_t s = 0; s < ns; ++s) {
    os << num(fields.fracture_pressure(s, 0.0)) << '\n' << num(fields.fracture_pressure(s, 1.0)) << '\n';
  }
  write_text(path, os.str());
}

VtkData read_vtk(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  VtkData d;
  std::string line;
  for (int i = 0; i < 3; ++i) std::getline(in, line);  // header, title, ASCII
  std::string word;
  enum class Section { None, Point, Cell } section = Section::None;
  std::size_t count = 0;
  auto fail = [&](const std::string& what) { throw Error(ErrorCode::IoError, path + ": " + what); };
  while (in >> word) {
    if (word == "DATASET") {
      in >> d.dataset;
    } else if (word == "POINTS") {
      std::string type;
      in >> count >> type;
      d.points.resize(count);
      for (auto& p : d.points) {
        double z = 0.0;
        in >> p.x >> p.y >> z;
      }
    } else if (word == "CELLS" || word == "LINES" || word == "POLYGONS") {
      std::size_t n = 0, total = 0;
      in >> n >> total;
      d.cells.resize(n);
      for (auto& c : d.cells) {
        std::size_t m = 0;
        in >> m;
        c.resize(m);
        for (int& v : c) in >> v;
      }
    } else if (word == "CELL_TYPES") {
      std::size_t n = 0;
      in >> n;
      for (std::size_t i = 0; i < n; ++i) {
        int t = 0;
        in >> t;
      }
    } else if (word == "POINT_DATA") {
      in >> count;
      section = Section::Point;
    } else if (word == "CELL_DATA") {
      in >> count;
      section = Section::Cell;
    } else if (word == "SCALARS") {
      std::string name, type, lut, lutname;
      int comps = 1;
      in >> name >> type >> comps >> lut >> lutname;
      std::vector<double> v(count);
      for (double& x : v) in >> x;
      (section == Section::Point ? d.point_scalars : d.cell_scalars)[name] = std::move(v);
    } else if (word == "VECTORS") {
      std::string name, type;
      in >> name >> type;
      std::vector<Vec2> v(count);
      for (Vec2& x : v) {
        double z = 0.0;
        in >> x.x >> x.y >> z;
      }
      if (section != Section::Cell) fail("point vectors are not supported");
      d.cell_vectors[name] = std::move(v);
    } else {
      fail("unexpected token '" + word + "'");
    }
    if (!in && !in.eof()) fail("malformed data");
  }
  return d;
}

std::string format_mesh_json(const PolygonalMesh& mesh) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (const Point& p : mesh.points) j["vertices"].push_back({p.x, p.y});
  j["n_polygon_vertices"] = mesh.vertices.size();
  j["polygons"] = nlohmann::json::array();
  for (std::size_t el = 0; el < mesh.elements.size(); ++el) {
    const Element& E = mesh.elements[el];
    j["polygons"].push_back({{"vertices", E.vertices},
                             {"corners", E.corners},
                             {"interior_point", mesh.center_point(static_cast<int>(el))},
                             {"level", E.level},
                             {"side", E.side}});
  }
  j["triangles"] = nlohmann::json::array();
  for (const SubTriangle& t : mesh.triangles) {
    j["triangles"].push_back({{"points", t.pts}, {"element", t.element}, {"primal_edge", t.primal_edge}});
  }
  j["edges"] = nlohmann::json::array();
  for (const Edge& e : mesh.edges) {
    nlohmann::json je = {{"points", e.pts},
                         {"kind", to_string(e.kind)},
                         {"length", e.length},
                         {"normal", {e.normal.x, e.normal.y}},
                         {"triangles", e.tri}};
    if (e.fracture >= 0) {
      je["fracture"] = e.fracture;
      je["segment"] = e.segment;
    }
    j["edges"].push_back(std::move(je));
  }
  j["fractures"] = nlohmann::json::array();
  for (const FractureMesh& fm : mesh.fracture_meshes) {
    j["fractures"].push_back({{"fracture", fm.fracture}, {"edges", fm.edges}, {"nodes", fm.nodes}});
  }
  return j.dump(1) + "\n";
}

void write_mesh_json(const std::string& path, const PolygonalMesh& mesh) { write_text(path, format_mesh_json(mesh)); }

void write_system_dump(const std::string& path, const LinearSystem& system) {
  std::ostringstream os;
  os << "# sdg linear system, 0-based indices\n";
  os << "# size " << system.A.rows() << " nnz " << system.A.nonZeros() << '\n';
  os << "# blocks V " << system.offsets[0] << " S " << system.offsets[1] << " W " << system.offsets[2] << " end "
     << system.offsets[3] << '\n';
  for (Eigen::Index c = 0; c < system.A.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(system.A, c); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << num(it.value()) << '\n';
  for (Eigen::Index i = 0; i < system.rhs.size(); ++i) os << "rhs " << i << ' ' << num(system.rhs(i)) << '\n';
  write_text(path, os.str());
}

}  // namespace sdg
