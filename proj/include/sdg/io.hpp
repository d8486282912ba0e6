#pragma once

#include <map>
#include <string>
#include <vector>

#include "sdg/adaptivity.hpp"
#include "sdg/assembly.hpp"

namespace sdg {

/// history.csv columns, in order.
const std::vector<std::string>& history_columns();

/// CSV text of a convergence history; error columns are empty without an exact solution.
std::string format_history_csv(const ConvergenceHistory& history);
void write_history_csv(const std::string& path, const ConvergenceHistory& history);

/// Log-log plot of eta (and the error when known) against N with a reference slope -k/2.
std::string format_convergence_svg(const ConvergenceHistory& history, int order, const std::string& title);
void write_convergence_svg(const std::string& path, const ConvergenceHistory& history, int order,
                           const std::string& title);

/// Legacy VTK unstructured grid of the sub-mesh. Points are duplicated per triangle
/// (pressure is discontinuous); POINT_DATA "pressure", CELL_DATA "flux" (at the
/// centroid), "element" and "side".
void write_solution_vtk(const std::string& path, const PolygonalMesh& mesh, const DofMaps& dofs,
                        const DiscreteSolution& sol);

/// Legacy VTK polydata of the fracture meshes with POINT_DATA "fracture_pressure".
void write_fracture_vtk(const std::string& path, const PolygonalMesh& mesh, const DofMaps& dofs,
                        const DiscreteSolution& sol);

/// Minimal reader for the files written above.
struct VtkData {
  std::string dataset;  // UNSTRUCTURED_GRID or POLYDATA
  std::vector<Point> points;
  std::vector<std::vector<int>> cells;
  std::map<std::string, std::vector<double>> point_scalars;
  std::map<std::string, std::vector<double>> cell_scalars;
  std::map<std::string, std::vector<Vec2>> cell_vectors;
};
VtkData read_vtk(const std::string& path);

/// JSON description of vertices, polygons, sub-triangles and classified edges.
std::string format_mesh_json(const PolygonalMesh& mesh);
void write_mesh_json(const std::string& path, const PolygonalMesh& mesh);

/// Sparse system as text: header comments, then "row col value" lines (0-based) and
/// the right-hand side as "rhs row value" lines.
void write_system_dump(const std::string& path, const LinearSystem& system);

}  // namespace sdg
