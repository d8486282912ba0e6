#include "sdg/fields.hpp"

#include "local_ops.hpp"

namespace sdg {

FieldEvaluator::FieldEvaluator(const PolygonalMesh& mesh, const DofMaps& dofs, const DiscreteSolution& sol)
    : mesh_(mesh), dofs_(dofs), basis_(dofs.order), seg_(dofs.W.order), nl_(basis_.size()) {
  const std::size_t nt = mesh.triangles.size();
  p_.resize(nt * nl_);
  u_.resize(nt * 2 * nl_);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto d = dofs.S.local(t);
    for (std::size_t i = 0; i < nl_; ++i) p_[t * nl_ + i] = sol.p(d[i]);
  }
  for (std::size_t el = 0; el < mesh.elements.size(); ++el) {
    const Element& E = mesh.elements[el];
    const Eigen::VectorXd full =
        dofs.V.basis[el] *
        sol.u.segment(static_cast<Eigen::Index>(dofs.V.offset[el]), static_cast<Eigen::Index>(dofs.V.count(el)));
    const auto base = static_cast<std::size_t>(E.first_triangle) * 2 * nl_;
    for (Eigen::Index i = 0; i < full.size(); ++i) u_[base + static_cast<std::size_t>(i)] = full(i);
  }
  const std::size_t nw = seg_.size();
  w_.resize(dofs.W.slot_edge.size() * nw);
  for (std::size_t s = 0; s < dofs.W.slot_edge.size(); ++s) {
    const auto d = dofs.W.local(s);
    for (std::size_t i = 0; i < nw; ++i) w_[s * nw + i] = sol.p_frac(d[i]);
  }
}

double FieldEvaluator::pressure(std::size_t tri, Point x) const {
  std::vector<double> v(nl_);
  basis_.eval(detail::triangle_map(mesh_, tri).to_reference(x), v);
  double s = 0.0;
  for (std::size_t i = 0; i < nl_; ++i) s += p_[tri * nl_ + i] * v[i];
  return s;
}

Vec2 FieldEvaluator::grad_pressure(std::size_t tri, Point x) const {
  const TriangleMap map = detail::triangle_map(mesh_, tri);
  std::vector<Vec2> g(nl_);
  basis_.eval_grad(map.to_reference(x), g);
  Vec2 s;
  for (std::size_t i = 0; i < nl_; ++i) s = s + p_[tri * nl_ + i] * g[i];
  return map.grad(s);
}

Vec2 FieldEvaluator::flux(std::size_t tri, Point x) const {
  std::vector<double> v(nl_);
  basis_.eval(detail::triangle_map(mesh_, tri).to_reference(x), v);
  Vec2 s;
  for (std::size_t i = 0; i < nl_; ++i) {
    s.x += u_[tri * 2 * nl_ + i] * v[i];
    s.y += u_[tri * 2 * nl_ + nl_ + i] * v[i];
  }
  return s;
}

double FieldEvaluator::div_flux(std::size_t tri, Point x) const {
  const TriangleMap map = detail::triangle_map(mesh_, tri);
  std::vector<Vec2> g(nl_);
  basis_.eval_grad(map.to_reference(x), g);
  double s = 0.0;
  for (std::size_t i = 0; i < nl_; ++i) {
    const Vec2 gp = map.grad(g[i]);
    s += u_[tri * 2 * nl_ + i] * gp.x + u_[tri * 2 * nl_ + nl_ + i] * gp.y;
  }
  return s;
}

std::pair<Point, Point> FieldEvaluator::fracture_segment(std::size_t slot) const {
  const FractureMesh& fm = mesh_.fracture_meshes[static_cast<std::size_t>(dofs_.W.slot_fracture[slot])];
  const auto pos = static_cast<std::size_t>(dofs_.W.slot_position[slot]);
  return {mesh_.points[fm.nodes[pos]], mesh_.points[fm.nodes[pos + 1]]};
}

double FieldEvaluator::fracture_pressure(std::size_t slot, double t) const {
  std::vector<double> v(seg_.size());
  seg_.eval(t, v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w_[slot * v.size() + i] * v[i];
  return s;
}

double FieldEvaluator::fracture_slope(std::size_t slot, double t) const {
  std::vector<double> v(seg_.size());
  seg_.eval_deriv(t, v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w_[slot * v.size() + i] * v[i];
  const auto [a, b] = fracture_segment(slot);
  return s / distance(a, b);
}

double FieldEvaluator::fracture_curvature(std::size_t slot, double t) const {
  std::vector<double> v(seg_.size());
  seg_.eval_second(t, v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w_[slot * v.size() + i] * v[i];
  const auto [a, b] = fracture_segment(slot);
  const double h = distance(a, b);
  return s / (h * h);
}

}  // namespace sdg
