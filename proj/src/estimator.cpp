#include "sdg/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "local_ops.hpp"
#include "sdg/error.hpp"
#include "sdg/fields.hpp"
#include "sdg/kernels.hpp"
#include "sdg/parallel.hpp"
#include "sdg/quadrature.hpp"

namespace sdg {

namespace {

using Index = Eigen::Index;

Contribution make_contribution(int term, double value, std::initializer_list<int> elements) {
  Contribution c;
  c.term = term;
  c.value = value;
  for (int el : elements) {
    if (el < 0) continue;
    if (std::find(c.elements.begin(), c.elements.begin() + c.n_elements, el) != c.elements.begin() + c.n_elements) {
      continue;
    }
    c.elements[static_cast<std::size_t>(c.n_elements++)] = el;
  }
  return c;
}

int element_of(const PolygonalMesh& mesh, int tri) { return mesh.triangles[static_cast<std::size_t>(tri)].element; }

struct ElementTerms {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
};

}  // namespace

EstimatorBreakdown compute_estimator(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMaps& dofs,
                                     const DiscreteSolution& sol) {
  const int k = dofs.order;
  const FieldEvaluator fields(mesh, dofs, sol);
  const detail::RefTable table = detail::tabulate(fields.basis(), 2 * k + 2);
  const EdgeQuadrature erule = edge_quadrature(2 * k + 2);
  const std::size_t nl = table.nl;
  const std::size_t nq = table.nq;

  EstimatorBreakdown out;

  // Terms 1-3, owned by one element each.
  std::vector<ElementTerms> local(mesh.elements.size());
  parallel_for(mesh.elements.size(), [&](std::size_t el) {
    const Element& E = mesh.elements[el];
    const Tensor2 K = detail::element_permeability(problem, mesh, el);
    const Tensor2 Kinv = K.inverse();
    detail::TriData td;
    std::vector<double> ux(nq), uy(nq), px(nq), py(nq), div(nq), tmp(nq);
    ElementTerms r;
    for (std::size_t j = 0; j < E.vertices.size(); ++j) {
      const std::size_t tri = static_cast<std::size_t>(E.first_triangle) + j;
      const SubTriangle& T = mesh.triangles[tri];
      detail::fill_triangle(mesh, tri, table, td);
      const auto pc = fields.pressure_coeffs(tri);
      const auto uc = fields.flux_coeffs(tri);
      const auto ucx = uc.subspan(0, nl);
      const auto ucy = uc.subspan(nl, nl);
      kernels::combine(ucx, table.phi, nq, ux);
      kernels::combine(ucy, table.phi, nq, uy);
      kernels::combine(pc, td.gx, nq, px);
      kernels::combine(pc, td.gy, nq, py);
      kernels::combine(ucx, td.gx, nq, div);
      kernels::combine(ucy, td.gy, nq, tmp);
      double s1 = 0.0;
      double s2 = 0.0;
      for (std::size_t q = 0; q < nq; ++q) {
        // u + K grad p, measured in the K^{-1} norm.
        const Vec2 kg = K.apply({px[q], py[q]});
        const Vec2 v{ux[q] + kg.x, uy[q] + kg.y};
        s1 += td.w[q] * dot(v, Kinv.apply(v));
        const double res = problem.source_at(td.x[q], T.side) - (div[q] + tmp[q]);
        s2 += td.w[q] * res * res;
      }
      r.t1 += s1;
      r.t2 += T.diameter * T.diameter * s2;

      // Dual edge (nu, b) shared with the next sub-triangle.
      const Edge& d = mesh.edges[static_cast<std::size_t>(T.dual_edges[1])];
      const Point a = mesh.points[d.pts[0]];
      const Point b = mesh.points[d.pts[1]];
      double s3 = 0.0;
      for (std::size_t q = 0; q < erule.size(); ++q) {
        const Point x = a + erule.points[q] * (b - a);
        const double jump = fields.pressure(static_cast<std::size_t>(d.tri[0]), x) -
                            fields.pressure(static_cast<std::size_t>(d.tri[1]), x);
        s3 += erule.weights[q] * d.length * jump * jump;
      }
      r.t3 += s3 / d.length;
    }
    local[el] = r;
  });
  for (std::size_t el = 0; el < mesh.elements.size(); ++el) {
    const int e = static_cast<int>(el);
    out.contributions.push_back(make_contribution(1, local[el].t1, {e}));
    out.contributions.push_back(make_contribution(2, local[el].t2, {e}));
    out.contributions.push_back(make_contribution(3, local[el].t3, {e}));
  }

  // Term 4: normal flux jumps on interior primal edges.
  for (std::size_t ei = 0; ei < mesh.edges.size(); ++ei) {
    const Edge& e = mesh.edges[ei];
    if (e.kind != EdgeKind::Interior) continue;
    const Point a = mesh.points[e.pts[0]];
    const Point b = mesh.points[e.pts[1]];
    double s = 0.0;
    for (std::size_t q = 0; q < erule.size(); ++q) {
      const Point x = a + erule.points[q] * (b - a);
      const double jump = dot(fields.flux(static_cast<std::size_t>(e.tri[0]), x) -
                                  fields.flux(static_cast<std::size_t>(e.tri[1]), x),
                              e.normal);
      s += erule.weights[q] * e.length * jump * jump;
    }
    out.contributions.push_back(
        make_contribution(4, e.length * s, {element_of(mesh, e.tri[0]), element_of(mesh, e.tri[1])}));
  }

  // Terms 5, 7, 8 on fracture edges.
  const DofMapW& W = dofs.W;
  out.fracture_edge_indicators.assign(W.slot_edge.size(), 0.0);
  for (std::size_t slot = 0; slot < W.slot_edge.size(); ++slot) {
    const Edge& e = mesh.edges[static_cast<std::size_t>(W.slot_edge[slot])];
    const auto t0 = static_cast<std::size_t>(e.tri[0]);
    const auto t1 = static_cast<std::size_t>(e.tri[1]);
    const double alpha = problem.alpha_gamma(e.fracture, e.segment);
    const double eta = problem.eta_gamma(e.fracture, e.segment);
    const double kg = problem.k_gamma(e.fracture, e.segment);
    const double ell = problem.domain.fractures[static_cast<std::size_t>(e.fracture)].thickness;
    const auto [a, b] = fields.fracture_segment(slot);
    double s5 = 0.0, s7 = 0.0, s8 = 0.0;
    for (std::size_t q = 0; q < erule.size(); ++q) {
      const double t = erule.points[q];
      const Point x = a + t * (b - a);
      const double w = erule.weights[q] * e.length;
      const double un0 = dot(fields.flux(t0, x), e.normal);
      const double un1 = dot(fields.flux(t1, x), e.normal);
      const double p0 = fields.pressure(t0, x);
      const double p1 = fields.pressure(t1, x);
      const double pg = fields.fracture_pressure(slot, t);
      const double r5 = ell * problem.fracture_source_at(x, e.fracture) + kg * fields.fracture_curvature(slot, t) +
                        (un0 - un1);
      const double r7 = (0.5 * (p0 + p1) - pg) / alpha - (un0 - un1);
      const double r8 = 0.5 * (un0 + un1) - (p0 - p1) / eta;
      s5 += w * r5 * r5;
      s7 += w * r7 * r7;
      s8 += w * r8 * r8;
    }
    const int e0 = element_of(mesh, e.tri[0]);
    const int e1 = element_of(mesh, e.tri[1]);
    const double h = e.length;
    out.contributions.push_back(make_contribution(5, h * h * s5, {e0, e1}));
    out.contributions.push_back(make_contribution(7, h * s7, {e0, e1}));
    out.contributions.push_back(make_contribution(8, h * s8, {e0, e1}));
    out.fracture_edge_indicators[slot] = h * h * s5 + h * s7 + h * s8;
  }

  // Term 6: jumps of K_G^{1/2} d_t p_G at interior fracture vertices.
  for (const FractureMesh& fm : mesh.fracture_meshes) {
    for (std::size_t pos = 1; pos < fm.edges.size(); ++pos) {
      const Edge& ep = mesh.edges[static_cast<std::size_t>(fm.edges[pos - 1])];
      const Edge& en = mesh.edges[static_cast<std::size_t>(fm.edges[pos])];
      const auto sp = static_cast<std::size_t>(W.edge_slot[static_cast<std::size_t>(fm.edges[pos - 1])]);
      const auto sn = static_cast<std::size_t>(W.edge_slot[static_cast<std::size_t>(fm.edges[pos])]);
      const double jump = std::sqrt(problem.k_gamma(ep.fracture, ep.segment)) * fields.fracture_slope(sp, 1.0) -
                          std::sqrt(problem.k_gamma(en.fracture, en.segment)) * fields.fracture_slope(sn, 0.0);
      const double hz = std::max(ep.length, en.length);
      out.contributions.push_back(make_contribution(
          6, hz * jump * jump,
          {element_of(mesh, ep.tri[0]), element_of(mesh, ep.tri[1]), element_of(mesh, en.tri[0]),
           element_of(mesh, en.tri[1])}));
    }
  }

  for (const Contribution& c : out.contributions) out.squared[static_cast<std::size_t>(c.term - 1)] += c.value;
  out.eta = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    out.terms[i] = std::sqrt(out.squared[i]);
    out.eta += out.terms[i];
  }
  out.element_indicators = localize(out, mesh);
  out.osc = data_oscillation(mesh, problem, k);
  return out;
}

std::vector<double> localize(const EstimatorBreakdown& breakdown, const PolygonalMesh& mesh) {
  std::vector<double> ind(mesh.elements.size(), 0.0);
  for (const Contribution& c : breakdown.contributions) {
    const double share = c.value / c.n_elements;
    for (int i = 0; i < c.n_elements; ++i) ind[static_cast<std::size_t>(c.elements[static_cast<std::size_t>(i)])] += share;
  }
  return ind;
}

double data_oscillation(const PolygonalMesh& mesh, const ProblemSpec& problem, int order) {
  const LagrangeTriangle basis(order);
  const int degree = std::max(2 * order + 2, 14);
  const detail::RefTable table = detail::tabulate(basis, degree);
  const auto nl = static_cast<Index>(table.nl);
  const std::size_t nq = table.nq;

  // The reference mass matrix scales with |det J|, so factor it once.
  Eigen::MatrixXd mref(nl, nl);
  kernels::weighted_gram(table.phi, table.nl, table.phi, table.nl, table.rule.weights, {mref.data(), mref.size()});
  const Eigen::LDLT<Eigen::MatrixXd> mfac(mref);

  std::vector<double> bulk(mesh.triangles.size(), 0.0);
  parallel_for(mesh.triangles.size(), [&](std::size_t tri) {
    const SubTriangle& T = mesh.triangles[tri];
    const TriangleMap map = detail::triangle_map(mesh, tri);
    std::vector<double> f(nq);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(nl);
    for (std::size_t q = 0; q < nq; ++q) {
      f[q] = problem.source_at(map.map(table.rule.points[q]), T.side);
      for (Index i = 0; i < nl; ++i) b(i) += table.rule.weights[q] * f[q] * table.phi[static_cast<std::size_t>(i) * nq + q];
    }
    const Eigen::VectorXd c = mfac.solve(b);
    std::vector<double> fh(nq);
    kernels::combine({c.data(), static_cast<std::size_t>(c.size())}, table.phi, nq, fh);
    double s = 0.0;
    for (std::size_t q = 0; q < nq; ++q) s += table.rule.weights[q] * (f[q] - fh[q]) * (f[q] - fh[q]);
    bulk[tri] = T.diameter * T.diameter * s * std::abs(map.det);
  });
  double total = 0.0;
  for (double v : bulk) total += v;

  const LagrangeSegment seg(order);
  const EdgeQuadrature erule = edge_quadrature(degree);
  const auto nw = static_cast<Index>(seg.size());
  Eigen::MatrixXd mseg = Eigen::MatrixXd::Zero(nw, nw);
  std::vector<double> psi(seg.size());
  std::vector<std::vector<double>> psi_q(erule.size());
  for (std::size_t q = 0; q < erule.size(); ++q) {
    seg.eval(erule.points[q], psi);
    psi_q[q] = psi;
    const Eigen::Map<const Eigen::VectorXd> v(psi.data(), nw);
    mseg.noalias() += erule.weights[q] * v * v.transpose();
  }
  const Eigen::LDLT<Eigen::MatrixXd> sfac(mseg);
  for (const Edge& e : mesh.edges) {
    if (e.kind != EdgeKind::Fracture) continue;
    const double ell = problem.domain.fractures[static_cast<std::size_t>(e.fracture)].thickness;
    const Point a = mesh.points[e.pts[0]];
    const Point b = mesh.points[e.pts[1]];
    std::vector<double> f(erule.size());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nw);
    for (std::size_t q = 0; q < erule.size(); ++q) {
      f[q] = problem.fracture_source_at(a + erule.points[q] * (b - a), e.fracture);
      for (Index i = 0; i < nw; ++i) rhs(i) += erule.weights[q] * f[q] * psi_q[q][static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd c = sfac.solve(rhs);
    double s = 0.0;
    for (std::size_t q = 0; q < erule.size(); ++q) {
      double fh = 0.0;
      for (Index i = 0; i < nw; ++i) fh += c(i) * psi_q[q][static_cast<std::size_t>(i)];
      s += erule.weights[q] * (f[q] - fh) * (f[q] - fh);
    }
    total += e.length * e.length * ell * ell * s * e.length;
  }
  return std::sqrt(total);
}

ErrorReport true_error(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMaps& dofs,
                       const DiscreteSolution& sol, const ExactSolution& exact, double eta) {
  if (!exact.pressure || !exact.grad_pressure || !exact.flux) {
    throw Error(ErrorCode::NoExactSolution, "problem '" + problem.name + "' has no exact bulk solution");
  }
  if (!mesh.fracture_meshes.empty() && (!exact.fracture_pressure || !exact.fracture_grad)) {
    throw Error(ErrorCode::NoExactSolution, "problem '" + problem.name + "' has no exact fracture solution");
  }
  const int k = dofs.order;
  const FieldEvaluator fields(mesh, dofs, sol);
  const detail::RefTable table = detail::tabulate(fields.basis(), 2 * k + 4);
  const EdgeQuadrature erule = edge_quadrature(2 * k + 4);
  const std::size_t nl = table.nl;
  const std::size_t nq = table.nq;

  struct Vol {
    double q = 0.0;
    double g = 0.0;
  };
  std::vector<Vol> vol(mesh.elements.size());
  parallel_for(mesh.elements.size(), [&](std::size_t el) {
    const Element& E = mesh.elements[el];
    const Tensor2 K = detail::element_permeability(problem, mesh, el);
    const Tensor2 Kinv = K.inverse();
    detail::TriData td;
    std::vector<double> ux(nq), uy(nq), px(nq), py(nq);
    for (std::size_t j = 0; j < E.vertices.size(); ++j) {
      const std::size_t tri = static_cast<std::size_t>(E.first_triangle) + j;
      const int side = mesh.triangles[tri].side;
      detail::fill_triangle(mesh, tri, table, td);
      const auto uc = fields.flux_coeffs(tri);
      kernels::combine(uc.subspan(0, nl), table.phi, nq, ux);
      kernels::combine(uc.subspan(nl, nl), table.phi, nq, uy);
      kernels::combine(fields.pressure_coeffs(tri), td.gx, nq, px);
      kernels::combine(fields.pressure_coeffs(tri), td.gy, nq, py);
      for (std::size_t q = 0; q < nq; ++q) {
        const Vec2 u = exact.flux(td.x[q], side);
        const Vec2 g = exact.grad_pressure(td.x[q], side);
        const Vec2 eu{u.x - ux[q], u.y - uy[q]};
        const Vec2 eg{g.x - px[q], g.y - py[q]};
        vol[el].q += td.w[q] * dot(eu, Kinv.apply(eu));
        vol[el].g += td.w[q] * dot(eg, K.apply(eg));
      }
    }
  });
  ErrorReport r;
  double q2 = 0.0, g2 = 0.0;
  for (const Vol& v : vol) {
    q2 += v.q;
    g2 += v.g;
  }

  double avg2 = 0.0, jump2 = 0.0, fg2 = 0.0, fj2 = 0.0, fa2 = 0.0;
  const DofMapW& W = dofs.W;
  for (std::size_t slot = 0; slot < W.slot_edge.size(); ++slot) {
    const Edge& e = mesh.edges[static_cast<std::size_t>(W.slot_edge[slot])];
    const auto t0 = static_cast<std::size_t>(e.tri[0]);
    const auto t1 = static_cast<std::size_t>(e.tri[1]);
    const int s0 = mesh.triangles[t0].side;
    const int s1 = mesh.triangles[t1].side;
    const double alpha = problem.alpha_gamma(e.fracture, e.segment);
    const double eta_g = problem.eta_gamma(e.fracture, e.segment);
    const double kg = problem.k_gamma(e.fracture, e.segment);
    const auto [a, b] = fields.fracture_segment(slot);
    const Vec2 tangent = (1.0 / distance(a, b)) * (b - a);
    for (std::size_t q = 0; q < erule.size(); ++q) {
      const double t = erule.points[q];
      const Point x = a + t * (b - a);
      const double w = erule.weights[q] * e.length;
      const double ep0 = exact.pressure(x, s0) - fields.pressure(t0, x);
      const double ep1 = exact.pressure(x, s1) - fields.pressure(t1, x);
      const double eg = exact.fracture_pressure(x, e.fracture) - fields.fracture_pressure(slot, t);
      const double eslope = dot(exact.fracture_grad(x, e.fracture), tangent) - fields.fracture_slope(slot, t);
      const double eu0 = dot(exact.flux(x, s0) - fields.flux(t0, x), e.normal);
      const double eu1 = dot(exact.flux(x, s1) - fields.flux(t1, x), e.normal);
      const double avg = 0.5 * (ep0 + ep1) - eg;
      avg2 += w * avg * avg / alpha;
      jump2 += w * (ep0 - ep1) * (ep0 - ep1) / eta_g;
      fg2 += w * kg * eslope * eslope;
      fj2 += w * (eu0 - eu1) * (eu0 - eu1);
      fa2 += w * 0.25 * (eu0 + eu1) * (eu0 + eu1);
    }
  }
  r.flux_q = std::sqrt(q2);
  r.grad = std::sqrt(g2);
  r.interface_avg = std::sqrt(avg2);
  r.interface_jump = std::sqrt(jump2);
  r.fracture_grad = std::sqrt(fg2);
  r.flux_jump = std::sqrt(fj2);
  r.flux_avg = std::sqrt(fa2);
  r.v_norm = std::sqrt(avg2 + jump2 + g2 + fg2);
  r.total = std::sqrt(q2 + avg2 + jump2 + g2 + fg2 + fj2 + fa2);
  r.effectivity = r.total > 1e-12 ? eta / r.total : std::numeric_limits<double>::quiet_NaN();
  return r;
}

namespace {

double dual_volume_balance(const PolygonalMesh& mesh, const ProblemSpec& problem, const FieldEvaluator& fields,
                           const detail::RefTable& table, const EdgeQuadrature& erule, const Edge& e) {
  double flux = 0.0;
  double source = 0.0;
  detail::TriData td;
  for (int tri : e.tri) {
    const auto t = static_cast<std::size_t>(tri);
    const SubTriangle& T = mesh.triangles[t];
    for (int di : T.dual_edges) {
      const Edge& d = mesh.edges[static_cast<std::size_t>(di)];
      const double sign = d.tri[0] == tri ? 1.0 : -1.0;
      const Point a = mesh.points[d.pts[0]];
      const Point b = mesh.points[d.pts[1]];
      for (std::size_t q = 0; q < erule.size(); ++q) {
        const Point x = a + erule.points[q] * (b - a);
        flux += sign * erule.weights[q] * d.length * dot(fields.flux(t, x), d.normal);
      }
    }
    detail::fill_triangle(mesh, t, table, td);
    for (std::size_t q = 0; q < table.nq; ++q) source += td.w[q] * problem.source_at(td.x[q], T.side);
  }
  return flux - source;
}

}  // namespace

double mass_balance(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMaps& dofs,
                    const DiscreteSolution& sol, int edge) {
  const Edge& e = mesh.edges[static_cast<std::size_t>(edge)];
  if (e.kind != EdgeKind::Interior) {
    throw Error(ErrorCode::InvalidArgument, "mass balance is defined on interior primal edges");
  }
  const FieldEvaluator fields(mesh, dofs, sol);
  const detail::RefTable table = detail::tabulate(fields.basis(), 2 * dofs.order + 2);
  const EdgeQuadrature erule = edge_quadrature(2 * dofs.order + 2);
  return dual_volume_balance(mesh, problem, fields, table, erule, e);
}

std::vector<double> mass_balances(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMaps& dofs,
                                  const DiscreteSolution& sol) {
  const FieldEvaluator fields(mesh, dofs, sol);
  const detail::RefTable table = detail::tabulate(fields.basis(), 2 * dofs.order + 2);
  const EdgeQuadrature erule = edge_quadrature(2 * dofs.order + 2);
  std::vector<double> out(mesh.edges.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(mesh.edges.size(), [&](std::size_t i) {
    const Edge& e = mesh.edges[i];
    if (e.kind == EdgeKind::Interior) out[i] = dual_volume_balance(mesh, problem, fields, table, erule, e);
  });
  return out;
}

}  // namespace sdg
