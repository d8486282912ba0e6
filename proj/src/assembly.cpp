#include "sdg/assembly.hpp"

#include <string>

#include "local_ops.hpp"
#include "sdg/error.hpp"
#include "sdg/kernels.hpp"
#include "sdg/parallel.hpp"
#include "sdg/quadrature.hpp"

namespace sdg {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using Index = Eigen::Index;

int quad_degree(int k) { return 2 * k + 2; }

SparseMatrix from_triplets(std::size_t rows, std::size_t cols, const Triplets& t) {
  SparseMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// Full-coefficient mass of one element (K^{-1} weighted), rows j * 2 nl + c * nl + i.
Eigen::MatrixXd element_full_mass(const PolygonalMesh& mesh, std::size_t el, const detail::RefTable& table,
                                  const Tensor2& Kinv, detail::TriData& td) {
  const Element& E = mesh.elements[el];
  const std::size_t n = E.vertices.size();
  const auto nl = static_cast<Index>(table.nl);
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(static_cast<Index>(n) * 2 * nl, static_cast<Index>(n) * 2 * nl);
  Eigen::MatrixXd m(nl, nl);
  for (std::size_t j = 0; j < n; ++j) {
    detail::fill_triangle(mesh, static_cast<std::size_t>(E.first_triangle) + j, table, td);
    kernels::weighted_gram(table.phi, table.nl, table.phi, table.nl, td.w, {m.data(), m.size()});
    const Index b = static_cast<Index>(j) * 2 * nl;
    full.block(b, b, nl, nl) = Kinv.xx * m;
    full.block(b, b + nl, nl, nl) = Kinv.xy * m;
    full.block(b + nl, b, nl, nl) = Kinv.xy * m;
    full.block(b + nl, b + nl, nl, nl) = Kinv.yy * m;
  }
  return full;
}

// Local b_h matrix of one element: rows j * nl + i (S nodes of its triangles),
// columns full V coefficients.
Eigen::MatrixXd element_full_bh(const PolygonalMesh& mesh, std::size_t el, const LagrangeTriangle& basis,
                                const detail::RefTable& table, const EdgeQuadrature& erule, detail::TriData& td) {
  const Element& E = mesh.elements[el];
  const std::size_t n = E.vertices.size();
  const auto first = static_cast<std::size_t>(E.first_triangle);
  const auto nl = static_cast<Index>(table.nl);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Index>(n) * nl, static_cast<Index>(n) * 2 * nl);
  Eigen::MatrixXd g(nl, nl);
  for (std::size_t j = 0; j < n; ++j) {
    detail::fill_triangle(mesh, first + j, table, td);
    const Index r = static_cast<Index>(j) * nl;
    const Index c = static_cast<Index>(j) * 2 * nl;
    // (v, grad q): g(i, l) = sum_q w grad_c phi_i phi_l
    kernels::weighted_gram(td.gx, table.nl, table.phi, table.nl, td.w, {g.data(), g.size()});
    B.block(r, c, nl, nl) += g.transpose();
    kernels::weighted_gram(td.gy, table.nl, table.phi, table.nl, td.w, {g.data(), g.size()});
    B.block(r, c + nl, nl, nl) += g.transpose();
  }
  // -<{v . n}, [q]> over dual edges; each is dual_edges[1] of exactly one triangle.
  for (std::size_t j = 0; j < n; ++j) {
    const Edge& e = mesh.edges[static_cast<std::size_t>(mesh.triangles[first + j].dual_edges[1])];
    const auto xs = detail::edge_points(mesh.points[e.pts[0]], mesh.points[e.pts[1]], erule);
    std::array<Eigen::MatrixXd, 2> phi;
    std::array<Index, 2> loc{};
    for (std::size_t s = 0; s < 2; ++s) {
      const auto t = static_cast<std::size_t>(e.tri[s]);
      phi[s] = detail::basis_at(basis, detail::triangle_map(mesh, t), xs);
      loc[s] = static_cast<Index>(t - first);
    }
    for (std::size_t q = 0; q < xs.size(); ++q) {
      const double wq = erule.weights[q] * e.length;
      for (std::size_t s = 0; s < 2; ++s) {
        const double sign = s == 0 ? 1.0 : -1.0;
        for (std::size_t r = 0; r < 2; ++r) {
          for (Index i = 0; i < nl; ++i) {
            const double qi = sign * phi[s](static_cast<Index>(q), i);
            for (Index l = 0; l < nl; ++l) {
              const double vl = 0.5 * phi[r](static_cast<Index>(q), l);
              B(loc[s] * nl + i, loc[r] * 2 * nl + l) -= wq * qi * vl * e.normal.x;
              B(loc[s] * nl + i, loc[r] * 2 * nl + nl + l) -= wq * qi * vl * e.normal.y;
            }
          }
        }
      }
    }
  }
  return B;
}

}  // namespace

DofMaps build_dof_maps(const PolygonalMesh& mesh, const ProblemSpec& problem, SpaceConfig config) {
  if (config.order < 1) throw Error(ErrorCode::InvalidArgument, "polynomial order must be >= 1");
  DofMaps d;
  d.order = config.order;
  d.V = build_V_h(mesh, config);
  d.S = build_S_h(mesh, config, &problem.boundary);
  d.W = build_W_h(mesh, config, problem.tips);
  return d;
}

SparseMatrix assemble_mass(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMapV& V) {
  const LagrangeTriangle basis(V.order);
  const detail::RefTable table = detail::tabulate(basis, quad_degree(V.order));
  std::vector<Eigen::MatrixXd> blocks(mesh.elements.size());
  parallel_for(mesh.elements.size(), [&](std::size_t el) {
    detail::TriData td;
    const Tensor2 Kinv = detail::element_permeability(problem, mesh, el).inverse();
    const Eigen::MatrixXd full = element_full_mass(mesh, el, table, Kinv, td);
    blocks[el] = V.basis[el].transpose() * full * V.basis[el];
  });
  Triplets t;
  for (std::size_t el = 0; el < blocks.size(); ++el) {
    const auto o = static_cast<Index>(V.offset[el]);
    for (Index a = 0; a < blocks[el].rows(); ++a)
      for (Index b = 0; b < blocks[el].cols(); ++b) t.emplace_back(o + a, o + b, blocks[el](a, b));
  }
  return from_triplets(V.n_dofs, V.n_dofs, t);
}

SparseMatrix assemble_bh(const PolygonalMesh& mesh, const DofMapV& V, const DofMapS& S) {
  const LagrangeTriangle basis(V.order);
  const detail::RefTable table = detail::tabulate(basis, quad_degree(V.order));
  const EdgeQuadrature erule = edge_quadrature(quad_degree(V.order));
  std::vector<Eigen::MatrixXd> blocks(mesh.elements.size());
  parallel_for(mesh.elements.size(), [&](std::size_t el) {
    detail::TriData td;
    blocks[el] = element_full_bh(mesh, el, basis, table, erule, td) * V.basis[el];
  });
  Triplets t;
  for (std::size_t el = 0; el < blocks.size(); ++el) {
    const Element& E = mesh.elements[el];
    const auto o = static_cast<Index>(V.offset[el]);
    for (std::size_t j = 0; j < E.vertices.size(); ++j) {
      const auto dofs = S.local(static_cast<std::size_t>(E.first_triangle) + j);
      for (std::size_t i = 0; i < S.n_local; ++i) {
        const auto row = static_cast<Index>(j * S.n_local + i);
        for (Index a = 0; a < blocks[el].cols(); ++a) t.emplace_back(dofs[i], o + a, blocks[el](row, a));
      }
    }
  }
  return from_triplets(S.n_all, V.n_dofs, t);
}

SparseMatrix assemble_bh_star(const PolygonalMesh& mesh, const DofMapV& V, const DofMapS& S) {
  const LagrangeTriangle basis(V.order);
  const detail::RefTable table = detail::tabulate(basis, quad_degree(V.order));
  const EdgeQuadrature erule = edge_quadrature(quad_degree(V.order));
  const auto nl = static_cast<Index>(table.nl);
  Triplets t;
  detail::TriData td;
  Eigen::MatrixXd g(nl, nl);

  // -(p, div v) per sub-triangle.
  for (std::size_t el = 0; el < mesh.elements.size(); ++el) {
    const Element& E = mesh.elements[el];
    const auto o = static_cast<Index>(V.offset[el]);
    for (std::size_t j = 0; j < E.vertices.size(); ++j) {
      const std::size_t tri = static_cast<std::size_t>(E.first_triangle) + j;
      detail::fill_triangle(mesh, tri, table, td);
      Eigen::MatrixXd div(2 * nl, nl);  // full V coefficient x S local
      kernels::weighted_gram(td.gx, table.nl, table.phi, table.nl, td.w, {g.data(), g.size()});
      div.topRows(nl) = g.transpose();
      kernels::weighted_gram(td.gy, table.nl, table.phi, table.nl, td.w, {g.data(), g.size()});
      div.bottomRows(nl) = g.transpose();
      const Eigen::MatrixXd loc =
          -V.basis[el].middleRows(static_cast<Index>(j) * 2 * nl, 2 * nl).transpose() * div;
      const auto dofs = S.local(tri);
      for (Index a = 0; a < loc.rows(); ++a)
        for (Index i = 0; i < nl; ++i) t.emplace_back(o + a, dofs[static_cast<std::size_t>(i)], loc(a, i));
    }
  }

  // Interior and fracture primal edges: <{p}, [v.n]> everywhere, plus <[p], {v.n}> on fractures.
  // On interior edges p is single valued, so {p} = p.
  for (const Edge& e : mesh.edges) {
    if (e.kind != EdgeKind::Interior && e.kind != EdgeKind::Fracture) continue;
    const auto xs = detail::edge_points(mesh.points[e.pts[0]], mesh.points[e.pts[1]], erule);
    std::array<Eigen::MatrixXd, 2> P;
    std::array<Eigen::MatrixXd, 2> N;
    for (std::size_t s = 0; s < 2; ++s) {
      const auto tri = static_cast<std::size_t>(e.tri[s]);
      P[s] = detail::basis_at(basis, detail::triangle_map(mesh, tri), xs);
      N[s] = detail::flux_normal_at(basis, mesh, V, tri, xs, e.normal);
    }
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(erule.weights.data(),
                                                                static_cast<Index>(erule.size())) * e.length;
    const double jump_weight = e.kind == EdgeKind::Fracture ? 1.0 : 0.0;
    for (std::size_t sv = 0; sv < 2; ++sv) {
      const double vsign = sv == 0 ? 1.0 : -1.0;
      const auto el = static_cast<std::size_t>(mesh.triangles[static_cast<std::size_t>(e.tri[sv])].element);
      const auto o = static_cast<Index>(V.offset[el]);
      for (std::size_t sp = 0; sp < 2; ++sp) {
        const double psign = sp == 0 ? 1.0 : -1.0;
        // {p}[v.n] + [p]{v.n}
        const double coef = 0.5 * vsign + jump_weight * 0.5 * psign;
        const Eigen::MatrixXd loc = coef * N[sv].transpose() * w.asDiagonal() * P[sp];
        const auto dofs = S.local(static_cast<std::size_t>(e.tri[sp]));
        for (Index a = 0; a < loc.rows(); ++a)
          for (Index i = 0; i < nl; ++i) t.emplace_back(o + a, dofs[static_cast<std::size_t>(i)], loc(a, i));
      }
    }
  }
  return from_triplets(V.n_dofs, S.n_all, t);
}

InterfaceBlocks assemble_interface(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMapS& S,
                                   const DofMapW& W) {
  const LagrangeTriangle basis(S.order);
  const LagrangeSegment seg(W.order);
  const EdgeQuadrature erule = edge_quadrature(quad_degree(S.order));
  const auto nl = static_cast<Index>(S.n_local);
  const auto nw = static_cast<Index>(seg.size());
  Triplets pp;
  Triplets pw;
  Triplets wp;
  Triplets ww;
  std::vector<double> psi(seg.size());

  for (std::size_t slot = 0; slot < W.slot_edge.size(); ++slot) {
    const Edge& e = mesh.edges[static_cast<std::size_t>(W.slot_edge[slot])];
    const FractureMesh& fm = mesh.fracture_meshes[static_cast<std::size_t>(W.slot_fracture[slot])];
    const auto pos = static_cast<std::size_t>(W.slot_position[slot]);
    const double alpha = problem.alpha_gamma(e.fracture, e.segment);
    const double eta = problem.eta_gamma(e.fracture, e.segment);
    const auto xs = detail::edge_points(mesh.points[fm.nodes[pos]], mesh.points[fm.nodes[pos + 1]], erule);
    std::array<Eigen::MatrixXd, 2> P;
    for (std::size_t s = 0; s < 2; ++s) {
      P[s] = detail::basis_at(basis, detail::triangle_map(mesh, static_cast<std::size_t>(e.tri[s])), xs);
    }
    // Local vector layout: [S side 1 | S side 2 | W].
    const Index n = 2 * nl + nw;
    Eigen::MatrixXd loc = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd avg(n);
    Eigen::VectorXd jmp(n);
    for (std::size_t q = 0; q < xs.size(); ++q) {
      seg.eval(erule.points[q], psi);
      const auto qi = static_cast<Index>(q);
      for (Index i = 0; i < nl; ++i) {
        avg(i) = 0.5 * P[0](qi, i);
        avg(nl + i) = 0.5 * P[1](qi, i);
        jmp(i) = P[0](qi, i);
        jmp(nl + i) = -P[1](qi, i);
      }
      for (Index i = 0; i < nw; ++i) {
        avg(2 * nl + i) = -psi[static_cast<std::size_t>(i)];
        jmp(2 * nl + i) = 0.0;
      }
      const double wq = erule.weights[q] * e.length;
      loc.noalias() += (wq / alpha) * avg * avg.transpose() + (wq / eta) * jmp * jmp.transpose();
    }
    std::vector<int> sd;
    for (std::size_t s = 0; s < 2; ++s) {
      const auto d = S.local(static_cast<std::size_t>(e.tri[s]));
      sd.insert(sd.end(), d.begin(), d.end());
    }
    const auto wd = W.local(slot);
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        const bool aw = a >= 2 * nl;
        const bool bw = b >= 2 * nl;
        const int ra = aw ? wd[static_cast<std::size_t>(a - 2 * nl)] : sd[static_cast<std::size_t>(a)];
        const int cb = bw ? wd[static_cast<std::size_t>(b - 2 * nl)] : sd[static_cast<std::size_t>(b)];
        Triplets& dst = aw ? (bw ? ww : wp) : (bw ? pw : pp);
        dst.emplace_back(ra, cb, loc(a, b));
      }
    }
  }
  return {from_triplets(S.n_all, S.n_all, pp), from_triplets(S.n_all, W.n_all, pw),
          from_triplets(W.n_all, S.n_all, wp), from_triplets(W.n_all, W.n_all, ww)};
}

SparseMatrix assemble_fracture_stiffness(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMapW& W) {
  const LagrangeSegment seg(W.order);
  const EdgeQuadrature erule = edge_quadrature(2 * W.order);
  std::vector<double> d(seg.size());
  Triplets t;
  for (std::size_t slot = 0; slot < W.slot_edge.size(); ++slot) {
    const Edge& e = mesh.edges[static_cast<std::size_t>(W.slot_edge[slot])];
    const double kg = problem.k_gamma(e.fracture, e.segment);
    Eigen::MatrixXd loc = Eigen::MatrixXd::Zero(static_cast<Index>(seg.size()), static_cast<Index>(seg.size()));
    for (std::size_t q = 0; q < erule.size(); ++q) {
      seg.eval_deriv(erule.points[q], d);
      const Eigen::Map<const Eigen::VectorXd> dv(d.data(), static_cast<Index>(d.size()));
      loc.noalias() += (erule.weights[q] * kg / e.length) * dv * dv.transpose();
    }
    const auto wd = W.local(slot);
    for (Index a = 0; a < loc.rows(); ++a)
      for (Index b = 0; b < loc.cols(); ++b)
        t.emplace_back(wd[static_cast<std::size_t>(a)], wd[static_cast<std::size_t>(b)], loc(a, b));
  }
  return from_triplets(W.n_all, W.n_all, t);
}

LoadVectors assemble_rhs(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMaps& dofs) {
  const DofMapS& S = dofs.S;
  const DofMapW& W = dofs.W;
  const LagrangeTriangle basis(S.order);
  const detail::RefTable table = detail::tabulate(basis, quad_degree(S.order));
  const EdgeQuadrature erule = edge_quadrature(quad_degree(S.order));
  LoadVectors out{Eigen::VectorXd::Zero(static_cast<Index>(S.n_all)),
                  Eigen::VectorXd::Zero(static_cast<Index>(W.n_all))};

  std::vector<Eigen::VectorXd> local(mesh.triangles.size());
  parallel_for(mesh.triangles.size(), [&](std::size_t tri) {
    detail::TriData td;
    detail::fill_triangle(mesh, tri, table, td);
    const int side = mesh.triangles[tri].side;
    std::vector<double> fw(table.nq);
    for (std::size_t q = 0; q < table.nq; ++q) fw[q] = problem.source_at(td.x[q], side) * td.w[q];
    Eigen::VectorXd v(static_cast<Index>(table.nl));
    for (std::size_t i = 0; i < table.nl; ++i) {
      double s = 0.0;
      for (std::size_t q = 0; q < table.nq; ++q) s += fw[q] * table.phi[i * table.nq + q];
      v(static_cast<Index>(i)) = s;
    }
    local[tri] = std::move(v);
  });
  for (std::size_t tri = 0; tri < mesh.triangles.size(); ++tri) {
    const auto d = S.local(tri);
    for (std::size_t i = 0; i < S.n_local; ++i) out.s(d[i]) += local[tri](static_cast<Index>(i));
  }

  // Neumann data on outer-boundary primal edges.
  for (std::size_t tri = 0; tri < mesh.triangles.size(); ++tri) {
    const auto ei = mesh.triangles[tri].primal_edge;
    const Edge& e = mesh.edges[static_cast<std::size_t>(ei)];
    if (e.kind != EdgeKind::Boundary) continue;
    if (problem.boundary.kind_at(mesh.edge_midpoint(ei)) != BoundaryKind::Neumann) continue;
    const auto xs = detail::edge_points(mesh.points[e.pts[0]], mesh.points[e.pts[1]], erule);
    const Eigen::MatrixXd P = detail::basis_at(basis, detail::triangle_map(mesh, tri), xs);
    const auto d = S.local(tri);
    for (std::size_t q = 0; q < xs.size(); ++q) {
      const double g = problem.boundary.flux_at(xs[q]) * erule.weights[q] * e.length;
      if (g == 0.0) continue;
      for (std::size_t i = 0; i < S.n_local; ++i) out.s(d[i]) += g * P(static_cast<Index>(q), static_cast<Index>(i));
    }
  }

  // Fracture source l_G f_G.
  const LagrangeSegment seg(W.order);
  std::vector<double> psi(seg.size());
  for (std::size_t slot = 0; slot < W.slot_edge.size(); ++slot) {
    const Edge& e = mesh.edges[static_cast<std::size_t>(W.slot_edge[slot])];
    const FractureMesh& fm = mesh.fracture_meshes[static_cast<std::size_t>(W.slot_fracture[slot])];
    const auto pos = static_cast<std::size_t>(W.slot_position[slot]);
    const double ell = problem.domain.fractures[static_cast<std::size_t>(e.fracture)].thickness;
    const auto xs = detail::edge_points(mesh.points[fm.nodes[pos]], mesh.points[fm.nodes[pos + 1]], erule);
    const auto d = W.local(slot);
    for (std::size_t q = 0; q < xs.size(); ++q) {
      const double g = ell * problem.fracture_source_at(xs[q], e.fracture) * erule.weights[q] * e.length;
      if (g == 0.0) continue;
      seg.eval(erule.points[q], psi);
      for (std::size_t i = 0; i < psi.size(); ++i) out.w(d[i]) += g * psi[i];
    }
  }
  return out;
}

LinearSystem assemble_system(const PolygonalMesh& mesh, const ProblemSpec& problem, const DofMaps& dofs) {
  const DofMapV& V = dofs.V;
  const DofMapS& S = dofs.S;
  const DofMapW& W = dofs.W;
  const std::size_t nV = V.n_dofs;

  LinearSystem sys;
  sys.offsets = {0, nV, nV + S.n_free, dofs.n_free()};

  // Mass blocks are kept for the condensed solver.
  const SparseMatrix M = assemble_mass(mesh, problem, V);
  sys.mass_blocks.resize(mesh.elements.size());
  for (std::size_t el = 0; el < mesh.elements.size(); ++el) {
    const auto o = static_cast<Index>(V.offset[el]);
    const auto m = static_cast<Index>(V.count(el));
    sys.mass_blocks[el] = Eigen::MatrixXd(M.block(o, o, m, m));
  }
  const SparseMatrix B = assemble_bh(mesh, V, S);
  const InterfaceBlocks I = assemble_interface(mesh, problem, S, W);
  const SparseMatrix Kg = assemble_fracture_stiffness(mesh, problem, W);
  const LoadVectors load = assemble_rhs(mesh, problem, dofs);

  // Map from "all" numbering of S and W to free rows; -1 for Dirichlet dofs.
  auto s_free = [&](Index g) { return S.free_index[static_cast<std::size_t>(g)]; };
  auto w_free = [&](Index g) { return W.free_index[static_cast<std::size_t>(g)]; };
  const auto sOff = static_cast<Index>(sys.offsets[1]);
  const auto wOff = static_cast<Index>(sys.offsets[2]);

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Index>(dofs.n_free()));
  for (Index g = 0; g < static_cast<Index>(S.n_all); ++g)
    if (s_free(g) >= 0) rhs(sOff + s_free(g)) += load.s(g);
  for (Index g = 0; g < static_cast<Index>(W.n_all); ++g)
    if (w_free(g) >= 0) rhs(wOff + w_free(g)) += load.w(g);

  Triplets t;
  t.reserve(static_cast<std::size_t>(M.nonZeros() + 2 * B.nonZeros() + I.pp.nonZeros() + 2 * I.pw.nonZeros() +
                                     I.ww.nonZeros() + Kg.nonZeros()));
  for (Index c = 0; c < M.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(M, c); it; ++it) t.emplace_back(it.row(), it.col(), it.value());

  // B rows are S dofs, columns V dofs: -B in the S rows, B^T in the V rows.
  for (Index c = 0; c < B.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(B, c); it; ++it) {
      const Index srow = it.row();
      const Index vcol = it.col();
      const double val = it.value();
      if (s_free(srow) >= 0) {
        t.emplace_back(sOff + s_free(srow), vcol, -val);
        t.emplace_back(vcol, sOff + s_free(srow), val);
      } else {
        rhs(vcol) -= val * S.dirichlet_value[static_cast<std::size_t>(srow)];
      }
    }
  }

  // Generic coupling with lifting of Dirichlet columns.
  auto add_block = [&](const SparseMatrix& blk, auto row_free, Index row_off, auto col_free, Index col_off,
                       const std::vector<double>& col_values) {
    for (Index c = 0; c < blk.outerSize(); ++c) {
      for (SparseMatrix::InnerIterator it(blk, c); it; ++it) {
        const int r = row_free(it.row());
        if (r < 0) continue;
        const int cf = col_free(it.col());
        if (cf >= 0) {
          t.emplace_back(row_off + r, col_off + cf, it.value());
        } else {
          rhs(row_off + r) -= it.value() * col_values[static_cast<std::size_t>(it.col())];
        }
      }
    }
  };
  add_block(I.pp, s_free, sOff, s_free, sOff, S.dirichlet_value);
  add_block(I.pw, s_free, sOff, w_free, wOff, W.dirichlet_value);
  add_block(I.wp, w_free, wOff, s_free, sOff, S.dirichlet_value);
  add_block(I.ww, w_free, wOff, w_free, wOff, W.dirichlet_value);
  add_block(Kg, w_free, wOff, w_free, wOff, W.dirichlet_value);

  const auto n = static_cast<Index>(dofs.n_free());
  sys.A.resize(n, n);
  sys.A.setFromTriplets(t.begin(), t.end());
  sys.rhs = std::move(rhs);
  sys.has_essential = S.n_free < S.n_all || W.n_free < W.n_all;
  return sys;
}

DiscreteSolution expand_solution(const DofMaps& dofs, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != dofs.n_free()) {
    throw Error(ErrorCode::InvalidArgument, "solution vector has " + std::to_string(x.size()) +
                                                " entries, expected " + std::to_string(dofs.n_free()));
  }
  const auto nV = static_cast<Index>(dofs.V.n_dofs);
  const auto wOff = nV + static_cast<Index>(dofs.S.n_free);
  DiscreteSolution sol;
  sol.u = x.head(nV);
  sol.p.resize(static_cast<Index>(dofs.S.n_all));
  for (std::size_t g = 0; g < dofs.S.n_all; ++g) {
    const int f = dofs.S.free_index[g];
    sol.p(static_cast<Index>(g)) = f >= 0 ? x(nV + f) : dofs.S.dirichlet_value[g];
  }
  sol.p_frac.resize(static_cast<Index>(dofs.W.n_all));
  for (std::size_t g = 0; g < dofs.W.n_all; ++g) {
    const int f = dofs.W.free_index[g];
    sol.p_frac(static_cast<Index>(g)) = f >= 0 ? x(wOff + f) : dofs.W.dirichlet_value[g];
  }
  return sol;
}

Eigen::VectorXd restrict_solution(const DofMaps& dofs, const DiscreteSolution& sol) {
  const auto nV = static_cast<Index>(dofs.V.n_dofs);
  const auto wOff = nV + static_cast<Index>(dofs.S.n_free);
  Eigen::VectorXd x(static_cast<Index>(dofs.n_free()));
  x.head(nV) = sol.u;
  for (std::size_t g = 0; g < dofs.S.n_all; ++g)
    if (const int f = dofs.S.free_index[g]; f >= 0) x(nV + f) = sol.p(static_cast<Index>(g));
  for (std::size_t g = 0; g < dofs.W.n_all; ++g)
    if (const int f = dofs.W.free_index[g]; f >= 0) x(wOff + f) = sol.p_frac(static_cast<Index>(g));
  return x;
}

DiscreteSolution interpolate(const PolygonalMesh& mesh, const DofMaps& dofs, const ExactSolution& exact) {
  const LagrangeTriangle basis(dofs.order);
  const std::size_t nl = basis.size();
  DiscreteSolution sol;
  sol.u = Eigen::VectorXd::Zero(static_cast<Index>(dofs.V.n_dofs));
  sol.p = Eigen::VectorXd::Zero(static_cast<Index>(dofs.S.n_all));
  sol.p_frac = Eigen::VectorXd::Zero(static_cast<Index>(dofs.W.n_all));

  for (std::size_t el = 0; el < mesh.elements.size(); ++el) {
    const Element& E = mesh.elements[el];
    Eigen::VectorXd full(static_cast<Index>(E.vertices.size() * 2 * nl));
    for (std::size_t j = 0; j < E.vertices.size(); ++j) {
      const std::size_t tri = static_cast<std::size_t>(E.first_triangle) + j;
      const int side = mesh.triangles[tri].side;
      const auto d = dofs.S.local(tri);
      for (std::size_t i = 0; i < nl; ++i) {
        const Point x = s_node_point(mesh, basis, tri, i);
        if (exact.pressure) sol.p(d[i]) = exact.pressure(x, side);
        const Vec2 u = exact.flux ? exact.flux(x, side) : Vec2{};
        full(static_cast<Index>(j * 2 * nl + i)) = u.x;
        full(static_cast<Index>(j * 2 * nl + nl + i)) = u.y;
      }
    }
    sol.u.segment(static_cast<Index>(dofs.V.offset[el]), static_cast<Index>(dofs.V.count(el))) =
        dofs.V.basis[el].transpose() * full;
  }

  const LagrangeSegment seg(dofs.W.order);
  for (std::size_t slot = 0; slot < dofs.W.slot_edge.size(); ++slot) {
    const FractureMesh& fm = mesh.fracture_meshes[static_cast<std::size_t>(dofs.W.slot_fracture[slot])];
    const auto pos = static_cast<std::size_t>(dofs.W.slot_position[slot]);
    const Point a = mesh.points[fm.nodes[pos]];
    const Point b = mesh.points[fm.nodes[pos + 1]];
    const auto d = dofs.W.local(slot);
    for (std::size_t i = 0; i < seg.size(); ++i) {
      if (exact.fracture_pressure) sol.p_frac(d[i]) = exact.fracture_pressure(a + seg.node(i) * (b - a), fm.fracture);
    }
  }
  return sol;
}

}  // namespace sdg
