#include "gdirac/conditions.hpp"

#include <algorithm>

namespace gdirac {

TraceIndexMap::TraceIndexMap(const MetricGraph& g)
    : origin_slot_(g.edge_count(), kNoVertex), far_slot_(g.edge_count(), kNoVertex) {
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    origin_slot_[e] = slots_.size();
    slots_.push_back({e, EndKind::origin, 1, false, 2, true});
    if (g.edge(e).is_segment()) {
      far_slot_[e] = slots_.size();
      slots_.push_back({e, EndKind::far, 2, true, 1, false});
    }
  }
}

std::size_t TraceIndexMap::slot_of(Endpoint p) const {
  const auto s = p.end == EndKind::origin ? origin_slot_.at(p.edge) : far_slot_.at(p.edge);
  if (s == kNoVertex) throw ValidationError("half-line has no far end");
  return s;
}

std::size_t trace_dimension(const MetricGraph& g) {
  return 2 * g.segment_count() + g.halfline_count();
}

TraceVectors trace_vectors(const MetricGraph& g, const ClosedFormSpinor& psi, const PhysicalParams& p) {
  const TraceIndexMap map(g);
  const cplx ic = kI * p.light_speed;
  TraceVectors out{VectorC::Zero(map.dimension()), VectorC::Zero(map.dimension())};
  for (std::size_t s = 0; s < map.dimension(); ++s) {
    const auto& slot = map.slot(s);
    const auto [u1, u2] = endpoint_values(g, psi, {slot.edge, slot.end});
    const auto pick = [&](int comp, bool scaled) { return (comp == 1 ? u1 : u2) * (scaled ? ic : cplx{1.0}); };
    out.gamma0(s) = pick(slot.gamma0_component, slot.gamma0_scaled);
    out.gamma1(s) = pick(slot.gamma1_component, slot.gamma1_scaled);
  }
  return out;
}

ConditionMatrices assemble_AB(const MetricGraph& g, const PhysicalParams& p) {
  const TraceIndexMap map(g);
  const auto dim = map.dimension();
  const cplx ic = kI * p.light_speed;
  ConditionMatrices cm{MatrixC::Zero(dim, dim), MatrixC::Zero(dim, dim), {}};

  // Routes coefficient * (component trace at endpoint) into row r so that the
  // row reads A Gamma0 - B Gamma1 = sum of coefficient * trace.
  auto route = [&](std::size_t r, Endpoint at, int component, cplx coefficient) {
    const auto s = map.slot_of(at);
    const auto& slot = map.slot(s);
    if (slot.gamma0_component == component) {
      cm.A(r, s) += coefficient / (slot.gamma0_scaled ? ic : cplx{1.0});
    } else {
      cm.B(r, s) -= coefficient / (slot.gamma1_scaled ? ic : cplx{1.0});
    }
  };

  std::size_t row = 0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const auto& ends = g.incident(v);
    if (const auto* cond = g.endpoint_condition(v)) {
      const auto s = map.slot_of(ends.front());
      cm.A(row, s) = cond->a;
      cm.B(row, s) = cond->b;
      cm.row_vertex.push_back(v);
      ++row;
      continue;
    }
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
      route(row, ends[i], 1, 1.0);
      route(row, ends[i + 1], 1, -1.0);
      cm.row_vertex.push_back(v);
      ++row;
    }
    for (const auto& at : ends) route(row, at, 2, balance_sign(at.end));
    cm.row_vertex.push_back(v);
    ++row;
  }
  return cm;
}

SelfAdjointReport check_selfadjoint_conditions(const ConditionMatrices& cm, double hermitian_tol) {
  if (cm.A.rows() != cm.A.cols() || cm.B.rows() != cm.B.cols() || cm.A.rows() != cm.B.rows()) {
    throw ValidationError("condition matrices must be square and of equal size");
  }
  SelfAdjointReport rep;
  const auto n = cm.A.rows();
  if (n == 0) return rep;
  const MatrixC diff = cm.A * cm.B.adjoint() - cm.B * cm.A.adjoint();
  rep.hermitian_residual = diff.cwiseAbs().maxCoeff();
  rep.hermitian_compat = rep.hermitian_residual <= hermitian_tol;

  MatrixC joined(n, 2 * n);
  joined << cm.A, cm.B;
  Eigen::JacobiSVD<MatrixC> svd(joined);
  const auto& sv = svd.singularValues();
  const double scale = std::max(sv(0), 1.0);
  rep.rank = static_cast<std::size_t>((sv.array() > 1e-10 * scale).count());
  rep.min_singular_value = sv(sv.size() - 1);
  rep.rank_full = rep.rank == static_cast<std::size_t>(n);
  return rep;
}

double condition_residual(const ConditionMatrices& cm, const TraceVectors& t) {
  return (cm.A * t.gamma0 - cm.B * t.gamma1).norm();
}

bool same_row_space(const ConditionMatrices& lhs, const ConditionMatrices& rhs, double tol) {
  const auto n = lhs.A.rows();
  if (rhs.A.rows() != n) return false;
  MatrixC l(n, 2 * n), r(n, 2 * n), both(2 * n, 2 * n);
  l << lhs.A, lhs.B;
  r << rhs.A, rhs.B;
  both << l, r;
  auto rank = [tol](const MatrixC& m) {
    Eigen::JacobiSVD<MatrixC> svd(m);
    const auto& sv = svd.singularValues();
    return (sv.array() > tol * std::max(sv(0), 1.0)).count();
  };
  const auto rl = rank(l);
  return rl == rank(r) && rl == rank(both);
}

ConditionMatrices model_condition_matrices(cplx a, cplx b) {
  ConditionMatrices cm{MatrixC::Zero(4, 4), MatrixC::Zero(4, 4), {}};
  const double s = 2.0 / 3.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      cm.A(i, j) = s * (i == j ? -2.0 : 1.0);
      cm.B(i, j) = -kI * s;
    }
  }
  cm.A(3, 3) = s * a;
  cm.B(3, 3) = -kI * s * b;
  return cm;
}

}  // namespace gdirac
