#include "gdirac/weyl.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "gdirac/parallel.hpp"

namespace gdirac {

namespace {

constexpr double kPoleTol = 1e-13;

cplx sanitize(cplx z) {
  // -0.0 imaginary parts would select the lower limit on the cuts.
  return z.imag() == 0.0 ? cplx(z.real(), 0.0) : z;
}

cplx sinc(cplx w) {
  if (std::abs(w) < 1e-4) {
    const cplx w2 = w * w;
    return 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
  }
  return std::sin(w) / w;
}

// Endpoint values of the regular segment pair (u, v) at x = 0 and x = l.
struct SegmentEnds {
  cplx u1_0, u2_0, u1_l, u2_l;
  cplx v1_0, v2_0, v1_l, v2_l;
  cplx cos_lk;
};

SegmentEnds segment_ends(double len, cplx z, const BranchScalar& br, const PhysicalParams& p) {
  const double c = p.light_speed;
  const double a = p.threshold();
  const cplx kl = br.k * len;
  const cplx cs = std::cos(kl);
  const cplx sc = len * sinc(kl);
  SegmentEnds s{};
  s.u1_0 = 1.0;
  s.u2_0 = 0.0;
  s.u1_l = cs;
  s.u2_l = kI * (z - a) * sc / c;
  s.v1_0 = 0.0;
  s.v2_0 = -kI / c;
  s.v1_l = (z + a) * sc / (c * c);
  s.v2_l = -kI / c * cs;
  s.cos_lk = cs;
  return s;
}

std::pair<cplx, cplx> slot_traces(const TraceSlot& slot, cplx u1, cplx u2, cplx ic) {
  auto pick = [&](int comp, bool scaled) { return (comp == 1 ? u1 : u2) * (scaled ? ic : cplx{1.0}); };
  return {pick(slot.gamma0_component, slot.gamma0_scaled), pick(slot.gamma1_component, slot.gamma1_scaled)};
}

// Columns of (Gamma0, Gamma1) for the chosen per-edge solutions together with
// the spinors they came from.
struct SolutionColumns {
  MatrixC G0;
  MatrixC G1;
  std::vector<std::pair<std::size_t, EdgeSpinor>> spinors;  // (edge, solution)
  cplx cos_product{1.0};
};

SolutionColumns solution_columns(const MetricGraph& g, const PhysicalParams& p, cplx z, bool with_halflines,
                                 bool with_spinors) {
  const TraceIndexMap map(g);
  const auto dim = map.dimension();
  const auto br = branch_eval(z, p);
  const cplx ic = kI * p.light_speed;

  std::size_t ncols = 2 * g.segment_count() + (with_halflines ? g.halfline_count() : 0);
  SolutionColumns out{MatrixC::Zero(dim, ncols), MatrixC::Zero(dim, ncols), {}, 1.0};
  std::size_t col = 0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    const auto so = map.slot_of({e, EndKind::origin});
    if (edge.is_segment()) {
      const auto sf = map.slot_of({e, EndKind::far});
      const auto ends = segment_ends(edge.length, br.z, br, p);
      out.cos_product *= ends.cos_lk;
      const cplx vals[2][4] = {{ends.u1_0, ends.u2_0, ends.u1_l, ends.u2_l},
                               {ends.v1_0, ends.v2_0, ends.v1_l, ends.v2_l}};
      for (int j = 0; j < 2; ++j) {
        auto [g0o, g1o] = slot_traces(map.slot(so), vals[j][0], vals[j][1], ic);
        auto [g0f, g1f] = slot_traces(map.slot(sf), vals[j][2], vals[j][3], ic);
        out.G0(so, col) = g0o;
        out.G1(so, col) = g1o;
        out.G0(sf, col) = g0f;
        out.G1(sf, col) = g1f;
        ++col;
      }
      if (with_spinors) {
        auto basis = solution_basis(edge, br.z, p);
        for (auto& b : basis) out.spinors.emplace_back(e, std::move(b));
      }
    } else if (with_halflines) {
      if (br.k1_infinite) throw NumericError("half-line solution undefined at z = -mc^2");
      auto [g0, g1] = slot_traces(map.slot(so), 1.0, br.k1, ic);
      out.G0(so, col) = g0;
      out.G1(so, col) = g1;
      ++col;
      if (with_spinors) out.spinors.emplace_back(e, solution_basis(edge, br.z, p).front());
    }
  }
  return out;
}

bool decays(const BranchScalar& br, const PhysicalParams& p, double lambda) {
  return std::abs(lambda) < p.threshold() && br.k.imag() > 0.0;
}

}  // namespace

BranchScalar branch_eval(cplx z, const PhysicalParams& p) {
  validate(p);
  z = sanitize(z);
  const double c = p.light_speed;
  const double a = p.threshold();
  BranchScalar br;
  br.z = z;
  if (z.imag() == 0.0) {
    const double x = z.real();
    if (std::abs(x) > a) {
      br.on_cut = true;
      // Upper limit: k = sgn(x) sqrt(x^2 - a^2) / c.
      br.k = std::copysign(std::sqrt((x - a) * (x + a)), x) / c;
    } else {
      br.k = kI * std::sqrt((a - x) * (a + x)) / c;
      br.on_cut = std::abs(x) == a;
    }
  } else {
    br.k = kI * std::sqrt((a - z) * (a + z)) / c;
  }
  if (z == cplx(-a, 0.0)) {
    br.k1_infinite = true;
    br.k1 = cplx(std::numeric_limits<double>::infinity(), 0.0);
  } else {
    br.k1 = c * br.k / (z + a);
  }
  return br;
}

MatrixC edge_weyl_block(const Edge& e, cplx z, const PhysicalParams& p) {
  const auto br = branch_eval(z, p);
  const double c = p.light_speed;
  if (!e.is_segment()) {
    if (br.k1_infinite) throw PoleError(e.id, br.z);
    MatrixC m(1, 1);
    m(0, 0) = kI * c * br.k1;
    return m;
  }
  const auto ends = segment_ends(e.length, br.z, br, p);
  if (std::abs(ends.cos_lk) <= kPoleTol) throw PoleError(e.id, br.z);
  // c k1 sin(lk) = (z - a) l sinc(lk), sin(lk) / (c k1) = (z + a) l sinc(lk) / c^2.
  const cplx sec = 1.0 / ends.cos_lk;
  const double a = p.threshold();
  const cplx sc = e.length * sinc(br.k * e.length);
  MatrixC m(2, 2);
  m(0, 0) = (br.z - a) * sc * sec;
  m(0, 1) = sec;
  m(1, 0) = sec;
  m(1, 1) = (br.z + a) * sc * sec / (c * c);
  return m;
}

MatrixC assemble_M(const MetricGraph& g, const PhysicalParams& p, cplx z) {
  const TraceIndexMap map(g);
  MatrixC M = MatrixC::Zero(map.dimension(), map.dimension());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto blk = edge_weyl_block(g.edge(e), z, p);
    const auto so = map.slot_of({e, EndKind::origin});
    if (blk.rows() == 1) {
      M(so, so) = blk(0, 0);
    } else {
      const auto sf = map.slot_of({e, EndKind::far});
      M(so, so) = blk(0, 0);
      M(so, sf) = blk(0, 1);
      M(sf, so) = blk(1, 0);
      M(sf, sf) = blk(1, 1);
    }
  }
  return M;
}

cplx secular(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p, cplx z) {
  const MatrixC M = assemble_M(g, p, z);
  if (cm.A.rows() != M.rows() || cm.B.rows() != M.rows()) {
    throw ValidationError("condition matrices do not match the trace dimension");
  }
  return (cm.B * M - cm.A).determinant();
}

WeylEvaluation evaluate_weyl(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p, cplx z) {
  WeylEvaluation ev;
  ev.z = sanitize(z);
  try {
    ev.M = assemble_M(g, p, ev.z);
    ev.secular = (cm.B * ev.M - cm.A).determinant();
  } catch (const PoleError& err) {
    ev.pole_flag = true;
    ev.pole_edge = err.edge_id();
    ev.secular = cplx(std::numeric_limits<double>::infinity(), 0.0);
  }
  return ev;
}

cplx secular_regularized(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p, cplx z) {
  const auto cols = solution_columns(g, p, z, true, false);
  if (cm.A.rows() != cols.G0.rows()) throw ValidationError("condition matrices do not match the trace dimension");
  // det(B G1 - A G0) = det(B M - A) det(G0), det(G0) = prod cos(l k).
  return (cm.B * cols.G1 - cm.A * cols.G0).determinant();
}

cplx model_f_raw(cplx z) {
  // sqrt(4 z^2 - 1) = 2 k(z) on the model's cut plane; a bare std::sqrt
  // would flip sign with the signed zero of Im(z^2) on the negative axis.
  const cplx w = 2.0 * branch_eval(z, PhysicalParams{0.5, 1.0}).k;
  const cplx ch = std::cos(w / 2.0);
  if (std::abs(ch) <= kPoleTol) throw NumericError("model determinant pole");
  const cplx sec2 = 1.0 / (ch * ch);
  return -(8.0 / 9.0) * kI * (std::sin(w / 2.0) + std::sin(1.5 * w) + 2.0 * kI) * sec2 * sec2;
}

cplx model_f(cplx z) {
  z = sanitize(z);
  if (z.imag() != 0.0) return model_f_raw(z);
  const double x = z.real();
  const double q = 4.0 * x * x - 1.0;
  if (q == 0.0) return 16.0 / 9.0;
  if (q < 0.0) {
    const double s = std::sqrt(-q);
    const double ch = std::cosh(s / 2.0);
    const double sech4 = 1.0 / (ch * ch * ch * ch);
    return (8.0 / 9.0) * (std::sinh(s / 2.0) + std::sinh(1.5 * s) + 2.0) * sech4;
  }
  const double w = std::sqrt(q);
  const double cw = std::cos(w / 2.0);
  if (std::abs(cw) <= kPoleTol) throw NumericError("model determinant pole");
  const double sec4 = 1.0 / (cw * cw * cw * cw);
  const double re = (16.0 / 9.0) * sec4;
  const double im = -(8.0 / 9.0) * std::sin(2.0 * w) * std::cos(w);
  return {re, im};
}

std::vector<EdgeSpinor> solution_basis(const Edge& e, cplx z, const PhysicalParams& p) {
  const auto br = branch_eval(z, p);
  const double c = p.light_speed;
  const double a = p.threshold();
  if (!e.is_segment()) {
    if (br.k1_infinite) return {{Component::zero(), Component::constant(1.0)}};
    return {{Exponential{br.k, 1.0}, Exponential{br.k, br.k1}}};
  }
  if (br.k == cplx{}) {
    return {{Component::constant(1.0), Linear{kI * (br.z - a) / c, 0.0}},
            {Linear{(br.z + a) / (c * c), 0.0}, Component::constant(-kI / c)}};
  }
  return {{Trig{br.k, 1.0, 0.0}, Trig{br.k, 0.0, kI * br.k1}},
          {Trig{br.k, 0.0, (br.z + a) / (c * c * br.k)}, Trig{br.k, -kI / c, 0.0}}};
}

std::vector<EdgeSpinor> defect_basis(const Edge& e, cplx z, const PhysicalParams& p) {
  z = sanitize(z);
  if (z.imag() == 0.0 && std::abs(z.real()) >= p.threshold()) {
    throw ValidationError("defect space needs Im z != 0 or z strictly inside the gap");
  }
  return solution_basis(e, z, p);
}

double kernel_gap(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p, double lambda) {
  const auto br = branch_eval(lambda, p);
  const auto cols = solution_columns(g, p, lambda, decays(br, p, lambda), false);
  const MatrixC N = cm.B * cols.G1 - cm.A * cols.G0;
  if (N.cols() == 0) return 1.0;
  Eigen::JacobiSVD<MatrixC> svd(N);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) return 0.0;
  return N.cols() > N.rows() ? 0.0 : sv(sv.size() - 1) / sv(0);
}

std::vector<ClosedFormSpinor> eigenfunctions_from_kernel(const MetricGraph& g, const ConditionMatrices& cm,
                                                         const PhysicalParams& p, double lambda, double tol) {
  const auto br = branch_eval(lambda, p);
  const bool with_h = decays(br, p, lambda);
  const auto cols = solution_columns(g, p, lambda, with_h, true);
  const MatrixC N = cm.B * cols.G1 - cm.A * cols.G0;
  if (N.cols() == 0) throw NumericError("kernel empty");
  Eigen::JacobiSVD<MatrixC> svd(N, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(sv(0), std::numeric_limits<double>::min());
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index j = 0; j < N.cols(); ++j) {
    const double s = j < sv.size() ? sv(j) : 0.0;
    if (s <= tol * scale) null_cols.push_back(j);
  }
  if (null_cols.empty()) throw NumericError("kernel empty");

  const double cutoff = with_h ? std::min(1e4, std::max(40.0, 40.0 / br.k.imag())) : 40.0;
  std::vector<ClosedFormSpinor> modes;
  for (auto j : null_cols) {
    const VectorC coef = svd.matrixV().col(j);
    auto psi = ClosedFormSpinor::zero(g);
    for (std::size_t i = 0; i < cols.spinors.size(); ++i) {
      const auto& [e, s] = cols.spinors[i];
      auto& dst = psi.edges[e];
      dst.first = dst.first + coef(static_cast<Eigen::Index>(i)) * s.first;
      dst.second = dst.second + coef(static_cast<Eigen::Index>(i)) * s.second;
    }
    const double n2 = l2_norm_squared(g, psi, cutoff);
    if (!(n2 > 0.0)) throw NumericError("kernel vector has zero norm");
    modes.push_back((1.0 / std::sqrt(n2)) * psi);
  }
  return modes;
}

ClosedFormSpinor eigenfunction_from_kernel(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p,
                                           double lambda, double tol) {
  return eigenfunctions_from_kernel(g, cm, p, lambda, tol).front();
}

std::vector<ScanRow> secular_scan(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p,
                                  double zmin, double zmax, int samples, double imag, SecularKind kind) {
  if (samples < 2) throw ValidationError("a scan needs at least 2 samples");
  if (!(zmin < zmax)) throw ValidationError("scan window is empty");
  std::vector<ScanRow> rows(static_cast<std::size_t>(samples));
  parallel_for(rows.size(), [&](std::size_t i) {
    const double x = zmin + (zmax - zmin) * static_cast<double>(i) / (samples - 1);
    auto& row = rows[i];
    row.z = sanitize(cplx(x, imag));
    try {
      switch (kind) {
        case SecularKind::plain:
          row.value = secular(g, cm, p, row.z);
          break;
        case SecularKind::regularized:
          row.value = secular_regularized(g, cm, p, row.z);
          break;
        case SecularKind::model_f:
          row.value = model_f(row.z);
          break;
      }
    } catch (const NumericError&) {
      row.pole = true;
      row.value = cplx(std::numeric_limits<double>::infinity(), 0.0);
    }
  });
  return rows;
}

}  // namespace gdirac
