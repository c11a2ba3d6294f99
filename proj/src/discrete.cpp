#include "gdirac/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace gdirac {

namespace {

using Triplet = Eigen::Triplet<cplx>;
using SparseD = Eigen::SparseMatrix<double>;

constexpr Eigen::Index kDenseLimit = 1200;

enum class EndClosure { natural, remove_node };

EndClosure closure_at(const MetricGraph& g, std::size_t v) {
  const auto* cond = g.endpoint_condition(v);
  if (cond == nullptr) return EndClosure::natural;
  const auto end = g.incident(v).front().end;
  // origin: a psi1 = b (i c psi2); far: a (i c psi2) = b psi1.
  const cplx on_psi1 = end == EndKind::origin ? cond->b : cond->a;
  const cplx on_psi2 = end == EndKind::origin ? cond->a : cond->b;
  if (on_psi1 == cplx{}) return EndClosure::remove_node;
  if (on_psi2 == cplx{}) return EndClosure::natural;
  throw ValidationError("endpoint condition at vertex '" + g.vertices()[v] +
                        "' is neither psi1 = 0 nor psi2 = 0; not supported by the discretization");
}

struct Factorized {
  Eigen::SimplicialLDLT<SparseD, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
};

SparseD shifted(const DiscreteOperator& op, double sigma) {
  SparseD I(op.size(), op.size());
  I.setIdentity();
  return op.H_real - sigma * I;
}

Eigen::MatrixXd dense_real(const DiscreteOperator& op) { return Eigen::MatrixXd(op.H_real); }

Eigen::VectorXcd to_complex_gauge(const DiscreteOperator& op, const Eigen::VectorXd& y) {
  Eigen::VectorXcd out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    out(i) = op.dofs[static_cast<std::size_t>(i)].component == 1 ? cplx(y(i)) : kI * y(i);
  }
  return out;
}

SampledSpinor sample(const DiscreteOperator& op, const Eigen::VectorXcd& y) {
  SampledSpinor s;
  for (std::size_t e = 0; e < op.cells.size(); ++e) {
    SampledSpinor::EdgeSamples es;
    es.spacing = op.spacing[e];
    es.first = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(op.cells[e] + 1));
    es.second = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(op.cells[e]));
    for (std::size_t j = 0; j <= op.cells[e]; ++j) {
      const long d = op.node_dof[e][j];
      if (d >= 0) es.first(static_cast<Eigen::Index>(j)) = y(d) / std::sqrt(op.weights(d));
    }
    for (std::size_t j = 0; j < op.cells[e]; ++j) {
      const long d = op.mid_dof[e][j];
      es.second(static_cast<Eigen::Index>(j)) = y(d) / std::sqrt(op.weights(d));
    }
    s.edges.push_back(std::move(es));
  }
  return s;
}

// Smallest x with more than k eigenvalues below x, i.e. lambda_k (0-based).
double kth_eigenvalue(const DiscreteOperator& op, std::size_t k) {
  const double bound = spectral_bound(op);
  double lo = -bound - 1.0;
  double hi = bound + 1.0;
  while (hi - lo > 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)})) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (count_below(op, mid) > k ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

void locate(const DiscreteOperator& op, double lo, double hi, std::size_t clo, std::size_t chi,
            std::vector<double>& out) {
  if (chi <= clo) return;
  const double mid = 0.5 * (lo + hi);
  if (hi - lo <= 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)}) || mid == lo || mid == hi) {
    out.insert(out.end(), chi - clo, mid);
    return;
  }
  const auto cm = count_below(op, mid);
  locate(op, lo, mid, clo, cm, out);
  locate(op, mid, hi, cm, chi, out);
}

Eigen::VectorXd inverse_iteration(const DiscreteOperator& op, double lambda, const std::vector<Eigen::VectorXd>& against,
                                  std::mt19937& rng) {
  const double delta = 1e-9 * std::max(1.0, std::abs(lambda));
  Eigen::SparseLU<SparseD> lu;
  SparseD A = shifted(op, lambda + delta);
  A.makeCompressed();
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw NumericError("inverse iteration factorization failed");
  std::normal_distribution<double> nd;
  Eigen::VectorXd x(op.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = nd(rng);
  for (int it = 0; it < 4; ++it) {
    for (const auto& v : against) x -= v.dot(x) * v;
    x = lu.solve(x);
    x.normalize();
  }
  for (const auto& v : against) x -= v.dot(x) * v;
  return x.normalized();
}

}  // namespace

DiscreteOperator discretize(const MetricGraph& g, const PhysicalParams& p, double h, double L) {
  validate(p);
  if (!(h > 0.0)) throw ValidationError("grid spacing must be positive");
  double min_len = std::numeric_limits<double>::infinity();
  for (const auto& e : g.edges()) {
    if (e.is_segment()) min_len = std::min(min_len, e.length);
  }
  if (g.segment_count() > 0 && h > min_len / 8.0 * (1.0 + 1e-12)) {
    throw ValidationError("grid spacing exceeds min segment length / 8");
  }
  const double c = p.light_speed;
  const double a = p.threshold();
  if (g.halfline_count() > 0) {
    const double L_min = 10.0 * c / a;
    if (L == 0.0) L = L_min;
    if (L < L_min * (1.0 - 1e-12)) throw ValidationError("half-line truncation below 10 c / (m c^2)");
  }

  DiscreteOperator op;
  op.params = p;
  op.truncation = g.halfline_count() > 0 ? L : 0.0;

  std::vector<long> vertex_dof(g.vertex_count(), -1);
  std::vector<double> w;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (closure_at(g, v) == EndClosure::remove_node) continue;
    vertex_dof[v] = static_cast<long>(op.dofs.size());
    const auto first = g.incident(v).front();
    op.dofs.push_back({first.edge, 0, 1, v});  // index fixed once cell counts are known
    w.push_back(0.0);
  }

  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    const double len = edge.is_segment() ? edge.length : L;
    const auto n = static_cast<std::size_t>(std::max(8.0, std::round(len / h)));
    const double he = len / static_cast<double>(n);
    op.cells.push_back(n);
    op.spacing.push_back(he);
    std::vector<long> nodes(n + 1, -1), mids(n, -1);
    nodes[0] = vertex_dof[edge.from];
    if (nodes[0] >= 0) w[static_cast<std::size_t>(nodes[0])] += he / 2;
    if (edge.is_segment()) {
      nodes[n] = vertex_dof[edge.to];
      if (nodes[n] >= 0) w[static_cast<std::size_t>(nodes[n])] += he / 2;
    }
    for (std::size_t j = 1; j < n; ++j) {
      nodes[j] = static_cast<long>(op.dofs.size());
      op.dofs.push_back({e, j, 1, kNoVertex});
      w.push_back(he);
    }
    for (std::size_t j = 0; j < n; ++j) {
      mids[j] = static_cast<long>(op.dofs.size());
      op.dofs.push_back({e, j, 2, kNoVertex});
      w.push_back(he);
    }
    op.node_dof.push_back(std::move(nodes));
    op.mid_dof.push_back(std::move(mids));
  }
  for (auto& d : op.dofs) {
    if (d.vertex != kNoVertex && g.incident(d.vertex).front().end == EndKind::far) d.index = op.cells[d.edge];
  }

  const auto N = static_cast<Eigen::Index>(op.dofs.size());
  op.weights = Eigen::Map<Eigen::VectorXd>(w.data(), N);
  for (Eigen::Index i = 0; i < N; ++i) {
    if (!(op.weights(i) > 0.0)) throw ValidationError("vertex without a grid cell");
  }

  const cplx ic = kI * c;
  std::vector<Triplet> trip;
  auto add = [&](long r, long col, cplx v) {
    if (r < 0 || col < 0) return;
    trip.emplace_back(r, col, v / std::sqrt(op.weights(r) * op.weights(col)));
  };
  for (Eigen::Index i = 0; i < N; ++i) {
    const double sgn = op.dofs[static_cast<std::size_t>(i)].component == 1 ? 1.0 : -1.0;
    add(i, i, sgn * a * op.weights(i));
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& nodes = op.node_dof[e];
    const auto& mids = op.mid_dof[e];
    for (std::size_t j = 0; j < op.cells[e]; ++j) {
      // (K psi)_{j+1/2} = -i c (psi1_{j+1} - psi1_j) - m c^2 h psi2_{j+1/2}
      add(mids[j], nodes[j + 1], -ic);
      add(nodes[j + 1], mids[j], std::conj(-ic));
      add(mids[j], nodes[j], ic);
      add(nodes[j], mids[j], std::conj(ic));
    }
  }
  op.H.resize(N, N);
  op.H.setFromTriplets(trip.begin(), trip.end());
  op.H.makeCompressed();

  std::vector<Eigen::Triplet<double>> rtrip;
  rtrip.reserve(trip.size());
  for (int k = 0; k < op.H.outerSize(); ++k) {
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(op.H, k); it; ++it) {
      const cplx ur = op.dofs[static_cast<std::size_t>(it.row())].component == 1 ? cplx(1.0) : kI;
      const cplx uc = op.dofs[static_cast<std::size_t>(it.col())].component == 1 ? cplx(1.0) : kI;
      const cplx v = std::conj(ur) * it.value() * uc;
      rtrip.emplace_back(it.row(), it.col(), v.real());
    }
  }
  op.H_real.resize(N, N);
  op.H_real.setFromTriplets(rtrip.begin(), rtrip.end());
  op.H_real.makeCompressed();
  return op;
}

std::size_t count_below(const DiscreteOperator& op, double sigma) {
  double s = sigma;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Factorized f;
    f.ldlt.compute(shifted(op, s));
    if (f.ldlt.info() == Eigen::Success) {
      const auto& D = f.ldlt.vectorD();
      if (D.allFinite() && (D.array() != 0.0).all()) {
        return static_cast<std::size_t>((D.array() < 0.0).count());
      }
    }
    // Shift sits on an eigenvalue or a zero pivot: nudge it.
    s = sigma + (attempt + 1) * 1e-14 * std::max(1.0, std::abs(sigma));
  }
  throw NumericError("inertia count failed");
}

std::size_t count_in(const DiscreteOperator& op, double a, double b) {
  if (!(a <= b)) return 0;
  const double up = std::nextafter(b, std::numeric_limits<double>::infinity());
  const auto hi = count_below(op, up);
  const auto lo = count_below(op, a);
  return hi >= lo ? hi - lo : 0;
}

double spectral_bound(const DiscreteOperator& op) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(op.size());
  for (int k = 0; k < op.H_real.outerSize(); ++k) {
    for (SparseD::InnerIterator it(op.H_real, k); it; ++it) rows(it.row()) += std::abs(it.value());
  }
  return op.size() == 0 ? 0.0 : rows.maxCoeff();
}

EigenSystem eigs_window(const DiscreteOperator& op, double a, double b, bool with_vectors) {
  if (!(a < b)) throw ValidationError("eigs_window needs a < b");
  EigenSystem sys;
  if (op.size() == 0) return sys;
  if (op.size() <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_real(op),
                                                      with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double lam = es.eigenvalues()(i);
      if (lam < a || lam > b) continue;
      sys.eigenvalues.push_back(lam);
      if (with_vectors) {
        const auto y = to_complex_gauge(op, es.eigenvectors().col(i));
        sys.raw_vectors.push_back(y);
        sys.vectors.push_back(sample(op, y));
      }
    }
    return sys;
  }
  const double up = std::nextafter(b, std::numeric_limits<double>::infinity());
  locate(op, a, up, count_below(op, a), count_below(op, up), sys.eigenvalues);
  std::sort(sys.eigenvalues.begin(), sys.eigenvalues.end());
  if (with_vectors) {
    std::mt19937 rng(20240607);
    std::vector<Eigen::VectorXd> cluster;
    double cluster_at = std::numeric_limits<double>::quiet_NaN();
    for (double lam : sys.eigenvalues) {
      if (!(std::abs(lam - cluster_at) <= 1e-8 * std::max(1.0, std::abs(lam)))) {
        cluster.clear();
        cluster_at = lam;
      }
      auto x = inverse_iteration(op, lam, cluster, rng);
      cluster.push_back(x);
      const auto y = to_complex_gauge(op, x);
      sys.raw_vectors.push_back(y);
      sys.vectors.push_back(sample(op, y));
    }
  }
  return sys;
}

double min_abs_eigenvalue(const DiscreteOperator& op) {
  if (op.size() == 0) throw ValidationError("empty operator");
  if (op.size() <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_real(op), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().minCoeff();
  }
  const auto n0 = count_below(op, 0.0);
  double best = std::numeric_limits<double>::infinity();
  if (n0 < static_cast<std::size_t>(op.size())) best = std::abs(kth_eigenvalue(op, n0));
  if (n0 > 0) best = std::min(best, std::abs(kth_eigenvalue(op, n0 - 1)));
  return best;
}

double symmetry_residual(const DiscreteOperator& op) {
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd x(op.size()), y(op.size());
    for (Eigen::Index i = 0; i < op.size(); ++i) {
      x(i) = cplx(nd(rng), nd(rng));
      y(i) = cplx(nd(rng), nd(rng));
    }
    const Eigen::VectorXcd Hx = op.H * x;
    const Eigen::VectorXcd Hy = op.H * y;
    const cplx lhs = Hx.dot(y);
    const cplx rhs = x.dot(Hy);
    worst = std::max(worst, std::abs(lhs - rhs) / (x.norm() * y.norm()));
  }
  return worst;
}

double symmetry_residual(const MetricGraph& g, const PhysicalParams& p, double h, double L) {
  return symmetry_residual(discretize(g, p, h, L));
}

double hermiticity_residual(const DiscreteOperator& op) {
  const Eigen::SparseMatrix<cplx> adj = op.H.adjoint();
  const Eigen::SparseMatrix<cplx> diff = op.H - adj;
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

std::vector<double> kirchhoff_laplacian_eigs(const MetricGraph& g, const DiscreteOperator& op, std::size_t count) {
  if (!g.is_compact()) throw ValidationError("Kirchhoff Laplacian comparison needs a compact graph");
  std::vector<long> node_index(static_cast<std::size_t>(op.size()), -1);
  long n = 0;
  for (std::size_t i = 0; i < op.dofs.size(); ++i) {
    if (op.dofs[i].component == 1) node_index[i] = n++;
  }
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd w(n);
  for (std::size_t i = 0; i < op.dofs.size(); ++i) {
    if (node_index[i] >= 0) w(node_index[i]) = op.weights(static_cast<Eigen::Index>(i));
  }
  for (std::size_t e = 0; e < op.cells.size(); ++e) {
    const double he = op.spacing[e];
    for (std::size_t j = 0; j < op.cells[e]; ++j) {
      const long l = op.node_dof[e][j] >= 0 ? node_index[static_cast<std::size_t>(op.node_dof[e][j])] : -1;
      const long r = op.node_dof[e][j + 1] >= 0 ? node_index[static_cast<std::size_t>(op.node_dof[e][j + 1])] : -1;
      if (l >= 0) S(l, l) += 1.0 / he;
      if (r >= 0) S(r, r) += 1.0 / he;
      if (l >= 0 && r >= 0) {
        S(l, r) -= 1.0 / he;
        S(r, l) -= 1.0 / he;
      }
    }
  }
  const Eigen::VectorXd isw = w.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd Ssym = isw.asDiagonal() * S * isw.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ssym, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size() && out.size() < count; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

SquareSpectrumReport square_spectrum_check(const MetricGraph& g, const PhysicalParams& p, double h, std::size_t modes) {
  if (!g.is_compact()) throw ValidationError("square_spectrum_check needs a compact graph");
  const auto op = discretize(g, p, h);
  const double a = p.threshold();
  const double c = p.light_speed;
  SquareSpectrumReport rep;
  const auto first = count_below(op, a * (1.0 - 1e-9));
  for (std::size_t k = first; k < first + modes && k < static_cast<std::size_t>(op.size()); ++k) {
    const double lam = kth_eigenvalue(op, k);
    rep.dirac_mapped.push_back(std::max(0.0, (lam * lam - a * a) / (c * c)));
  }
  rep.laplacian = kirchhoff_laplacian_eigs(g, op, modes);
  for (std::size_t i = 0; i < std::min(rep.dirac_mapped.size(), rep.laplacian.size()); ++i) {
    const double d = std::abs(rep.dirac_mapped[i] - rep.laplacian[i]) / std::max(1.0, std::abs(rep.laplacian[i]));
    rep.max_mismatch = std::max(rep.max_mismatch, d);
  }
  if (rep.dirac_mapped.size() < modes || rep.laplacian.size() < modes) rep.max_mismatch = 1.0;
  return rep;
}

ConvergenceStudy convergence_study(const MetricGraph& g, const PhysicalParams& p, double target,
                                   const std::vector<double>& h_list, double L) {
  if (h_list.size() < 2) throw ValidationError("convergence study needs at least two grid sizes");
  ConvergenceStudy st;
  const double window = 0.05 * std::max(1.0, std::abs(target));
  for (double h : h_list) {
    const auto op = discretize(g, p, h, L);
    const auto sys = eigs_window(op, target - window, target + window);
    if (sys.eigenvalues.empty()) throw NumericError("eigenvalue lost between refinements");
    double best = sys.eigenvalues.front();
    for (double lam : sys.eigenvalues) {
      if (std::abs(lam - target) < std::abs(best - target)) best = lam;
    }
    st.h.push_back(h);
    st.eigenvalue.push_back(best);
    st.error.push_back(std::abs(best - target));
  }
  st.monotone = true;
  for (std::size_t i = 1; i < st.error.size(); ++i) st.monotone = st.monotone && st.error[i] < st.error[i - 1];
  if (st.error.front() < 1e-12) {
    st.saturated = true;
    return st;
  }
  double sum = 0.0;
  int terms = 0;
  for (std::size_t i = 1; i < st.error.size(); ++i) {
    if (st.error[i] <= 1e-14) continue;
    sum += std::log(st.error[i - 1] / st.error[i]) / std::log(st.h[i - 1] / st.h[i]);
    ++terms;
  }
  if (terms > 0) st.order = sum / terms;
  else st.saturated = true;
  return st;
}

}  // namespace gdirac
