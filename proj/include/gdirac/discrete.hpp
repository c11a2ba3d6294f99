#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gdirac/graph.hpp"

namespace gdirac {

/// Where a row of the discrete operator lives. Vertex nodes are shared by
/// every incident edge; `edge`/`index` then name the first incident end.
struct DofInfo {
  std::size_t edge = 0;
  std::size_t index = 0;  // node j or midpoint j + 1/2
  int component = 1;      // 1: psi1 on a node, 2: psi2 on a midpoint
  std::size_t vertex = kNoVertex;
};

/// Staggered-grid Dirac operator, symmetrised with the quadrature weights:
/// H = W^{-1/2} K W^{-1/2}. `H_real` is the same operator in the gauge
/// psi2 = i phi, in which it is real symmetric.
struct DiscreteOperator {
  PhysicalParams params;
  Eigen::SparseMatrix<cplx> H;
  Eigen::SparseMatrix<double> H_real;
  Eigen::VectorXd weights;
  std::vector<DofInfo> dofs;
  std::vector<double> spacing;                // per edge
  std::vector<std::size_t> cells;             // per edge
  std::vector<std::vector<long>> node_dof;    // per edge, nodes 0..cells (-1: removed)
  std::vector<std::vector<long>> mid_dof;     // per edge, midpoints 0..cells-1
  double truncation = 0.0;                    // half-line length L

  Eigen::Index size() const noexcept { return H.rows(); }
};

/// Builds the operator on `g`. psi1 lives on nodes (vertex nodes shared),
/// psi2 on cell midpoints; the vertex rows carry the one-sided signed
/// differences, so the balance condition is the natural one. Half-lines are
/// cut at L with psi1(L) = 0. A degree-1 endpoint condition equivalent to
/// psi1 = 0 removes the vertex node; one equivalent to psi2 = 0 is the natural
/// closure; anything else is rejected.
///
/// Throws ValidationError unless h <= min segment length / 8 and, for graphs
/// with half-lines, L >= 10 c / (m c^2).
DiscreteOperator discretize(const MetricGraph& g, const PhysicalParams& p, double h, double L = 0.0);

/// Samples of one eigenvector, psi = W^{-1/2} y.
struct SampledSpinor {
  struct EdgeSamples {
    double spacing = 0.0;
    Eigen::VectorXcd first;   // nodes 0..cells
    Eigen::VectorXcd second;  // midpoints
  };
  std::vector<EdgeSamples> edges;
};

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  std::vector<SampledSpinor> vectors;
  std::vector<Eigen::VectorXcd> raw_vectors;  // unit eigenvectors of H
};

/// Number of eigenvalues strictly below sigma (Sylvester inertia of H - sigma).
std::size_t count_below(const DiscreteOperator& op, double sigma);

/// Number of eigenvalues in [a, b].
std::size_t count_in(const DiscreteOperator& op, double a, double b);

/// All eigenvalues in [a, b] to 1e-12 relative accuracy. Dense for small
/// operators, inertia bisection plus inverse iteration otherwise.
EigenSystem eigs_window(const DiscreteOperator& op, double a, double b, bool with_vectors = false);

/// Smallest |lambda| over the spectrum.
double min_abs_eigenvalue(const DiscreteOperator& op);

/// Gershgorin bound on the spectral radius.
double spectral_bound(const DiscreteOperator& op);

/// max over 20 random pairs of |<H x, y> - <x, H y>| / (|x| |y|), fixed seed.
double symmetry_residual(const DiscreteOperator& op);
double symmetry_residual(const MetricGraph& g, const PhysicalParams& p, double h, double L = 0.0);

/// Max |H - H*| entry.
double hermiticity_residual(const DiscreteOperator& op);

/// Kirchhoff Laplacian (continuity and derivative balance) on the node grid
/// of `op`: the lowest `count` eigenvalues. Compact graphs only.
std::vector<double> kirchhoff_laplacian_eigs(const MetricGraph& g, const DiscreteOperator& op, std::size_t count);

struct SquareSpectrumReport {
  std::vector<double> dirac_mapped;  // (lambda^2 - m^2 c^4) / c^2, lambda >= m c^2 ascending
  std::vector<double> laplacian;
  double max_mismatch = 0.0;  // relative, absolute below 1
};

/// Compares the squared Dirac spectrum with the Kirchhoff Laplacian on the
/// same grid. Throws ValidationError for graphs with half-lines.
SquareSpectrumReport square_spectrum_check(const MetricGraph& g, const PhysicalParams& p, double h,
                                           std::size_t modes = 5);

struct ConvergenceStudy {
  std::vector<double> h;
  std::vector<double> eigenvalue;
  std::vector<double> error;
  std::optional<double> order;  // mean log2 error ratio; empty when saturated
  bool saturated = false;
  bool monotone = false;
};

/// Tracks the discrete eigenvalue nearest to `target` over `h_list`.
/// Throws NumericError when no eigenvalue stays within 5% of the target.
ConvergenceStudy convergence_study(const MetricGraph& g, const PhysicalParams& p, double target,
                                   const std::vector<double>& h_list, double L = 0.0);

}  // namespace gdirac
