#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gdirac/conditions.hpp"

namespace gdirac {

/// k(z), k1(z) on the plane cut along (-inf, -mc^2] and [mc^2, inf).
///
/// k = i sqrt(m^2 c^4 - z^2) / c with the principal root, so Im k > 0 off the
/// cuts and k > 0 on the right ray; on-cut values are limits from the upper
/// half-plane. k1 = c k / (z + mc^2).
struct BranchScalar {
  cplx z{};
  cplx k{};
  cplx k1{};
  bool on_cut = false;
  bool k1_infinite = false;  // z = -mc^2
};

BranchScalar branch_eval(cplx z, const PhysicalParams& p);

/// 1x1 block [i c k1] for a half-line; for a segment
/// [[c k1 tan(l k), sec(l k)], [sec(l k), tan(l k) / (c k1)]].
/// Throws PoleError when cos(l k) vanishes.
MatrixC edge_weyl_block(const Edge& e, cplx z, const PhysicalParams& p);

/// Block-diagonal Weyl matrix in TraceIndexMap slot order. Throws PoleError.
MatrixC assemble_M(const MetricGraph& g, const PhysicalParams& p, cplx z);

struct WeylEvaluation {
  cplx z{};
  MatrixC M;
  cplx secular{};
  bool pole_flag = false;
  std::optional<std::string> pole_edge;
};

/// Non-throwing evaluation used by scans: pole rows are flagged, not NaN.
WeylEvaluation evaluate_weyl(const MetricGraph& g, const ConditionMatrices& cm,
                             const PhysicalParams& p, cplx z);

/// det(B M(z) - A). Throws PoleError.
cplx secular(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p, cplx z);

/// det(B M(z) - A) * prod_segments cos(l_e k(z)), evaluated without poles.
/// For graphs without half-lines it is an entire function of z.
cplx secular_regularized(const MetricGraph& g, const ConditionMatrices& cm,
                         const PhysicalParams& p, cplx z);

/// Reference closed form of the model determinant (m = 1/2, c = l = 1,
/// a = 0, b = 1): sinh form in the gap, separate Re/Im forms outside, 16/9 at
/// z = +-1/2. Non-real z uses the raw expression. Throws NumericError at
/// poles.
cplx model_f(cplx z);

/// -(8/9) i (sin(w/2) + sin(3w/2) + 2i) sec^4(w/2), w = sqrt(4 z^2 - 1)
/// taken as 2 k(z) (Im w >= 0; on the rays the limit from above).
cplx model_f_raw(cplx z);

/// Solutions of D psi = z psi on one edge.
///
/// Segment: u = (cos kx, i k1 sin kx) and v = (sin kx / (c k1), -(i/c) cos kx),
/// which stay finite (linear) at z = +-mc^2. Half-line: the decaying
/// (e^{ikx}, k1 e^{ikx}) with unit psi1(0).
std::vector<EdgeSpinor> solution_basis(const Edge& e, cplx z, const PhysicalParams& p);

/// Basis of the defect space ker(D* - z) of one edge. Requires Im z != 0 or
/// z inside the gap; throws ValidationError otherwise.
std::vector<EdgeSpinor> defect_basis(const Edge& e, cplx z, const PhysicalParams& p);

/// Eigenfunctions of the coupled operator at real lambda, from the kernel of
/// B Gamma1 - A Gamma0 restricted to the L^2 solutions on every edge (no
/// half-line solution at or beyond the thresholds). Each mode is
/// L^2-normalised. Throws NumericError("kernel empty") when the smallest
/// relative singular value exceeds `tol`.
std::vector<ClosedFormSpinor> eigenfunctions_from_kernel(const MetricGraph& g, const ConditionMatrices& cm,
                                                         const PhysicalParams& p, double lambda,
                                                         double tol = 1e-8);

ClosedFormSpinor eigenfunction_from_kernel(const MetricGraph& g, const ConditionMatrices& cm,
                                           const PhysicalParams& p, double lambda, double tol = 1e-8);

/// Smallest singular value of B Gamma1 - A Gamma0 over the L^2 solution
/// basis at real lambda, relative to the largest.
double kernel_gap(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p,
                  double lambda);

enum class SecularKind { plain, regularized, model_f };

struct ScanRow {
  cplx z{};
  cplx value{};
  bool pole = false;
};

/// Evaluates the chosen function at `samples` equispaced points
/// z = x + i*imag, x in [zmin, zmax]. Poles are flagged rather than dropped.
std::vector<ScanRow> secular_scan(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p,
                                  double zmin, double zmax, int samples, double imag = 0.0,
                                  SecularKind kind = SecularKind::plain);

}  // namespace gdirac
