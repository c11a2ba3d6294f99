#pragma once

#include <span>
#include <variant>
#include <vector>

#include "gdirac/common.hpp"
#include "gdirac/graph.hpp"

namespace gdirac {

/// slope * x + offset
struct Linear {
  cplx slope{};
  cplx offset{};
};

/// cos_coef * cos(k x) + sin_coef * sin(k x), complex k.
struct Trig {
  cplx wavenumber{};
  cplx cos_coef{};
  cplx sin_coef{};
};

/// coef * exp(i k x), complex k.
struct Exponential {
  cplx wavenumber{};
  cplx coef{};
};

using Term = std::variant<Linear, Trig, Exponential>;

/// Closed-form scalar field on one edge: a finite sum of terms.
class Component {
 public:
  Component() = default;
  Component(Term t) { terms_.push_back(t); }  // NOLINT(google-explicit-constructor)
  Component(Linear t) : Component(Term{t}) {}  // NOLINT(google-explicit-constructor)
  Component(Trig t) : Component(Term{t}) {}  // NOLINT(google-explicit-constructor)
  Component(Exponential t) : Component(Term{t}) {}  // NOLINT(google-explicit-constructor)

  static Component zero() { return {}; }
  static Component constant(cplx value) { return Linear{{}, value}; }

  cplx operator()(double x) const;
  Component derivative() const;

  const std::vector<Term>& terms() const noexcept { return terms_; }

  friend Component operator+(Component lhs, const Component& rhs);
  friend Component operator*(cplx s, Component c);

 private:
  std::vector<Term> terms_;
};

/// (psi1, psi2) on one edge.
struct EdgeSpinor {
  Component first;
  Component second;
};

/// Per-edge closed-form spinor, indexed like MetricGraph::edges().
struct ClosedFormSpinor {
  std::vector<EdgeSpinor> edges;

  static ClosedFormSpinor zero(const MetricGraph& g) { return {std::vector<EdgeSpinor>(g.edge_count())}; }
};

ClosedFormSpinor operator+(const ClosedFormSpinor& a, const ClosedFormSpinor& b);
ClosedFormSpinor operator*(cplx s, const ClosedFormSpinor& a);

/// Edge-wise action -i c sigma1 psi' + m c^2 sigma3 psi.
ClosedFormSpinor apply_dirac(const ClosedFormSpinor& psi, const PhysicalParams& p);

struct VertexResidual {
  double continuity = 0.0;  // max over pairs |psi1_e(v) - psi1_f(v)|
  cplx balance{};           // sum of signed psi2 traces
};

/// Pointwise check of the Kirchhoff-type conditions at every vertex.
/// EndpointCondition overrides are ignored here; see condition_residual.
std::vector<VertexResidual> vertex_residuals(const MetricGraph& g, const ClosedFormSpinor& psi);

/// max over vertices of max(continuity, |balance|).
double max_vertex_residual(const MetricGraph& g, const ClosedFormSpinor& psi);

/// Value of psi at an endpoint: (psi1, psi2) evaluated at 0 or l_e.
std::pair<cplx, cplx> endpoint_values(const MetricGraph& g, const ClosedFormSpinor& psi, Endpoint p);

/// max |D psi - lambda psi| over `samples` points per edge; half-lines are
/// sampled on [0, halfline_span].
double eigen_residual(const MetricGraph& g, const ClosedFormSpinor& psi, cplx lambda,
                      const PhysicalParams& p, int samples = 64, double halfline_span = 10.0);

/// L^2 norm squared by composite Gauss-Legendre quadrature; half-lines are
/// truncated at halfline_cutoff.
double l2_norm_squared(const MetricGraph& g, const ClosedFormSpinor& psi,
                       double halfline_cutoff = 40.0);

}  // namespace gdirac
