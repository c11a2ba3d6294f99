#include "gdirac/form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gdirac/discrete.hpp"

namespace gdirac {

namespace {

void check_dimension(const MultiplierSurrogate& s, const Eigen::VectorXcd& x) {
  if (static_cast<std::size_t>(x.size()) != s.dimension()) throw ValidationError("vector and surrogate sizes differ");
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw ValidationError("theta must lie in (0, 1)");
}

}  // namespace

MultiplierSurrogate MultiplierSurrogate::from_multiplier(std::vector<double> f) {
  if (f.empty()) throw ValidationError("surrogate needs at least one entry");
  for (auto& v : f) {
    if (!std::isfinite(v)) throw ValidationError("multiplier values must be finite");
    v = 1.0 + v * v;
  }
  return MultiplierSurrogate(std::move(f));
}

MultiplierSurrogate MultiplierSurrogate::from_weights(std::vector<double> A) {
  if (A.empty()) throw ValidationError("surrogate needs at least one entry");
  for (double v : A) {
    if (!(v >= 1.0) || !std::isfinite(v)) throw ValidationError("surrogate weights must satisfy A >= 1");
  }
  return MultiplierSurrogate(std::move(A));
}

double k_functional_closed(const MultiplierSurrogate& s, const Eigen::VectorXcd& x, double t) {
  check_dimension(s, x);
  if (!(t > 0.0)) throw ValidationError("t must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    const double tA = t * s.weights()[i];
    sum += tA / (1.0 + tA) * std::norm(x(static_cast<Eigen::Index>(i)));
  }
  return sum;
}

double k_objective(const MultiplierSurrogate& s, const Eigen::VectorXcd& x0, const Eigen::VectorXcd& x1, double t) {
  check_dimension(s, x0);
  check_dimension(s, x1);
  double sum = x0.squaredNorm();
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    sum += t * s.weights()[i] * std::norm(x1(static_cast<Eigen::Index>(i)));
  }
  return sum;
}

KDecomposition k_functional_direct(const MultiplierSurrogate& s, const Eigen::VectorXcd& x, double t) {
  check_dimension(s, x);
  if (!(t > 0.0)) throw ValidationError("t must be positive");
  KDecomposition d;
  d.x1 = x;
  for (std::size_t i = 0; i < s.dimension(); ++i) d.x1(static_cast<Eigen::Index>(i)) /= 1.0 + t * s.weights()[i];
  d.x0 = x - d.x1;
  d.value = k_objective(s, d.x0, d.x1, t);
  return d;
}

double interpolation_norm(const MultiplierSurrogate& s, const Eigen::VectorXcd& x, double theta) {
  check_dimension(s, x);
  check_theta(theta);
  const double a_max = *std::max_element(s.weights().begin(), s.weights().end());
  // Integrand e^{-theta u} K(e^u) decays like e^{-theta u} above and
  // A e^{(1 - theta) u} below; cut both tails at ~e^{-32}.
  const double u_hi = 32.0 / theta;
  const double u_lo = -(32.0 + std::log(a_max)) / (1.0 - theta);
  auto f = [&](double u) { return std::exp(-theta * u) * k_functional_closed(s, x, std::exp(u)); };

  int n = 256;
  double h = (u_hi - u_lo) / n;
  double sum = 0.5 * (f(u_lo) + f(u_hi));
  for (int i = 1; i < n; ++i) sum += f(u_lo + i * h);
  double prev = sum * h;
  for (int level = 0; level < 16; ++level) {
    for (int i = 0; i < n; ++i) sum += f(u_lo + (i + 0.5) * h);
    n *= 2;
    h /= 2;
    const double cur = sum * h;
    if (std::abs(cur - prev) <= 1e-12 * std::abs(cur)) return cur;
    prev = cur;
  }
  throw NumericError("interpolation quadrature did not converge");
}

double power_norm(const MultiplierSurrogate& s, const Eigen::VectorXcd& x, double theta) {
  check_dimension(s, x);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    sum += std::pow(s.weights()[i], theta) * std::norm(x(static_cast<Eigen::Index>(i)));
  }
  return sum;
}

double interpolation_constant(double theta) {
  check_theta(theta);
  return std::numbers::pi / std::sin(std::numbers::pi * theta);
}

MultiplierSurrogate surrogate_from(const EigenSystem& sys) { return MultiplierSurrogate::from_multiplier(sys.eigenvalues); }

Eigen::VectorXcd eigen_coefficients(const EigenSystem& sys, const Eigen::VectorXcd& x) {
  if (sys.raw_vectors.size() != sys.eigenvalues.size() || sys.raw_vectors.size() != static_cast<std::size_t>(x.size())) {
    throw ValidationError("a complete eigen-decomposition is required");
  }
  Eigen::VectorXcd c(x.size());
  for (std::size_t i = 0; i < sys.raw_vectors.size(); ++i) c(static_cast<Eigen::Index>(i)) = sys.raw_vectors[i].dot(x);
  return c;
}

double dirac_form_norm(const EigenSystem& sys, const Eigen::VectorXcd& x) {
  const auto coef = eigen_coefficients(sys, x);
  return power_norm(surrogate_from(sys), coef, 0.5);
}

}  // namespace gdirac
