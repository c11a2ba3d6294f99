#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gdirac/common.hpp"

namespace gdirac {

struct EigenSystem;

/// Diagonal stand-in for the multiplication operator of the spectral
/// theorem: A_i = 1 + f_i^2 >= 1.
class MultiplierSurrogate {
 public:
  static MultiplierSurrogate from_multiplier(std::vector<double> f);
  /// Throws ValidationError unless every A_i >= 1.
  static MultiplierSurrogate from_weights(std::vector<double> A);

  const std::vector<double>& weights() const noexcept { return A_; }
  std::size_t dimension() const noexcept { return A_.size(); }

 private:
  explicit MultiplierSurrogate(std::vector<double> A) : A_(std::move(A)) {}
  std::vector<double> A_;
};

/// sum_i t A_i / (1 + t A_i) |x_i|^2.
double k_functional_closed(const MultiplierSurrogate& s, const Eigen::VectorXcd& x, double t);

struct KDecomposition {
  double value = 0.0;
  Eigen::VectorXcd x0;
  Eigen::VectorXcd x1;
};

/// Minimiser of |x0|^2 + t <A x1, x1> over x = x0 + x1:
/// x1 = (1 + tA)^{-1} x, x0 = x - x1.
KDecomposition k_functional_direct(const MultiplierSurrogate& s, const Eigen::VectorXcd& x, double t);

/// |x0|^2 + t <A x1, x1> for an arbitrary split.
double k_objective(const MultiplierSurrogate& s, const Eigen::VectorXcd& x0, const Eigen::VectorXcd& x1, double t);

/// int_0^inf t^{-theta} K(t, x) dt / t by the trapezoid rule in u = ln t,
/// refined by halving until the relative change is below 1e-12.
double interpolation_norm(const MultiplierSurrogate& s, const Eigen::VectorXcd& x, double theta);

/// sum_i A_i^theta |x_i|^2.
double power_norm(const MultiplierSurrogate& s, const Eigen::VectorXcd& x, double theta);

/// pi / sin(pi theta).
double interpolation_constant(double theta);

/// Surrogate with f_i = eigenvalues of a full eigen-decomposition.
MultiplierSurrogate surrogate_from(const EigenSystem& sys);

/// Coefficients of x in the eigenbasis.
Eigen::VectorXcd eigen_coefficients(const EigenSystem& sys, const Eigen::VectorXcd& x);

/// power_norm at theta = 1/2 of x in the eigenbasis of the discrete operator.
/// Throws ValidationError if `sys` is not a complete decomposition.
double dirac_form_norm(const EigenSystem& sys, const Eigen::VectorXcd& x);

}  // namespace gdirac
