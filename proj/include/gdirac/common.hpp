#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace gdirac {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: graph documents, parameters, preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a certified answer.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Evaluation hit a pole of a segment Weyl block (cos(l k(z)) = 0).
class PoleError : public NumericError {
 public:
  PoleError(std::string edge_id, cplx z)
      : NumericError("Weyl block pole on edge '" + edge_id + "'"),
        edge_id_(std::move(edge_id)),
        z_(z) {}

  const std::string& edge_id() const noexcept { return edge_id_; }
  cplx z() const noexcept { return z_; }

 private:
  std::string edge_id_;
  cplx z_;
};

}  // namespace gdirac
