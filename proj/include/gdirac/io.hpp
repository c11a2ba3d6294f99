#pragma once

#include <string>
#include <vector>

#include "gdirac/weyl.hpp"

namespace gdirac {

/// 17 significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double v);

/// Writes to `path` through a temporary file in the same directory and a
/// rename. Throws ValidationError on IO failure.
void write_atomic(const std::string& path, const std::string& content);

/// Header z_re,z_im,s_re,s_im,s_abs,pole_flag. Pole rows carry inf values.
std::string secular_csv(const std::vector<ScanRow>& rows);

/// Header index,lambda.
std::string eigenvalue_csv(const std::vector<double>& eigenvalues);

}  // namespace gdirac
