#include "gdirac/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gdirac {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw ValidationError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ValidationError("cannot move output into place at '" + path + "'");
  }
}

std::string secular_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream out;
  out << "z_re,z_im,s_re,s_im,s_abs,pole_flag\n";
  for (const auto& r : rows) {
    out << format_double(r.z.real()) << ',' << format_double(r.z.imag()) << ',';
    if (r.pole) {
      out << "inf,inf,inf,1\n";
    } else {
      out << format_double(r.value.real()) << ',' << format_double(r.value.imag()) << ','
          << format_double(std::abs(r.value)) << ",0\n";
    }
  }
  return out.str();
}

std::string eigenvalue_csv(const std::vector<double>& eigenvalues) {
  std::ostringstream out;
  out << "index,lambda\n";
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) out << i << ',' << format_double(eigenvalues[i]) << '\n';
  return out.str();
}

}  // namespace gdirac
