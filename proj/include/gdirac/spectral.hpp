#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gdirac/weyl.hpp"

namespace gdirac {

/// (-inf, -mc^2] and [mc^2, inf).
struct EssentialSpectrum {
  double negative_edge = 0.0;  // -mc^2
  double positive_edge = 0.0;  // +mc^2
};

EssentialSpectrum essential_spectrum(const PhysicalParams& p);

/// Decoupled segment (psi1(0) = 0, psi2(l) = 0).
struct SegmentSpectrum {
  std::vector<double> positive;  // sqrt(c^2 pi^2 (j + 1/2)^2 / l^2 + m^2 c^4), j = 0..j_max
  std::vector<double> negative;
  std::vector<double> shooting_positive;
  std::vector<double> shooting_negative;
  double max_shooting_deviation = 0.0;
  std::vector<double> mass_scaled_variant;  // sqrt(2 m c^2 pi^2 (j + 1/2)^2 / l^2 + m^2 c^4)
  bool mass_scaled_variant_matches = false;
};

SegmentSpectrum segment_spectrum(double length, const PhysicalParams& p, int j_max);

/// Roots in (lo, hi) of psi2(l) for the solution of D psi = lambda psi with
/// psi(0) = (0, 1), via the transfer matrix exp(l T(lambda)). Requires
/// |lambda| > mc^2 on the whole interval.
std::vector<double> shooting_roots(double length, const PhysicalParams& p, double lo, double hi,
                                   int samples = 400);

struct RootCertificate {
  bool certified = false;
  int winding = 0;
  cplx root{};
  double residual = 0.0;  // |s(root)|
};

/// Argument-principle count of zeros of the pole-free secular function inside
/// |z - z0| < radius, then complex Newton to |s| <= 1e-12. Throws
/// NumericError("contour crosses cut") if the disk meets an essential ray of a
/// graph with half-lines, and NumericError if the winding number does not
/// settle or Newton fails.
RootCertificate refine_root(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p, cplx z0,
                            double radius);

struct GapScan {
  std::vector<double> z;
  std::vector<double> abs_secular;
  std::vector<std::pair<double, double>> minima;      // (z, |s|)
  std::vector<std::pair<double, double>> candidates;  // minima with |s| <= 1e-6 max |s|
  std::vector<RootCertificate> roots;                 // certified interior roots
  double min_abs = 0.0;
  double argmin = 0.0;
};

/// |secular| on n_samples points of [-mc^2 + eps, mc^2 - eps], eps = 1e-4 mc^2.
GapScan gap_scan(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p, int n_samples = 2001);

struct ThresholdMode {
  double lambda = 0.0;
  std::size_t vertex = 0;
  std::vector<std::string> edges;
  ClosedFormSpinor psi;
  double eigen_residual = 0.0;
  double condition_residual = 0.0;  // |A Gamma0 psi - B Gamma1 psi|
};

/// Linear/constant spinors on pairs of terminal segments sharing a vertex:
/// at +mc^2, psi2 = +-A and psi1 = (2 i mc^2 / c) psi2 (distance from the
/// shared vertex); at -mc^2, psi1 = 0 and psi2 = +-F; the two edges carry
/// opposite amplitudes. One mode per extra terminal edge and sign. Residuals
/// are measured, not assumed.
std::vector<ThresholdMode> threshold_modes(const MetricGraph& g, const PhysicalParams& p);

/// Kernel of the coupled problem at lambda = +-mc^2 (no half-line solution
/// is square integrable there). Empty when lambda is not an eigenvalue.
std::vector<ClosedFormSpinor> threshold_eigenspace(const MetricGraph& g, const ConditionMatrices& cm,
                                                   const PhysicalParams& p, double lambda);

struct GapTheoremCheck {
  bool pass = false;
  std::size_t interior_roots = 0;
  double secular_min = 0.0;
  double discrete_min_abs = 0.0;
  double tolerance = 0.0;  // c h
  double h = 0.0;
};

/// Passes when gap_scan certifies no interior root and every discrete
/// eigenvalue has |lambda| >= mc^2 - c h.
GapTheoremCheck gap_theorem_check(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p,
                                  double h = 1.0 / 400, double L = 0.0, int n_samples = 2001);

struct SpectralReport {
  std::optional<EssentialSpectrum> essential;  // only with half-lines
  GapScan scan;
  std::vector<ThresholdMode> constructed_threshold_modes;
  std::size_t eigenspace_plus = 0;   // dim ker at +mc^2
  std::size_t eigenspace_minus = 0;  // dim ker at -mc^2
  std::vector<std::pair<std::string, SegmentSpectrum>> segment_spectra;
};

SpectralReport spectral_report(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p,
                               int n_samples = 2001, int j_max = 3);

/// JSON text; infinite ray ends are the strings "-inf" and "inf".
std::string to_json(const SpectralReport& r, const MetricGraph& g);

}  // namespace gdirac
