#include "gdirac/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "gdirac/discrete.hpp"
#include "gdirac/parallel.hpp"

namespace gdirac {

namespace {

using std::numbers::pi;

double psi2_at_end(double length, const PhysicalParams& p, double lambda) {
  const double c = p.light_speed;
  const double a = p.threshold();
  Eigen::Matrix2cd T;
  T << 0.0, kI * (lambda + a) / c, kI * (lambda - a) / c, 0.0;
  const Eigen::Matrix2cd P = (length * T).exp();
  // psi(0) = (0, 1): psi2(l) = P(1, 1), real for real lambda.
  return P(1, 1).real();
}

bool disk_meets_cut(cplx z0, double r, double a) {
  if (std::abs(z0.imag()) >= r) return false;
  const double w = std::sqrt(r * r - z0.imag() * z0.imag());
  return z0.real() + w >= a || z0.real() - w <= -a;
}

cplx central_difference(const std::function<cplx(cplx)>& f, cplx z, double step) {
  return (f(z + step) - f(z - step)) / (2.0 * step);
}

}  // namespace

EssentialSpectrum essential_spectrum(const PhysicalParams& p) {
  validate(p);
  return {-p.threshold(), p.threshold()};
}

std::vector<double> shooting_roots(double length, const PhysicalParams& p, double lo, double hi, int samples) {
  const double a = p.threshold();
  if (!(lo < hi)) throw ValidationError("shooting interval is empty");
  if (!(lo >= a || hi <= -a)) throw ValidationError("shooting interval must lie outside [-mc^2, mc^2]");
  std::vector<double> roots;
  double x0 = lo;
  double f0 = psi2_at_end(length, p, x0);
  for (int i = 1; i <= samples; ++i) {
    const double x1 = lo + (hi - lo) * i / samples;
    const double f1 = psi2_at_end(length, p, x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if (f0 * f1 < 0.0) {
      double l = x0, r = x1, fl = f0;
      for (int it = 0; it < 200 && r - l > 4e-16 * std::max(1.0, std::abs(l)); ++it) {
        const double m = 0.5 * (l + r);
        const double fm = psi2_at_end(length, p, m);
        if ((fm < 0.0) == (fl < 0.0)) {
          l = m;
          fl = fm;
        } else {
          r = m;
        }
      }
      roots.push_back(0.5 * (l + r));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

SegmentSpectrum segment_spectrum(double length, const PhysicalParams& p, int j_max) {
  validate(p);
  if (j_max < 0) throw ValidationError("j_max must be nonnegative");
  if (!(length > 0.0) || !std::isfinite(length)) throw ValidationError("segment length must be positive");
  const double c = p.light_speed;
  const double a = p.threshold();
  SegmentSpectrum s;
  for (int j = 0; j <= j_max; ++j) {
    const double q = pi * (j + 0.5) / length;
    const double lam = std::sqrt(c * c * q * q + a * a);
    s.positive.push_back(lam);
    s.negative.push_back(-lam);
    s.mass_scaled_variant.push_back(std::sqrt(2.0 * a * q * q + a * a));
  }
  // Shooting range: up to k l = pi (j_max + 1), one root per half period.
  const double top = std::sqrt(c * c * std::pow(pi * (j_max + 1) / length, 2) + a * a);
  const int samples = 200 * (j_max + 2);
  s.shooting_positive = shooting_roots(length, p, a * (1.0 + 1e-12), top, samples);
  for (double r : shooting_roots(length, p, -top, -a * (1.0 + 1e-12), samples)) s.shooting_negative.push_back(r);
  std::sort(s.shooting_negative.begin(), s.shooting_negative.end(), std::greater<>());
  if (s.shooting_positive.size() != s.positive.size() || s.shooting_negative.size() != s.negative.size()) {
    s.max_shooting_deviation = std::numeric_limits<double>::infinity();
  } else {
    for (std::size_t j = 0; j < s.positive.size(); ++j) {
      s.max_shooting_deviation = std::max({s.max_shooting_deviation, std::abs(s.positive[j] - s.shooting_positive[j]),
                                           std::abs(s.negative[j] - s.shooting_negative[j])});
    }
  }
  s.mass_scaled_variant_matches = s.shooting_positive.size() == s.mass_scaled_variant.size();
  for (std::size_t j = 0; s.mass_scaled_variant_matches && j < s.mass_scaled_variant.size(); ++j) {
    s.mass_scaled_variant_matches = std::abs(s.mass_scaled_variant[j] - s.shooting_positive[j]) <= 1e-8;
  }
  return s;
}

RootCertificate refine_root(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p, cplx z0,
                            double radius) {
  if (!(radius > 0.0)) throw ValidationError("radius must be positive");
  if (!g.is_compact() && disk_meets_cut(z0, radius, p.threshold())) throw NumericError("contour crosses cut");
  const std::function<cplx(cplx)> s = [&](cplx z) { return secular_regularized(g, cm, p, z); };
  const double step = 1e-6 * radius;

  RootCertificate cert;
  std::optional<double> settled;
  for (int n = 256; n <= 4096 && !settled; n *= 2) {
    std::vector<cplx> vals(static_cast<std::size_t>(n));
    std::vector<cplx> ders(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
      const cplx dir = std::polar(1.0, 2.0 * pi * static_cast<double>(j) / n);
      const cplx z = z0 + radius * dir;
      vals[j] = s(z);
      ders[j] = central_difference(s, z, step);
    });
    double scale = 0.0;
    for (const auto& v : vals) scale = std::max(scale, std::abs(v));
    cplx sum{};
    for (int j = 0; j < n; ++j) {
      const auto& v = vals[static_cast<std::size_t>(j)];
      if (std::abs(v) <= 1e-12 * scale) throw NumericError("contour touches a zero");
      sum += ders[static_cast<std::size_t>(j)] / v * radius * std::polar(1.0, 2.0 * pi * j / n);
    }
    const double N = (sum / static_cast<double>(n)).real();
    if (std::abs(N - std::round(N)) < 0.05) settled = N;
  }
  if (!settled) throw NumericError("winding number did not settle");
  cert.winding = static_cast<int>(std::lround(*settled));
  if (cert.winding <= 0) {
    cert.root = z0;
    cert.residual = std::abs(s(z0));
    return cert;
  }

  cplx z = z0;
  for (int it = 0; it < 100; ++it) {
    const cplx v = s(z);
    cert.residual = std::abs(v);
    if (cert.residual <= 1e-12) break;
    const cplx d = central_difference(s, z, 1e-7 * std::max(1.0, std::abs(z)));
    if (d == cplx{}) throw NumericError("Newton derivative vanished");
    const cplx dz = v / d;
    z -= dz;
    if (std::abs(z - z0) > radius) throw NumericError("Newton left the certification disk");
    if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) {
      cert.residual = std::abs(s(z));
      break;
    }
  }
  cert.root = z;
  cert.certified = cert.residual <= 1e-10;
  if (!cert.certified) throw NumericError("Newton did not reach the residual tolerance");
  return cert;
}

GapScan gap_scan(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p, int n_samples) {
  if (n_samples < 100) throw ValidationError("gap scan needs at least 100 samples");
  const double a = p.threshold();
  const double eps = 1e-4 * a;
  GapScan scan;
  const auto n = static_cast<std::size_t>(n_samples);
  scan.z.resize(n);
  scan.abs_secular.resize(n);
  const double lo = -a + eps;
  const double hi = a - eps;
  parallel_for(n, [&](std::size_t i) {
    const double z = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    scan.z[i] = z;
    scan.abs_secular[i] = std::abs(secular(g, cm, p, z));
  });
  const auto mx = *std::max_element(scan.abs_secular.begin(), scan.abs_secular.end());
  const auto it = std::min_element(scan.abs_secular.begin(), scan.abs_secular.end());
  scan.min_abs = *it;
  scan.argmin = scan.z[static_cast<std::size_t>(it - scan.abs_secular.begin())];
  for (std::size_t i = 0; i < n; ++i) {
    const double v = scan.abs_secular[i];
    const bool left = i == 0 || v <= scan.abs_secular[i - 1];
    const bool right = i + 1 == n || v <= scan.abs_secular[i + 1];
    if (!(left && right)) continue;
    scan.minima.emplace_back(scan.z[i], v);
    if (v <= 1e-6 * mx) scan.candidates.emplace_back(scan.z[i], v);
  }
  const double spacing = (hi - lo) / static_cast<double>(n - 1);
  for (const auto& [zc, v] : scan.candidates) {
    double r = 2.0 * spacing;
    if (!g.is_compact()) r = std::min(r, 0.5 * (a - std::abs(zc)));
    const auto cert = refine_root(g, cm, p, zc, r);
    if (cert.certified) scan.roots.push_back(cert);
  }
  return scan;
}

std::vector<ThresholdMode> threshold_modes(const MetricGraph& g, const PhysicalParams& p) {
  validate(p);
  const double a = p.threshold();
  const double c = p.light_speed;
  const auto cm = assemble_AB(g, p);
  std::vector<ThresholdMode> modes;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) < 2) continue;
    std::vector<Endpoint> terminal;
    for (const auto& end : g.incident(v)) {
      if (g.is_terminal_segment(end.edge)) terminal.push_back(end);
    }
    if (terminal.size() < 2) continue;
    for (double lambda : {a, -a}) {
      for (std::size_t k = 1; k < terminal.size(); ++k) {
        auto psi = ClosedFormSpinor::zero(g);
        const std::pair<Endpoint, double> pair[2] = {{terminal[0], 1.0}, {terminal[k], -1.0}};
        for (const auto& [end, amp] : pair) {
          const auto& edge = g.edge(end.edge);
          // s flips the local orientation so that the shared vertex sits at distance 0.
          const double s = end.end == EndKind::origin ? 1.0 : -1.0;
          const double x_inner = end.end == EndKind::origin ? 0.0 : edge.length;
          auto& es = psi.edges[end.edge];
          es.second = Component::constant(s * amp);
          if (lambda > 0) {
            const cplx slope = 2.0 * kI * a / c * s * amp;
            es.first = Linear{slope, -slope * x_inner};
          }
        }
        ThresholdMode m;
        m.lambda = lambda;
        m.vertex = v;
        m.edges = {g.edge(terminal[0].edge).id, g.edge(terminal[k].edge).id};
        m.eigen_residual = eigen_residual(g, psi, lambda, p);
        m.condition_residual = condition_residual(cm, trace_vectors(g, psi, p));
        m.psi = std::move(psi);
        modes.push_back(std::move(m));
      }
    }
  }
  return modes;
}

std::vector<ClosedFormSpinor> threshold_eigenspace(const MetricGraph& g, const ConditionMatrices& cm,
                                                   const PhysicalParams& p, double lambda) {
  if (std::abs(std::abs(lambda) - p.threshold()) > 1e-15 * p.threshold()) {
    throw ValidationError("threshold_eigenspace needs lambda = +-mc^2");
  }
  try {
    return eigenfunctions_from_kernel(g, cm, p, lambda);
  } catch (const NumericError&) {
    return {};
  }
}

GapTheoremCheck gap_theorem_check(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p, double h,
                                  double L, int n_samples) {
  GapTheoremCheck chk;
  const auto scan = gap_scan(g, cm, p, n_samples);
  chk.interior_roots = scan.roots.size();
  chk.secular_min = scan.min_abs;
  const auto op = discretize(g, p, h, L);
  chk.discrete_min_abs = min_abs_eigenvalue(op);
  chk.h = h;
  chk.tolerance = p.light_speed * h;
  chk.pass = chk.interior_roots == 0 && chk.discrete_min_abs >= p.threshold() - chk.tolerance;
  return chk;
}

SpectralReport spectral_report(const MetricGraph& g, const ConditionMatrices& cm, const PhysicalParams& p,
                               int n_samples, int j_max) {
  SpectralReport r;
  if (!g.is_compact()) r.essential = essential_spectrum(p);
  r.scan = gap_scan(g, cm, p, n_samples);
  r.constructed_threshold_modes = threshold_modes(g, p);
  r.eigenspace_plus = threshold_eigenspace(g, cm, p, p.threshold()).size();
  r.eigenspace_minus = threshold_eigenspace(g, cm, p, -p.threshold()).size();
  for (const auto& e : g.edges()) {
    if (e.is_segment()) r.segment_spectra.emplace_back(e.id, segment_spectrum(e.length, p, j_max));
  }
  return r;
}

std::string to_json(const SpectralReport& r, const MetricGraph& g) {
  using nlohmann::ordered_json;
  ordered_json j;
  if (r.essential) {
    j["essential"] = {{"neg", {"-inf", r.essential->negative_edge}}, {"pos", {r.essential->positive_edge, "inf"}}};
  } else {
    j["essential"] = nullptr;
  }
  ordered_json roots = ordered_json::array();
  for (const auto& c : r.scan.roots) {
    roots.push_back({{"re", c.root.real()}, {"im", c.root.imag()}, {"winding", c.winding}, {"residual", c.residual}});
  }
  j["gap_roots"] = roots;
  j["gap_scan"] = {{"samples", r.scan.z.size()},
                   {"min_abs_secular", r.scan.min_abs},
                   {"argmin", r.scan.argmin},
                   {"candidates", r.scan.candidates.size()}};
  ordered_json th = ordered_json::array();
  for (const auto& m : r.constructed_threshold_modes) {
    th.push_back({{"lambda", m.lambda},
                  {"vertex", g.vertices()[m.vertex]},
                  {"edges", m.edges},
                  {"eigen_residual", m.eigen_residual},
                  {"condition_residual", m.condition_residual}});
  }
  j["thresholds"] = th;
  j["threshold_eigenspace"] = {{"plus", r.eigenspace_plus}, {"minus", r.eigenspace_minus}};
  ordered_json seg = ordered_json::object();
  for (const auto& [id, s] : r.segment_spectra) {
    seg[id] = {{"positive", s.positive},
               {"negative", s.negative},
               {"max_shooting_deviation", s.max_shooting_deviation},
               {"mass_scaled_variant_matches", s.mass_scaled_variant_matches}};
  }
  j["segment_spectra"] = seg;
  return j.dump(2);
}

}  // namespace gdirac
