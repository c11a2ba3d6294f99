// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gdirac/discrete.hpp"
#include "gdirac/form.hpp"
#include "gdirac/model.hpp"
#include "gdirac/spectral.hpp"
#include "oracles.hpp"

using namespace gdirac;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = GDIRAC_FIXTURES;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Case {
  std::string name;
  GraphDocument doc;
  ConditionMatrices cm;
};

Case from_file(const std::string& rel) {
  auto doc = load_graph((kFixtures / rel).string());
  auto cm = assemble_AB(doc.graph, doc.params);
  return {rel, std::move(doc), std::move(cm)};
}

Case model_case() { return {"builtin", builtin_model(), model_condition_matrices(0.0, 1.0)}; }

std::vector<Case> corpus() {
  std::vector<Case> out;
  for (int i = 0; i < 5; ++i) out.push_back(from_file("corpus/random_" + std::to_string(i) + ".json"));
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Local minima of a sampled function, interior ones refined by golden section.
std::vector<double> minima(const std::function<double(double)>& f, double lo, double hi, int n) {
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = lo + (hi - lo) * i / (n - 1);
    y[i] = f(x[i]);
  }
  std::vector<double> out;
  if (y[0] < y[1]) out.push_back(x[0]);
  for (int i = 1; i + 1 < n; ++i) {
    if (y[i] <= y[i - 1] && y[i] < y[i + 1]) out.push_back(oracle::golden_min(f, x[i - 1], x[i + 1]));
  }
  if (y[n - 1] < y[n - 2]) out.push_back(x[n - 1]);
  return out;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double f0 = model_f(0.0).real();
  o.detail << "f(0)=" << f0;
  o.require(std::abs(f0 - 2.5566680) <= 1e-6, "f(0) = 2.5566680 +- 1e-6 (closed form gives 2.5566729)");
  const double fp = model_f(0.5).real(), fm = model_f(-0.5).real();
  o.detail << " f(+-1/2)=" << fp << "," << fm;
  o.require(std::abs(fp - 16.0 / 9) <= 1e-9 && std::abs(fm - 16.0 / 9) <= 1e-9, "f(+-1/2) = 16/9");
  int nonpositive = 0;
  for (int i = 0; i < 200; ++i) {
    const double z = 0.55 + (3.0 - 0.55) * i / 199;
    if (!(model_f(z).real() > 0.0)) ++nonpositive;
  }
  o.detail << " nonpositive_out_of_gap=" << nonpositive;
  o.require(nonpositive == 0, "Re f > 0 on [0.55, 3]");

  const auto m = model_case();
  const auto scan = gap_scan(m.doc.graph, m.cm, m.doc.params);
  o.detail << " gap_roots=" << scan.roots.size() << " candidates=" << scan.candidates.size();
  o.require(scan.roots.empty() && scan.candidates.empty(), "no secular zeros in the gap");

  auto abs_s = [&](double z) { return std::abs(secular(m.doc.graph, m.cm, m.doc.params, z)); };
  auto abs_f = [](double z) { return std::abs(model_f(z)); };
  // The half-line blocks are singular at z = -mc^2; stay a hair inside.
  const double edge = 0.5 - 1e-9;
  const auto ms = minima(abs_s, -edge, edge, 2001);
  const auto mf = minima(abs_f, -edge, edge, 2001);
  double worst = ms.size() == mf.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(ms.size(), mf.size()); ++i) worst = std::max(worst, std::abs(ms[i] - mf[i]));
  o.detail << " minima=" << ms.size() << "/" << mf.size() << " max_shift=" << worst;
  o.require(worst <= 1e-8, "minima locations of |s| and |f| agree");
  const double t = seconds_since(t0);
  o.detail << " time=" << t << "s";
  o.require(t < 5.0, "runtime < 5 s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  auto cases = corpus();
  cases.push_back(model_case());
  cases.push_back(from_file("threshold_star.json"));
  cases.push_back(from_file("triple_terminal.json"));
  const double h = 1.0 / 400;
  for (const auto& c : cases) {
    const auto& p = c.doc.params;
    o.require(p.light_speed * h < 0.02 * p.threshold(), c.name + ": c h < 0.02 mc^2");
    const auto r = gap_theorem_check(c.doc.graph, c.cm, p, h);
    o.detail << " " << c.name << ":roots=" << r.interior_roots << ",min|l|=" << r.discrete_min_abs;
    o.require(r.pass, c.name);
  }
  const double t = seconds_since(t0);
  o.detail << " time=" << t << "s";
  o.require(t < 120.0, "runtime < 2 min");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto c = from_file("threshold_star.json");
  const auto& p = c.doc.params;
  const auto modes = threshold_modes(c.doc.graph, p);
  o.require(!modes.empty(), "closed-form modes constructed");
  double eig = 0.0, cond = 0.0;
  for (const auto& m : modes) {
    eig = std::max(eig, m.eigen_residual);
    cond = std::max(cond, m.condition_residual);
  }
  o.detail << "modes=" << modes.size() << " eigen_residual=" << eig << " condition_residual=" << cond;
  o.require(eig <= 1e-12, "eigen residual");
  o.require(cond <= 1e-12, "vertex-condition residual (the constructed spinors violate the balance row)");

  const double target = p.threshold();
  std::vector<double> errors;
  for (double h : {1.0 / 100, 1.0 / 200, 1.0 / 400}) {
    const auto op = discretize(c.doc.graph, p, h);
    const auto sys = eigs_window(op, 0.45, 0.55);
    double err = INFINITY;
    for (double l : sys.eigenvalues) err = std::min(err, std::abs(l - target));
    errors.push_back(err);
  }
  o.detail << std::setprecision(12) << " window_errors=" << errors[0] << "," << errors[1] << "," << errors[2];
  o.require(errors[2] <= 0.02 * target, "eigenvalue within 2% of mc^2 at h=1/400");
  o.require(errors[1] < errors[0] && errors[2] < errors[1], "error decreasing under refinement");
  return o;
}

MetricGraph decoupled_segment(double length) {
  return MetricGraph({"a", "b"}, {Edge{"s", EdgeKind::segment, length, 0, 1}}, {{0, EndpointCondition{1.0, 0.0}}});
}

Outcome criterion4() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> um(0.2, 2.0), uc(0.5, 2.0), ul(0.5, 2.0);
  double shoot = 0.0, disc = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const PhysicalParams p{um(rng), uc(rng)};
    const double l = ul(rng);
    const auto s = segment_spectrum(l, p, 5);
    for (int j = 0; j <= 5; ++j) {
      const double pos = oracle::segment_dirac(l, p.mass, p.light_speed, j, +1);
      const double neg = oracle::segment_dirac(l, p.mass, p.light_speed, j, -1);
      shoot = std::max({shoot, std::abs(s.positive[j] - pos), std::abs(s.negative[j] - neg),
                        std::abs(s.shooting_positive[j] - pos), std::abs(s.shooting_negative[j] - neg)});
    }
    const auto g = decoupled_segment(l);
    const auto op = discretize(g, p, 1.0 / 400);
    for (int j = 0; j <= 5; ++j) {
      for (int sign : {+1, -1}) {
        const double target = oracle::segment_dirac(l, p.mass, p.light_speed, j, sign);
        const double lo = std::min(0.98 * target, 1.02 * target), hi = std::max(0.98 * target, 1.02 * target);
        double err = INFINITY;
        for (double v : eigs_window(op, lo, hi).eigenvalues) err = std::min(err, std::abs(v / target - 1.0));
        disc = std::max(disc, err);
      }
    }
  }
  o.detail << "max_shooting_deviation=" << shoot << " max_discrete_relative=" << disc;
  o.require(shoot <= 1e-10, "dispersion vs shooting to 1e-10");
  o.require(disc <= 0.01, "discrete to 1%");
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto m = model_case();
  const auto& p = m.doc.params;
  const double a = p.threshold();
  const double dk = (std::sqrt(std::pow(a + 1.0, 2) - a * a) - 0.0) / p.light_speed;
  const double h = 1.0 / 64;
  for (double L : {20.0, 40.0, 80.0}) {
    const auto op = discretize(m.doc.graph, p, h, L);
    const auto n = count_in(op, a, a + 1.0);
    const double weyl = (2.0 * L + m.doc.graph.total_segment_length()) * dk / std::numbers::pi;
    const double rel = std::abs(static_cast<double>(n) / weyl - 1.0);
    const double gap = min_abs_eigenvalue(op);
    o.detail << " L=" << L << ":count=" << n << ",weyl=" << weyl << ",min|l|=" << gap;
    o.require(rel <= 0.05, "count within 5% of Weyl at L=" + std::to_string(L));
    o.require(gap >= a - 0.02, "no eigenvalue in (-mc^2+0.02, mc^2-0.02) at L=" + std::to_string(L));
  }
  o.detail << " (h=1/64)";
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.01, 3.0);
  double sym = 0.0, herm = 0.0, her = INFINITY;
  bool ranks = true;
  for (const auto& c : corpus()) {
    const auto& g = c.doc.graph;
    const auto& p = c.doc.params;
    double h = 1.0 / 100;
    for (const auto& e : g.edges()) {
      if (e.is_segment()) h = std::min(h, e.length / 8.0);
    }
    sym = std::max(sym, symmetry_residual(g, p, h));
    const auto rep = check_selfadjoint_conditions(c.cm);
    herm = std::max(herm, rep.hermitian_residual);
    ranks = ranks && rep.rank == trace_dimension(g);
    for (int i = 0; i < 50; ++i) {
      const cplx z{ux(rng), uy(rng)};
      const MatrixC M = assemble_M(g, p, z);
      const MatrixC im = (M - M.adjoint()) / cplx(0.0, 2.0);
      Eigen::SelfAdjointEigenSolver<MatrixC> es(im);
      her = std::min(her, es.eigenvalues().minCoeff());
    }
  }
  o.detail << "symmetry_residual=" << sym << " ab_residual=" << herm << " ranks_full=" << ranks
           << " min_herglotz_eig=" << her;
  o.require(sym <= 1e-12, "symmetry residual");
  o.require(herm <= 1e-14, "AB* = BA*");
  o.require(ranks, "rank [A|B] = M");
  o.require(her >= -1e-10, "Herglotz");
  return o;
}

Outcome criterion7() {
  Outcome o;
  struct Item {
    std::string file;
    std::vector<double> expected;
  };
  const std::vector<Item> items{{"interval.json", oracle::interval_neumann(1.0, 5)},
                                {"compact_star.json", oracle::star_neumann({1.0, 1.0, 2.0}, 5)}};
  for (const auto& it : items) {
    const auto c = from_file(it.file);
    const auto r = square_spectrum_check(c.doc.graph, c.doc.params, 1.0 / 400, 5);
    double worst = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      const double got = i < r.dirac_mapped.size() ? r.dirac_mapped[i] : INFINITY;
      worst = std::max(worst, std::abs(got - it.expected[i]) / std::max(1.0, it.expected[i]));
    }
    o.detail << " " << it.file << ":max_rel=" << worst;
    o.require(worst <= 0.01, it.file);
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> udim(1, 8);
  std::uniform_real_distribution<double> ulog(0.0, 4.0), ut(-4.0, 4.0), ux(-1.0, 1.0);
  double kdiff = 0.0;
  bool monotone = true, concave = true;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = udim(rng);
    std::vector<double> A(n);
    Eigen::VectorXcd x(n);
    for (int i = 0; i < n; ++i) {
      A[i] = std::pow(10.0, ulog(rng));
      x(i) = cplx(ux(rng), ux(rng));
    }
    const auto s = MultiplierSurrogate::from_weights(A);
    const double t = std::pow(10.0, ut(rng));
    kdiff = std::max(kdiff, std::abs(k_functional_direct(s, x, t).value - k_functional_closed(s, x, t)));
    double prev = 0.0, prev2 = 0.0;
    for (int i = 1; i <= 40; ++i) {
      // Uniform grid in t for the concavity test.
      const double tt = 0.25 * i;
      const double k = k_functional_closed(s, x, tt);
      if (i > 1 && k < prev - 1e-14) monotone = false;
      if (i > 2 && k - 2.0 * prev + prev2 > 1e-12) concave = false;
      prev2 = prev;
      prev = k;
    }
  }
  o.detail << "max|K_direct-K_closed|=" << kdiff << " monotone=" << monotone << " concave=" << concave;
  o.require(kdiff <= 1e-12, "K-functional forms agree");
  o.require(monotone && concave, "K monotone and concave in t");
  std::mt19937_64 rng2(88);
  double worst = 0.0;
  for (double theta : {0.25, 0.5, 0.75}) {
    std::vector<double> A(6);
    Eigen::VectorXcd x(6);
    for (int i = 0; i < 6; ++i) {
      A[i] = std::pow(10.0, ulog(rng2));
      x(i) = cplx(ux(rng2), ux(rng2));
    }
    const auto s = MultiplierSurrogate::from_weights(A);
    const double ratio = interpolation_norm(s, x, theta) / power_norm(s, x, theta);
    worst = std::max(worst, std::abs(ratio - std::numbers::pi / std::sin(std::numbers::pi * theta)));
  }
  o.detail << " max_ratio_error=" << worst;
  o.require(worst <= 1e-6, "interpolation / power = pi / sin(pi theta)");
  const double tt = seconds_since(t0);
  o.detail << " time=" << tt << "s";
  o.require(tt < 30.0, "runtime < 30 s");
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion9() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("gdirac_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string exe = GDIRAC_CLI;
  const std::string fx = kFixtures.string();
  const std::vector<std::pair<std::string, std::string>> runs{
      {"secular", "secular " + fx + "/model_star.json --zmin -0.5 --zmax 0.5 --samples 2001 --out"},
      {"secular_plain", "secular " + fx + "/corpus/random_0.json --function secular --zmin -2 --zmax 2 --samples 501 --out"},
      {"report", "report " + fx + "/corpus/random_1.json --out"},
      {"eigs", "eigs " + fx + "/compact_star.json --h 0.01 --emin -5 --emax 5 --out"},
      {"thresholds", "thresholds " + fx + "/lens.json --out"},
      {"form", "form-norm --theta 0.25 --weights 1,3,10,100 --out"},
      {"model", "model-star --out"},
  };
  std::size_t identical = 0;
  for (const auto& [name, args] : runs) {
    std::string first;
    bool same = true;
    for (const char* threads : {"1", "3"}) {
      ::setenv("GDIRAC_THREADS", threads, 1);
      const fs::path out = dir / (name + "_" + threads + ".out");
      const std::string cmd = "\"" + exe + "\" " + args + " \"" + out.string() + "\" > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      (void)rc;
      const auto text = slurp(out);
      if (text.empty()) same = false;
      if (first.empty()) first = text; else same = same && text == first;
    }
    if (same) ++identical;
    o.require(same, name);
  }
  ::unsetenv("GDIRAC_THREADS");
  fs::remove_all(dir);
  o.detail << "identical=" << identical << "/" << runs.size();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"model secular reproduction", criterion1}, {"gap exclusion", criterion2},
      {"threshold eigenvalues", criterion3},      {"segment spectra", criterion4},
      {"essential spectrum", criterion5},         {"self-adjointness surrogates", criterion6},
      {"squared spectrum vs Kirchhoff Laplacian", criterion7},
      {"form-domain identities", criterion8},     {"determinism", criterion9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << "): "
              << o.detail.str() << std::endl;
  }
  std::cout << failures << " of " << criteria.size() << " criteria failed" << std::endl;
  return failures == 0 ? 0 : 1;
}
