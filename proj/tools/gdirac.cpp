// gdirac: command-line front end for the graph Dirac toolkit.

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdirac/discrete.hpp"
#include "gdirac/form.hpp"
#include "gdirac/io.hpp"
#include "gdirac/model.hpp"
#include "gdirac/spectral.hpp"

using namespace gdirac;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Loaded {
  GraphDocument doc;
  ConditionMatrices cm;
};

Loaded load(const std::string& path, bool builtin) {
  if (builtin) {
    if (!path.empty()) throw ValidationError("give either a graph file or --builtin, not both");
    return {builtin_model(), model_condition_matrices(0.0, 1.0)};
  }
  if (path.empty()) throw ValidationError("a graph file (or --builtin) is required");
  auto doc = load_graph(path);
  auto cm = assemble_AB(doc.graph, doc.params);
  return {std::move(doc), std::move(cm)};
}

void emit(const std::optional<std::string>& out, const std::string& content) {
  if (out) {
    write_atomic(*out, content);
  } else {
    std::cout << content;
  }
}

double default_h(const MetricGraph& g) {
  double h = 1.0 / 100;
  for (const auto& e : g.edges()) {
    if (e.is_segment()) h = std::min(h, e.length / 8.0);
  }
  return h;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError("cannot parse number '" + item + "'");
    }
  }
  return out;
}

int run_check(const std::string& path, bool builtin, std::optional<double> h, double L) {
  const auto in = load(path, builtin);
  const auto& g = in.doc.graph;
  const auto rep = check_selfadjoint_conditions(in.cm);
  const auto op = discretize(g, in.doc.params, h.value_or(default_h(g)), L);
  const double herm = hermiticity_residual(op);
  const double sym = symmetry_residual(op);
  const auto M = trace_dimension(g);
  std::cout << "trace_dimension " << M << '\n'
            << "ab_hermitian_residual " << format_double(rep.hermitian_residual) << ' '
            << (rep.hermitian_compat ? "ok" : "FAIL") << '\n'
            << "rank " << rep.rank << '/' << M << ' ' << (rep.rank_full ? "ok" : "FAIL") << '\n'
            << "discrete_hermiticity " << format_double(herm) << '\n'
            << "symmetry_residual " << format_double(sym) << ' ' << (sym <= 1e-12 ? "ok" : "FAIL") << '\n';
  return rep.hermitian_compat && rep.rank_full && sym <= 1e-12 ? 0 : kExitNumeric;
}

int run_secular(const std::string& path, bool builtin, double zmin, double zmax, int samples, double imag,
                const std::string& function, const std::optional<std::string>& out) {
  const auto in = load(path, builtin);
  SecularKind kind = SecularKind::plain;
  if (function == "auto") {
    // The three-edge model is scanned through its reduced function f.
    const auto& q = in.doc.params;
    const bool model = q.mass == 0.5 && q.light_speed == 1.0 && trace_dimension(in.doc.graph) == 4 &&
                       same_row_space(in.cm, model_condition_matrices(0.0, 1.0));
    if (model) kind = SecularKind::model_f;
  } else if (function == "regularized") {
    kind = SecularKind::regularized;
  } else if (function == "model-f") {
    kind = SecularKind::model_f;
  } else if (function != "secular") {
    throw ValidationError("unknown function '" + function + "'");
  }
  if (!(zmax > zmin)) throw ValidationError("empty z window");
  const auto rows = secular_scan(in.doc.graph, in.cm, in.doc.params, zmin, zmax, samples, imag, kind);
  emit(out, secular_csv(rows));
  return 0;
}

int run_report(const std::string& path, bool builtin, int samples, int j_max, const std::optional<std::string>& out) {
  const auto in = load(path, builtin);
  const auto rep = spectral_report(in.doc.graph, in.cm, in.doc.params, samples, j_max);
  emit(out, to_json(rep, in.doc.graph) + "\n");
  return rep.scan.roots.empty() ? 0 : kExitNumeric;
}

int run_eigs(const std::string& path, bool builtin, std::optional<double> h, double L, double emin, double emax,
             const std::optional<std::string>& out) {
  const auto in = load(path, builtin);
  const auto op = discretize(in.doc.graph, in.doc.params, h.value_or(default_h(in.doc.graph)), L);
  const auto sys = eigs_window(op, emin, emax);
  emit(out, eigenvalue_csv(sys.eigenvalues));
  return 0;
}

int run_thresholds(const std::string& path, bool builtin, const std::optional<std::string>& out) {
  const auto in = load(path, builtin);
  const auto& g = in.doc.graph;
  const auto& p = in.doc.params;
  ordered_json j;
  ordered_json modes = ordered_json::array();
  bool all_ok = true;
  for (const auto& m : threshold_modes(g, p)) {
    const bool ok = m.eigen_residual <= 1e-12 && m.condition_residual <= 1e-12;
    all_ok = all_ok && ok;
    modes.push_back({{"lambda", m.lambda},
                     {"vertex", g.vertices()[m.vertex]},
                     {"edges", m.edges},
                     {"eigen_residual", m.eigen_residual},
                     {"condition_residual", m.condition_residual},
                     {"certified", ok}});
  }
  j["constructed"] = modes;
  ordered_json kernel = ordered_json::array();
  for (double lambda : {p.threshold(), -p.threshold()}) {
    const auto basis = threshold_eigenspace(g, in.cm, p, lambda);
    double worst_eig = 0.0, worst_cond = 0.0;
    for (const auto& psi : basis) {
      worst_eig = std::max(worst_eig, eigen_residual(g, psi, lambda, p));
      worst_cond = std::max(worst_cond, condition_residual(in.cm, trace_vectors(g, psi, p)));
    }
    kernel.push_back({{"lambda", lambda},
                      {"dimension", basis.size()},
                      {"eigen_residual", worst_eig},
                      {"condition_residual", worst_cond}});
  }
  j["eigenspace"] = kernel;
  emit(out, j.dump(2) + "\n");
  return all_ok ? 0 : kExitNumeric;
}

int run_form_norm(const std::string& path, double theta, const std::string& weights, const std::string& xs,
                  std::optional<double> h, const std::optional<std::string>& out) {
  std::optional<MultiplierSurrogate> s;
  Eigen::VectorXcd x;
  if (!path.empty()) {
    const auto doc = load_graph(path);
    const auto op = discretize(doc.graph, doc.params, h.value_or(default_h(doc.graph)), 0.0);
    if (op.size() > 1200) throw ValidationError("operator too large for a full decomposition; increase --h");
    const double bound = spectral_bound(op) + 1.0;
    const auto sys = eigs_window(op, -bound, bound, true);
    // Constant psi1 = 1, psi2 = 0, expressed in the symmetrised variables.
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(op.size());
    for (Eigen::Index i = 0; i < op.size(); ++i) {
      if (op.dofs[static_cast<std::size_t>(i)].component == 1) y(i) = std::sqrt(op.weights(i));
    }
    s = surrogate_from(sys);
    x = eigen_coefficients(sys, y);
  } else {
    auto w = parse_list(weights);
    s = MultiplierSurrogate::from_weights(w);
    auto xv = xs.empty() ? std::vector<double>(w.size(), 1.0) : parse_list(xs);
    if (xv.size() != w.size()) throw ValidationError("--x and --weights lengths differ");
    x = Eigen::Map<Eigen::VectorXd>(xv.data(), static_cast<Eigen::Index>(xv.size())).cast<cplx>();
  }
  const double in = interpolation_norm(*s, x, theta);
  const double pw = power_norm(*s, x, theta);
  ordered_json j;
  j["theta"] = theta;
  j["interpolation_norm"] = in;
  j["power_norm"] = pw;
  j["ratio"] = in / pw;
  j["expected_ratio"] = interpolation_constant(theta);
  emit(out, j.dump(2) + "\n");
  return 0;
}

int run_model_star(double a, double b, const std::optional<std::string>& out) {
  emit(out, to_json(builtin_model(a, b)) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac operators with Kirchhoff-type vertex conditions on metric graphs"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  std::string graph;
  bool builtin = false;
  std::optional<std::string> out;
  std::optional<double> h;
  double L = 0.0;

  auto* check = app.add_subcommand("check", "self-adjointness diagnostics");
  check->add_option("graph", graph, "graph document");
  check->add_flag("--builtin", builtin, "use the built-in three-edge model");
  check->add_option("--h", h, "grid spacing");
  check->add_option("--L", L, "half-line truncation length");

  double zmin = -0.5, zmax = 0.5, imag = 0.0;
  int samples = 2001;
  std::string function = "auto";
  auto* sec = app.add_subcommand("secular", "scan the secular function, CSV output");
  sec->add_option("graph", graph, "graph document");
  sec->add_flag("--builtin", builtin, "use the built-in three-edge model");
  sec->add_option("--zmin", zmin, "left end of the scan");
  sec->add_option("--zmax", zmax, "right end of the scan");
  sec->add_option("--imag", imag, "imaginary part of every sample");
  sec->add_option("--samples", samples, "number of samples")->check(CLI::Range(2, 100000000));
  sec->add_option("--function", function, "auto | secular | regularized | model-f");
  sec->add_option("--out", out, "output CSV path");

  int j_max = 3;
  auto* rep = app.add_subcommand("report", "spectral report, JSON output");
  rep->add_option("graph", graph, "graph document");
  rep->add_flag("--builtin", builtin, "use the built-in three-edge model");
  rep->add_option("--samples", samples, "gap scan samples")->check(CLI::Range(100, 100000000));
  rep->add_option("--jmax", j_max, "segment modes per sign")->check(CLI::Range(0, 1000));
  rep->add_option("--out", out, "output JSON path");

  double emin = -2.0, emax = 2.0;
  auto* eig = app.add_subcommand("eigs", "discrete eigenvalues in a window, CSV output");
  eig->add_option("graph", graph, "graph document");
  eig->add_flag("--builtin", builtin, "use the built-in three-edge model");
  eig->add_option("--h", h, "grid spacing");
  eig->add_option("--L", L, "half-line truncation length");
  eig->add_option("--emin", emin, "window start");
  eig->add_option("--emax", emax, "window end");
  eig->add_option("--out", out, "output CSV path");

  auto* thr = app.add_subcommand("thresholds", "threshold modes at +-mc^2, JSON output");
  thr->add_option("graph", graph, "graph document");
  thr->add_flag("--builtin", builtin, "use the built-in three-edge model");
  thr->add_option("--out", out, "output JSON path");

  double theta = 0.5;
  std::string weights = "4", xs;
  auto* form = app.add_subcommand("form-norm", "interpolation vs power norm, JSON output");
  form->add_option("graph", graph, "graph document (compact, small)");
  form->add_option("--theta", theta, "interpolation order in (0, 1)");
  form->add_option("--weights", weights, "comma-separated A_i >= 1");
  form->add_option("--x", xs, "comma-separated vector entries");
  form->add_option("--h", h, "grid spacing");
  form->add_option("--out", out, "output JSON path");

  double a = 0.0, b = 1.0;
  auto* model = app.add_subcommand("model-star", "write the built-in model graph document");
  model->add_option("--a", a, "endpoint coefficient a");
  model->add_option("--b", b, "endpoint coefficient b");
  model->add_option("--out", out, "output JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*check) return run_check(graph, builtin, h, L);
    if (*sec) return run_secular(graph, builtin, zmin, zmax, samples, imag, function, out);
    if (*rep) return run_report(graph, builtin, samples, j_max, out);
    if (*eig) return run_eigs(graph, builtin, h, L, emin, emax, out);
    if (*thr) return run_thresholds(graph, builtin, out);
    if (*form) return run_form_norm(graph, theta, weights, xs, h, out);
    if (*model) return run_model_star(a, b, out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
