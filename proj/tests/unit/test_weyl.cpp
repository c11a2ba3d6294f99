#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "gdirac/model.hpp"
#include "gdirac/weyl.hpp"
#include "../oracles.hpp"

using namespace gdirac;

TEST_CASE("branch: Im k > 0 off the cuts, k > 0 on the right ray") {
  const PhysicalParams p{0.5, 1.0};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const cplx z{u(rng), u(rng)};
    if (std::abs(z.imag()) < 1e-3) continue;
    CHECK(branch_eval(z, p).k.imag() > 0.0);
  }
  const auto right = branch_eval(2.0, p);
  CHECK(right.on_cut);
  CHECK(right.k.real() == doctest::Approx(std::sqrt(4.0 - 0.25)));
  CHECK(std::abs(right.k.imag()) == 0.0);
  CHECK(branch_eval(0.0, p).k.imag() == doctest::Approx(0.5));
  CHECK(branch_eval(-0.5, p).k1_infinite);
}

TEST_CASE("Weyl function is Herglotz and conjugation-symmetric") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.01, 2.0);
  for (const char* f : {"model_star.json", "lens.json", "compact_star.json", "corpus/random_2.json"}) {
    CAPTURE(f);
    const auto doc = fixtures::load(f);
    for (int i = 0; i < 25; ++i) {
      const cplx z{ux(rng), uy(rng)};
      const MatrixC M = assemble_M(doc.graph, doc.params, z);
      const MatrixC im = (M - M.adjoint()) / cplx(0.0, 2.0);
      CHECK(Eigen::SelfAdjointEigenSolver<MatrixC>(im).eigenvalues().minCoeff() >= -1e-10);
      const MatrixC Mc = assemble_M(doc.graph, doc.params, std::conj(z));
      CHECK((Mc - M.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + M.cwiseAbs().maxCoeff()));
      CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + M.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("model secular values") {
  const auto doc = builtin_model();
  const auto cm = model_condition_matrices(0.0, 1.0);
  // Reference matrices evaluated in extended precision.
  CHECK(secular(doc.graph, cm, doc.params, 0.0).real() == doctest::Approx(3.42086100359).epsilon(1e-10));
  CHECK(secular(doc.graph, cm, doc.params, 0.2).real() == doctest::Approx(3.30191295612).epsilon(1e-10));
  CHECK(secular(doc.graph, cm, doc.params, 0.4).real() == doctest::Approx(2.81355595538).epsilon(1e-10));
  CHECK(model_f(0.0).real() == doctest::Approx(oracle::kModelF0).epsilon(1e-13));
  CHECK(model_f(0.5).real() == doctest::Approx(oracle::kModelFEdge).epsilon(1e-12));
  CHECK(model_f(-0.5).real() == doctest::Approx(oracle::kModelFEdge).epsilon(1e-12));
  CHECK(model_f(oracle::kModelFArgmax).real() == doctest::Approx(oracle::kModelFMax).epsilon(1e-12));
  for (double z : {-0.4, -0.1, 0.0, 0.3}) {
    CHECK(std::abs(model_f(z) - model_f_raw(z)) <= 1e-12);
    CHECK(std::abs(model_f(z).imag()) == 0.0);
  }
  // Off the gap the raw expression keeps the reference real part; its imaginary
  // part is -(16/9) sin(w) sec^3(w/2), not the reference trigonometric form.
  for (double z : {0.7, 2.5}) {
    const double w = std::sqrt(4 * z * z - 1);
    const cplx raw = model_f_raw(z);
    CHECK(raw.real() == doctest::Approx(model_f(z).real()).epsilon(1e-12));
    CHECK(raw.imag() == doctest::Approx(-16.0 / 9.0 * std::sin(w) / std::pow(std::cos(w / 2), 3)).epsilon(1e-12));
  }
  // Reference out-of-gap forms.
  for (double z : {0.7, 1.2, 2.5}) {
    const double w = std::sqrt(4 * z * z - 1);
    const cplx f = model_f(z);
    CHECK(f.real() == doctest::Approx(16.0 / 9.0 / std::pow(std::cos(w / 2), 4)));
    CHECK(f.imag() == doctest::Approx(-8.0 / 9.0 * std::sin(2 * w) * std::cos(w)));
  }
}

TEST_CASE("regularized secular removes the segment poles") {
  const auto doc = fixtures::load("compact_star.json");
  const auto cm = assemble_AB(doc.graph, doc.params);
  for (cplx z : {cplx(0.3, 0.2), cplx(2.0, 0.1), cplx(-1.5, 0.0)}) {
    const auto k = branch_eval(z, doc.params).k;
    cplx prod = 1.0;
    for (const auto& e : doc.graph.edges()) prod *= std::cos(e.length * k);
    const cplx s = secular(doc.graph, cm, doc.params, z) * prod;
    CHECK(std::abs(secular_regularized(doc.graph, cm, doc.params, z) - s) <= 1e-10 * (1.0 + std::abs(s)));
  }
  // cos(k) = 0 on the unit segments.
  const double pole = std::sqrt(0.25 + std::pow(std::acos(-1.0) / 2.0, 2));
  CHECK_THROWS_AS(secular(doc.graph, cm, doc.params, pole), PoleError);
  CHECK(std::isfinite(std::abs(secular_regularized(doc.graph, cm, doc.params, pole))));
  const auto ev = evaluate_weyl(doc.graph, cm, doc.params, pole);
  CHECK(ev.pole_flag);
  REQUIRE(ev.pole_edge);
  CHECK(*ev.pole_edge == "s1");
}

TEST_CASE("secular scan flags poles and keeps every row") {
  const auto doc = fixtures::load("compact_star.json");
  const auto cm = assemble_AB(doc.graph, doc.params);
  const double pole = std::sqrt(0.25 + std::pow(std::acos(-1.0) / 2.0, 2));
  const auto rows = secular_scan(doc.graph, cm, doc.params, pole - 1.0, pole + 1.0, 3);
  REQUIRE(rows.size() == 3);
  CHECK_FALSE(rows[0].pole);
  CHECK(rows[1].pole);
  CHECK_FALSE(rows[2].pole);
}

TEST_CASE("Kirchhoff star secular zeros match the Laplacian oracle") {
  // On a compact star the squared Dirac eigenvalues are the Kirchhoff ones.
  const auto doc = fixtures::load("compact_star.json");
  const auto cm = assemble_AB(doc.graph, doc.params);
  const auto lap = oracle::star_neumann({1.0, 1.0, 2.0}, 4);
  for (std::size_t i = 1; i < lap.size(); ++i) {
    const double lambda = std::sqrt(lap[i] + 0.25);
    CHECK(kernel_gap(doc.graph, cm, doc.params, lambda) <= 1e-8);
    CHECK(kernel_gap(doc.graph, cm, doc.params, lambda + 0.05) > 1e-4);
  }
}
