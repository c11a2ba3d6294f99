#include "gdirac/spinor.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace gdirac {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

cplx Component::operator()(double x) const {
  cplx sum{};
  for (const auto& t : terms_) {
    sum += std::visit(
        overloaded{
            [x](const Linear& l) { return l.slope * x + l.offset; },
            [x](const Trig& t) { return t.cos_coef * std::cos(t.wavenumber * x) + t.sin_coef * std::sin(t.wavenumber * x); },
            [x](const Exponential& e) { return e.coef * std::exp(kI * e.wavenumber * x); },
        },
        t);
  }
  return sum;
}

Component Component::derivative() const {
  Component out;
  for (const auto& t : terms_) {
    out.terms_.push_back(std::visit(
        overloaded{
            [](const Linear& l) -> Term { return Linear{{}, l.slope}; },
            [](const Trig& t) -> Term {
              return Trig{t.wavenumber, t.wavenumber * t.sin_coef, -t.wavenumber * t.cos_coef};
            },
            [](const Exponential& e) -> Term { return Exponential{e.wavenumber, kI * e.wavenumber * e.coef}; },
        },
        t));
  }
  return out;
}

Component operator+(Component lhs, const Component& rhs) {
  lhs.terms_.insert(lhs.terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  return lhs;
}

Component operator*(cplx s, Component c) {
  for (auto& t : c.terms_) {
    std::visit(overloaded{
                   [s](Linear& l) { l.slope *= s; l.offset *= s; },
                   [s](Trig& t) { t.cos_coef *= s; t.sin_coef *= s; },
                   [s](Exponential& e) { e.coef *= s; },
               },
               t);
  }
  return c;
}

ClosedFormSpinor operator+(const ClosedFormSpinor& a, const ClosedFormSpinor& b) {
  if (a.edges.size() != b.edges.size()) throw ValidationError("spinor edge counts differ");
  ClosedFormSpinor out = a;
  for (std::size_t e = 0; e < b.edges.size(); ++e) {
    out.edges[e].first = out.edges[e].first + b.edges[e].first;
    out.edges[e].second = out.edges[e].second + b.edges[e].second;
  }
  return out;
}

ClosedFormSpinor operator*(cplx s, const ClosedFormSpinor& a) {
  ClosedFormSpinor out = a;
  for (auto& es : out.edges) {
    es.first = s * es.first;
    es.second = s * es.second;
  }
  return out;
}

ClosedFormSpinor apply_dirac(const ClosedFormSpinor& psi, const PhysicalParams& p) {
  const double c = p.light_speed;
  const double mc2 = p.threshold();
  ClosedFormSpinor out;
  out.edges.reserve(psi.edges.size());
  for (const auto& es : psi.edges) {
    out.edges.push_back({(-kI * c) * es.second.derivative() + cplx(mc2) * es.first,
                         (-kI * c) * es.first.derivative() + cplx(-mc2) * es.second});
  }
  return out;
}

std::pair<cplx, cplx> endpoint_values(const MetricGraph& g, const ClosedFormSpinor& psi, Endpoint p) {
  const auto& es = psi.edges.at(p.edge);
  const double x = p.end == EndKind::origin ? 0.0 : g.edge(p.edge).length;
  return {es.first(x), es.second(x)};
}

std::vector<VertexResidual> vertex_residuals(const MetricGraph& g, const ClosedFormSpinor& psi) {
  if (psi.edges.size() != g.edge_count()) throw ValidationError("spinor does not cover the graph");
  std::vector<VertexResidual> out(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const auto& ends = g.incident(v);
    std::vector<cplx> firsts;
    cplx balance{};
    for (const auto& p : ends) {
      const auto [u1, u2] = endpoint_values(g, psi, p);
      firsts.push_back(u1);
      balance += balance_sign(p.end) * u2;
    }
    double cont = 0.0;
    for (std::size_t i = 0; i < firsts.size(); ++i) {
      for (std::size_t j = i + 1; j < firsts.size(); ++j) {
        cont = std::max(cont, std::abs(firsts[i] - firsts[j]));
      }
    }
    out[v] = {cont, balance};
  }
  return out;
}

double max_vertex_residual(const MetricGraph& g, const ClosedFormSpinor& psi) {
  double worst = 0.0;
  for (const auto& r : vertex_residuals(g, psi)) {
    worst = std::max({worst, r.continuity, std::abs(r.balance)});
  }
  return worst;
}

double eigen_residual(const MetricGraph& g, const ClosedFormSpinor& psi, cplx lambda,
                      const PhysicalParams& p, int samples, double halfline_span) {
  const auto dpsi = apply_dirac(psi, p);
  double worst = 0.0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const double len = g.edge(e).is_segment() ? g.edge(e).length : halfline_span;
    for (int i = 0; i < samples; ++i) {
      const double x = len * i / std::max(samples - 1, 1);
      const auto& d = dpsi.edges[e];
      const auto& s = psi.edges[e];
      worst = std::max({worst, std::abs(d.first(x) - lambda * s.first(x)),
                        std::abs(d.second(x) - lambda * s.second(x))});
    }
  }
  return worst;
}

double l2_norm_squared(const MetricGraph& g, const ClosedFormSpinor& psi, double halfline_cutoff) {
  // 8-point Gauss-Legendre on each of `panels` sub-intervals.
  static constexpr std::array<double, 4> nodes = {0.1834346424956498, 0.5255324099163290,
                                                  0.7966664774136267, 0.9602898564975363};
  static constexpr std::array<double, 4> weights = {0.3626837833783620, 0.3137066458778873,
                                                    0.2223810344533745, 0.1012285362903763};
  double total = 0.0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const double len = g.edge(e).is_segment() ? g.edge(e).length : halfline_cutoff;
    const int panels = std::max(16, static_cast<int>(std::ceil(len * 16)));
    const double w = len / panels;
    const auto& s = psi.edges.at(e);
    for (int k = 0; k < panels; ++k) {
      const double mid = (k + 0.5) * w;
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        for (double sgn : {-1.0, 1.0}) {
          const double x = mid + sgn * nodes[q] * w / 2;
          total += weights[q] * w / 2 * (std::norm(s.first(x)) + std::norm(s.second(x)));
        }
      }
    }
  }
  return total;
}

}  // namespace gdirac
