#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ymg/fields.hpp"
#include "ymg/forms.hpp"
#include "ymg/legendre.hpp"

namespace ymg {

struct QuadratureRule {
  std::vector<Vec4> nodes;  // on S^3
  std::vector<double> weights;
  int exactness_degree = 0;
};

struct Resolution {
  int radial_n = 64;
  int s3_level = 12;
};

// Product rule in hyperspherical angles:
// x1 = cos psi, x2 = sin psi cos theta, (x3, x4) = sin psi sin theta (cos phi, sin phi).
// Gauss-Chebyshev (second kind) in cos psi, Gauss-Legendre in cos theta, trapezoid in phi.
inline QuadratureRule s3_rule(int level) {
  if (level < 1) throw std::invalid_argument("s3_rule level must be >= 1");
  const int n = level, m = 2 * level;
  const LineRule gl = gauss_legendre_unit(n);
  QuadratureRule q;
  q.exactness_degree = 2 * level - 1;
  for (int a = 1; a <= n; ++a) {
    const double ang = a * kPi / (n + 1);
    const double v = std::cos(ang), sv = std::sin(ang);
    const double wv = kPi / (n + 1) * sv * sv;
    for (int b = 0; b < n; ++b) {
      const double u = gl.nodes[b], su = std::sqrt(1.0 - u * u);
      for (int c = 0; c < m; ++c) {
        const double ph = 2.0 * kPi * c / m;
        q.nodes.push_back({v, sv * u, sv * su * std::cos(ph), sv * su * std::sin(ph)});
        q.weights.push_back(wv * gl.weights[b] * (2.0 * kPi / m));
      }
    }
  }
  return q;
}

inline const QuadratureRule& s3_rule_cached(int level) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(level);
  if (it == cache.end()) it = cache.emplace(level, s3_rule(level)).first;
  return it->second;
}

// Closed-form integral of x1^a1 x2^a2 x3^a3 x4^a4 over S^3.
inline double s3_moment(int a1, int a2, int a3, int a4) {
  const int a[4] = {a1, a2, a3, a4};
  double lg = std::log(2.0), bsum = 0;
  for (int l = 0; l < 4; ++l) {
    if (a[l] < 0) throw std::invalid_argument("moment exponents must be nonnegative");
    if (a[l] % 2 != 0) return 0.0;
    const double beta = 0.5 * (a[l] + 1);
    lg += std::lgamma(beta);
    bsum += beta;
  }
  return std::exp(lg - std::lgamma(bsum));
}

inline double s3_integrate(const std::function<double(const Vec4&)>& f, const QuadratureRule& rule) {
  CompensatedSum s;
  for (size_t i = 0; i < rule.nodes.size(); ++i) s.add(rule.weights[i] * f(rule.nodes[i]));
  return s.value();
}

// Sum of f(0..count-1) in fixed chunks; the result does not depend on the thread count.
inline double parallel_sum(size_t count, const std::function<double(size_t)>& f) {
  constexpr size_t kChunk = 64;
  const size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  auto work = [&](size_t c0, size_t c1) {
    for (size_t c = c0; c < c1; ++c) {
      CompensatedSum s;
      for (size_t i = c * kChunk; i < std::min(count, (c + 1) * kChunk); ++i) s.add(f(i));
      partial[c] = s.value();
    }
  };
  const size_t threads = std::max<size_t>(1, std::min<size_t>(std::thread::hardware_concurrency(), chunks));
  if (threads <= 1) {
    work(0, chunks);
  } else {
    std::vector<std::thread> pool;
    const size_t per = (chunks + threads - 1) / threads;
    for (size_t t = 0; t < threads; ++t) {
      const size_t c0 = t * per, c1 = std::min(chunks, c0 + per);
      if (c0 < c1) pool.emplace_back(work, c0, c1);
    }
    for (auto& th : pool) th.join();
  }
  CompensatedSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

// Integral of f over r_in <= |x| <= r_out with density r^3 dr dvol(S^3); r_in may be 0.
// breakpoints inside (r_in, r_out) split the radial rule into panels.
inline double shell_integrate(const std::function<double(const Vec4&)>& f, double r_in, double r_out, int radial_n,
                              const QuadratureRule& rule, std::vector<double> breakpoints = {}) {
  if (r_in < 0.0 || !(r_out > r_in)) throw std::invalid_argument("shell needs 0 <= r_in < r_out");
  std::vector<double> cuts{r_in};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double b : breakpoints)
    if (b > cuts.back() && b < r_out) cuts.push_back(b);
  cuts.push_back(r_out);
  std::vector<double> rs, ws;
  for (size_t p = 0; p + 1 < cuts.size(); ++p) {
    const LineRule g = gauss_legendre(radial_n, cuts[p], cuts[p + 1]);
    for (int i = 0; i < radial_n; ++i) {
      rs.push_back(g.nodes[i]);
      ws.push_back(g.weights[i] * std::pow(g.nodes[i], 3));
    }
  }
  const size_t ns = rule.nodes.size();
  return parallel_sum(rs.size() * ns, [&](size_t idx) {
    const size_t i = idx / ns, k = idx % ns;
    return ws[i] * rule.weights[k] * f(rs[i] * rule.nodes[k]);
  });
}

inline double annulus_integrate(const std::function<double(const Vec4&)>& f, double r_in, double r_out, int radial_n,
                                int s3_level) {
  if (!(r_in > 0.0) || !(r_out > r_in)) throw std::invalid_argument("annulus needs 0 < r_in < r_out");
  return shell_integrate(f, r_in, r_out, radial_n, s3_rule_cached(s3_level));
}

// Whole space through r = t / (1 - t).
inline double whole_space_integrate(const std::function<double(const Vec4&)>& f, int radial_n,
                                    const QuadratureRule& rule) {
  const LineRule g = gauss_legendre(radial_n, 0.0, 1.0);
  const size_t ns = rule.nodes.size();
  return parallel_sum(static_cast<size_t>(radial_n) * ns, [&](size_t idx) {
    const size_t i = idx / ns, k = idx % ns;
    const double t = g.nodes[i], r = t / (1.0 - t);
    const double w = g.weights[i] * std::pow(r, 3) / ((1.0 - t) * (1.0 - t));
    return w * rule.weights[k] * f(r * rule.nodes[k]);
  });
}

struct Domain {
  enum class Kind { ball, annulus, whole_space };
  Kind kind = Kind::ball;
  double r_in = 0;
  double r_out = 1;

  static Domain ball(double r) { return {Kind::ball, 0.0, r}; }
  static Domain annulus(double r0, double r1) { return {Kind::annulus, r0, r1}; }
  static Domain whole_space() { return {Kind::whole_space, 0.0, INFINITY}; }
};

inline double ym_energy(const ConnectionField& a, const Domain& d, const Resolution& res = {}) {
  const bool contains_origin = d.kind != Domain::Kind::annulus;
  if (contains_origin && a.singular_at_origin) throw std::domain_error("domain contains the singular point of the field");
  auto dens = [&a](const Vec4& x) { return norm2(curvature(a, x)); };
  const QuadratureRule& rule = s3_rule_cached(res.s3_level);
  switch (d.kind) {
    case Domain::Kind::ball:
      return shell_integrate(dens, 0.0, d.r_out, res.radial_n, rule);
    case Domain::Kind::annulus:
      return shell_integrate(dens, d.r_in, d.r_out, res.radial_n, rule);
    case Domain::Kind::whole_space:
      return whole_space_integrate(dens, res.radial_n, rule);
  }
  return 0.0;
}

// Integral over the sphere of radius r of the Chern-Simons density.
inline double chern_simons_sphere(const ConnectionField& a, double r, const QuadratureRule& rule) {
  if (!(r > 0.0)) throw std::invalid_argument("sphere radius must be positive");
  CompensatedSum s;
  for (size_t k = 0; k < rule.nodes.size(); ++k) {
    const Vec4 x = r * rule.nodes[k];
    const Jet j = jet_of(a, x);
    s.add(rule.weights[k] * cs3_boundary_integrand(j.a, exterior_derivative(j.d), x));
  }
  return r * r * r * s.value();
}

enum class ChernMethod { bulk, boundary };

// Integral of tr(F^F) over B_R (or over B_R minus B_excision).
inline double chern_number(const ConnectionField& a, double r, ChernMethod method, const Resolution& res = {},
                           double excision = 0.0) {
  if (!(r > 0.0) || excision < 0.0 || excision >= r) throw std::invalid_argument("chern_number needs 0 <= excision < R");
  if (a.singular_at_origin && excision == 0.0)
    throw std::domain_error("singular field: supply an excision sphere");
  const QuadratureRule& rule = s3_rule_cached(res.s3_level);
  if (method == ChernMethod::bulk) {
    std::vector<double> cuts;
    if (a.support_radius > excision && a.support_radius < r) cuts.push_back(a.support_radius);
    return shell_integrate(
        [&a](const Vec4& x) {
          const Su2TwoForm f = curvature(a, x);
          return tr_wedge(f, f);
        },
        excision, r, res.radial_n, rule, cuts);
  }
  double v = chern_simons_sphere(a, r, rule);
  if (excision > 0.0) v -= chern_simons_sphere(a, excision, rule);
  return v;
}

// sup of |A(d_r)| over rays through the rule nodes at the given radii.
inline double radial_residual(const ConnectionField& a, const std::vector<double>& radii, const QuadratureRule& rule) {
  double worst = 0;
  for (double r : radii)
    for (const Vec4& s : rule.nodes) worst = std::max(worst, std::sqrt(im_norm2(ymg::apply(a.eval(r * s), s))));
  return worst;
}

// exp_gauge with its radial residual sampled on the rays through the rule nodes.
inline ExpGauge exp_gauge(const ConnectionField& a, double r_max, const QuadratureRule& rule, int ode_steps) {
  ExpGauge eg = exp_gauge(a, r_max, ode_steps);
  eg.radial_residual = radial_residual(eg.field, {0.25 * r_max, 0.5 * r_max, 0.75 * r_max, r_max}, rule);
  return eg;
}

}  // namespace ymg
