#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ymg/forms.hpp"
#include "ymg/legendre.hpp"
#include "ymg/quat.hpp"

namespace ymg {

// J[l][m] = d_{x_l} A^m
using Jacobian = std::array<std::array<ImQuat, 4>, 4>;

struct Jet {
  Su2OneForm a;
  Jacobian d{};
};

enum class Decay { compact_curvature, instanton_like, generic };

struct ConnectionField {
  std::function<Su2OneForm(const Vec4&)> eval;
  std::function<Jet(const Vec4&)> jet;  // empty when no analytic jacobian is known
  Decay decay = Decay::generic;
  bool singular_at_origin = false;
  double support_radius = 0.0;  // > 0: A vanishes for |x| >= support_radius

  bool has_jacobian() const { return static_cast<bool>(jet); }
};

inline double fd_step(const Vec4& x) { return std::max(1e-5, 1e-5 * norm(x)); }

// Central differences with one Richardson level.
inline Jacobian fd_jacobian(const std::function<Su2OneForm(const Vec4&)>& f, const Vec4& x) {
  const double h = fd_step(x);
  Jacobian d{};
  for (int l = 0; l < 4; ++l) {
    Vec4 e{};
    e[l] = 1.0;
    const Su2OneForm p1 = f(x + h * e), m1 = f(x - h * e);
    const Su2OneForm p2 = f(x + (0.5 * h) * e), m2 = f(x - (0.5 * h) * e);
    for (int m = 0; m < 4; ++m) {
      const ImQuat dh = (0.5 / h) * (p1[m] - m1[m]);
      const ImQuat dh2 = (1.0 / h) * (p2[m] - m2[m]);
      d[l][m] = (1.0 / 3.0) * (4.0 * dh2 - dh);
    }
  }
  return d;
}

inline void check_regular(const ConnectionField& a, const Vec4& x) {
  if (!a.singular_at_origin) return;
  const double r = norm(x);
  if (r == 0.0 || (!a.has_jacobian() && r <= 2.0 * fd_step(x)))
    throw std::domain_error("connection evaluated at its singular point");
}

inline Jet jet_of(const ConnectionField& a, const Vec4& x) {
  check_regular(a, x);
  if (a.has_jacobian()) return a.jet(x);
  return {a.eval(x), fd_jacobian(a.eval, x)};
}

inline Su2TwoForm exterior_derivative(const Jacobian& d) {
  Su2TwoForm f;
  for (int i = 0; i < 6; ++i) {
    const int l = kPairs[i][0], m = kPairs[i][1];
    f[i] = d[l][m] - d[m][l];
  }
  return f;
}

inline Su2TwoForm curvature_of(const Jet& j) {
  Su2TwoForm f = exterior_derivative(j.d);
  for (int i = 0; i < 6; ++i) f[i] += bracket(j.a[kPairs[i][0]], j.a[kPairs[i][1]]);
  return f;
}

inline Su2TwoForm curvature(const ConnectionField& a, const Vec4& x) { return curvature_of(jet_of(a, x)); }

inline ConnectionField zero_connection() {
  ConnectionField c;
  c.eval = [](const Vec4&) { return Su2OneForm{}; };
  c.jet = [](const Vec4&) { return Jet{}; };
  c.decay = Decay::compact_curvature;
  return c;
}

// Drop the analytic jacobian so that curvature goes through finite differences.
inline ConnectionField without_jacobian(ConnectionField a) {
  a.jet = nullptr;
  return a;
}

// ---------------------------------------------------------------- cutoffs

// 0 on [0, tau], 1 on [1, inf), nondecreasing.
struct CutoffProfile {
  enum class Kind { affine, smooth, unit };
  Kind kind = Kind::affine;
  double tau = 0.35;
  double inner_width = 0;  // smooth only: transition length at tau
  double outer_width = 0;  // smooth only: transition length at 1

  double eta(double t) const;
  double eta_prime(double t) const;
  // Points where eta is not smooth or changes character; quadrature splits there.
  std::vector<double> breakpoints() const;
};

namespace detail {

inline double flat_exp(double z) { return z > 0 ? std::exp(-1.0 / z) : 0.0; }

// C-infinity step from 0 at u = -1 to 1 at u = 1.
inline double smooth_step(double u) {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = flat_exp(1.0 + u), b = flat_exp(1.0 - u);
  return a / (a + b);
}

inline double smooth_step_integral_left(double u) {
  // u in [-1, 0]
  const LineRule& g = gauss_legendre_cached(48);
  const double c = 0.5 * (u - 1.0), h = 0.5 * (u + 1.0);
  CompensatedSum s;
  for (size_t i = 0; i < g.nodes.size(); ++i) s.add(g.weights[i] * smooth_step(c + h * g.nodes[i]));
  return h * s.value();
}

// Integral of smooth_step from -1 to u.
inline double smooth_step_integral(double u) {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return u;
  if (u <= 0.0) return smooth_step_integral_left(u);
  return u + smooth_step_integral_left(-u);
}

}  // namespace detail

inline double CutoffProfile::eta(double t) const {
  switch (kind) {
    case Kind::unit:
      return 1.0;
    case Kind::affine:
      if (t <= tau) return 0.0;
      if (t >= 1.0) return 1.0;
      return (t - tau) / (1.0 - tau);
    case Kind::smooth: {
      const double h0 = 0.5 * inner_width, h1 = 0.5 * outer_width;
      const double a = tau + h0, b = 1.0 - h1;
      if (t <= tau) return 0.0;
      if (t >= 1.0) return 1.0;
      return (h0 * detail::smooth_step_integral((t - a) / h0) - h1 * detail::smooth_step_integral((t - b) / h1)) /
             (b - a);
    }
  }
  return 0.0;
}

inline double CutoffProfile::eta_prime(double t) const {
  switch (kind) {
    case Kind::unit:
      return 0.0;
    case Kind::affine:
      return (t > tau && t < 1.0) ? 1.0 / (1.0 - tau) : 0.0;
    case Kind::smooth: {
      const double h0 = 0.5 * inner_width, h1 = 0.5 * outer_width;
      const double a = tau + h0, b = 1.0 - h1;
      return (detail::smooth_step((t - a) / h0) - detail::smooth_step((t - b) / h1)) / (b - a);
    }
  }
  return 0.0;
}

inline std::vector<double> CutoffProfile::breakpoints() const {
  if (kind == Kind::smooth) return {tau, tau + inner_width, 1.0 - outer_width, 1.0};
  return {tau, 1.0};
}

inline CutoffProfile affine_profile(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
  CutoffProfile p;
  p.kind = CutoffProfile::Kind::affine;
  p.tau = tau;
  return p;
}

// Degenerate profile eta == 1; no instanton region.
inline CutoffProfile unit_profile(double tau) {
  CutoffProfile p = affine_profile(tau);
  p.kind = CutoffProfile::Kind::unit;
  return p;
}

struct ScalarJet {
  double v = 0;
  Vec4 grad{};
};

struct ScalarField {
  std::function<ScalarJet(const Vec4&)> eval;
};

// eta(|x| / scale)
inline ScalarField cutoff_field(const CutoffProfile& p, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("cutoff scale must be positive");
  return {[p, scale](const Vec4& x) {
    const double r = norm(x);
    ScalarJet s;
    s.v = p.eta(r / scale);
    if (r > 0.0) s.grad = (p.eta_prime(r / scale) / (scale * r)) * x;
    return s;
  }};
}

// s X + (1 - s) Y
inline ConnectionField blend(const ScalarField& s, const ConnectionField& x, const ConnectionField& y) {
  ConnectionField c;
  c.eval = [s, x, y](const Vec4& p) {
    const double v = s.eval(p).v;
    if (v == 1.0) return x.eval(p);
    if (v == 0.0) return y.eval(p);
    return v * x.eval(p) + (1.0 - v) * y.eval(p);
  };
  if (x.has_jacobian() && y.has_jacobian()) {
    c.jet = [s, x, y](const Vec4& p) {
      const ScalarJet sv = s.eval(p);
      const bool flat = sv.grad[0] == 0 && sv.grad[1] == 0 && sv.grad[2] == 0 && sv.grad[3] == 0;
      if (flat && sv.v == 1.0) return x.jet(p);
      if (flat && sv.v == 0.0) return y.jet(p);
      const Jet jx = x.jet(p), jy = y.jet(p);
      Jet j;
      j.a = sv.v * jx.a + (1.0 - sv.v) * jy.a;
      for (int k = 0; k < 4; ++k)
        for (int m = 0; m < 4; ++m)
          j.d[k][m] = sv.grad[k] * (jx.a[m] - jy.a[m]) + sv.v * jx.d[k][m] + (1.0 - sv.v) * jy.d[k][m];
      return j;
    };
  }
  c.singular_at_origin = x.singular_at_origin || y.singular_at_origin;
  c.decay = Decay::generic;
  return c;
}

// ------------------------------------------------------------ gauge fields

struct GaugeJet {
  Quat g;
  std::array<Quat, 4> dg{};
};

using GaugeHessian = std::array<std::array<Quat, 4>, 4>;

struct GaugeField {
  std::function<UnitQuat(const Vec4&)> eval;
  std::function<GaugeJet(const Vec4&)> jet;          // first derivatives, optional
  std::function<GaugeHessian(const Vec4&)> hessian;  // second derivatives, optional
};

inline ImQuat conj_adjoint(const Quat& g, const ImQuat& p) { return im(conj(g) * p * g); }

// g0^-1 A g0 for constant g0
inline ConnectionField gauge_const(const ConnectionField& a, const UnitQuat& g0) {
  require_unit(g0);
  ConnectionField c = a;
  c.eval = [a, g0](const Vec4& x) {
    Su2OneForm r = a.eval(x);
    for (int l = 0; l < 4; ++l) r[l] = conj_adjoint(g0, r[l]);
    return r;
  };
  if (a.has_jacobian()) {
    c.jet = [a, g0](const Vec4& x) {
      Jet j = a.jet(x);
      for (int l = 0; l < 4; ++l) {
        j.a[l] = conj_adjoint(g0, j.a[l]);
        for (int m = 0; m < 4; ++m) j.d[l][m] = conj_adjoint(g0, j.d[l][m]);
      }
      return j;
    };
  }
  return c;
}

// A^g = g^-1 A g + g^-1 dg
inline ConnectionField gauge_transform(const ConnectionField& a, const GaugeField& g) {
  if (!g.jet) throw std::invalid_argument("gauge_transform needs the derivative of g");
  ConnectionField c;
  c.eval = [a, g](const Vec4& x) {
    const GaugeJet gj = g.jet(x);
    const Su2OneForm ax = a.eval(x);
    const Quat gb = conj(gj.g);
    Su2OneForm r;
    for (int l = 0; l < 4; ++l) r[l] = im(gb * ax[l] * gj.g + gb * gj.dg[l]);
    return r;
  };
  if (a.has_jacobian() && g.hessian) {
    c.jet = [a, g](const Vec4& x) {
      const GaugeJet gj = g.jet(x);
      const GaugeHessian h = g.hessian(x);
      const Jet aj = a.jet(x);
      const Quat gb = conj(gj.g);
      Jet r;
      for (int l = 0; l < 4; ++l) r.a[l] = im(gb * aj.a[l] * gj.g + gb * gj.dg[l]);
      for (int k = 0; k < 4; ++k) {
        const Quat dgb = conj(gj.dg[k]);
        for (int m = 0; m < 4; ++m) {
          const Quat t = dgb * aj.a[m] * gj.g + gb * aj.d[k][m] * gj.g + gb * aj.a[m] * gj.dg[k] + dgb * gj.dg[m] +
                         gb * h[k][m];
          r.d[k][m] = im(t);
        }
      }
      return r;
    };
  }
  c.singular_at_origin = a.singular_at_origin;
  c.decay = a.decay;
  return c;
}

// g(x) = exp(x1 p1) exp(x2 p2) exp(x3 p3) exp(x4 p4), with exact derivatives.
inline GaugeField product_exp_gauge(const std::array<ImQuat, 4>& p) {
  auto factors = [p](const Vec4& x) {
    std::array<Quat, 4> e;
    for (int l = 0; l < 4; ++l) e[l] = im_exp(x[l] * p[l]);
    return e;
  };
  // product of factors[lo..hi) with p-insertions before the listed indices
  auto chain = [p](const std::array<Quat, 4>& e, int ins0, int ins1) {
    Quat r{1, 0, 0, 0};
    for (int l = 0; l < 4; ++l) {
      if (l == ins0) r = r * p[l];
      if (l == ins1) r = r * p[l];
      r = r * e[l];
    }
    return r;
  };
  GaugeField g;
  g.eval = [factors, chain](const Vec4& x) { return chain(factors(x), -1, -1); };
  g.jet = [factors, chain](const Vec4& x) {
    const auto e = factors(x);
    GaugeJet j;
    j.g = chain(e, -1, -1);
    for (int k = 0; k < 4; ++k) j.dg[k] = chain(e, k, -1);
    return j;
  };
  g.hessian = [p, factors, chain](const Vec4& x) {
    const auto e = factors(x);
    GaugeHessian h;
    for (int k = 0; k < 4; ++k)
      for (int m = 0; m < 4; ++m) {
        if (k != m) {
          h[k][m] = chain(e, std::min(k, m), std::max(k, m));
          continue;
        }
        Quat r{1, 0, 0, 0};
        for (int l = 0; l < 4; ++l) {
          if (l == k) r = r * p[l] * p[l];
          r = r * e[l];
        }
        h[k][k] = r;
      }
    return h;
  };
  return g;
}

// A~ = (x/|x|) A (xbar/|x|) + (x/|x|) d(xbar/|x|)
inline ConnectionField degree_one_gauge(const ConnectionField& a) {
  static const Quat basis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  ConnectionField c;
  c.eval = [a](const Vec4& x) {
    const double r = norm(x);
    if (r == 0.0) throw std::domain_error("degree-one gauge is singular at the origin");
    const Quat xq = to_quat(x);
    const Quat u = (1.0 / r) * xq, ub = conj(u);
    const Su2OneForm ax = a.eval(x);
    Su2OneForm res;
    for (int m = 0; m < 4; ++m) res[m] = im(u * ax[m] * ub) + (1.0 / (r * r)) * im(xq * conj(basis[m]));
    return res;
  };
  if (a.has_jacobian()) {
    c.jet = [a](const Vec4& x) {
      const double r = norm(x);
      if (r == 0.0) throw std::domain_error("degree-one gauge is singular at the origin");
      const Quat xq = to_quat(x);
      const Quat u = (1.0 / r) * xq, ub = conj(u);
      const Jet aj = a.jet(x);
      Jet res;
      std::array<Quat, 4> du;
      for (int k = 0; k < 4; ++k) du[k] = (1.0 / r) * basis[k] - (x[k] / (r * r * r)) * xq;
      for (int m = 0; m < 4; ++m) {
        const ImQuat om = (1.0 / (r * r)) * im(xq * conj(basis[m]));
        res.a[m] = im(u * aj.a[m] * ub) + om;
        for (int k = 0; k < 4; ++k) {
          const Quat t = du[k] * aj.a[m] * ub + u * aj.d[k][m] * ub + u * aj.a[m] * conj(du[k]);
          const ImQuat dom = (1.0 / (r * r)) * im(basis[k] * conj(basis[m])) - (2.0 * x[k] / (r * r)) * om;
          res.d[k][m] = im(t) + dom;
        }
      }
      return res;
    };
  }
  c.singular_at_origin = true;
  c.decay = a.decay;
  return c;
}

// A^g with g = exp(-sum_l x_l A^l(0)), so that the result vanishes at 0.
inline ConnectionField normalize_origin(const ConnectionField& a) {
  if (a.singular_at_origin) throw std::domain_error("normalize_origin needs a connection smooth at 0");
  const Su2OneForm a0 = a.eval(Vec4{0, 0, 0, 0});
  GaugeField g;
  auto arg = [a0](const Vec4& x) {
    ImQuat v;
    for (int l = 0; l < 4; ++l) v -= x[l] * a0[l];
    return v;
  };
  g.eval = [arg](const Vec4& x) { return im_exp(arg(x)); };
  g.jet = [arg, a0](const Vec4& x) {
    const ImQuat v = arg(x);
    GaugeJet j;
    j.g = im_exp(v);
    for (int l = 0; l < 4; ++l) j.dg[l] = im_exp_derivative(v, -a0[l]);
    return j;
  };
  // central differences of the exact first derivatives, one Richardson level
  g.hessian = [arg, a0](const Vec4& x) {
    const double h = 1e-3 * std::max(1.0, norm(x));
    GaugeHessian hs;
    for (int k = 0; k < 4; ++k) {
      Vec4 e{};
      e[k] = 1.0;
      for (int m = 0; m < 4; ++m) {
        auto dgm = [&](const Vec4& y) { return im_exp_derivative(arg(y), -a0[m]); };
        const Quat d1 = (0.5 / h) * (dgm(x + h * e) - dgm(x - h * e));
        const Quat d2 = (1.0 / h) * (dgm(x + (0.5 * h) * e) - dgm(x - (0.5 * h) * e));
        hs[k][m] = (1.0 / 3.0) * (4.0 * d2 - d1);
      }
    }
    return hs;
  };
  ConnectionField c = gauge_transform(a, g);
  c.decay = a.decay;
  return c;
}

// phi_rho^* A on 0 < |x| < rho with phi_rho(x) = rho x / |x|; A itself outside B_rho.
inline ConnectionField radial_pullback(const ConnectionField& a, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("pullback radius must be positive");
  ConnectionField c;
  c.eval = [a, rho](const Vec4& x) {
    const double r = norm(x);
    if (r == 0.0) throw std::domain_error("radial pullback is undefined at the origin");
    if (r >= rho) return a.eval(x);
    const Vec4 n = (1.0 / r) * x;
    const Su2OneForm ay = a.eval(rho * n);
    const ImQuat radial = ymg::apply(ay, n);
    Su2OneForm res;
    for (int m = 0; m < 4; ++m) res[m] = (rho / r) * (ay[m] - n[m] * radial);
    return res;
  };
  if (a.has_jacobian()) {
    c.jet = [a, rho](const Vec4& x) {
      const double r = norm(x);
      if (r == 0.0) throw std::domain_error("radial pullback is undefined at the origin");
      if (r >= rho) return a.jet(x);
      const Vec4 n = (1.0 / r) * x;
      const Jet aj = a.jet(rho * n);
      double proj[4][4];
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) proj[i][k] = (i == k ? 1.0 : 0.0) - n[i] * n[k];
      Jet res;
      for (int m = 0; m < 4; ++m) {
        ImQuat s;
        for (int l = 0; l < 4; ++l) s += proj[m][l] * aj.a[l];
        res.a[m] = (rho / r) * s;
      }
      for (int k = 0; k < 4; ++k) {
        for (int m = 0; m < 4; ++m) {
          ImQuat t1, t2, t3;
          for (int l = 0; l < 4; ++l) {
            t1 += proj[m][l] * aj.a[l];
            const double dproj = -(proj[m][k] * n[l] + n[m] * proj[l][k]) / r;
            t2 += dproj * aj.a[l];
            ImQuat chain;
            for (int j = 0; j < 4; ++j) chain += (rho * proj[j][k] / r) * aj.d[j][l];
            t3 += proj[m][l] * chain;
          }
          res.d[k][m] = (-rho * n[k] / (r * r)) * t1 + (rho / r) * (t2 + t3);
        }
      }
      return res;
    };
  }
  c.singular_at_origin = true;
  c.decay = a.decay;
  return c;
}

// (|x|/2) sum_l F(0)(d_r, e_l) e*_l
inline Su2OneForm radial_expansion_check(const ConnectionField& a, const Vec4& x) {
  const double r = norm(x);
  if (r == 0.0) return {};
  const Su2TwoForm f0 = curvature(a, Vec4{0, 0, 0, 0});
  const auto e = frame_vectors(x);
  Su2OneForm model;
  for (int l = 1; l < 4; ++l) {
    const ImQuat c = (0.5 * r) * ymg::apply(f0, e[0], e[l]);
    for (int m = 0; m < 4; ++m) model[m] += e[l][m] * c;
  }
  return model;
}

// A(r s) = r^-1 sum_l int_0^r F(t s)(d_r, e_l) t dt e*_l
inline Su2OneForm radial_reconstruction(const std::function<Su2TwoForm(const Vec4&)>& f, const Vec4& x,
                                        int quad_steps) {
  const double r = norm(x);
  if (r == 0.0) return {};
  const auto e = frame_vectors(x);
  const LineRule g = gauss_legendre(quad_steps, 0.0, r);
  std::array<ImQuat, 4> c{};
  for (int q = 0; q < quad_steps; ++q) {
    const double t = g.nodes[q];
    const Su2TwoForm ft = f(t * e[0]);
    for (int l = 1; l < 4; ++l) c[l] += (g.weights[q] * t) * ymg::apply(ft, e[0], e[l]);
  }
  Su2OneForm res;
  for (int l = 1; l < 4; ++l)
    for (int m = 0; m < 4; ++m) res[m] += (e[l][m] / r) * c[l];
  return res;
}

// ------------------------------------------------------- exponential gauge

struct ExpGauge {
  GaugeField gauge;
  ConnectionField field;
  int ode_steps = 0;
  double radial_residual = std::nan("");  // sup |A^g(d_r)| over the sampled rays, when computed
};

namespace detail {

// Transport along s -> s x, s in [0, 1]: dG/ds = -a(s) G with a(s) = A(sx)(x),
// together with W_m = d G / d x_m.
inline GaugeJet transport(const ConnectionField& a, const Vec4& x, int steps) {
  struct State {
    Quat g;
    std::array<Quat, 4> w;
  };
  auto rhs = [&x](const Jet& j, double s, const State& y) {
    ImQuat as;
    for (int l = 0; l < 4; ++l) as += x[l] * j.a[l];
    State dy;
    dy.g = -(as * y.g);
    for (int m = 0; m < 4; ++m) {
      ImQuat dam = j.a[m];
      for (int l = 0; l < 4; ++l) dam += (s * x[l]) * j.d[m][l];
      dy.w[m] = -(dam * y.g) - as * y.w[m];
    }
    return dy;
  };
  auto axpy = [](const State& y, double h, const State& k) {
    State r;
    r.g = y.g + h * k.g;
    for (int m = 0; m < 4; ++m) r.w[m] = y.w[m] + h * k.w[m];
    return r;
  };
  State y;
  y.g = {1, 0, 0, 0};
  const double h = 1.0 / steps;
  Jet j0 = jet_of(a, 0.0 * x);
  for (int n = 0; n < steps; ++n) {
    const double s = n * h;
    const Jet jm = jet_of(a, (s + 0.5 * h) * x);
    const Jet j1 = jet_of(a, (s + h) * x);
    const State k1 = rhs(j0, s, y);
    const State k2 = rhs(jm, s + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State k3 = rhs(jm, s + 0.5 * h, axpy(y, 0.5 * h, k2));
    const State k4 = rhs(j1, s + h, axpy(y, h, k3));
    y = axpy(axpy(axpy(axpy(y, h / 6.0, k1), h / 3.0, k2), h / 3.0, k3), h / 6.0, k4);
    const double len = std::sqrt(norm2_euclid(y.g));
    if (std::abs(len - 1.0) > 1e-8) throw std::runtime_error("exponential gauge drifted off SU(2); refine the steps");
    y.g = (1.0 / len) * y.g;
    for (int m = 0; m < 4; ++m) y.w[m] = (1.0 / len) * y.w[m];
    j0 = j1;
  }
  return {y.g, y.w};
}

}  // namespace detail

// Parallel transport along rays from the origin; the result has A^g(d_r) = 0.
inline ExpGauge exp_gauge(const ConnectionField& a, double r_max, int ode_steps) {
  if (!(r_max > 0.0) || ode_steps < 1) throw std::invalid_argument("exp_gauge needs r_max > 0 and ode_steps >= 1");
  if (a.singular_at_origin) throw std::domain_error("exp_gauge needs a connection smooth at 0");
  ExpGauge out;
  out.ode_steps = ode_steps;
  out.gauge.eval = [a, ode_steps](const Vec4& x) { return detail::transport(a, x, ode_steps).g; };
  out.gauge.jet = [a, ode_steps](const Vec4& x) { return detail::transport(a, x, ode_steps); };
  out.field.eval = [a, ode_steps](const Vec4& x) {
    const GaugeJet gj = detail::transport(a, x, ode_steps);
    const Su2OneForm ax = a.eval(x);
    const Quat gb = conj(gj.g);
    Su2OneForm r;
    for (int l = 0; l < 4; ++l) r[l] = im(gb * ax[l] * gj.g + gb * gj.dg[l]);
    return r;
  };
  out.field.decay = a.decay;
  return out;
}

// ode_steps chosen so that each radial step is at most 1e-3.
inline ExpGauge exp_gauge(const ConnectionField& a, double r_max) {
  return exp_gauge(a, r_max, std::max(1, static_cast<int>(std::ceil(r_max / 1e-3))));
}

}  // namespace ymg
