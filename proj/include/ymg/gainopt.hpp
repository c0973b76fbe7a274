#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "ymg/fields.hpp"
#include "ymg/forms.hpp"
#include "ymg/legendre.hpp"
#include "ymg/quat.hpp"

namespace ymg {

// Integrals over [tau, 1] of the cutoff profile.
struct GainCoefficients {
  double i_t_etap2 = 0;           // t eta'^2
  double i_eta2_over_t = 0;       // eta^2 / t
  double i_etap_eta = 0;          // eta' eta
  double i_etap2_over_t = 0;      // eta'^2 / t
  double i_etap_eta_over_t2 = 0;  // eta' eta / t^2
  double i_etap2_over_t3 = 0;     // eta'^2 / t^3
};

inline GainCoefficients gain_coefficients(const CutoffProfile& p, int quad_n = 64) {
  if (!(p.tau > 0.0)) throw std::invalid_argument("gain coefficients need tau > 0");
  std::vector<double> cuts{p.tau};
  for (double b : p.breakpoints())
    if (b > cuts.back() && b < 1.0) cuts.push_back(b);
  cuts.push_back(1.0);
  std::array<CompensatedSum, 6> s;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const LineRule g = gauss_legendre(quad_n, cuts[k], cuts[k + 1]);
    for (int i = 0; i < quad_n; ++i) {
      const double t = g.nodes[i], w = g.weights[i];
      const double e = p.eta(t), ep = p.eta_prime(t);
      s[0].add(w * t * ep * ep);
      s[1].add(w * e * e / t);
      s[2].add(w * ep * e);
      s[3].add(w * ep * ep / t);
      s[4].add(w * ep * e / (t * t));
      s[5].add(w * ep * ep / (t * t * t));
    }
  }
  return {s[0].value(), s[1].value(), s[2].value(), s[3].value(), s[4].value(), s[5].value()};
}

inline double phi_from(const GainCoefficients& c) {
  const double lin = c.i_etap2_over_t + 2.0 * c.i_etap_eta_over_t2;
  return -lin * lin / (36.0 * c.i_etap2_over_t3) + 0.5 * c.i_t_etap2 + 2.0 * c.i_eta2_over_t - 1.0;
}

inline double phi_general(double tau, const CutoffProfile& p, int quad_n = 64) {
  if (std::abs(tau - p.tau) > 1e-15) throw std::invalid_argument("profile tau does not match");
  return phi_from(gain_coefficients(p, quad_n));
}

inline double phi_closed_affine(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
  const double l = std::log(1.0 / tau), om = 1.0 - tau;
  const double q = 1.5 / om * l - 1.0;
  return -2.0 * tau * tau * q * q / (9.0 * (1.0 - tau * tau)) +
         2.0 * ((5.0 - 11.0 * tau) / (8.0 * om) + tau * tau * l / (om * om) - 0.5);
}

namespace detail {
inline double bracket_with_mix(const GainCoefficients& c, double mix, double p_plus2, double p_minus2, double s,
                               double c0) {
  const double base = 0.25 * c.i_t_etap2 + c.i_eta2_over_t;
  return (base - mix) * p_plus2 + (base + mix) * p_minus2 -
         c0 * (0.5 * c.i_etap2_over_t + c.i_etap_eta_over_t2) * s + 12.0 * c0 * c0 * c.i_etap2_over_t3;
}
}  // namespace detail

// Bracket of the annulus expansion as stated, cross coefficient int eta' eta / sqrt 2;
// the annulus integral is modelled as (pi^2 rho^4 / 2) times this. s = <g0 dxbar^dx g0^-1, P_- F0>.
inline double bc_bracket(const GainCoefficients& c, double p_plus2, double p_minus2, double s, double c0) {
  return detail::bracket_with_mix(c, c.i_etap_eta / std::sqrt(2.0), p_plus2, p_minus2, s, c0);
}

// Same bracket with the cross coefficient int eta' eta that the sphere integrals actually give.
inline double bc_bracket_exact(const GainCoefficients& c, double p_plus2, double p_minus2, double s, double c0) {
  return detail::bracket_with_mix(c, c.i_etap_eta, p_plus2, p_minus2, s, c0);
}

// Worst-case upper bracket once |P_+F0| <= |P_-F0| and s >= (4/sqrt 3)|P_-F0| are used,
// with the ball term subtracted; its minimum over c0 is phi |P_-F0|^2.
inline double bound_bracket(const GainCoefficients& c, double p_minus_norm, double c0) {
  return (0.5 * c.i_t_etap2 + 2.0 * c.i_eta2_over_t - 1.0) * p_minus_norm * p_minus_norm -
         (2.0 * c0 / std::sqrt(3.0)) * (c.i_etap2_over_t + 2.0 * c.i_etap_eta_over_t2) * p_minus_norm +
         12.0 * c0 * c0 * c.i_etap2_over_t3;
}

inline double optimal_c0_from(const GainCoefficients& c, double s) {
  if (!(c.i_etap2_over_t3 > 0.0)) throw std::domain_error("profile has no transition: c0 undefined");
  return s * (0.5 * c.i_etap2_over_t + c.i_etap_eta_over_t2) / (24.0 * c.i_etap2_over_t3);
}

inline double optimal_c0(double tau, const CutoffProfile& p, double s, int quad_n = 64) {
  if (std::abs(tau - p.tau) > 1e-15) throw std::invalid_argument("profile tau does not match");
  return optimal_c0_from(gain_coefficients(p, quad_n), s);
}

// ------------------------------------------------------------ frames

inline double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

using Frame3 = std::array<Vec3, 3>;

// Positive orthonormal (e1, e2, e3) with a.e1 + b.e2 + c.e3 >= |(a, b, c)| / sqrt 3.
// e1 follows the longest input; the rotation about e1 is then chosen optimally.
inline Frame3 lm_r3_frame(const Vec3& a, const Vec3& b, const Vec3& c) {
  const std::array<Vec3, 3> v{a, b, c};
  int big = 0;
  for (int k = 1; k < 3; ++k)
    if (norm3(v[k]) > norm3(v[big])) big = k;
  const double nb = norm3(v[big]);
  if (nb == 0.0) return {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  // f1 along the longest vector, (f2, f3) completing a positive basis
  Vec3 f1{v[big][0] / nb, v[big][1] / nb, v[big][2] / nb};
  Vec3 t = std::abs(f1[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 f2 = cross3(f1, t);
  const double n2 = norm3(f2);
  f2 = {f2[0] / n2, f2[1] / n2, f2[2] / n2};
  const Vec3 f3 = cross3(f1, f2);
  // slot big gets f1, the next two cyclic slots get cos/sin rotations of (f2, f3)
  const int s1 = (big + 1) % 3, s2 = (big + 2) % 3;
  const double p = dot3(v[s1], f2) + dot3(v[s2], f3);
  const double q = dot3(v[s1], f3) - dot3(v[s2], f2);
  const double th = std::atan2(q, p);
  const double ct = std::cos(th), st = std::sin(th);
  Frame3 e;
  e[big] = f1;
  for (int i = 0; i < 3; ++i) {
    e[s1][i] = ct * f2[i] + st * f3[i];
    e[s2][i] = -st * f2[i] + ct * f3[i];
  }
  return e;
}

inline double lm_r3_value(const Vec3& a, const Vec3& b, const Vec3& c, const Frame3& e) {
  return dot3(a, e[0]) + dot3(b, e[1]) + dot3(c, e[2]);
}

// <g0 dxbar^dx g0^-1, P_- F0>
inline double rotated_pairing(const Su2TwoForm& f0, const UnitQuat& g0) {
  const Su2TwoForm d = dxbardx();
  Su2TwoForm r;
  for (int i = 0; i < 6; ++i) r[i] = adjoint(g0, d[i]);
  return inner(r, p_minus(f0));
}

// g0 with <g0 dxbar^dx g0^-1, P_- F0> >= (4/sqrt 3)|P_- F0|.
inline UnitQuat choose_g0(const Su2TwoForm& f0) {
  const Su2TwoForm pm = p_minus(f0);
  const double nrm = std::sqrt(norm2(pm));
  if (!(nrm > 0.0)) throw std::domain_error("P_- F0 vanishes: no g0 to choose");
  std::array<Vec3, 3> abc;
  for (int a = 0; a < 3; ++a) {
    const ImQuat q = (1.0 / nrm) * contract(pm, omega_minus(a));
    abc[a] = {q.pi, q.pj, q.pk};
  }
  const Frame3 e = lm_r3_frame(abc[0], abc[1], abc[2]);
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int col = 0; col < 3; ++col) r[i][col] = e[col][i];
  return su2_of(r);
}

// --------------------------------------------------------- smooth profile

// C-infinity ramp: inner transition of length width at tau, outer one of width/10 at 1.
inline CutoffProfile smooth_profile(double tau, double width) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
  if (!(width > 0.0 && width < 0.25 * (1.0 - tau)))
    throw std::invalid_argument("smooth profile width must lie in (0, (1 - tau)/4)");
  CutoffProfile p;
  p.kind = CutoffProfile::Kind::smooth;
  p.tau = tau;
  p.inner_width = width;
  p.outer_width = 0.1 * width;
  return p;
}

}  // namespace ymg
