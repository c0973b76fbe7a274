#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ymg/fields.hpp"
#include "ymg/forms.hpp"
#include "ymg/gainopt.hpp"
#include "ymg/instanton.hpp"
#include "ymg/quad.hpp"

namespace ymg {

inline constexpr double kEightPi2 = 8.0 * kPi * kPi;

struct GlueParamsBC {
  double rho = 0.1;
  double tau = 0.35;
  double c0 = 1.0;  // lambda^2 = 1 / (c0 rho^4)
  UnitQuat g0{1, 0, 0, 0};
  CutoffProfile profile = affine_profile(0.35);

  double lambda() const { return 1.0 / (std::sqrt(c0) * rho * rho); }
};

struct GlueParamsTaubes {
  double rho = 0.1;
  double a = 1.1;
  double b = 0.9;
  UnitQuat g0{1, 0, 0, 0};
  CutoffProfile profile = affine_profile(0.5);  // supports [r/2, r] for both cutoffs

  double lambda() const { return 1.0 / (rho * rho); }
  double inner_radius() const { return std::pow(rho, a); }  // rho^a
  double outer_radius() const { return std::pow(rho, b); }  // rho^b
  // exponent of the first neglected correction relative to rho^4
  double delta() const {
    return std::min({b, 4.0 * (a - 1.0), 4.0 * (1.0 - b), 8.0 - 6.0 * a, 6.0 * b - 4.0, 4.0 - 2.0 * a, a});
  }
};

struct GlueRules {
  Resolution res{};
  bool coarse_check = true;  // repeat at lower resolution for a residual estimate
  double residual_tolerance = 1e-6;
};

struct GlueResult {
  double rho = 0, tau = 0, c0 = 0, a = 0, b = 0;
  double delta_ym = 0;         // YM(A-hat) - YM(A) through the P_- identity
  double gain_measured = 0;    // delta_ym - 8 pi^2
  double gain_predicted = 0;   // leading-order model as stated
  double gain_leading = 0;     // leading-order term the measurement converges to
  double chern_jump = 0;       // boundary CS of A-hat minus that of A, outside the gluing region
  double annulus_pminus = 0;   // integral of |P_- F_check|^2 over the gluing annulus
  double ball_pminus = 0;      // integral of |P_- F_A|^2 over the outer ball
  double direct_delta = std::numeric_limits<double>::quiet_NaN();
  double identity_residual = std::numeric_limits<double>::quiet_NaN();
  double quadrature_residual = std::numeric_limits<double>::quiet_NaN();
  bool flagged = false;
};

struct GluedPair {
  ConnectionField hat;
  ConnectionField check;
};

// ---------------------------------------------------------------- helpers

namespace detail {

inline void require_radial_gauge(const ConnectionField& a, double radius) {
  const Su2OneForm a0 = a.eval(Vec4{0, 0, 0, 0});
  for (int l = 0; l < 4; ++l)
    if (std::sqrt(im_norm2(a0[l])) > 1e-12) throw std::invalid_argument("connection must vanish at the origin");
  const QuadratureRule& rule = s3_rule_cached(2);
  for (double f : {0.25, 0.5, 1.0})
    for (const Vec4& s : rule.nodes) {
      const Su2OneForm v = a.eval(f * radius * s);
      const double scale = std::max(1e-300, std::sqrt(norm2(v)));
      if (std::sqrt(im_norm2(ymg::apply(v, s))) > 1e-9 * std::max(1.0, scale))
        throw std::invalid_argument("connection is not in radial gauge");
    }
}

inline Su2TwoForm origin_curvature(const ConnectionField& a) {
  const Su2TwoForm f0 = curvature(a, Vec4{0, 0, 0, 0});
  if (!(norm2(f0) > 0.0)) throw std::domain_error("F_A(0) vanishes");
  return f0;
}

// wx X + wy Y with scalar weights that carry gradients.
inline ConnectionField weighted_sum(const ScalarField& wx, const ConnectionField& x, const ScalarField& wy,
                                    const ConnectionField& y) {
  auto idle = [](const ScalarJet& s) {
    return s.v == 0.0 && s.grad[0] == 0.0 && s.grad[1] == 0.0 && s.grad[2] == 0.0 && s.grad[3] == 0.0;
  };
  ConnectionField c;
  c.eval = [=](const Vec4& p) {
    const ScalarJet sx = wx.eval(p), sy = wy.eval(p);
    Su2OneForm r;
    if (sx.v != 0.0) r = r + sx.v * x.eval(p);
    if (sy.v != 0.0) r = r + sy.v * y.eval(p);
    return r;
  };
  c.jet = [=](const Vec4& p) {
    const ScalarJet sx = wx.eval(p), sy = wy.eval(p);
    Jet j;
    auto add = [&](const ScalarJet& s, const ConnectionField& f) {
      if (idle(s)) return;
      const Jet jf = jet_of(f, p);
      j.a = j.a + s.v * jf.a;
      for (int k = 0; k < 4; ++k)
        for (int m = 0; m < 4; ++m) j.d[k][m] += s.grad[k] * jf.a[m] + s.v * jf.d[k][m];
    };
    add(sx, x);
    add(sy, y);
    return j;
  };
  c.singular_at_origin = x.singular_at_origin || y.singular_at_origin;
  return c;
}

inline ScalarField complement(const ScalarField& s) {
  return {[s](const Vec4& x) {
    ScalarJet j = s.eval(x);
    j.v = 1.0 - j.v;
    j.grad = -1.0 * j.grad;
    return j;
  }};
}

inline std::vector<double> scaled(const std::vector<double>& v, double f) {
  std::vector<double> r;
  for (double t : v) r.push_back(f * t);
  return r;
}

inline double pminus_density(const ConnectionField& a, const Vec4& x) { return norm2(p_minus(curvature(a, x))); }

}  // namespace detail

// --------------------------------------------------------- thin annulus

inline void validate(const GlueParamsBC& p) {
  if (!(p.rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (!(p.tau > 0.0 && p.tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
  if (!(p.c0 > 0.0)) throw std::invalid_argument("c0 must be positive");
  if (std::abs(p.profile.tau - p.tau) > 1e-15) throw std::invalid_argument("profile tau differs from tau");
  require_unit(p.g0);
}

// A-check = eta_rho g0^-1 (underline A) g0 + (1 - eta_rho) SD-tilde; A-hat = u A-check u-bar + u du-bar.
inline GluedPair build_bc_glued(const ConnectionField& a, const GlueParamsBC& p) {
  validate(p);
  detail::require_radial_gauge(a, p.rho);
  detail::origin_curvature(a);
  const ScalarField eta = cutoff_field(p.profile, p.rho);
  GluedPair out;
  out.check = blend(eta, gauge_const(radial_pullback(a, p.rho), p.g0), sd_tilde(p.lambda()));
  out.hat = degree_one_gauge(out.check);
  return out;
}

// Annulus-integral model (pi^2 rho^4 / 2) [bracket].
inline double gain_prediction_bc(const Su2TwoForm& f0, const GlueParamsBC& p, int quad_n = 64) {
  validate(p);
  const GainCoefficients c = gain_coefficients(p.profile, quad_n);
  const double bracket = bc_bracket(c, norm2(p_plus(f0)), norm2(p_minus(f0)), rotated_pairing(f0, p.g0), p.c0);
  return 0.5 * kPi * kPi * std::pow(p.rho, 4) * bracket;
}

inline double gain_prediction_bc_exact(const Su2TwoForm& f0, const GlueParamsBC& p, int quad_n = 64) {
  validate(p);
  const GainCoefficients c = gain_coefficients(p.profile, quad_n);
  const double bracket =
      bc_bracket_exact(c, norm2(p_plus(f0)), norm2(p_minus(f0)), rotated_pairing(f0, p.g0), p.c0);
  return 0.5 * kPi * kPi * std::pow(p.rho, 4) * bracket;
}

// Leading-order model of P_- d(A-check) at an annulus point.
inline Su2TwoForm pminus_dcheck_leading(const Su2TwoForm& f0, const UnitQuat& g0, const GlueParamsBC& p,
                                        const Vec4& x) {
  validate(p);
  const double r = norm(x);
  if (!(r > 0.0)) throw std::domain_error("leading model is undefined at the origin");
  const double t = r / p.rho;
  const double eta = p.profile.eta(t), etap = p.profile.eta_prime(t) / p.rho;
  const auto e = frame_vectors(x);
  const auto w = asd_frame_at(x);
  const ImQuat radial[3] = {ymg::apply(f0, e[0], e[1]), ymg::apply(f0, e[0], e[2]), ymg::apply(f0, e[0], e[3])};
  const ImQuat tangential[3] = {ymg::apply(f0, e[2], e[3]), ymg::apply(f0, e[3], e[1]), ymg::apply(f0, e[1], e[2])};
  const double l2 = p.lambda() * p.lambda();
  Su2TwoForm m;
  for (int k = 0; k < 3; ++k) {
    m = m + times(w[k], (p.rho * p.rho * etap / (2.0 * std::sqrt(2.0) * r)) * radial[k]);
    m = m - times(w[k], (p.rho * p.rho * eta / (std::sqrt(2.0) * r * r)) * tangential[k]);
  }
  const Su2TwoForm d = dxbardx();
  for (int i = 0; i < 6; ++i) m[i] -= (etap / (4.0 * l2 * r * r * r)) * adjoint(g0, d[i]);
  // the model describes g0 (P_- d A-check) g0^-1
  for (int i = 0; i < 6; ++i) m[i] = conj_adjoint(g0, m[i]);
  return m;
}

namespace detail {

struct BcIntegrals {
  double annulus_pminus, ball_pminus, annulus_full, ball_full;
};

inline BcIntegrals bc_integrals(const ConnectionField& a, const GluedPair& g, const GlueParamsBC& p,
                                const Resolution& res, bool with_full) {
  const QuadratureRule& rule = s3_rule_cached(res.s3_level);
  const std::vector<double> cuts = scaled(p.profile.breakpoints(), p.rho);
  BcIntegrals r{};
  r.annulus_pminus = shell_integrate([&](const Vec4& x) { return pminus_density(g.check, x); }, p.tau * p.rho, p.rho,
                                     res.radial_n, rule, cuts);
  r.ball_pminus = shell_integrate([&](const Vec4& x) { return pminus_density(a, x); }, 0.0, p.rho, res.radial_n, rule);
  if (with_full) {
    r.annulus_full = shell_integrate([&](const Vec4& x) { return norm2(curvature(g.check, x)); }, p.tau * p.rho,
                                     p.rho, res.radial_n, rule, cuts);
    r.ball_full = shell_integrate([&](const Vec4& x) { return norm2(curvature(a, x)); }, 0.0, p.rho, res.radial_n, rule);
  }
  return r;
}

inline Resolution coarser(const Resolution& r) { return {std::max(8, (2 * r.radial_n) / 3), std::max(3, r.s3_level - 2)}; }

}  // namespace detail

inline GlueResult energy_delta_bc(const ConnectionField& a, const GlueParamsBC& p, const GlueRules& rules = {}) {
  const GluedPair g = build_bc_glued(a, p);
  const Su2TwoForm f0 = detail::origin_curvature(a);
  const auto in = detail::bc_integrals(a, g, p, rules.res, true);

  GlueResult out;
  out.rho = p.rho;
  out.tau = p.tau;
  out.c0 = p.c0;
  out.a = out.b = std::numeric_limits<double>::quiet_NaN();
  out.annulus_pminus = in.annulus_pminus;
  out.ball_pminus = in.ball_pminus;
  out.gain_measured = 2.0 * in.annulus_pminus - 2.0 * in.ball_pminus;
  out.delta_ym = kEightPi2 + out.gain_measured;
  const double ball_model = kPi * kPi * std::pow(p.rho, 4) * norm2(p_minus(f0));
  out.gain_predicted = 2.0 * gain_prediction_bc(f0, p) - ball_model;
  out.gain_leading = 2.0 * gain_prediction_bc_exact(f0, p) - ball_model;

  // YM(A-hat) - YM(A) = E_SD(B_{tau rho}) + E(A-check, annulus) - E(A, B_rho)
  const double tail = sd_energy_tail(p.lambda() * p.tau * p.rho);
  const double direct_gain = -kEightPi2 * tail + in.annulus_full - in.ball_full;
  out.direct_delta = kEightPi2 + direct_gain;
  out.identity_residual = direct_gain - out.gain_measured;

  const QuadratureRule& rule = s3_rule_cached(rules.res.s3_level);
  const double rc = 2.0 * p.rho;
  out.chern_jump = chern_simons_sphere(g.hat, rc, rule) - chern_simons_sphere(a, rc, rule);

  if (rules.coarse_check) {
    const auto lo = detail::bc_integrals(a, g, p, detail::coarser(rules.res), false);
    out.quadrature_residual = std::abs(2.0 * (lo.annulus_pminus - lo.ball_pminus) - out.gain_measured);
    out.flagged = out.quadrature_residual > rules.residual_tolerance * std::max(1.0, std::abs(out.gain_measured));
  }
  return out;
}

// ------------------------------------------------------------- Taubes

inline void validate(const GlueParamsTaubes& p) {
  if (!(p.rho > 0.0 && p.rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
  if (!(p.b > 0.75 && p.b < 1.0 && p.a > 1.0 && p.a < 4.0 / 3.0))
    throw std::invalid_argument("exponents must satisfy 3/4 < b < 1 < a < 4/3");
  require_unit(p.g0);
}

// A-check = eta_{rho^a} g0^-1 A g0 + (1 - eta_{rho^b}) SD-tilde; A-hat = u A-check u-bar + u du-bar.
inline GluedPair build_taubes_glued(const ConnectionField& a, const GlueParamsTaubes& p) {
  validate(p);
  detail::require_radial_gauge(a, p.outer_radius());
  detail::origin_curvature(a);
  const ScalarField eta_a = cutoff_field(p.profile, p.inner_radius());
  const ScalarField eta_b = cutoff_field(p.profile, p.outer_radius());
  GluedPair out;
  out.check = detail::weighted_sum(eta_a, gauge_const(a, p.g0), detail::complement(eta_b), sd_tilde(p.lambda()));
  out.hat = degree_one_gauge(out.check);
  return out;
}

// Supports of the two cutoff derivatives meet when rho^a > tau rho^b.
inline bool taubes_supports_overlap(const GlueParamsTaubes& p) {
  return p.inner_radius() > p.profile.tau * p.outer_radius();
}

inline double gain_prediction_taubes(const Su2TwoForm& f0, const GlueParamsTaubes& p) {
  return -kPi * kPi * std::pow(p.rho, 4) * rotated_pairing(f0, p.g0);
}

// Limit of the measured gain: the cross term enters twice.
inline double gain_leading_taubes(const Su2TwoForm& f0, const GlueParamsTaubes& p) {
  return 2.0 * gain_prediction_taubes(f0, p);
}

namespace detail {

struct TaubesIntegrals {
  double annulus_pminus, ball_pminus, annulus_full, ball_full;
};

inline TaubesIntegrals taubes_integrals(const ConnectionField& a, const GluedPair& g, const GlueParamsTaubes& p,
                                        const Resolution& res, bool with_full) {
  const QuadratureRule& rule = s3_rule_cached(res.s3_level);
  const double ra = p.inner_radius(), rb = p.outer_radius(), r0 = p.profile.tau * ra;
  std::vector<double> cuts = scaled(p.profile.breakpoints(), ra);
  for (double c : scaled(p.profile.breakpoints(), rb)) cuts.push_back(c);
  TaubesIntegrals r{};
  r.annulus_pminus =
      shell_integrate([&](const Vec4& x) { return pminus_density(g.check, x); }, r0, rb, res.radial_n, rule, cuts);
  r.ball_pminus = shell_integrate([&](const Vec4& x) { return pminus_density(a, x); }, 0.0, rb, res.radial_n, rule);
  if (with_full) {
    r.annulus_full =
        shell_integrate([&](const Vec4& x) { return norm2(curvature(g.check, x)); }, r0, rb, res.radial_n, rule, cuts);
    r.ball_full = shell_integrate([&](const Vec4& x) { return norm2(curvature(a, x)); }, 0.0, rb, res.radial_n, rule);
  }
  return r;
}

}  // namespace detail

inline GlueResult energy_delta_taubes(const ConnectionField& a, const GlueParamsTaubes& p,
                                      const GlueRules& rules = {}) {
  const GluedPair g = build_taubes_glued(a, p);
  const Su2TwoForm f0 = detail::origin_curvature(a);
  const auto in = detail::taubes_integrals(a, g, p, rules.res, true);

  GlueResult out;
  out.rho = p.rho;
  out.tau = p.profile.tau;
  out.c0 = 1.0;
  out.a = p.a;
  out.b = p.b;
  out.annulus_pminus = in.annulus_pminus;
  out.ball_pminus = in.ball_pminus;
  out.gain_measured = 2.0 * in.annulus_pminus - 2.0 * in.ball_pminus;
  out.delta_ym = kEightPi2 + out.gain_measured;
  out.gain_predicted = gain_prediction_taubes(f0, p);
  out.gain_leading = gain_leading_taubes(f0, p);

  const double tail = sd_energy_tail(p.lambda() * p.profile.tau * p.inner_radius());
  const double direct_gain = -kEightPi2 * tail + in.annulus_full - in.ball_full;
  out.direct_delta = kEightPi2 + direct_gain;
  out.identity_residual = direct_gain - out.gain_measured;

  const QuadratureRule& rule = s3_rule_cached(rules.res.s3_level);
  const double rc = 2.0 * p.outer_radius();
  out.chern_jump = chern_simons_sphere(g.hat, rc, rule) - chern_simons_sphere(a, rc, rule);

  if (rules.coarse_check) {
    const auto lo = detail::taubes_integrals(a, g, p, detail::coarser(rules.res), false);
    out.quadrature_residual = std::abs(2.0 * (lo.annulus_pminus - lo.ball_pminus) - out.gain_measured);
    out.flagged = out.quadrature_residual > rules.residual_tolerance * std::max(1.0, std::abs(out.gain_measured));
  }
  return out;
}

// ------------------------------------------------------- parameter choice

struct AutoChoice {
  UnitQuat g0;
  double s;   // <g0 dxbar^dx g0^-1, P_- F0>
  double c0;  // minimizer of the bracket
};

inline AutoChoice auto_bc_choice(const Su2TwoForm& f0, const CutoffProfile& profile, int quad_n = 64) {
  AutoChoice c;
  c.g0 = choose_g0(f0);
  c.s = rotated_pairing(f0, c.g0);
  c.c0 = optimal_c0_from(gain_coefficients(profile, quad_n), c.s);
  return c;
}

// ------------------------------------------------------- sphere lemmas

struct S3LemmaIntegrals {
  double radial_sq = 0, radial_sq_closed = 0;          // sum |F0(d_r, e_l)|^2
  double tangential_sq = 0, tangential_sq_closed = 0;  // sum |F0(e_j, e_k)|^2
  double mixed = 0, mixed_closed = 0;                  // sum <F0(d_r, e_l), F0(e_j, e_k)>
  double mixed_exact = 0;                              // value the integrand actually has
  std::array<double, 3> radial_frame{}, tangential_frame{};
  double radial_frame_closed = 0, tangential_frame_closed = 0;
};

inline S3LemmaIntegrals s3_lemma_integrals(const Su2TwoForm& f0, const UnitQuat& g0, const QuadratureRule& rule) {
  require_unit(g0);
  const Su2TwoForm d = dxbardx();
  Su2TwoForm rd;
  for (int i = 0; i < 6; ++i) rd[i] = adjoint(g0, d[i]);
  std::array<CompensatedSum, 9> acc;
  for (size_t q = 0; q < rule.nodes.size(); ++q) {
    const Vec4& x = rule.nodes[q];
    const double w = rule.weights[q];
    const auto e = frame_vectors(x);
    const auto om = asd_frame_at(x);
    const ImQuat rad[3] = {ymg::apply(f0, e[0], e[1]), ymg::apply(f0, e[0], e[2]), ymg::apply(f0, e[0], e[3])};
    const ImQuat tan[3] = {ymg::apply(f0, e[2], e[3]), ymg::apply(f0, e[3], e[1]), ymg::apply(f0, e[1], e[2])};
    double r2 = 0, t2 = 0, mx = 0;
    for (int k = 0; k < 3; ++k) {
      r2 += im_norm2(rad[k]);
      t2 += im_norm2(tan[k]);
      mx += inner(rad[k], tan[k]);
      acc[3 + k].add(w * inner(rd, times(om[k], rad[k])));
      acc[6 + k].add(w * inner(rd, times(om[k], tan[k])));
    }
    acc[0].add(w * r2);
    acc[1].add(w * t2);
    acc[2].add(w * mx);
  }
  S3LemmaIntegrals r;
  r.radial_sq = acc[0].value();
  r.tangential_sq = acc[1].value();
  r.mixed = acc[2].value();
  for (int k = 0; k < 3; ++k) {
    r.radial_frame[k] = acc[3 + k].value();
    r.tangential_frame[k] = acc[6 + k].value();
  }
  const double pi2 = kPi * kPi, pair = inner(rd, p_minus(f0));
  r.radial_sq_closed = r.tangential_sq_closed = pi2 * norm2(f0);
  r.mixed_closed = pi2 / std::sqrt(2.0) * (norm2(p_plus(f0)) - norm2(p_minus(f0)));
  r.mixed_exact = pi2 * (norm2(p_plus(f0)) - norm2(p_minus(f0)));
  r.radial_frame_closed = std::sqrt(2.0) / 3.0 * pi2 * pair;
  r.tangential_frame_closed = -r.radial_frame_closed;
  return r;
}

// ---------------------------------------------------------------- fits

// Least-squares C in gain / rho^4 ~ C, so every grid point carries equal relative weight.
inline double fit_rho4(const std::vector<double>& rho, const std::vector<double>& gain) {
  if (rho.size() != gain.size() || rho.empty()) throw std::invalid_argument("fit needs matching nonempty grids");
  double sum = 0;
  for (size_t i = 0; i < rho.size(); ++i) sum += gain[i] / std::pow(rho[i], 4);
  return sum / static_cast<double>(rho.size());
}

// Least squares of gain / rho^4 ~ C + D rho^delta; returns {C, D}.
inline std::array<double, 2> fit_rho4_corrected(const std::vector<double>& rho, const std::vector<double>& gain,
                                                double delta) {
  if (rho.size() != gain.size() || rho.size() < 2) throw std::invalid_argument("corrected fit needs two points");
  double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (size_t i = 0; i < rho.size(); ++i) {
    const double xv = std::pow(rho[i], delta), yv = gain[i] / std::pow(rho[i], 4);
    s1 += 1;
    sx += xv;
    sxx += xv * xv;
    sy += yv;
    sxy += xv * yv;
  }
  const double det = s1 * sxx - sx * sx;
  if (det == 0.0) throw std::invalid_argument("degenerate grid for corrected fit");
  return {(sxx * sy - sx * sxy) / det, (s1 * sxy - sx * sy) / det};
}

}  // namespace ymg
