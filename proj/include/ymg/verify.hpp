#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ymg/catalog.hpp"
#include "ymg/fields.hpp"
#include "ymg/forms.hpp"
#include "ymg/glue.hpp"
#include "ymg/instanton.hpp"
#include "ymg/quad.hpp"
#include "ymg/quat.hpp"
#include "ymg/sampling.hpp"

namespace ymg {

struct CheckRow {
  std::string suite;
  std::string name;
  double closed_form = 0;
  double numeric = 0;
  double abs_err = 0;
  double tolerance = 0;
  bool pass = false;
};

struct VerifyOptions {
  unsigned long long seed = 20240611ULL;
  Resolution res{};
};

namespace detail {

inline CheckRow row(const std::string& suite, const std::string& name, double closed, double numeric, double tol) {
  const double err = std::abs(numeric - closed);
  return {suite, name, closed, numeric, err, tol, err <= tol};
}

// numeric <= bound
inline CheckRow bound_row(const std::string& suite, const std::string& name, double bound, double numeric) {
  const double excess = std::max(0.0, numeric - bound);
  return {suite, name, bound, numeric, excess, 0.0, numeric <= bound};
}

inline double max_abs(const ImQuat& p) { return std::max({std::abs(p.pi), std::abs(p.pj), std::abs(p.pk)}); }
inline double max_abs(const Quat& q) {
  return std::max({std::abs(q.w), std::abs(q.xi), std::abs(q.xj), std::abs(q.xk)});
}
inline double max_abs(const Su2TwoForm& f) {
  double m = 0;
  for (int i = 0; i < 6; ++i) m = std::max(m, max_abs(f[i]));
  return m;
}
inline double max_abs(const RealTwoForm& f) {
  double m = 0;
  for (int i = 0; i < 6; ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

}  // namespace detail

// ---------------------------------------------------------------- algebra

inline std::vector<CheckRow> verify_algebra(const VerifyOptions& o = {}) {
  using detail::max_abs;
  using detail::row;
  const std::string s = "algebra";
  Rng rng(o.seed);
  std::vector<CheckRow> out;
  const ImQuat I{1, 0, 0}, J{0, 1, 0}, K{0, 0, 1};
  out.push_back(row(s, "i*j = k", 0.0, max_abs(I * J - as_quat(K)), 0.0));
  out.push_back(row(s, "[i,j] = 2k", 0.0, max_abs(bracket(I, J) - 2.0 * K), 0.0));
  out.push_back(row(s, "[j,k] = 2i", 0.0, max_abs(bracket(J, K) - 2.0 * I), 0.0));
  out.push_back(row(s, "im_norm2(i)", 2.0, im_norm2(I), 0.0));
  out.push_back(row(s, "im_norm2(i+j+k)", 6.0, im_norm2(I + J + K), 0.0));

  double jac = 0, iso = 0, hom = 0, anti = 0;
  for (int n = 0; n < 1000; ++n) {
    const ImQuat p = random_im(rng), q = random_im(rng), r = random_im(rng);
    jac = std::max(jac, max_abs(bracket(p, bracket(q, r)) + bracket(q, bracket(r, p)) + bracket(r, bracket(p, q))));
    anti = std::max(anti, max_abs(bracket(p, q) + bracket(q, p)));
    const UnitQuat g = random_unit_quat(rng), h = random_unit_quat(rng);
    iso = std::max(iso, std::abs(im_norm2(adjoint(g, p)) - im_norm2(p)) / im_norm2(p));
    const Mat3 a = so3_of(g * h), b = so3_of(g), c = so3_of(h);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double bc = 0;
        for (int k = 0; k < 3; ++k) bc += b[i][k] * c[k][j];
        hom = std::max(hom, std::abs(a[i][j] - bc));
      }
  }
  out.push_back(row(s, "bracket antisymmetry", 0.0, anti, 1e-13));
  out.push_back(row(s, "Jacobi identity", 0.0, jac, 1e-13));
  out.push_back(row(s, "adjoint isometry (relative)", 0.0, iso, 1e-12));
  out.push_back(row(s, "so3 homomorphism", 0.0, hom, 1e-12));

  double rt = 0;
  for (int n = 0; n < 200; ++n) {
    const Mat3 r = random_rotation(rng), back = so3_of(su2_of(r));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) rt = std::max(rt, std::abs(back[i][j] - r[i][j]));
  }
  out.push_back(row(s, "so3(su2(R)) = R", 0.0, rt, 1e-12));

  double star2 = 0, split = 0, frame = 0;
  for (int n = 0; n < 200; ++n) {
    const Su2TwoForm f = random_two_form(rng);
    star2 = std::max(star2, max_abs(hodge_star(hodge_star(f)) - f));
    split = std::max(split, std::abs(norm2(p_plus(f)) + norm2(p_minus(f)) - norm2(f)));
    const auto w = asd_frame_at(random_point(rng, 0.1, 3.0));
    for (int a = 0; a < 3; ++a) {
      frame = std::max(frame, max_abs(hodge_star(w[a]) + w[a]));
      for (int b = 0; b < 3; ++b) frame = std::max(frame, std::abs(inner(w[a], w[b]) - (a == b ? 1.0 : 0.0)));
    }
  }
  out.push_back(row(s, "star star = 1", 0.0, star2, 0.0));
  out.push_back(row(s, "|P+F|^2 + |P-F|^2 = |F|^2", 0.0, split, 1e-12));
  out.push_back(row(s, "ASD frame orthonormal", 0.0, frame, 1e-14));

  Su2TwoForm plus, minus;
  for (int a = 0; a < 3; ++a) {
    plus = plus + times(omega_plus(a), -2.0 * std::sqrt(2.0) * unit_im(a));
    minus = minus + times(omega_minus(a), 2.0 * std::sqrt(2.0) * unit_im(a));
  }
  // direct wedge of the quaternion-valued forms dx and dxbar
  Su2TwoForm w1, w2;
  for (int i = 0; i < 6; ++i) {
    const int l = kPairs[i][0], m = kPairs[i][1];
    const Quat el = detail::basis_quat(l), em = detail::basis_quat(m);
    w1[i] = im(el * conj(em) - em * conj(el));
    w2[i] = im(conj(el) * em - conj(em) * el);
  }
  out.push_back(row(s, "dx^dxbar = -2 sqrt2 sum omega+", 0.0, max_abs(w1 - plus), 1e-15));
  out.push_back(row(s, "dxbar^dx = 2 sqrt2 sum omega-", 0.0, max_abs(w2 - minus), 1e-15));
  return out;
}

// --------------------------------------------------------------- appendix

inline std::vector<CheckRow> verify_appendix(const VerifyOptions& o = {}) {
  using detail::row;
  const std::string s = "appendix";
  std::vector<CheckRow> out;
  const QuadratureRule& rule = s3_rule_cached(o.res.s3_level);
  const double pi2 = kPi * kPi;
  auto mom = [&](int a, int b, int c, int d) {
    return s3_integrate([=](const Vec4& x) { return std::pow(x[0], a) * std::pow(x[1], b) * std::pow(x[2], c) *
                                                    std::pow(x[3], d); },
                        rule);
  };
  out.push_back(row(s, "sphere moment: int x1^2", pi2 / 2.0, mom(2, 0, 0, 0), 1e-12));
  out.push_back(row(s, "sphere moment: int x3^4", pi2 / 4.0, mom(0, 0, 4, 0), 1e-12));
  out.push_back(row(s, "sphere moment: int x2^2 x4^2", pi2 / 12.0, mom(0, 2, 0, 2), 1e-12));
  out.push_back(row(s, "sphere moment: int x1 x2^2 (odd)", 0.0, mom(1, 2, 0, 0), 1e-12));

  Rng rng(o.seed + 1);
  const Su2TwoForm f0 = random_two_form(rng);
  const UnitQuat g0 = random_unit_quat(rng);
  const S3LemmaIntegrals l = s3_lemma_integrals(f0, g0, rule);
  out.push_back(row(s, "quadratic: radial row", l.radial_sq_closed, l.radial_sq, 1e-6));
  out.push_back(row(s, "quadratic: tangential row", l.tangential_sq_closed, l.tangential_sq, 1e-6));
  out.push_back(row(s, "mixed: stated (pi^2/sqrt2)(|P+|^2-|P-|^2)", l.mixed_closed, l.mixed, 1e-6));
  out.push_back(row(s, "mixed: pi^2 (|P+|^2-|P-|^2)", l.mixed_exact, l.mixed, 1e-6));
  const char* tag[3] = {"i", "j", "k"};
  for (int k = 0; k < 3; ++k)
    out.push_back(row(s, std::string("frame eta-prime: ") + tag[k], l.radial_frame_closed, l.radial_frame[k], 1e-6));
  for (int k = 0; k < 3; ++k)
    out.push_back(
        row(s, std::string("frame eta: ") + tag[k], l.tangential_frame_closed, l.tangential_frame[k], 1e-6));

  double frame = 0;
  for (int n = 0; n < 200; ++n) {
    const auto w = asd_frame_at(random_point(rng, 1e-3, 10.0));
    for (int a = 0; a < 3; ++a) {
      frame = std::max(frame, detail::max_abs(hodge_star(w[a]) + w[a]));
      for (int b = 0; b < 3; ++b) frame = std::max(frame, std::abs(inner(w[a], w[b]) - (a == b ? 1.0 : 0.0)));
    }
  }
  out.push_back(row(s, "asd frame: orthonormal ASD basis", 0.0, frame, 1e-14));
  return out;
}

// ------------------------------------------------------------------ gauge

inline std::vector<CheckRow> verify_gauge(const VerifyOptions& o = {}) {
  using detail::row;
  const std::string s = "gauge";
  std::vector<CheckRow> out;
  const QuadratureRule& rule = s3_rule_cached(o.res.s3_level);
  const double e8 = -8.0 * kPi * kPi;

  // boundary CS of the degree-one gauge change of ASD_1, linear extrapolation in eps
  const ConnectionField tilde = degree_one_gauge(asd_lambda(1.0));
  const double c1 = chern_simons_sphere(tilde, 0.05, rule), c2 = chern_simons_sphere(tilde, 0.025, rule);
  out.push_back(row(s, "degree change: CS(eps -> 0)", e8, 2.0 * c2 - c1, 1e-3 * 8.0 * kPi * kPi));
  out.push_back(row(s, "degree change: pure gauge u du-bar", e8,
                    chern_simons_sphere(degree_one_gauge(zero_connection()), 1.0, rule), 1e-9));

  Rng rng(o.seed + 2);
  // curvature transforms by conjugation
  const GaugeField g = product_exp_gauge({random_im(rng), random_im(rng), random_im(rng), random_im(rng)});
  const ConnectionField a = poly_bump(0.4), ag = gauge_transform(a, g);
  double inv = 0;
  for (int n = 0; n < 100; ++n) {
    const Vec4 x = random_point(rng, 0.0, 0.95);
    inv = std::max(inv, std::abs(norm2(curvature(ag, x)) - norm2(curvature(a, x))));
  }
  out.push_back(row(s, "|F_{A^g}|^2 = |F_A|^2", 0.0, inv, 1e-9));

  // exponential gauge
  const QuadratureRule& rays = s3_rule_cached(4);
  const ExpGauge e1 = exp_gauge(asd_lambda(1.0), 0.5, rays, 200);
  out.push_back(row(s, "exp gauge residual (asd:1)", 0.0, e1.radial_residual, 1e-8));
  const ConnectionField bump = poly_bump(0.3);
  const ExpGauge e2 = exp_gauge(bump, 0.5, rays, 200);
  out.push_back(row(s, "exp gauge residual (poly-bump)", 0.0, e2.radial_residual, 1e-8));

  // |A^g(x)| <= sup_{B_r} |F| |x|
  double sup_f = 0;
  for (double r : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5})
    for (const Vec4& n : rays.nodes) sup_f = std::max(sup_f, std::sqrt(norm2(curvature(bump, r * n))));
  double worst = 0;
  for (int n = 0; n < 100; ++n) {
    const Vec4 x = random_point(rng, 0.01, 0.5);
    worst = std::max(worst, std::sqrt(norm2(e2.field.eval(x))) / (sup_f * norm(x)));
  }
  out.push_back(detail::bound_row(s, "exp gauge linear bound: max |A^g|/(sup|F| |x|)", 1.0, worst));

  // radial reconstruction from the curvature
  const ConnectionField asd = asd_lambda(1.0);
  double rec = 0;
  for (int n = 0; n < 50; ++n) {
    const Vec4 x = random_point(rng, 0.05, 2.0);
    const Su2OneForm want = asd.eval(x);
    const Su2OneForm got = radial_reconstruction([&](const Vec4& y) { return curvature(asd, y); }, x, 32);
    for (int m = 0; m < 4; ++m) rec = std::max(rec, detail::max_abs(got[m] - want[m]));
  }
  out.push_back(row(s, "radial gauge reconstruction from F", 0.0, rec, 1e-12));
  return out;
}

// -------------------------------------------------------------- instanton

inline std::vector<CheckRow> verify_instanton(const VerifyOptions& o = {}) {
  using detail::row;
  const std::string s = "instanton";
  std::vector<CheckRow> out;
  const double e8 = 8.0 * kPi * kPi;
  for (double lam : {0.5, 1.0, 2.0}) {
    const double ym = ym_energy(sd_lambda(lam), Domain::whole_space(), o.res);
    out.push_back(row(s, "YM(SD_" + std::to_string(lam).substr(0, 3) + ") = 8 pi^2", e8, ym, 1e-6 * e8));
  }
  out.push_back(row(s, "sd_energy_ball(1, inf) = 8 pi^2", e8, sd_energy_ball(1.0, INFINITY), 0.0));

  Rng rng(o.seed + 3);
  double pm_exact = 0, pm_fd = 0, i13 = 0, asd_plus = 0;
  const ConnectionField sd = sd_lambda(1.0), sd_fd = without_jacobian(sd);
  const ConnectionField asd = asd_lambda(1.0);
  for (int n = 0; n < 100; ++n) {
    const Vec4 x = random_point(rng, 0.0, 2.0);
    const Su2TwoForm f = curvature(sd, x);
    pm_exact = std::max(pm_exact, norm2(p_minus(f)));
    pm_fd = std::max(pm_fd, norm2(p_minus(curvature(sd_fd, x))));
    i13 = std::max(i13, detail::max_abs(f - sd_curvature(1.0, x)));
    asd_plus = std::max(asd_plus, norm2(p_plus(curvature(asd, x))));
  }
  out.push_back(row(s, "|P-F_SD|^2 (analytic jacobian)", 0.0, pm_exact, 1e-24));
  out.push_back(row(s, "|P-F_SD|^2 (finite differences)", 0.0, pm_fd, 1e-10));
  out.push_back(row(s, "F_SD = dx^dxbar/(1+|x|^2)^2", 0.0, i13, 1e-13));
  out.push_back(row(s, "|P+F_ASD|^2", 0.0, asd_plus, 1e-24));
  out.push_back(row(s, "F_ASD(0) = dxbar^dx", 0.0, detail::max_abs(curvature(asd, Vec4{}) - dxbardx()), 1e-15));

  // degree-one change of SD-tilde gives back SD
  const double lam = 1.7;
  const ConnectionField back = degree_one_gauge(sd_tilde(lam)), sdl = sd_lambda(lam);
  double dg = 0;
  for (int n = 0; n < 100; ++n) {
    const Vec4 x = random_point(rng, 0.05, 3.0);
    const Su2OneForm a = back.eval(x), b = sdl.eval(x);
    for (int m = 0; m < 4; ++m) dg = std::max(dg, detail::max_abs(a[m] - b[m]));
  }
  out.push_back(row(s, "u SD-tilde u-bar + u du-bar = SD", 0.0, dg, 1e-13));
  return out;
}

inline std::vector<CheckRow> verify_suite(const std::string& name, const VerifyOptions& o = {}) {
  if (name == "algebra") return verify_algebra(o);
  if (name == "appendix") return verify_appendix(o);
  if (name == "gauge") return verify_gauge(o);
  if (name == "instanton") return verify_instanton(o);
  if (name == "all") {
    std::vector<CheckRow> all;
    for (const char* n : {"algebra", "appendix", "gauge", "instanton"}) {
      auto r = verify_suite(n, o);
      all.insert(all.end(), r.begin(), r.end());
    }
    return all;
  }
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace ymg
