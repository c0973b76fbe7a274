#include <catch2/catch_amalgamated.hpp>

#include "ymg/fields.hpp"
#include "ymg/instanton.hpp"
#include "ymg/legendre.hpp"
#include "ymg/sampling.hpp"

using namespace ymg;
using Catch::Approx;

namespace {

double max_abs(const ImQuat& p) { return std::max({std::abs(p.pi), std::abs(p.pj), std::abs(p.pk)}); }
double max_abs(const Su2OneForm& a) {
  double m = 0;
  for (int l = 0; l < 4; ++l) m = std::max(m, max_abs(a[l]));
  return m;
}
double max_abs(const Su2TwoForm& f) {
  double m = 0;
  for (int i = 0; i < 6; ++i) m = std::max(m, max_abs(f[i]));
  return m;
}

}  // namespace

TEST_CASE("SD instanton values") {
  const ConnectionField sd = sd_lambda(1.0);
  REQUIRE(max_abs(sd.eval(Vec4{})) == 0.0);
  const Su2OneForm a = sd.eval(Vec4{1, 0, 0, 0});
  REQUIRE(max_abs(a[0]) == 0.0);
  REQUIRE(max_abs(a[1] - ImQuat{-0.5, 0, 0}) < 1e-16);
  REQUIRE(max_abs(a[2] - ImQuat{0, -0.5, 0}) < 1e-16);
  REQUIRE(max_abs(a[3] - ImQuat{0, 0, -0.5}) < 1e-16);

  // A^2 = (-x1 i - x4 j + x3 k) / (1 + |x|^2)
  Rng rng(201);
  for (int n = 0; n < 20; ++n) {
    const Vec4 x = random_point(rng, 0.0, 3.0);
    const double den = 1.0 + dot(x, x);
    REQUIRE(max_abs(sd.eval(x)[1] - (1.0 / den) * ImQuat{-x[0], -x[3], x[2]}) < 1e-15);
    REQUIRE(max_abs(ymg::apply(sd.eval(x), (1.0 / norm(x)) * x)) < 1e-15);
    REQUIRE(max_abs(ymg::apply(asd_lambda(2.0).eval(x), (1.0 / norm(x)) * x)) < 1e-15);
  }
  REQUIRE_THROWS_AS(sd_lambda(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(asd_lambda(-1.0), std::invalid_argument);
}

TEST_CASE("SD curvature") {
  Rng rng(202);
  for (double lam : {0.5, 1.0, 2.0}) {
    const ConnectionField sd = sd_lambda(lam);
    for (int n = 0; n < 30; ++n) {
      const Vec4 x = random_point(rng, 0.0, 3.0);
      const Su2TwoForm f = sd_curvature(lam, x);
      REQUIRE(norm2(p_minus(f)) == 0.0);
      const double den = 1.0 + lam * lam * dot(x, x);
      REQUIRE(norm2(f) == Approx(48.0 * std::pow(lam, 4) / std::pow(den, 4)).epsilon(1e-13));
      REQUIRE(max_abs(curvature(sd, x) - f) < 1e-12 * std::max(1.0, lam * lam));
    }
  }
}

TEST_CASE("ASD curvature") {
  Rng rng(203);
  const ConnectionField asd = asd_lambda(1.0);
  REQUIRE(max_abs(asd_curvature(1.0, Vec4{}) - dxbardx()) == 0.0);
  REQUIRE(max_abs(curvature(asd, Vec4{}) - dxbardx()) < 1e-15);
  const Su2TwoForm f0 = curvature(asd, Vec4{});
  REQUIRE(norm2(p_plus(f0)) <= norm2(p_minus(f0)));
  for (int n = 0; n < 30; ++n) {
    const Vec4 x = random_point(rng, 0.0, 3.0);
    const Su2TwoForm f = asd_curvature(1.5, x);
    REQUIRE(norm2(p_plus(f)) == 0.0);
    REQUIRE(max_abs(curvature(asd_lambda(1.5), x) - f) < 1e-12);
  }
}

TEST_CASE("SD-tilde") {
  Rng rng(204);
  const double lam = 1.3;
  const ConnectionField st = sd_tilde(lam), back = degree_one_gauge(st), sd = sd_lambda(lam);
  const ConnectionField st_fd = without_jacobian(st);
  for (int n = 0; n < 30; ++n) {
    const Vec4 x = random_point(rng, 0.05, 3.0);
    REQUIRE(max_abs(back.eval(x) - sd.eval(x)) < 1e-13);
    REQUIRE(max_abs(ymg::apply(st.eval(x), (1.0 / norm(x)) * x)) < 1e-15);
    // gauge-equivalent to SD, so the curvature norm matches
    REQUIRE(norm2(curvature(st, x)) == Approx(norm2(sd_curvature(lam, x))).epsilon(1e-10));
    REQUIRE(max_abs(curvature(st, x) - curvature(st_fd, x)) < 1e-7 * std::max(1.0, max_abs(curvature(st, x))));
  }
  REQUIRE_THROWS_AS(st.eval(Vec4{}), std::domain_error);

  // sup |SD-tilde| on B_rho \ B_{tau rho} scales like rho for lambda^2 = 1/(c0 rho^4)
  const double c0 = 2.0, tau = 0.35;
  std::vector<double> ratio;
  for (double rho : {0.1, 0.01, 0.001}) {
    const ConnectionField f = sd_tilde(1.0 / (std::sqrt(c0) * rho * rho));
    double sup = 0;
    for (int n = 0; n < 50; ++n) {
      const Vec4 d = random_direction(rng);
      for (double t : {tau, 0.5, 0.75, 1.0}) sup = std::max(sup, std::sqrt(norm2(f.eval((t * rho) * d))));
    }
    ratio.push_back(sup / rho);
  }
  REQUIRE(ratio[0] <= ratio[1]);
  // limit sqrt(6) c0 / tau^3 from the inner sphere
  const double limit = std::sqrt(6.0) * c0 / std::pow(tau, 3);
  REQUIRE(ratio[1] == Approx(limit).epsilon(1e-2));
  REQUIRE(ratio[2] == Approx(limit).epsilon(1e-4));
}

TEST_CASE("energy in a ball") {
  const double e8 = 8.0 * kPi * kPi;
  REQUIRE(sd_energy_ball(1.0, INFINITY) == e8);
  REQUIRE(sd_energy_ball(3.0, 0.0) == 0.0);
  // 96 pi^2 s^3 / (1 + s^2)^4 on [0, 1]
  const LineRule g = gauss_legendre(60, 0.0, 1.0);
  double ref = 0;
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    const double s = g.nodes[i];
    ref += g.weights[i] * 96.0 * kPi * kPi * s * s * s / std::pow(1.0 + s * s, 4);
  }
  REQUIRE(sd_energy_ball(1.0, 1.0) == Approx(ref).epsilon(1e-12));
  REQUIRE(sd_energy_ball(1.0, 1.0) == Approx(e8 * (1.0 - sd_energy_tail(1.0))).epsilon(1e-15));
  REQUIRE(sd_energy_ball(2.0, 0.5) == Approx(sd_energy_ball(1.0, 1.0)).epsilon(1e-15));
  REQUIRE_THROWS_AS(sd_energy_ball(1.0, -1.0), std::invalid_argument);
}
