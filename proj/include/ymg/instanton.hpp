#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ymg/fields.hpp"

namespace ymg {

enum class InstantonKind { sd, asd };

struct InstantonParams {
  double lambda = 1.0;
  InstantonKind kind = InstantonKind::sd;
};

namespace detail {

inline const Quat& basis_quat(int m) {
  static const Quat b[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  return b[m];
}

inline void require_lambda(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("instanton scale lambda must be positive");
}

// Im(lambda^2 x dxbar / (1 + lambda^2 |x|^2)) or its mirror Im(lambda^2 xbar dx / ...).
inline ConnectionField instanton(double lambda, InstantonKind kind) {
  require_lambda(lambda);
  const double l2 = lambda * lambda;
  auto coeff = [kind](const Quat& x, int m) {
    return kind == InstantonKind::sd ? im(x * conj(basis_quat(m))) : im(conj(x) * basis_quat(m));
  };
  ConnectionField c;
  c.eval = [l2, coeff](const Vec4& x) {
    const Quat xq = to_quat(x);
    const double den = 1.0 + l2 * dot(x, x);
    Su2OneForm a;
    for (int m = 0; m < 4; ++m) a[m] = (l2 / den) * coeff(xq, m);
    return a;
  };
  c.jet = [l2, coeff](const Vec4& x) {
    const Quat xq = to_quat(x);
    const double den = 1.0 + l2 * dot(x, x);
    Jet j;
    for (int m = 0; m < 4; ++m) {
      const ImQuat cm = coeff(xq, m);
      j.a[m] = (l2 / den) * cm;
      for (int k = 0; k < 4; ++k)
        j.d[k][m] = (l2 / den) * coeff(basis_quat(k), m) - (2.0 * l2 * l2 * x[k] / (den * den)) * cm;
    }
    return j;
  };
  c.decay = Decay::instanton_like;
  return c;
}

}  // namespace detail

inline ConnectionField sd_lambda(double lambda) { return detail::instanton(lambda, InstantonKind::sd); }
inline ConnectionField asd_lambda(double lambda) { return detail::instanton(lambda, InstantonKind::asd); }

inline ConnectionField instanton(const InstantonParams& p) { return detail::instanton(p.lambda, p.kind); }

// lambda^2 dx^dxbar / (1 + lambda^2 |x|^2)^2
inline Su2TwoForm sd_curvature(double lambda, const Vec4& x) {
  detail::require_lambda(lambda);
  const double l2 = lambda * lambda, den = 1.0 + l2 * dot(x, x);
  return (l2 / (den * den)) * dxdxbar();
}

inline Su2TwoForm asd_curvature(double lambda, const Vec4& x) {
  detail::require_lambda(lambda);
  const double l2 = lambda * lambda, den = 1.0 + l2 * dot(x, x);
  return (l2 / (den * den)) * dxbardx();
}

// -(1 / (1 + lambda^2 |x|^2)) d(xbar/|x|) (x/|x|)
inline ConnectionField sd_tilde(double lambda) {
  detail::require_lambda(lambda);
  const double l2 = lambda * lambda;
  ConnectionField c;
  c.eval = [l2](const Vec4& x) {
    const double r2 = dot(x, x);
    if (r2 == 0.0) throw std::domain_error("sd_tilde is singular at the origin");
    const Quat xq = to_quat(x);
    const double f = -1.0 / (r2 * (1.0 + l2 * r2));
    Su2OneForm a;
    for (int m = 0; m < 4; ++m) a[m] = f * im(conj(detail::basis_quat(m)) * xq);
    return a;
  };
  c.jet = [l2](const Vec4& x) {
    const double r2 = dot(x, x);
    if (r2 == 0.0) throw std::domain_error("sd_tilde is singular at the origin");
    const Quat xq = to_quat(x);
    const double q = r2 * (1.0 + l2 * r2);
    const double f = -1.0 / q;
    const double fk = (2.0 + 4.0 * l2 * r2) / (q * q);
    Jet j;
    for (int m = 0; m < 4; ++m) {
      const ImQuat cm = im(conj(detail::basis_quat(m)) * xq);
      j.a[m] = f * cm;
      for (int k = 0; k < 4; ++k)
        j.d[k][m] = (fk * x[k]) * cm + f * im(conj(detail::basis_quat(m)) * detail::basis_quat(k));
    }
    return j;
  };
  c.singular_at_origin = true;
  c.decay = Decay::instanton_like;
  return c;
}

// Fraction of the 8 pi^2 instanton energy outside B_R, as a function of z = lambda R.
inline double sd_energy_tail(double z) {
  if (std::isinf(z)) return 0.0;
  const double u = 1.0 + z * z;
  return (3.0 * u - 2.0) / (u * u * u);
}

// Energy of SD_lambda (or ASD_lambda) inside B_R.
inline double sd_energy_ball(double lambda, double r) {
  detail::require_lambda(lambda);
  if (r < 0.0) throw std::invalid_argument("radius must be nonnegative");
  return 8.0 * kPi * kPi * (1.0 - sd_energy_tail(lambda * r));
}

}  // namespace ymg
