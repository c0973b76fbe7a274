#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "ymg/fields.hpp"
#include "ymg/instanton.hpp"

namespace ymg {

namespace detail {

// exp(1 - 1/(1 - u)) for u = |x|^2 < 1, else 0; value and d/du.
inline std::pair<double, double> bump_of_r2(double u) {
  if (u >= 1.0) return {0.0, 0.0};
  const double q = 1.0 - u;
  const double b = std::exp(1.0 - 1.0 / q);
  return {b, -b / (q * q)};
}

struct PolyComponent {
  ImQuat v;
  std::array<ImQuat, 4> grad;
};

// Fixed non-radial polynomial coefficients with nonzero value at the origin.
inline std::array<PolyComponent, 4> bump_polynomial(const Vec4& x) {
  const ImQuat I{1, 0, 0}, J{0, 1, 0}, K{0, 0, 1}, Z{};
  std::array<PolyComponent, 4> p;
  // 0.3 i + x2 j - x3 x4 k
  p[0].v = 0.3 * I + x[1] * J - (x[2] * x[3]) * K;
  p[0].grad = {Z, J, -x[3] * K, -x[2] * K};
  // x1 k + x3^2 i - 0.2 j
  p[1].v = x[0] * K + (x[2] * x[2]) * I - 0.2 * J;
  p[1].grad = {K, Z, (2.0 * x[2]) * I, Z};
  // x4 i - x1 x2 j + 0.1 k
  p[2].v = x[3] * I - (x[0] * x[1]) * J + 0.1 * K;
  p[2].grad = {-x[1] * J, -x[0] * J, Z, I};
  // x2 k - x1 i + x3 j
  p[3].v = x[1] * K - x[0] * I + x[2] * J;
  p[3].grad = {-1.0 * I, K, J, Z};
  return p;
}

}  // namespace detail

// A = p beta(|x|) P(x): smooth, supported in the unit ball, not radial, A(0) != 0.
inline ConnectionField poly_bump(double p) {
  ConnectionField c;
  c.eval = [p](const Vec4& x) {
    const auto [b, db] = detail::bump_of_r2(dot(x, x));
    Su2OneForm a;
    if (b == 0.0) return a;
    const auto poly = detail::bump_polynomial(x);
    for (int m = 0; m < 4; ++m) a[m] = (p * b) * poly[m].v;
    return a;
  };
  c.jet = [p](const Vec4& x) {
    const auto [b, db] = detail::bump_of_r2(dot(x, x));
    Jet j;
    if (b == 0.0) return j;
    const auto poly = detail::bump_polynomial(x);
    for (int m = 0; m < 4; ++m) {
      j.a[m] = (p * b) * poly[m].v;
      for (int k = 0; k < 4; ++k) j.d[k][m] = (p * b) * poly[m].grad[k] + (p * db * 2.0 * x[k]) * poly[m].v;
    }
    return j;
  };
  c.decay = Decay::compact_curvature;
  c.support_radius = 1.0;
  return c;
}

struct NamedConnection {
  std::string name;
  double param = 0;
  ConnectionField field;
};

// "zero", "sd:L", "asd:L", "poly-bump:P"
inline NamedConnection connection_by_name(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  double param = 0;
  if (colon != std::string::npos) {
    const std::string tail = spec.substr(colon + 1);
    size_t used = 0;
    try {
      param = std::stod(tail, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad connection parameter in '" + spec + "'");
    }
    if (used != tail.size()) throw std::invalid_argument("bad connection parameter in '" + spec + "'");
  }
  if (head == "zero") {
    if (colon != std::string::npos) throw std::invalid_argument("'zero' takes no parameter");
    return {head, 0.0, zero_connection()};
  }
  if (colon == std::string::npos) throw std::invalid_argument("connection '" + head + "' needs a parameter");
  if (head == "sd") return {head, param, sd_lambda(param)};
  if (head == "asd") return {head, param, asd_lambda(param)};
  if (head == "poly-bump") return {head, param, poly_bump(param)};
  throw std::invalid_argument("unknown connection '" + head + "'");
}

}  // namespace ymg
