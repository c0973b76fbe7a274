#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace ymg {

// Quaternion w + xi i + xj j + xk k.
struct Quat {
  double w = 0, xi = 0, xj = 0, xk = 0;
};

// Imaginary quaternion, an element of su(2).
struct ImQuat {
  double pi = 0, pj = 0, pk = 0;
};

// Unit quaternion, an element of SU(2). Unit length is checked where it matters.
using UnitQuat = Quat;

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

inline constexpr double kPi = 3.14159265358979323846;

inline Quat operator+(const Quat& a, const Quat& b) { return {a.w + b.w, a.xi + b.xi, a.xj + b.xj, a.xk + b.xk}; }
inline Quat operator-(const Quat& a, const Quat& b) { return {a.w - b.w, a.xi - b.xi, a.xj - b.xj, a.xk - b.xk}; }
inline Quat operator-(const Quat& a) { return {-a.w, -a.xi, -a.xj, -a.xk}; }
inline Quat operator*(double s, const Quat& a) { return {s * a.w, s * a.xi, s * a.xj, s * a.xk}; }

inline Quat quat_mul(const Quat& p, const Quat& q) {
  return {p.w * q.w - p.xi * q.xi - p.xj * q.xj - p.xk * q.xk,
          p.w * q.xi + p.xi * q.w + p.xj * q.xk - p.xk * q.xj,
          p.w * q.xj - p.xi * q.xk + p.xj * q.w + p.xk * q.xi,
          p.w * q.xk + p.xi * q.xj - p.xj * q.xi + p.xk * q.w};
}
inline Quat operator*(const Quat& p, const Quat& q) { return quat_mul(p, q); }

inline Quat conj(const Quat& q) { return {q.w, -q.xi, -q.xj, -q.xk}; }
inline double norm2_euclid(const Quat& q) { return q.w * q.w + q.xi * q.xi + q.xj * q.xj + q.xk * q.xk; }
inline Quat inverse(const Quat& q) { return (1.0 / norm2_euclid(q)) * conj(q); }

inline ImQuat operator+(const ImQuat& a, const ImQuat& b) { return {a.pi + b.pi, a.pj + b.pj, a.pk + b.pk}; }
inline ImQuat operator-(const ImQuat& a, const ImQuat& b) { return {a.pi - b.pi, a.pj - b.pj, a.pk - b.pk}; }
inline ImQuat operator-(const ImQuat& a) { return {-a.pi, -a.pj, -a.pk}; }
inline ImQuat operator*(double s, const ImQuat& a) { return {s * a.pi, s * a.pj, s * a.pk}; }
inline ImQuat& operator+=(ImQuat& a, const ImQuat& b) { a = a + b; return a; }
inline ImQuat& operator-=(ImQuat& a, const ImQuat& b) { a = a - b; return a; }

inline Quat as_quat(const ImQuat& p) { return {0.0, p.pi, p.pj, p.pk}; }
inline ImQuat im(const Quat& q) { return {q.xi, q.xj, q.xk}; }

inline Quat operator*(const ImQuat& p, const Quat& q) { return as_quat(p) * q; }
inline Quat operator*(const Quat& p, const ImQuat& q) { return p * as_quat(q); }
inline Quat operator*(const ImQuat& p, const ImQuat& q) { return as_quat(p) * as_quat(q); }

inline double dot(const ImQuat& a, const ImQuat& b) { return a.pi * b.pi + a.pj * b.pj + a.pk * b.pk; }

// |p|^2 = tr(p pbar) = 2 (pi^2 + pj^2 + pk^2).
inline double im_norm2(const ImQuat& p) { return 2.0 * dot(p, p); }

// Polarization of im_norm2.
inline double inner(const ImQuat& a, const ImQuat& b) { return 2.0 * dot(a, b); }

inline ImQuat bracket(const ImQuat& p, const ImQuat& q) {
  // pq - qp = 2 p x q
  return {2.0 * (p.pj * q.pk - p.pk * q.pj), 2.0 * (p.pk * q.pi - p.pi * q.pk), 2.0 * (p.pi * q.pj - p.pj * q.pi)};
}

// 2x2 matrix trace of a quaternion: tr(1) = 2, imaginary units are traceless.
inline double trace(const Quat& q) { return 2.0 * q.w; }

inline void require_unit(const Quat& g, double tol = 1e-12) {
  if (std::abs(std::sqrt(norm2_euclid(g)) - 1.0) > tol) throw std::invalid_argument("quaternion is not unit length");
}

// g p g^-1
inline ImQuat adjoint(const UnitQuat& g, const ImQuat& p) {
  require_unit(g);
  return im(g * p * conj(g));
}

inline UnitQuat im_exp(const ImQuat& p) {
  const double th = std::sqrt(dot(p, p));
  if (th == 0.0) return {1.0, 0.0, 0.0, 0.0};
  const double s = std::sin(th) / th;
  return {std::cos(th), s * p.pi, s * p.pj, s * p.pk};
}

// Directional derivative of im_exp at p along v.
inline Quat im_exp_derivative(const ImQuat& p, const ImQuat& v) {
  const double th = std::sqrt(dot(p, p));
  if (th < 1e-8) {
    // exp(p) = 1 + p - |p|^2/2 + ...
    return {-dot(p, v), v.pi, v.pj, v.pk};
  }
  const ImQuat u = (1.0 / th) * p;
  const double uv = dot(u, v);
  const double s = std::sin(th), c = std::cos(th);
  const ImQuat perp = v - uv * u;
  const ImQuat imag = (c * uv) * u + (s / th) * perp;
  return {-s * uv, imag.pi, imag.pj, imag.pk};
}

// Matrix of p -> g p g^-1 in the basis (i, j, k).
inline Mat3 so3_of(const UnitQuat& g) {
  require_unit(g);
  const ImQuat basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  Mat3 r{};
  for (int c = 0; c < 3; ++c) {
    const ImQuat img = im(g * basis[c] * conj(g));
    r[0][c] = img.pi;
    r[1][c] = img.pj;
    r[2][c] = img.pk;
  }
  return r;
}

inline double det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline UnitQuat su2_of(const Mat3& r) {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += r[k][a] * r[k][b];
      if (std::abs(s - (a == b ? 1.0 : 0.0)) > 1e-10) throw std::invalid_argument("matrix is not orthogonal");
    }
  if (std::abs(det3(r) - 1.0) > 1e-10) throw std::invalid_argument("matrix is not a rotation");

  // Shepperd: pick the largest of the four squared components for stability.
  const double t = r[0][0] + r[1][1] + r[2][2];
  const double c[4] = {1 + t, 1 + r[0][0] - r[1][1] - r[2][2], 1 - r[0][0] + r[1][1] - r[2][2],
                       1 - r[0][0] - r[1][1] + r[2][2]};
  int k = 0;
  for (int i = 1; i < 4; ++i)
    if (c[i] > c[k]) k = i;
  const double s = 0.5 / std::sqrt(c[k]);
  Quat q;
  switch (k) {
    case 0:
      q = {0.25 / s, (r[2][1] - r[1][2]) * s, (r[0][2] - r[2][0]) * s, (r[1][0] - r[0][1]) * s};
      break;
    case 1:
      q = {(r[2][1] - r[1][2]) * s, 0.25 / s, (r[0][1] + r[1][0]) * s, (r[0][2] + r[2][0]) * s};
      break;
    case 2:
      q = {(r[0][2] - r[2][0]) * s, (r[0][1] + r[1][0]) * s, 0.25 / s, (r[1][2] + r[2][1]) * s};
      break;
    default:
      q = {(r[1][0] - r[0][1]) * s, (r[0][2] + r[2][0]) * s, (r[1][2] + r[2][1]) * s, 0.25 / s};
      break;
  }
  q = (1.0 / std::sqrt(norm2_euclid(q))) * q;

  // sign convention: w >= 0, then first nonzero imaginary coefficient positive
  double lead = q.w;
  if (lead == 0.0) lead = q.xi != 0.0 ? q.xi : (q.xj != 0.0 ? q.xj : q.xk);
  if (lead < 0.0) q = -q;
  return q;
}

}  // namespace ymg
