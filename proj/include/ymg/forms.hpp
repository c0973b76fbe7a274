#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "ymg/quat.hpp"

namespace ymg {

using Vec4 = std::array<double, 4>;

inline Vec4 operator+(const Vec4& a, const Vec4& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }
inline Vec4 operator-(const Vec4& a, const Vec4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }
inline Vec4 operator*(double s, const Vec4& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }
inline double dot(const Vec4& a, const Vec4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }
inline double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }

// x1 + x2 i + x3 j + x4 k
inline Quat to_quat(const Vec4& x) { return {x[0], x[1], x[2], x[3]}; }
inline Vec4 to_vec(const Quat& q) { return {q.w, q.xi, q.xj, q.xk}; }

// Coefficients of dx_1 .. dx_4.
template <class T>
struct OneForm {
  std::array<T, 4> c{};
  T& operator[](int l) { return c[l]; }
  const T& operator[](int l) const { return c[l]; }
};

// Coefficients of dx_l ^ dx_m for l < m in the order 12, 13, 14, 23, 24, 34.
template <class T>
struct TwoForm {
  std::array<T, 6> c{};
  T& operator[](int i) { return c[i]; }
  const T& operator[](int i) const { return c[i]; }
};

using Su2OneForm = OneForm<ImQuat>;
using Su2TwoForm = TwoForm<ImQuat>;
using RealOneForm = OneForm<double>;
using RealTwoForm = TwoForm<double>;

inline constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Index of dx_l ^ dx_m (0-based, l != m) and the orientation sign relative to the stored pair.
inline constexpr int pair_index(int l, int m) {
  if (l > m) return pair_index(m, l);
  constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[l][m];
}

template <class T>
OneForm<T> operator+(const OneForm<T>& a, const OneForm<T>& b) {
  OneForm<T> r;
  for (int l = 0; l < 4; ++l) r[l] = a[l] + b[l];
  return r;
}
template <class T>
OneForm<T> operator-(const OneForm<T>& a, const OneForm<T>& b) {
  OneForm<T> r;
  for (int l = 0; l < 4; ++l) r[l] = a[l] - b[l];
  return r;
}
template <class T>
OneForm<T> operator*(double s, const OneForm<T>& a) {
  OneForm<T> r;
  for (int l = 0; l < 4; ++l) r[l] = s * a[l];
  return r;
}
template <class T>
TwoForm<T> operator+(const TwoForm<T>& a, const TwoForm<T>& b) {
  TwoForm<T> r;
  for (int i = 0; i < 6; ++i) r[i] = a[i] + b[i];
  return r;
}
template <class T>
TwoForm<T> operator-(const TwoForm<T>& a, const TwoForm<T>& b) {
  TwoForm<T> r;
  for (int i = 0; i < 6; ++i) r[i] = a[i] - b[i];
  return r;
}
template <class T>
TwoForm<T> operator*(double s, const TwoForm<T>& a) {
  TwoForm<T> r;
  for (int i = 0; i < 6; ++i) r[i] = s * a[i];
  return r;
}

// Volume form dx1^dx2^dx3^dx4.
template <class T>
TwoForm<T> hodge_star(const TwoForm<T>& f) {
  TwoForm<T> r;
  r[0] = f[5];
  r[1] = -f[4];
  r[2] = f[3];
  r[3] = f[2];
  r[4] = -f[1];
  r[5] = f[0];
  return r;
}

template <class T>
TwoForm<T> p_plus(const TwoForm<T>& f) {
  return 0.5 * (f + hodge_star(f));
}
template <class T>
TwoForm<T> p_minus(const TwoForm<T>& f) {
  return 0.5 * (f - hodge_star(f));
}

inline double inner(const Su2TwoForm& f, const Su2TwoForm& g) {
  double s = 0;
  for (int i = 0; i < 6; ++i) s += inner(f[i], g[i]);
  return s;
}
inline double inner(const RealTwoForm& f, const RealTwoForm& g) {
  double s = 0;
  for (int i = 0; i < 6; ++i) s += f[i] * g[i];
  return s;
}
inline double norm2(const Su2TwoForm& f) { return inner(f, f); }
inline double norm2(const RealTwoForm& f) { return inner(f, f); }

inline double norm2(const Su2OneForm& a) {
  double s = 0;
  for (int l = 0; l < 4; ++l) s += im_norm2(a[l]);
  return s;
}

// Coefficient of the volume form in tr(F ^ G).
inline double tr_wedge(const Su2TwoForm& f, const Su2TwoForm& g) {
  const Su2TwoForm sg = hodge_star(g);
  double s = 0;
  for (int i = 0; i < 6; ++i) s += trace(f[i] * sg[i]);
  return s;
}

// su(2)-valued pairing sum_{l<m} F^{lm} w^{lm}.
inline ImQuat contract(const Su2TwoForm& f, const RealTwoForm& w) {
  ImQuat s;
  for (int i = 0; i < 6; ++i) s += w[i] * f[i];
  return s;
}

inline Su2TwoForm times(const RealTwoForm& w, const ImQuat& p) {
  Su2TwoForm r;
  for (int i = 0; i < 6; ++i) r[i] = w[i] * p;
  return r;
}

inline RealTwoForm wedge(const RealOneForm& a, const RealOneForm& b) {
  RealTwoForm r;
  for (int i = 0; i < 6; ++i) r[i] = a[kPairs[i][0]] * b[kPairs[i][1]] - a[kPairs[i][1]] * b[kPairs[i][0]];
  return r;
}

// Quaternion-product wedge; (A^B)^{lm} = A^l B^m - A^m B^l.
inline Su2TwoForm wedge(const Su2OneForm& a, const Su2OneForm& b) {
  Su2TwoForm r;
  for (int i = 0; i < 6; ++i) {
    const int l = kPairs[i][0], m = kPairs[i][1];
    r[i] = im(a[l] * b[m] - a[m] * b[l]);
  }
  return r;
}

template <class T>
T apply(const TwoForm<T>& f, const Vec4& x, const Vec4& y) {
  T s{};
  for (int i = 0; i < 6; ++i) {
    const int l = kPairs[i][0], m = kPairs[i][1];
    s += (x[l] * y[m] - x[m] * y[l]) * f[i];
  }
  return s;
}

template <class T>
T apply(const OneForm<T>& a, const Vec4& x) {
  T s{};
  for (int l = 0; l < 4; ++l) s += x[l] * a[l];
  return s;
}

// Self-dual and anti-self-dual orthonormal bases, index 0,1,2 for i,j,k.
inline RealTwoForm omega_plus(int a) {
  const double h = 1.0 / std::sqrt(2.0);
  RealTwoForm w;
  switch (a) {
    case 0: w[0] = h; w[5] = h; break;
    case 1: w[1] = h; w[4] = -h; break;
    default: w[2] = h; w[3] = h; break;
  }
  return w;
}
inline RealTwoForm omega_minus(int a) {
  const double h = 1.0 / std::sqrt(2.0);
  RealTwoForm w;
  switch (a) {
    case 0: w[0] = h; w[5] = -h; break;
    case 1: w[1] = h; w[4] = h; break;
    default: w[2] = h; w[3] = -h; break;
  }
  return w;
}

inline const ImQuat& unit_im(int a) {
  static const ImQuat u[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  return u[a];
}

// dx ^ dxbar
inline Su2TwoForm dxdxbar() {
  Su2TwoForm r;
  for (int a = 0; a < 3; ++a) r = r + times(omega_plus(a), -2.0 * std::sqrt(2.0) * unit_im(a));
  return r;
}

// dxbar ^ dx
inline Su2TwoForm dxbardx() {
  Su2TwoForm r;
  for (int a = 0; a < 3; ++a) r = r + times(omega_minus(a), 2.0 * std::sqrt(2.0) * unit_im(a));
  return r;
}

inline void require_nonzero(const Vec4& x) {
  if (dot(x, x) == 0.0) throw std::domain_error("frame undefined at the origin");
}

// (d_r, e1, e2, e3) with e1 = I d_r, e2 = J d_r, e3 = K d_r, all unit.
inline std::array<Vec4, 4> frame_vectors(const Vec4& x) {
  require_nonzero(x);
  const Vec4 n = (1.0 / norm(x)) * x;
  return {n,
          Vec4{-n[1], n[0], -n[3], n[2]},
          Vec4{-n[2], n[3], n[0], -n[1]},
          Vec4{-n[3], -n[2], n[1], n[0]}};
}

inline RealOneForm dual(const Vec4& v) { return {{v[0], v[1], v[2], v[3]}}; }

// omega^-_i(x), omega^-_j(x), omega^-_k(x) = sqrt(2) P_-(dr ^ I dr), ...
inline std::array<RealTwoForm, 3> asd_frame_at(const Vec4& x) {
  const auto e = frame_vectors(x);
  std::array<RealTwoForm, 3> r;
  for (int a = 0; a < 3; ++a) r[a] = std::sqrt(2.0) * p_minus(wedge(dual(e[0]), dual(e[a + 1])));
  return r;
}

// Pullback of tr(A^dA + (2/3) A^A^A) to the sphere through x, as a density
// against the round measure; orientation (d_r, e1, e2, e3).
inline double cs3_boundary_integrand(const Su2OneForm& a, const Su2TwoForm& da, const Vec4& x) {
  const auto e = frame_vectors(x);
  const ImQuat a1 = ymg::apply(a, e[1]), a2 = ymg::apply(a, e[2]), a3 = ymg::apply(a, e[3]);
  const ImQuat d23 = ymg::apply(da, e[2], e[3]), d13 = ymg::apply(da, e[1], e[3]), d12 = ymg::apply(da, e[1], e[2]);
  const double ada = trace(a1 * d23) - trace(a2 * d13) + trace(a3 * d12);
  const Quat cubic = a1 * a2 * a3 - a1 * a3 * a2 - a2 * a1 * a3 + a2 * a3 * a1 + a3 * a1 * a2 - a3 * a2 * a1;
  return ada + (2.0 / 3.0) * trace(cubic);
}

}  // namespace ymg
