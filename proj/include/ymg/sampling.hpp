#pragma once

#include <cmath>
#include <random>

#include "ymg/forms.hpp"
#include "ymg/quat.hpp"

namespace ymg {

using Rng = std::mt19937_64;

inline double gaussian(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }
inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

inline ImQuat random_im(Rng& rng) { return {gaussian(rng), gaussian(rng), gaussian(rng)}; }

inline UnitQuat random_unit_quat(Rng& rng) {
  Quat q{gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng)};
  return (1.0 / std::sqrt(norm2_euclid(q))) * q;
}

inline Su2TwoForm random_two_form(Rng& rng) {
  Su2TwoForm f;
  for (int i = 0; i < 6; ++i) f[i] = random_im(rng);
  return f;
}

inline Vec4 random_direction(Rng& rng) {
  Vec4 v{gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng)};
  return (1.0 / norm(v)) * v;
}

// Point with uniform direction and |x| uniform in [r0, r1].
inline Vec4 random_point(Rng& rng, double r0, double r1) { return uniform(rng, r0, r1) * random_direction(rng); }

// Random rotation through a random unit quaternion.
inline Mat3 random_rotation(Rng& rng) { return so3_of(random_unit_quat(rng)); }

}  // namespace ymg
