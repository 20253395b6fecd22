#pragma once

#include <cmath>

namespace riscomp {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

inline double horizontal_distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Angle of arrival for a linear array laid along the x axis: sin(w) = dx / d.
inline double array_aoa(const Vec3& from, const Vec3& to) {
  const double d = distance(from, to);
  return d > 0.0 ? std::asin((from.x - to.x) / d) : 0.0;
}

}  // namespace riscomp
