#pragma once

#include <cmath>

namespace dwdt {

// Small fixed-size vectors templated on the scalar type so the same
// geometric code runs on plain doubles and on autodiff variables.
template <class S>
struct Vec2T {
  S x{}, y{};
};

template <class S>
struct Vec3T {
  S x{}, y{}, z{};
};

using Vec2 = Vec2T<double>;
using Vec3 = Vec3T<double>;

// Column-major 3x2 matrix (the Jacobian of a 2D->3D lift).
struct Mat32 {
  Vec3 col0{}, col1{};
};

template <class S>
inline Vec2T<S> operator+(const Vec2T<S>& a, const Vec2T<S>& b) {
  return {a.x + b.x, a.y + b.y};
}
template <class S>
inline Vec2T<S> operator-(const Vec2T<S>& a, const Vec2T<S>& b) {
  return {a.x - b.x, a.y - b.y};
}
template <class S, class T>
inline Vec2T<S> operator*(const T& s, const Vec2T<S>& a) {
  return {s * a.x, s * a.y};
}
template <class S>
inline S dot(const Vec2T<S>& a, const Vec2T<S>& b) {
  return a.x * b.x + a.y * b.y;
}
// z-component of the 3D cross product of two in-plane vectors
template <class S>
inline S cross(const Vec2T<S>& a, const Vec2T<S>& b) {
  return a.x * b.y - a.y * b.x;
}
template <class S>
inline S norm2(const Vec2T<S>& a) {
  return dot(a, a);
}
template <class S>
inline S norm(const Vec2T<S>& a) {
  using std::sqrt;
  return sqrt(norm2(a));
}

template <class S>
inline Vec3T<S> operator+(const Vec3T<S>& a, const Vec3T<S>& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
template <class S>
inline Vec3T<S> operator-(const Vec3T<S>& a, const Vec3T<S>& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
template <class S, class T>
inline Vec3T<S> operator*(const T& s, const Vec3T<S>& a) {
  return {s * a.x, s * a.y, s * a.z};
}
template <class S>
inline S dot(const Vec3T<S>& a, const Vec3T<S>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
template <class S>
inline Vec3T<S> cross(const Vec3T<S>& a, const Vec3T<S>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
template <class S>
inline S norm2(const Vec3T<S>& a) {
  return dot(a, a);
}
template <class S>
inline S norm(const Vec3T<S>& a) {
  using std::sqrt;
  return sqrt(norm2(a));
}

inline double value_of(double x) { return x; }

}  // namespace dwdt
