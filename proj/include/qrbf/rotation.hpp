#pragma once

// 3D rotation toolkit: rotation matrices, Euler-angle composition, unit
// quaternions with their exp/log maps, and the lerp/slerp interpolators.
//
// Conventions used throughout:
//  * Matrices act on column vectors, p' = R * p.
//  * An Euler order such as x->y->z means the x rotation is applied to
//    the point first, so the composed matrix is Rz * Ry * Rx.
//  * Quaternions are scalar-first (w, x, y, z) and use the Hamilton
//    product. q and -q describe the same rotation (double cover).
//  * quat_log returns the half-angle tangent vector (theta/2) * axis, and
//    quat_exp is its inverse on the ball of radius pi/2.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "qrbf/errors.hpp"

namespace qrbf {

inline constexpr double kPi = std::numbers::pi;

/// Angles below this are treated as "no rotation" where an axis would be
/// required, and interpolation separations below it fall back to series /
/// linear paths.
inline constexpr double kTinyAngle = 1e-6;

// ---------------------------------------------------------------------------
// Basic value types
// ---------------------------------------------------------------------------

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
inline Vec3 operator*(const Vec3& v, double s) { return s * v; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ParameterOutOfRangeError("cannot normalize a zero-length vector");
  }
  return {v.x / n, v.y / n, v.z / n};
}

enum class Axis { X, Y, Z };

inline char axis_label(Axis a) {
  switch (a) {
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    default: return 'z';
  }
}

/// The six proper Euler orders, named in application order: XYZ rotates
/// about x first, then y, then z.
enum class RotationOrder { XYZ, XZY, YXZ, YZX, ZXY, ZYX };

inline constexpr std::array<RotationOrder, 6> kAllRotationOrders = {
    RotationOrder::XYZ, RotationOrder::XZY, RotationOrder::YXZ,
    RotationOrder::YZX, RotationOrder::ZXY, RotationOrder::ZYX};

inline std::array<Axis, 3> axis_sequence(RotationOrder order) {
  switch (order) {
    case RotationOrder::XYZ: return {Axis::X, Axis::Y, Axis::Z};
    case RotationOrder::XZY: return {Axis::X, Axis::Z, Axis::Y};
    case RotationOrder::YXZ: return {Axis::Y, Axis::X, Axis::Z};
    case RotationOrder::YZX: return {Axis::Y, Axis::Z, Axis::X};
    case RotationOrder::ZXY: return {Axis::Z, Axis::X, Axis::Y};
    default: return {Axis::Z, Axis::Y, Axis::X};
  }
}

inline std::string_view to_string(RotationOrder order) {
  switch (order) {
    case RotationOrder::XYZ: return "x->y->z";
    case RotationOrder::XZY: return "x->z->y";
    case RotationOrder::YXZ: return "y->x->z";
    case RotationOrder::YZX: return "y->z->x";
    case RotationOrder::ZXY: return "z->x->y";
    default: return "z->y->x";
  }
}

/// Euler angles in radians. angle_x is always the rotation about x, no
/// matter where x appears in the order.
struct EulerAngles {
  double angle_x = 0.0;
  double angle_y = 0.0;
  double angle_z = 0.0;
  RotationOrder order = RotationOrder::XYZ;
};

namespace detail {
inline double angle_about(const EulerAngles& e, Axis axis) {
  switch (axis) {
    case Axis::X: return e.angle_x;
    case Axis::Y: return e.angle_y;
    default: return e.angle_z;
  }
}
}  // namespace detail

/// Unit rotation axis plus an angle in [0, pi].
struct AxisAngle {
  Vec3 axis{1.0, 0.0, 0.0};
  double angle = 0.0;

  AxisAngle() = default;
  AxisAngle(const Vec3& axis_in, double angle_in) : angle(angle_in) {
    const double n = norm(axis_in);
    if (!std::isfinite(n) || std::fabs(n - 1.0) > 1e-9) {
      throw ParameterOutOfRangeError("AxisAngle: axis must be unit length");
    }
    if (!std::isfinite(angle_in) || angle_in < 0.0 || angle_in > kPi) {
      throw ParameterOutOfRangeError("AxisAngle: angle must lie in [0, pi]");
    }
    axis = {axis_in.x / n, axis_in.y / n, axis_in.z / n};
  }
};

/// Scalar-first unit quaternion. Construction renormalizes, so stored
/// components always satisfy w^2 + x^2 + y^2 + z^2 = 1 to machine
/// precision. The default is the identity rotation.
struct UnitQuaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  UnitQuaternion() = default;
  UnitQuaternion(double w_in, double x_in, double y_in, double z_in) {
    const double n = std::sqrt(w_in * w_in + x_in * x_in + y_in * y_in + z_in * z_in);
    if (!std::isfinite(n) || n < 1e-12) {
      throw ParameterOutOfRangeError("UnitQuaternion: components must be finite and not all ~0");
    }
    w = w_in / n;
    x = x_in / n;
    y = y_in / n;
    z = z_in / n;
  }
};

inline double dot(const UnitQuaternion& a, const UnitQuaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

inline UnitQuaternion conjugate(const UnitQuaternion& q) {
  UnitQuaternion r;
  r.w = q.w;
  r.x = -q.x;
  r.y = -q.y;
  r.z = -q.z;
  return r;
}

/// The other representative of the same rotation.
inline UnitQuaternion operator-(const UnitQuaternion& q) {
  UnitQuaternion r;
  r.w = -q.w;
  r.x = -q.x;
  r.y = -q.y;
  r.z = -q.z;
  return r;
}

/// Hamilton product, renormalized to absorb rounding drift.
inline UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
  return UnitQuaternion(a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w);
}

// ---------------------------------------------------------------------------
// Rotation matrices
// ---------------------------------------------------------------------------

/// 3x3 proper rotation matrix. Construction from raw entries verifies
/// orthonormality (R^T R = I within 1e-9) and det = +1 within 1e-9;
/// every factory below funnels through that check.
class RotationMatrix {
 public:
  /// Identity.
  RotationMatrix() : m_{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}} {}

  RotationMatrix(double m00, double m01, double m02,
                 double m10, double m11, double m12,
                 double m20, double m21, double m22)
      : m_{{m00, m01, m02}, {m10, m11, m12}, {m20, m21, m22}} {
    validate();
  }

  double operator()(std::size_t r, std::size_t c) const { return m_[r][c]; }

  double trace() const { return m_[0][0] + m_[1][1] + m_[2][2]; }

  double det() const {
    return m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) -
           m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
           m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
  }

  friend RotationMatrix operator*(const RotationMatrix& a, const RotationMatrix& b) {
    double p[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        p[i][j] = a.m_[i][0] * b.m_[0][j] + a.m_[i][1] * b.m_[1][j] + a.m_[i][2] * b.m_[2][j];
      }
    }
    return RotationMatrix(p[0][0], p[0][1], p[0][2],
                          p[1][0], p[1][1], p[1][2],
                          p[2][0], p[2][1], p[2][2]);
  }

  /// Apply the rotation to a point: p' = R * p.
  friend Vec3 operator*(const RotationMatrix& r, const Vec3& p) {
    return {r.m_[0][0] * p.x + r.m_[0][1] * p.y + r.m_[0][2] * p.z,
            r.m_[1][0] * p.x + r.m_[1][1] * p.y + r.m_[1][2] * p.z,
            r.m_[2][0] * p.x + r.m_[2][1] * p.y + r.m_[2][2] * p.z};
  }

 private:
  void validate() const {
    // R^T R == I, checked entrywise.
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double g = m_[0][i] * m_[0][j] + m_[1][i] * m_[1][j] + m_[2][i] * m_[2][j];
        if (std::fabs(g - (i == j ? 1.0 : 0.0)) > 1e-9) {
          throw ParameterOutOfRangeError("RotationMatrix: columns are not orthonormal");
        }
      }
    }
    if (std::fabs(det() - 1.0) > 1e-9) {
      throw ParameterOutOfRangeError("RotationMatrix: determinant must be +1");
    }
  }

  double m_[3][3];
};

/// Elementary rotation about a coordinate axis (right-handed, radians).
inline RotationMatrix rotation_about_axis(Axis axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  switch (axis) {
    case Axis::X:
      return RotationMatrix(1, 0, 0,
                            0, c, -s,
                            0, s, c);
    case Axis::Y:
      return RotationMatrix(c, 0, s,
                            0, 1, 0,
                            -s, 0, c);
    default:
      return RotationMatrix(c, -s, 0,
                            s, c, 0,
                            0, 0, 1);
  }
}

/// Compose the three axis rotations of an Euler triple. The first axis in
/// the order acts on the point first, so later rotations multiply from
/// the left.
inline RotationMatrix compose_euler(const EulerAngles& e) {
  RotationMatrix r;
  for (Axis axis : axis_sequence(e.order)) {
    r = rotation_about_axis(axis, detail::angle_about(e, axis)) * r;
  }
  return r;
}

/// Same composition on the quaternion side: returns q_3 * q_2 * q_1 where
/// q_1 is the first axis rotation applied.
inline UnitQuaternion quat_about_axis(Axis axis, double angle);

inline UnitQuaternion euler_to_quat_sequence(const EulerAngles& e) {
  UnitQuaternion q;
  for (Axis axis : axis_sequence(e.order)) {
    q = quat_about_axis(axis, detail::angle_about(e, axis)) * q;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Axis-angle conversions
// ---------------------------------------------------------------------------

/// Quaternion for a rotation by angle about a unit axis:
/// (cos(a/2), sin(a/2) * axis).
inline UnitQuaternion quat_from_axis_angle(const AxisAngle& aa) {
  const double h = 0.5 * aa.angle;
  const double s = std::sin(h);
  return UnitQuaternion(std::cos(h), s * aa.axis.x, s * aa.axis.y, s * aa.axis.z);
}

inline UnitQuaternion quat_about_axis(Axis axis, double angle) {
  const double h = 0.5 * angle;
  const double c = std::cos(h);
  const double s = std::sin(h);
  switch (axis) {
    case Axis::X: return UnitQuaternion(c, s, 0, 0);
    case Axis::Y: return UnitQuaternion(c, 0, s, 0);
    default: return UnitQuaternion(c, 0, 0, s);
  }
}

/// Rotation matrix for (axis, angle):
/// R = cos(a) I + sin(a) [axis]_x + (1 - cos(a)) axis axis^T.
inline RotationMatrix rodrigues(const AxisAngle& aa) {
  const double c = std::cos(aa.angle);
  const double s = std::sin(aa.angle);
  const double k = 1.0 - c;
  const double nx = aa.axis.x, ny = aa.axis.y, nz = aa.axis.z;
  return RotationMatrix(c + nx * nx * k, nx * ny * k - nz * s, nx * nz * k + ny * s,
                        nx * ny * k + nz * s, c + ny * ny * k, ny * nz * k - nx * s,
                        nx * nz * k - ny * s, ny * nz * k + nx * s, c + nz * nz * k);
}

/// Recover (axis, angle) from a rotation matrix. The angle comes from the
/// trace, the axis from the skew-symmetric part (R - R^T). Throws
/// IdentityRotationError when the rotation angle is below kTinyAngle,
/// because the identity has no axis. Near a half-turn the skew part
/// vanishes, so the axis is taken from (R + I)/2 = axis axis^T instead;
/// there the sign of the axis is arbitrary (both describe the same
/// rotation) and is fixed to make the first nonzero component positive.
inline AxisAngle axis_angle_from_matrix(const RotationMatrix& r) {
  const double cos_angle = std::clamp((r.trace() - 1.0) * 0.5, -1.0, 1.0);
  const double angle = std::acos(cos_angle);
  if (angle < kTinyAngle) {
    throw IdentityRotationError("axis_angle_from_matrix: rotation is the identity");
  }

  if (angle > kPi - kTinyAngle) {
    // B = (R + I)/2 equals axis axis^T at a half-turn; its largest
    // diagonal entry picks the best-conditioned column.
    double b[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        b[i][j] = 0.5 * (r(i, j) + (i == j ? 1.0 : 0.0));
      }
    }
    int col = 0;
    if (b[1][1] > b[col][col]) col = 1;
    if (b[2][2] > b[col][col]) col = 2;
    Vec3 axis = normalized({b[0][col], b[1][col], b[2][col]});
    if (axis.x < 0.0 || (axis.x == 0.0 && (axis.y < 0.0 || (axis.y == 0.0 && axis.z < 0.0)))) {
      axis = -1.0 * axis;
    }
    return AxisAngle(axis, angle);
  }

  const double ax = r(2, 1) - r(1, 2);
  const double ay = r(0, 2) - r(2, 0);
  const double az = r(1, 0) - r(0, 1);
  return AxisAngle(normalized({ax, ay, az}), angle);
}

// ---------------------------------------------------------------------------
// Quaternion <-> matrix
// ---------------------------------------------------------------------------

inline RotationMatrix quat_to_matrix(const UnitQuaternion& q) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  return RotationMatrix(1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
                        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
                        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y));
}

/// Shepperd-style extraction: branch on the largest of |w|, |x|, |y|, |z|
/// so the divisor is always well away from zero. The result is put on the
/// w >= 0 hemisphere.
inline UnitQuaternion matrix_to_quat(const RotationMatrix& r) {
  double w, x, y, z;
  const double tr = r.trace();
  if (tr > 0.0) {
    const double s = std::sqrt(tr + 1.0) * 2.0;  // s = 4w
    w = 0.25 * s;
    x = (r(2, 1) - r(1, 2)) / s;
    y = (r(0, 2) - r(2, 0)) / s;
    z = (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
    const double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2.0;  // s = 4x
    w = (r(2, 1) - r(1, 2)) / s;
    x = 0.25 * s;
    y = (r(0, 1) + r(1, 0)) / s;
    z = (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) > r(2, 2)) {
    const double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2.0;  // s = 4y
    w = (r(0, 2) - r(2, 0)) / s;
    x = (r(0, 1) + r(1, 0)) / s;
    y = 0.25 * s;
    z = (r(1, 2) + r(2, 1)) / s;
  } else {
    const double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2.0;  // s = 4z
    w = (r(1, 0) - r(0, 1)) / s;
    x = (r(0, 2) + r(2, 0)) / s;
    y = (r(1, 2) + r(2, 1)) / s;
    z = 0.25 * s;
  }
  UnitQuaternion q(w, x, y, z);
  return q.w < 0.0 ? -q : q;
}

// ---------------------------------------------------------------------------
// Exp / log maps
// ---------------------------------------------------------------------------

/// Tangent-space logarithm: for q = (cos(t/2), sin(t/2) * axis) returns
/// (t/2) * axis. The input is first moved to the w >= 0 hemisphere, so
/// the result always has length <= pi/2. A two-term series replaces
/// asin(s)/s when the vector part is tiny.
inline Vec3 quat_log(const UnitQuaternion& q) {
  const double w = std::fabs(q.w);
  const double sx = q.w < 0.0 ? -q.x : q.x;
  const double sy = q.w < 0.0 ? -q.y : q.y;
  const double sz = q.w < 0.0 ? -q.z : q.z;
  const double s = std::sqrt(sx * sx + sy * sy + sz * sz);
  double scale;
  if (s < kTinyAngle) {
    // asin(s)/s = 1 + s^2/6 + O(s^4)
    scale = 1.0 + s * s / 6.0;
  } else {
    scale = std::atan2(s, w) / s;  // = asin(s)/s since w >= 0
  }
  return {scale * sx, scale * sy, scale * sz};
}

/// Inverse of quat_log: maps a tangent vector v to the quaternion
/// (cos|v|, sin|v| * v/|v|), with a series for sin|v|/|v| near zero.
inline UnitQuaternion quat_exp(const Vec3& v) {
  const double n = norm(v);
  double scale;
  if (n < kTinyAngle) {
    // sin(n)/n = 1 - n^2/6 + O(n^4)
    scale = 1.0 - n * n / 6.0;
  } else {
    scale = std::sin(n) / n;
  }
  return UnitQuaternion(std::cos(n), scale * v.x, scale * v.y, scale * v.z);
}

/// q raised to a real power: exp(t * log q). Fractional powers follow the
/// shortest arc from the identity.
inline UnitQuaternion quat_pow(const UnitQuaternion& q, double t) {
  return quat_exp(t * quat_log(q));
}

/// Angle of the relative rotation between two orientations, in [0, pi].
/// Insensitive to the sign of either input. Measured through the error
/// quaternion with atan2 rather than 2*acos(|dot|): the acos form cannot
/// resolve angles below ~3e-8 because of the derivative blow-up at 1.
inline double rotation_angle_between(const UnitQuaternion& a, const UnitQuaternion& b) {
  const UnitQuaternion e = conjugate(a) * b;
  const double vec = std::sqrt(e.x * e.x + e.y * e.y + e.z * e.z);
  return 2.0 * std::atan2(vec, std::fabs(e.w));
}

// ---------------------------------------------------------------------------
// Interpolation
// ---------------------------------------------------------------------------

/// Straight-line interpolation of equal-length vectors, t in [0, 1].
/// Note that lerp of unit vectors is not unit: the squared norm dips to
/// (1 + cos(phi))/2 at the midpoint, where phi is the angle between the
/// endpoints.
inline std::vector<double> lerp(std::span<const double> x0, std::span<const double> x1,
                                double t) {
  if (x0.size() != x1.size()) {
    throw DimensionMismatchError("lerp: inputs have different lengths");
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ParameterOutOfRangeError("lerp: t must lie in [0, 1]");
  }
  std::vector<double> out(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) {
    out[i] = (1.0 - t) * x0[i] + t * x1[i];
  }
  return out;
}

/// Spherical linear interpolation along the shorter great-circle arc,
/// computed in the sine-quotient form
///   q(t) = (sin((1-t) phi) q0 + sin(t phi) q1) / sin(phi).
/// q1 is flipped to q0's hemisphere first. When the endpoints are nearly
/// identical the quotient degenerates and a normalized lerp is used
/// instead. Endpoints a half-turn apart (|dot| < 1e-9) have no unique
/// shortest arc and raise AntipodalInputsError.
inline UnitQuaternion slerp(const UnitQuaternion& q0, const UnitQuaternion& q1, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ParameterOutOfRangeError("slerp: t must lie in [0, 1]");
  }
  UnitQuaternion end = q1;
  double d = dot(q0, q1);
  if (d < 0.0) {
    end = -end;
    d = -d;
  }
  if (d < 1e-9) {
    throw AntipodalInputsError("slerp: endpoints are a half-turn apart; shortest arc is not unique");
  }
  const double phi = std::acos(std::min(d, 1.0));
  if (phi < kTinyAngle) {
    // Endpoints (nearly) coincide; the chord is tangent to the sphere.
    return UnitQuaternion((1.0 - t) * q0.w + t * end.w, (1.0 - t) * q0.x + t * end.x,
                          (1.0 - t) * q0.y + t * end.y, (1.0 - t) * q0.z + t * end.z);
  }
  const double inv_sin = 1.0 / std::sin(phi);
  const double c0 = std::sin((1.0 - t) * phi) * inv_sin;
  const double c1 = std::sin(t * phi) * inv_sin;
  return UnitQuaternion(c0 * q0.w + c1 * end.w, c0 * q0.x + c1 * end.x,
                        c0 * q0.y + c1 * end.y, c0 * q0.z + c1 * end.z);
}

}  // namespace qrbf
