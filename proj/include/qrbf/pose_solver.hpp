#pragma once

// Pose-space interpolation of orientations. Quaternion samples cannot be
// averaged componentwise without leaving the unit sphere, so each sample
// q is mapped into the tangent space at a base orientation q_e:
//
//     v = quat_log(conjugate(q_e) * q~),    q~ = hemisphere_align(q_e, q)
//
// the three tangent components are interpolated like any scalar channel
// by the RBF solver, and results are mapped back with
//
//     q(L) = q_e * quat_exp(v(L)).
//
// Keys may be plain vectors (e.g. a driver joint's position) or
// orientations, which are encoded as their own log triple.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qrbf/errors.hpp"
#include "qrbf/matrix.hpp"
#include "qrbf/rbf.hpp"
#include "qrbf/rotation.hpp"

namespace qrbf {

/// Either representative of q works as a rotation; this picks the one on
/// the same side of the 4-sphere as `reference`, so that tangent vectors
/// taken relative to `reference` stay short.
inline UnitQuaternion hemisphere_align(const UnitQuaternion& reference,
                                       const UnitQuaternion& q) {
  return dot(reference, q) < 0.0 ? -q : q;
}

/// Weighted tangent-space average of orientations about a base:
/// base * exp(sum_i w_i log(base^-1 * q_i)), with every q_i aligned to
/// the base's hemisphere first. Weights may be any reals (RBF outputs are
/// not convex coefficients). With a one-hot weight vector this returns
/// the corresponding q_i up to sign.
inline UnitQuaternion weighted_blend(const UnitQuaternion& base,
                                     std::span<const double> weights,
                                     std::span<const UnitQuaternion> quats) {
  if (weights.size() != quats.size() || weights.empty()) {
    throw LengthMismatchError("weighted_blend: need equally many weights and quaternions (at least one)");
  }
  const UnitQuaternion base_inv = conjugate(base);
  Vec3 tangent{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < quats.size(); ++i) {
    const UnitQuaternion rel = base_inv * hemisphere_align(base, quats[i]);
    tangent = tangent + weights[i] * quat_log(rel);
  }
  return base * quat_exp(tangent);
}

/// Interpolation key: a plain coordinate vector, or an orientation that
/// gets encoded as its log triple.
class PoseKey {
 public:
  static PoseKey from_values(std::vector<double> values) {
    if (values.empty()) {
      throw DimensionMismatchError("PoseKey: value vector must be nonempty");
    }
    return PoseKey(std::move(values));
  }

  static PoseKey from_orientation(const UnitQuaternion& q) { return PoseKey(q); }

  bool is_orientation() const { return std::holds_alternative<UnitQuaternion>(value_); }

  const std::vector<double>& values() const { return std::get<std::vector<double>>(value_); }
  const UnitQuaternion& orientation() const { return std::get<UnitQuaternion>(value_); }

  /// Coordinates handed to the RBF solver: the raw values, or the log
  /// triple of an orientation key.
  std::vector<double> encoded() const {
    if (const auto* q = std::get_if<UnitQuaternion>(&value_)) {
      const Vec3 v = quat_log(*q);
      return {v.x, v.y, v.z};
    }
    return std::get<std::vector<double>>(value_);
  }

  std::size_t encoded_size() const {
    return is_orientation() ? 3 : std::get<std::vector<double>>(value_).size();
  }

 private:
  explicit PoseKey(std::vector<double> values) : value_(std::move(values)) {}
  explicit PoseKey(const UnitQuaternion& q) : value_(q) {}

  std::variant<std::vector<double>, UnitQuaternion> value_;
};

/// One training sample: any number of orientation channels plus any
/// number of scalar channels. Every sample in a set must agree on both
/// counts.
struct PoseSample {
  std::vector<UnitQuaternion> orientations;
  std::vector<double> scalars;
};

/// Column layout of the flattened sample matrix: the orientation channels
/// come first, three tangent columns each, then the scalar channels.
struct ChannelLayout {
  std::size_t orientation_channels = 0;
  std::size_t scalar_channels = 0;

  std::size_t columns() const { return 3 * orientation_channels + scalar_channels; }
  bool operator==(const ChannelLayout&) const = default;
};

/// A training set: keys, matching samples, the kernel to fit with, and
/// the base orientation the tangent space is anchored at.
struct PoseSet {
  std::vector<PoseKey> keys;
  std::vector<PoseSample> samples;
  Kernel kernel;
  UnitQuaternion base_orientation;  // identity unless the rig says otherwise
};

/// A fitted pose solver: an RBF solver over the flattened tangent/scalar
/// columns plus what is needed to decode its output.
class QFittedSolver {
 public:
  /// Flatten the set into matrices and fit. Throws DimensionMismatchError
  /// when counts disagree (no keys, keys vs samples, ragged key or sample
  /// layouts) and SingularMatrixError when two keys encode identically.
  static QFittedSolver fit(const PoseSet& set, double lambda = 0.0) {
    const std::size_t k = set.keys.size();
    if (k == 0 || set.samples.size() != k) {
      throw DimensionMismatchError("fit: need equally many keys and samples (at least one)");
    }
    const std::size_t n = set.keys.front().encoded_size();
    ChannelLayout layout{set.samples.front().orientations.size(),
                         set.samples.front().scalars.size()};
    if (layout.columns() == 0) {
      throw DimensionMismatchError("fit: samples have no channels");
    }

    Matrix keys(k, n);
    Matrix samples(k, layout.columns());
    const UnitQuaternion base_inv = conjugate(set.base_orientation);
    for (std::size_t i = 0; i < k; ++i) {
      const std::vector<double> enc = set.keys[i].encoded();
      if (enc.size() != n) {
        throw DimensionMismatchError("fit: key " + std::to_string(i) +
                                     " has a different dimension than key 0");
      }
      for (std::size_t j = 0; j < n; ++j) keys(i, j) = enc[j];

      const PoseSample& s = set.samples[i];
      if (s.orientations.size() != layout.orientation_channels ||
          s.scalars.size() != layout.scalar_channels) {
        throw DimensionMismatchError("fit: sample " + std::to_string(i) +
                                     " has a different channel layout than sample 0");
      }
      std::size_t col = 0;
      for (const UnitQuaternion& q : s.orientations) {
        const Vec3 v =
            quat_log(base_inv * hemisphere_align(set.base_orientation, q));
        samples(i, col++) = v.x;
        samples(i, col++) = v.y;
        samples(i, col++) = v.z;
      }
      for (double value : s.scalars) samples(i, col++) = value;
    }

    return QFittedSolver(FittedSolver::fit(std::move(keys), samples, set.kernel, lambda),
                         layout, set.base_orientation);
  }

  /// Reassemble from stored parts (deserialization); shape checks only.
  static QFittedSolver from_parts(FittedSolver inner, const ChannelLayout& layout,
                                  const UnitQuaternion& base_orientation) {
    if (layout.columns() != inner.sample_dimension()) {
      throw DimensionMismatchError("solver parts disagree on the channel layout");
    }
    return QFittedSolver(std::move(inner), layout, base_orientation);
  }

  /// Interpolate at a key and decode: each tangent triple becomes
  /// base * quat_exp(triple), scalar channels pass through. At a training
  /// key (lambda = 0) this reproduces that sample's rotations exactly.
  PoseSample eval(const PoseKey& key) const {
    const std::vector<double> enc = key.encoded();
    const std::vector<double> row = inner_.eval(enc);
    PoseSample out;
    out.orientations.reserve(layout_.orientation_channels);
    std::size_t col = 0;
    for (std::size_t c = 0; c < layout_.orientation_channels; ++c) {
      const Vec3 v{row[col], row[col + 1], row[col + 2]};
      col += 3;
      out.orientations.push_back(base_orientation_ * quat_exp(v));
    }
    out.scalars.assign(row.begin() + static_cast<std::ptrdiff_t>(col), row.end());
    return out;
  }

  const FittedSolver& inner() const { return inner_; }
  const ChannelLayout& layout() const { return layout_; }
  const UnitQuaternion& base_orientation() const { return base_orientation_; }

 private:
  QFittedSolver(FittedSolver inner, const ChannelLayout& layout,
                const UnitQuaternion& base_orientation)
      : inner_(std::move(inner)), layout_(layout), base_orientation_(base_orientation) {}

  FittedSolver inner_;
  ChannelLayout layout_;
  UnitQuaternion base_orientation_;
};

}  // namespace qrbf
