#pragma once

// JSON (de)serialization for pose sets and fitted solvers. All errors --
// malformed JSON, missing fields, shape mismatches, quaternions that are
// far from unit length -- surface as ParseError.
//
// Pose-set document:
//
//   {
//     "kernel": {"type": "polyharmonic", "epsilon": 1.0},
//     "base_orientation": [1, 0, 0, 0],            // optional, (w,x,y,z)
//     "keys": [
//       {"values": [0.3, -0.1, 0.7]},              // vector key, or
//       {"quaternion": [1, 0, 0, 0]}               // orientation key
//     ],
//     "samples": [
//       {"orientations": [[1, 0, 0, 0]], "scalars": [0.25]}
//     ]
//   }
//
// "epsilon" defaults to 1, "scalars"/"orientations" default to empty, and
// keys/samples must have equal nonzero lengths. Quaternions must be unit
// length within 1e-3 and are renormalized on load.
//
// Solver document (written by fit, read by eval):
//
//   {
//     "format_version": 1,
//     "kernel": {"type": ..., "epsilon": ...},
//     "base_orientation": [w, x, y, z],
//     "keys":    {"rows": K, "cols": N, "data": [...]},   // row-major
//     "weights": {"rows": K, "cols": M, "data": [...]},
//     "layout": {"orientation_channels": ..., "scalar_channels": ...},
//     "lambda": 0.0
//   }
//
// Numbers are emitted with shortest-round-trip formatting, so a solver
// survives a save/load cycle bit for bit.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qrbf/errors.hpp"
#include "qrbf/matrix.hpp"
#include "qrbf/pose_solver.hpp"
#include "qrbf/rbf.hpp"
#include "qrbf/rotation.hpp"

namespace qrbf {

inline constexpr int kSolverFormatVersion = 1;

/// How far from unit length a stored quaternion may be before the file is
/// rejected as corrupt.
inline constexpr double kQuatNormSlack = 1e-3;

namespace detail {

using nlohmann::json;

inline UnitQuaternion quat_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) {
    throw ParseError(where + ": expected a [w, x, y, z] array");
  }
  double c[4];
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_number()) throw ParseError(where + ": components must be numbers");
    c[i] = j[i].get<double>();
    if (!std::isfinite(c[i])) throw ParseError(where + ": components must be finite");
  }
  const double n = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]);
  if (std::fabs(n - 1.0) > kQuatNormSlack) {
    throw ParseError(where + ": quaternion norm " + std::to_string(n) +
                     " is not within 1e-3 of 1");
  }
  return UnitQuaternion(c[0], c[1], c[2], c[3]);
}

inline json quat_to_json(const UnitQuaternion& q) {
  return json::array({q.w, q.x, q.y, q.z});
}

inline std::vector<double> numbers_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw ParseError(where + ": entries must be numbers");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(where + ": entries must be finite");
    out.push_back(d);
  }
  return out;
}

inline Kernel kernel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw ParseError("kernel: expected an object with a \"type\" string");
  }
  const KernelKind kind = kernel_kind_from_string(j["type"].get<std::string>());
  double epsilon = 1.0;
  if (j.contains("epsilon")) {
    if (!j["epsilon"].is_number()) throw ParseError("kernel: epsilon must be a number");
    epsilon = j["epsilon"].get<double>();
  }
  try {
    return Kernel(kind, epsilon);
  } catch (const ParameterOutOfRangeError& e) {
    throw ParseError(std::string("kernel: ") + e.what());
  }
}

inline json kernel_to_json(const Kernel& k) {
  return json{{"type", std::string(to_string(k.kind))}, {"epsilon", k.epsilon}};
}

inline Matrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw ParseError(where + ": expected {rows, cols, data}");
  }
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned()) {
    throw ParseError(where + ": rows/cols must be nonnegative integers");
  }
  const auto rows = j["rows"].get<std::size_t>();
  const auto cols = j["cols"].get<std::size_t>();
  std::vector<double> data = numbers_from_json(j["data"], where + ".data");
  try {
    return Matrix(rows, cols, std::move(data));
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

inline json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

inline json parse_document(std::istream& in, const std::string& what) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pose sets
// ---------------------------------------------------------------------------

inline PoseSet read_pose_set(std::istream& in) {
  using detail::json;
  const json doc = detail::parse_document(in, "pose set");
  if (!doc.is_object()) throw ParseError("pose set: top level must be an object");

  PoseSet set;
  if (!doc.contains("kernel")) throw ParseError("pose set: missing \"kernel\"");
  set.kernel = detail::kernel_from_json(doc["kernel"]);

  if (doc.contains("base_orientation")) {
    set.base_orientation = detail::quat_from_json(doc["base_orientation"], "base_orientation");
  }

  if (!doc.contains("keys") || !doc["keys"].is_array() || doc["keys"].empty()) {
    throw ParseError("pose set: \"keys\" must be a nonempty array");
  }
  if (!doc.contains("samples") || !doc["samples"].is_array()) {
    throw ParseError("pose set: \"samples\" must be an array");
  }
  if (doc["samples"].size() != doc["keys"].size()) {
    throw ParseError("pose set: " + std::to_string(doc["keys"].size()) + " keys but " +
                     std::to_string(doc["samples"].size()) + " samples");
  }

  std::size_t index = 0;
  for (const auto& jk : doc["keys"]) {
    const std::string where = "keys[" + std::to_string(index++) + "]";
    if (!jk.is_object()) throw ParseError(where + ": expected an object");
    const bool has_values = jk.contains("values");
    const bool has_quat = jk.contains("quaternion");
    if (has_values == has_quat) {
      throw ParseError(where + ": need exactly one of \"values\" or \"quaternion\"");
    }
    if (has_values) {
      std::vector<double> values = detail::numbers_from_json(jk["values"], where + ".values");
      if (values.empty()) throw ParseError(where + ".values: must be nonempty");
      set.keys.push_back(PoseKey::from_values(std::move(values)));
    } else {
      set.keys.push_back(
          PoseKey::from_orientation(detail::quat_from_json(jk["quaternion"], where)));
    }
  }

  index = 0;
  for (const auto& js : doc["samples"]) {
    const std::string where = "samples[" + std::to_string(index++) + "]";
    if (!js.is_object()) throw ParseError(where + ": expected an object");
    PoseSample sample;
    if (js.contains("orientations")) {
      if (!js["orientations"].is_array()) {
        throw ParseError(where + ".orientations: expected an array");
      }
      std::size_t qi = 0;
      for (const auto& jq : js["orientations"]) {
        sample.orientations.push_back(detail::quat_from_json(
            jq, where + ".orientations[" + std::to_string(qi++) + "]"));
      }
    }
    if (js.contains("scalars")) {
      sample.scalars = detail::numbers_from_json(js["scalars"], where + ".scalars");
    }
    if (sample.orientations.empty() && sample.scalars.empty()) {
      throw ParseError(where + ": sample has no channels");
    }
    set.samples.push_back(std::move(sample));
  }

  return set;
}

inline void write_pose_set(const PoseSet& set, std::ostream& out) {
  using detail::json;
  json doc;
  doc["kernel"] = detail::kernel_to_json(set.kernel);
  doc["base_orientation"] = detail::quat_to_json(set.base_orientation);
  doc["keys"] = json::array();
  for (const PoseKey& key : set.keys) {
    if (key.is_orientation()) {
      doc["keys"].push_back(json{{"quaternion", detail::quat_to_json(key.orientation())}});
    } else {
      doc["keys"].push_back(json{{"values", key.values()}});
    }
  }
  doc["samples"] = json::array();
  for (const PoseSample& sample : set.samples) {
    json js = json::object();
    js["orientations"] = json::array();
    for (const UnitQuaternion& q : sample.orientations) {
      js["orientations"].push_back(detail::quat_to_json(q));
    }
    js["scalars"] = sample.scalars;
    doc["samples"].push_back(std::move(js));
  }
  out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------

inline void write_solver(const QFittedSolver& solver, std::ostream& out) {
  using detail::json;
  json doc;
  doc["format_version"] = kSolverFormatVersion;
  doc["kernel"] = detail::kernel_to_json(solver.inner().kernel());
  doc["base_orientation"] = detail::quat_to_json(solver.base_orientation());
  doc["keys"] = detail::matrix_to_json(solver.inner().keys());
  doc["weights"] = detail::matrix_to_json(solver.inner().weights());
  doc["layout"] = json{{"orientation_channels", solver.layout().orientation_channels},
                       {"scalar_channels", solver.layout().scalar_channels}};
  doc["lambda"] = solver.inner().lambda();
  out << doc.dump(2) << '\n';
}

inline QFittedSolver read_solver(std::istream& in) {
  using detail::json;
  const json doc = detail::parse_document(in, "solver");
  if (!doc.is_object()) throw ParseError("solver: top level must be an object");

  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
    throw ParseError("solver: missing integer \"format_version\"");
  }
  if (doc["format_version"].get<int>() != kSolverFormatVersion) {
    throw ParseError("solver: unsupported format_version " +
                     std::to_string(doc["format_version"].get<int>()));
  }

  for (const char* field : {"kernel", "base_orientation", "keys", "weights", "layout"}) {
    if (!doc.contains(field)) {
      throw ParseError(std::string("solver: missing \"") + field + "\"");
    }
  }

  const Kernel kernel = detail::kernel_from_json(doc["kernel"]);
  const UnitQuaternion base =
      detail::quat_from_json(doc["base_orientation"], "base_orientation");
  Matrix keys = detail::matrix_from_json(doc["keys"], "keys");
  Matrix weights = detail::matrix_from_json(doc["weights"], "weights");

  const json& jl = doc["layout"];
  if (!jl.is_object() || !jl.contains("orientation_channels") ||
      !jl.contains("scalar_channels") || !jl["orientation_channels"].is_number_unsigned() ||
      !jl["scalar_channels"].is_number_unsigned()) {
    throw ParseError("solver: layout needs unsigned orientation_channels/scalar_channels");
  }
  const ChannelLayout layout{jl["orientation_channels"].get<std::size_t>(),
                             jl["scalar_channels"].get<std::size_t>()};

  double lambda = 0.0;
  if (doc.contains("lambda")) {
    if (!doc["lambda"].is_number()) throw ParseError("solver: lambda must be a number");
    lambda = doc["lambda"].get<double>();
  }

  try {
    return QFittedSolver::from_parts(
        FittedSolver::from_parts(kernel, std::move(keys), std::move(weights), lambda), layout,
        base);
  } catch (const DimensionMismatchError& e) {
    throw ParseError(std::string("solver: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Path conveniences
// ---------------------------------------------------------------------------

namespace detail {
inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  return out;
}
}  // namespace detail

inline PoseSet load_pose_set(const std::string& path) {
  std::ifstream in = detail::open_input(path);
  return read_pose_set(in);
}

inline void save_pose_set(const PoseSet& set, const std::string& path) {
  std::ofstream out = detail::open_output(path);
  write_pose_set(set, out);
}

inline QFittedSolver load_solver(const std::string& path) {
  std::ifstream in = detail::open_input(path);
  return read_solver(in);
}

inline void save_solver(const QFittedSolver& solver, const std::string& path) {
  std::ofstream out = detail::open_output(path);
  write_solver(solver, out);
}

}  // namespace qrbf
