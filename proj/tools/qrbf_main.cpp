// qrbf -- fit and evaluate pose-space rotation interpolators from the
// command line, plus a few small demonstrations of the underlying math.
//
// Exit codes: 0 on success, 1 for unusable input (bad arguments, files
// that fail to parse or validate), 2 when fitting hits a singular kernel
// matrix (typically two identical keys).

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "qrbf/qrbf.hpp"

namespace {

using namespace qrbf;

std::string fmt(double v, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, v);
  return buf;
}

std::string fmt_vec3(const Vec3& v) {
  return "(" + fmt(v.x, 12) + ", " + fmt(v.y, 12) + ", " + fmt(v.z, 12) + ")";
}

std::string fmt_quat(const UnitQuaternion& q) {
  return fmt(q.w, 9) + " " + fmt(q.x, 9) + " " + fmt(q.y, 9) + " " + fmt(q.z, 9);
}

std::vector<double> parse_csv_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(what + ": '" + token + "' is not a finite number");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

UnitQuaternion parse_quat_arg(const std::string& text, const std::string& what) {
  const std::vector<double> c = parse_csv_numbers(text, what);
  if (c.size() != 4) {
    throw Error(what + ": expected 4 components w,x,y,z, got " + std::to_string(c.size()));
  }
  const double n = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]);
  if (std::fabs(n - 1.0) > kQuatNormSlack) {
    throw Error(what + ": quaternion norm " + fmt(n, 6) + " is not within 1e-3 of 1");
  }
  return UnitQuaternion(c[0], c[1], c[2], c[3]);
}

/// Pairs (i, j) of keys whose encoded coordinates coincide exactly.
std::vector<std::pair<std::size_t, std::size_t>> duplicate_key_pairs(const PoseSet& set) {
  std::vector<std::vector<double>> encoded;
  encoded.reserve(set.keys.size());
  for (const PoseKey& key : set.keys) encoded.push_back(key.encoded());
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    for (std::size_t j = i + 1; j < encoded.size(); ++j) {
      if (encoded[i] == encoded[j]) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

int cmd_fit(const std::string& input, const std::string& output, double lambda) {
  const PoseSet set = load_pose_set(input);
  QFittedSolver solver = [&] {
    try {
      return QFittedSolver::fit(set, lambda);
    } catch (const SingularMatrixError& e) {
      std::string msg = e.what();
      for (const auto& [i, j] : duplicate_key_pairs(set)) {
        msg += "; keys " + std::to_string(i) + " and " + std::to_string(j) + " are identical";
      }
      throw SingularMatrixError(msg);
    }
  }();

  // Condition of the system actually solved, (D + lambda I).
  Matrix d = distance_matrix(solver.inner().keys(), solver.inner().kernel());
  for (std::size_t i = 0; i < d.rows(); ++i) d(i, i) += lambda;

  std::cout << "K=" << solver.inner().key_count() << " N=" << solver.inner().key_dimension()
            << " M=" << solver.inner().sample_dimension()
            << " cond=" << fmt(condition_estimate(d), 9) << "\n";
  save_solver(solver, output);
  std::cout << "wrote " << output << "\n";
  return 0;
}

int cmd_eval(const std::string& solver_path, const std::string& key_csv,
             const std::string& key_quat) {
  const QFittedSolver solver = load_solver(solver_path);
  PoseKey key = key_quat.empty()
                    ? PoseKey::from_values(parse_csv_numbers(key_csv, "--key"))
                    : PoseKey::from_orientation(parse_quat_arg(key_quat, "--key-quat"));
  const PoseSample result = solver.eval(key);
  for (std::size_t i = 0; i < result.orientations.size(); ++i) {
    std::cout << "orientation[" << i << "]: " << fmt_quat(result.orientations[i]) << "\n";
  }
  for (std::size_t i = 0; i < result.scalars.size(); ++i) {
    std::cout << "scalar[" << i << "]: " << fmt(result.scalars[i], 9) << "\n";
  }
  return 0;
}

int cmd_blend(const std::string& base_csv, const std::vector<std::string>& pair_args) {
  UnitQuaternion base;
  if (!base_csv.empty()) base = parse_quat_arg(base_csv, "--base");

  std::vector<double> weights;
  std::vector<UnitQuaternion> quats;
  for (const std::string& pair : pair_args) {
    const std::size_t colon = pair.find(':');
    if (colon == std::string::npos) {
      throw Error("--pair: expected weight:qw,qx,qy,qz, got '" + pair + "'");
    }
    const std::vector<double> w = parse_csv_numbers(pair.substr(0, colon), "--pair weight");
    if (w.size() != 1) throw Error("--pair: weight must be a single number");
    weights.push_back(w[0]);
    quats.push_back(parse_quat_arg(pair.substr(colon + 1), "--pair quaternion"));
  }

  std::cout << "blend: " << fmt_quat(weighted_blend(base, weights, quats)) << "\n";
  return 0;
}

int cmd_gimbal_demo() {
  const Vec3 start{1.0, 1.0, 1.0};
  std::cout << "point (1, 1, 1) rotated by quarter turns, one axis at a time\n";
  for (RotationOrder order : kAllRotationOrders) {
    std::cout << to_string(order) << ":";
    Vec3 p = start;
    for (Axis axis : axis_sequence(order)) {
      p = rotation_about_axis(axis, kPi / 2.0) * p;
      std::cout << " " << fmt_vec3(p);
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_kernels(double r, double epsilon) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw Error("--r must be a nonnegative number");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error("--epsilon must be positive");

  const double er = epsilon * r;
  const double poly = std::pow(r, epsilon);
  std::cout << "r=" << fmt(r, 9) << " epsilon=" << fmt(epsilon, 9) << "\n";
  std::cout << "gaussian             exp(-(eps*r)^2)      = " << fmt(std::exp(-er * er), 9) << "\n";
  std::cout << "multiquadric         sqrt(1+(eps*r)^2)    = " << fmt(std::sqrt(1.0 + er * er), 9) << "\n";
  std::cout << "inverse_quadratic    1/(1+(eps*r)^2)      = " << fmt(1.0 / (1.0 + er * er), 9) << "\n";
  std::cout << "inverse_multiquadric 1/sqrt(1+(eps*r)^2)  = " << fmt(1.0 / std::sqrt(1.0 + er * er), 9) << "\n";
  std::cout << "polyharmonic_odd     r^eps                = " << fmt(poly, 9) << "\n";
  std::cout << "polyharmonic_even    r^eps*ln(r)          = " << fmt(r == 0.0 ? 0.0 : poly * std::log(r), 9) << "\n";
  std::cout << "thinplate            r^2*ln(r)            = " << fmt(r == 0.0 ? 0.0 : r * r * std::log(r), 9) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pose-space rotation interpolation"};
  app.require_subcommand(1);

  std::string input, output, solver_path, key_csv, key_quat, base_csv;
  std::vector<std::string> pair_args;
  double lambda = 0.0;
  double r = 0.0;
  double epsilon = 1.0;

  CLI::App* fit = app.add_subcommand("fit", "fit a solver to a pose-set file");
  fit->add_option("-i,--input", input, "pose-set JSON file")->required();
  fit->add_option("-o,--output", output, "solver JSON file to write")->required();
  fit->add_option("--lambda", lambda, "ridge regularization (default 0)");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a fitted solver at a key");
  eval->add_option("-s,--solver", solver_path, "solver JSON file")->required();
  CLI::Option* key_opt = eval->add_option("--key", key_csv, "key vector, comma separated");
  CLI::Option* quat_opt =
      eval->add_option("--key-quat", key_quat, "orientation key as w,x,y,z");
  key_opt->excludes(quat_opt);

  CLI::App* blend = app.add_subcommand("blend", "weighted tangent-space blend of quaternions");
  blend->add_option("--base", base_csv, "base orientation w,x,y,z (default identity)");
  blend->add_option("--pair", pair_args, "weight:qw,qx,qy,qz (repeatable)")->required();

  app.add_subcommand("gimbal-demo",
                     "rotate (1, 1, 1) by quarter turns in every axis order");

  CLI::App* kernels = app.add_subcommand("kernels", "evaluate each kernel formula at a radius");
  kernels->add_option("--r", r, "radius to evaluate at")->required();
  kernels->add_option("--epsilon", epsilon, "shape parameter (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fit->parsed()) return cmd_fit(input, output, lambda);
    if (eval->parsed()) {
      if (key_csv.empty() == key_quat.empty()) {
        throw Error("eval: pass exactly one of --key or --key-quat");
      }
      return cmd_eval(solver_path, key_csv, key_quat);
    }
    if (blend->parsed()) return cmd_blend(base_csv, pair_args);
    if (kernels->parsed()) return cmd_kernels(r, epsilon);
    return cmd_gimbal_demo();
  } catch (const SingularMatrixError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
