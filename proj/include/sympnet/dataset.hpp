#pragma once

#include "sympnet/integrators.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sympnet {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyDatasetError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Axis-aligned box in phase space.
struct Box {
  Vector lower;
  Vector upper;

  Box(Vector lo, Vector hi);
  Eigen::Index dim() const { return lower.size(); }
  bool contains(const Vector& x) const;
};

/// Ordered key=value provenance; written as "# key=value" CSV header lines.
class DatasetMeta {
 public:
  void set(const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  bool operator==(const DatasetMeta&) const = default;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Pairs (x_i, y_i = phi_h(x_i)); column i of `inputs` and `targets`.
struct Dataset {
  Matrix inputs;
  Matrix targets;
  DatasetMeta meta;

  Eigen::Index size() const { return inputs.cols(); }
  int dof() const { return static_cast<int>(inputs.rows() / 2); }
  Vector x(Eigen::Index i) const { return inputs.col(i); }
  Vector y(Eigen::Index i) const { return targets.col(i); }

  /// For trajectory data: x_n, the last observed point.
  Vector final_point() const;

  bool operator==(const Dataset& other) const;
};

std::string format_vector(const Vector& v);      // "a,b,c"
Vector parse_vector(const std::string& text);    // inverse of format_vector

/// Uniform samples in `box` mapped through the reference integrator. Sample i
/// draws from its own stream derived from `seed`, so the result does not
/// depend on evaluation order. A sample whose step fails is redrawn up to
/// `max_retries` times.
Dataset sample_pairs(const HamiltonianSystem& sys, const Box& box, int n, double h,
                     std::uint64_t seed, const IntegratorConfig& integ = {},
                     int max_retries = 16);

/// Consecutive pairs (x_{i-1}, x_i), i = 1..n, of one reference trajectory.
Dataset sample_trajectory(const HamiltonianSystem& sys, const Vector& x0, int n, double h,
                          const IntegratorConfig& integ = {});

void save_csv(std::ostream& out, const Dataset& data);
Dataset load_csv(std::istream& in);
void save_csv(const std::string& path, const Dataset& data);
Dataset load_csv(const std::string& path);

}  // namespace sympnet
