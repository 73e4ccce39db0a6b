#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace sympnet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Phase points are stored as (p_1..p_d, q_1..q_d). Batches of points are
// matrices with one point per column.

class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Degrees of freedom of a phase vector; throws if its length is odd or zero.
inline int degrees_of_freedom(Eigen::Index length) {
  if (length <= 0 || length % 2 != 0) {
    throw std::invalid_argument("phase vector length must be positive and even, got " +
                                std::to_string(length));
  }
  return static_cast<int>(length / 2);
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& x) {
  return x.derived().array().isFinite().all();
}

/// Validates a phase point for a system with `d` degrees of freedom.
template <typename Derived>
void check_phase_point(const Eigen::MatrixBase<Derived>& x, int d) {
  if (x.size() != 2 * d) {
    throw std::invalid_argument("phase point has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(2 * d));
  }
  if (!all_finite(x)) throw std::invalid_argument("phase point has non-finite entries");
}

/// The canonical structure matrix J = [[0, I], [-I, 0]].
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> symplectic_form(int d) {
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  M j = M::Zero(2 * d, 2 * d);
  j.topRightCorner(d, d).setIdentity();
  j.bottomLeftCorner(d, d) = -M::Identity(d, d);
  return j;
}

/// Frobenius norm of A^T J A - J. Zero iff A is a symplectic matrix.
template <typename Derived>
typename Derived::Scalar symplectic_defect(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const int d = degrees_of_freedom(a.rows());
  const auto j = symplectic_form<Scalar>(d);
  return (a.transpose() * j * a - j).norm();
}

}  // namespace sympnet
