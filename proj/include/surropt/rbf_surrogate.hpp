#pragma once

#include <Eigen/Dense>
#include <vector>

#include "surropt/domain.hpp"

namespace surropt {

// Cubic radial basis interpolant with a linear polynomial tail,
//
//   m(x) = sum_j lambda_j * ||x - c_j||^3  +  beta0 + beta . x,
//
// fitted by solving the saddle-point system [Phi P; P^T 0][lambda; beta~] =
// [values; 0]. Immutable after fit; predictions are thread-safe.
class RbfModel {
 public:
  // points must be pairwise distinct with |points| >= d+1 and an affinely
  // independent subset (rank of [points 1] equal to d+1); values are the
  // replicate-mean losses at those points.
  static RbfModel fit(const std::vector<LatticePoint>& points,
                      const Eigen::VectorXd& values);

  double predict(const Eigen::VectorXd& x) const;
  double predict(const LatticePoint& p) const;

  int dimension() const { return static_cast<int>(centers_.cols()); }
  int center_count() const { return static_cast<int>(centers_.rows()); }
  const Eigen::MatrixXd& centers() const { return centers_; }  // n x d
  const Eigen::VectorXd& lambdas() const { return lambdas_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  double beta0() const { return beta0_; }

  // True when the kernel block needed a diagonal perturbation to factorize.
  bool regularized() const { return regularized_; }

 private:
  RbfModel() = default;

  Eigen::MatrixXd centers_;
  Eigen::VectorXd lambdas_;
  Eigen::VectorXd beta_;
  double beta0_ = 0.0;
  bool regularized_ = false;
};

}  // namespace surropt
