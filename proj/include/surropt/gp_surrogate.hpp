#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "surropt/domain.hpp"

namespace surropt {

// Gaussian correlation kernel exp(-sum_i gamma_i |a_i - b_i|^2); the smoothness
// exponent is fixed at 2 in every dimension.
double correlation(std::span<const double> a, std::span<const double> b,
                   std::span<const double> gammas);

// Closed-form expected improvement of a normal predictor with the given mean
// and standard deviation against the incumbent best value. Returns 0 when
// sd <= 1e-12 (the analytic limit).
double expected_improvement_value(double mean, double sd, double best);

// Kriging surrogate with constant mean: correlation lengths fitted by maximum
// likelihood (profiled mean and variance), Cholesky-factorized correlation
// matrix with an escalating diagonal nugget. Immutable after fit; predictions
// are thread-safe.
class GpModel {
 public:
  struct Prediction {
    double mean;
    double mse;  // kriging mean squared error, clamped at 0
  };

  // Requires n >= 2 pairwise distinct points and finite values. Deterministic:
  // the likelihood multi-start uses a fixed internal seed.
  static GpModel fit(const std::vector<LatticePoint>& points,
                     const Eigen::VectorXd& values);

  Prediction predict(const Eigen::VectorXd& x) const;
  Prediction predict(const LatticePoint& p) const;

  double expected_improvement(const Eigen::VectorXd& x, double ell_best) const;
  double expected_improvement(const LatticePoint& p, double ell_best) const;

  int dimension() const { return static_cast<int>(centers_.cols()); }
  int center_count() const { return static_cast<int>(centers_.rows()); }
  const Eigen::MatrixXd& centers() const { return centers_; }
  const Eigen::VectorXd& values() const { return values_; }
  const Eigen::VectorXd& gammas() const { return gammas_; }
  double mu_hat() const { return mu_hat_; }
  double sigma2_hat() const { return sigma2_hat_; }
  double nugget() const { return nugget_; }

  // True when the training values were constant (sigma2 == 0, EI vanishes).
  bool degenerate() const { return degenerate_; }

 private:
  GpModel() = default;

  void finalize();  // factorize R and precompute solves for the fitted gammas

  Eigen::MatrixXd centers_;  // n x d
  Eigen::VectorXd values_;
  Eigen::VectorXd gammas_;
  double mu_hat_ = 0.0;
  double sigma2_hat_ = 0.0;
  double nugget_ = 0.0;
  bool degenerate_ = false;

  Eigen::LLT<Eigen::MatrixXd> chol_;   // of R + nugget I
  Eigen::VectorXd alpha_;              // R^-1 (values - mu 1)
  Eigen::VectorXd rinv_ones_;          // R^-1 1
  double ones_rinv_ones_ = 0.0;        // 1^T R^-1 1
};

}  // namespace surropt
