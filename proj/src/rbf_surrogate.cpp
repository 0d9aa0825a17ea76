#include "surropt/rbf_surrogate.hpp"

#include <cmath>

#include "surropt/errors.hpp"

namespace surropt {

namespace {

Eigen::MatrixXd points_to_matrix(const std::vector<LatticePoint>& points) {
  const int n = static_cast<int>(points.size());
  const int d = static_cast<int>(points.front().coords.size());
  Eigen::MatrixXd m(n, d);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(points[i].coords.size()) != d) {
      throw InvalidArgument("points have inconsistent dimensions");
    }
    for (int j = 0; j < d; ++j) m(i, j) = points[i].coords[j];
  }
  return m;
}

}  // namespace

RbfModel RbfModel::fit(const std::vector<LatticePoint>& points,
                       const Eigen::VectorXd& values) {
  const int n = static_cast<int>(points.size());
  if (n == 0 || values.size() != n) {
    throw InvalidArgument("point and value counts differ");
  }
  const int d = static_cast<int>(points.front().coords.size());
  if (n < d + 1) {
    throw InvalidArgument("cubic RBF with linear tail needs at least d+1 points");
  }
  {
    PointSet seen;
    for (const LatticePoint& p : points) {
      if (!seen.insert(p).second) {
        throw InvalidArgument("duplicate evaluated point in RBF fit");
      }
    }
  }

  RbfModel model;
  model.centers_ = points_to_matrix(points);

  Eigen::MatrixXd tail(n, d + 1);  // P = [points, 1]
  tail.leftCols(d) = model.centers_;
  tail.col(d).setOnes();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> tail_qr(tail);
  if (tail_qr.rank() < d + 1) {
    throw NumericError(
        "non-invertible RBF design: evaluated points are affinely dependent "
        "(rank(P) < d+1)");
  }

  Eigen::MatrixXd kernel(n, n);
  for (int k = 0; k < n; ++k) {
    kernel(k, k) = 0.0;
    for (int l = k + 1; l < n; ++l) {
      const double r = (model.centers_.row(k) - model.centers_.row(l)).norm();
      kernel(k, l) = kernel(l, k) = r * r * r;
    }
  }

  const int m = n + d + 1;
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs.head(n) = values;

  const auto assemble = [&](double diag_shift) {
    system.topLeftCorner(n, n) = kernel;
    system.topLeftCorner(n, n).diagonal().array() += diag_shift;
    system.topRightCorner(n, d + 1) = tail;
    system.bottomLeftCorner(d + 1, n) = tail.transpose();
    system.bottomRightCorner(d + 1, d + 1).setZero();
  };

  assemble(0.0);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  if (lu.rcond() < 1e-12) {
    // ill-conditioned kernel block: perturb its diagonal and refit
    const double shift = 1e-10 * kernel.trace() / n;
    assemble(shift > 0.0 ? shift : 1e-10);
    lu.compute(system);
    model.regularized_ = true;
    if (lu.rcond() < 1e-14) {
      throw NumericError("RBF system remained singular after regularization");
    }
  }

  const Eigen::VectorXd solution = lu.solve(rhs);
  if (!solution.allFinite()) {
    throw NumericError("RBF linear solve produced non-finite coefficients");
  }
  model.lambdas_ = solution.head(n);
  model.beta_ = solution.segment(n, d);
  model.beta0_ = solution(m - 1);
  return model;
}

double RbfModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != centers_.cols()) {
    throw InvalidArgument("query dimension does not match model");
  }
  double acc = beta0_ + beta_.dot(x);
  for (int j = 0; j < centers_.rows(); ++j) {
    const double r = (centers_.row(j).transpose() - x).norm();
    acc += lambdas_(j) * r * r * r;
  }
  return acc;
}

double RbfModel::predict(const LatticePoint& p) const {
  Eigen::VectorXd x(p.coords.size());
  for (std::size_t i = 0; i < p.coords.size(); ++i) x(i) = p.coords[i];
  return predict(x);
}

}  // namespace surropt
