#include "surropt/gp_surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "surropt/errors.hpp"
#include "surropt/rng.hpp"

namespace surropt {

namespace {

constexpr double kInitialNugget = 1e-10;
constexpr double kMaxNugget = 1e-4;
constexpr double kLog10GammaLo = -3.0;
constexpr double kLog10GammaHi = 2.0;
constexpr int kMultiStarts = 8;
constexpr int kSweeps = 3;
constexpr std::uint64_t kMleSeed = 0x6a09e667f3bcc908ull;  // fixed: fits are rng-free

double normal_pdf(double v) {
  return std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double v) { return 0.5 * std::erfc(-v / std::numbers::sqrt2); }

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

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& centers,
                                   const Eigen::VectorXd& gammas) {
  const int n = static_cast<int>(centers.rows());
  Eigen::MatrixXd r(n, n);
  for (int k = 0; k < n; ++k) {
    r(k, k) = 1.0;
    for (int l = k + 1; l < n; ++l) {
      const Eigen::VectorXd diff = centers.row(k) - centers.row(l);
      r(k, l) = r(l, k) = std::exp(-(gammas.array() * diff.array().square()).sum());
    }
  }
  return r;
}

struct ProfiledFit {
  double mu = 0.0;
  double sigma2 = 0.0;
  double log_likelihood = 0.0;  // concentrated, up to an additive constant
  double nugget = 0.0;
  Eigen::LLT<Eigen::MatrixXd> chol;
};

// Factorizes R(gamma) + nugget I, escalating the nugget x10 on failure, and
// profiles out mu and sigma^2.
std::optional<ProfiledFit> profile_likelihood(const Eigen::MatrixXd& centers,
                                              const Eigen::VectorXd& values,
                                              const Eigen::VectorXd& gammas) {
  const int n = static_cast<int>(centers.rows());
  Eigen::MatrixXd r = correlation_matrix(centers, gammas);
  ProfiledFit fit;
  fit.nugget = kInitialNugget;
  while (true) {
    Eigen::MatrixXd shifted = r;
    shifted.diagonal().array() += fit.nugget;
    fit.chol.compute(shifted);
    if (fit.chol.info() == Eigen::Success) break;
    fit.nugget *= 10.0;
    if (fit.nugget > kMaxNugget) return std::nullopt;
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd rinv_values = fit.chol.solve(values);
  const Eigen::VectorXd rinv_ones = fit.chol.solve(ones);
  const double denom = ones.dot(rinv_ones);
  if (!(denom > 0.0)) return std::nullopt;
  fit.mu = ones.dot(rinv_values) / denom;
  const Eigen::VectorXd resid = values - fit.mu * ones;
  fit.sigma2 = std::max(0.0, resid.dot(fit.chol.solve(resid)) / n);

  double log_det = 0.0;
  for (int i = 0; i < n; ++i) log_det += 2.0 * std::log(fit.chol.matrixLLT()(i, i));
  const double sigma2_floor = std::max(fit.sigma2, 1e-300);
  fit.log_likelihood = -0.5 * (n * std::log(sigma2_floor) + log_det);
  return fit;
}

// Golden-section maximization of a unimodal-ish slice; cheap and derivative
// free, which is all the concentrated likelihood needs at n <= 50.
template <typename F>
double golden_max(F&& f, double lo, double hi, int iters) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? x1 : x2;
}

}  // namespace

double correlation(std::span<const double> a, std::span<const double> b,
                   std::span<const double> gammas) {
  if (a.size() != b.size() || a.size() != gammas.size()) {
    throw InvalidArgument("correlation arguments have mismatched lengths");
  }
  double expo = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(gammas[i] > 0.0)) {
      throw InvalidArgument("correlation lengths must be positive");
    }
    const double diff = a[i] - b[i];
    expo += gammas[i] * diff * diff;
  }
  return std::exp(-expo);
}

double expected_improvement_value(double mean, double sd, double best) {
  if (sd <= 1e-12) return 0.0;
  const double v = (best - mean) / sd;
  return std::max(0.0, sd * (v * normal_cdf(v) + normal_pdf(v)));
}

GpModel GpModel::fit(const std::vector<LatticePoint>& points,
                     const Eigen::VectorXd& values) {
  const int n = static_cast<int>(points.size());
  if (n < 2 || values.size() != n) {
    throw InvalidArgument("kriging fit needs at least two points with values");
  }
  if (!values.allFinite()) {
    throw InvalidArgument("kriging fit requires finite values");
  }
  {
    PointSet seen;
    for (const LatticePoint& p : points) {
      if (!seen.insert(p).second) {
        throw InvalidArgument("duplicate evaluated point in kriging fit");
      }
    }
  }

  // canonical (lexicographic) training order makes the fit — including the
  // iterative likelihood search — insensitive to input permutation
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return points[a].coords < points[b].coords;
  });
  std::vector<LatticePoint> sorted(n);
  Eigen::VectorXd sorted_values(n);
  for (int i = 0; i < n; ++i) {
    sorted[i] = points[order[i]];
    sorted_values(i) = values(order[i]);
  }

  GpModel model;
  model.centers_ = points_to_matrix(sorted);
  model.values_ = sorted_values;
  const int d = static_cast<int>(model.centers_.cols());
  model.gammas_ = Eigen::VectorXd::Ones(d);

  const double spread = values.maxCoeff() - values.minCoeff();
  model.degenerate_ =
      spread <= 1e-14 * std::max(1.0, values.cwiseAbs().maxCoeff());

  if (!model.degenerate_) {
    // Profiled MLE over log10(gamma): Latin-hypercube multi-start followed by
    // coordinate descent with golden-section line searches.
    Rng rng(kMleSeed);
    const auto objective = [&](const Eigen::VectorXd& log_gamma) {
      Eigen::VectorXd g = log_gamma;
      for (int i = 0; i < d; ++i) g(i) = std::pow(10.0, log_gamma(i));
      const auto fit = profile_likelihood(model.centers_, model.values_, g);
      return fit ? fit->log_likelihood : -std::numeric_limits<double>::infinity();
    };

    std::vector<Eigen::VectorXd> starts;
    starts.reserve(kMultiStarts);
    {
      // per-dimension stratified permutations
      std::vector<std::vector<int>> strata(d);
      for (int j = 0; j < d; ++j) {
        strata[j].resize(kMultiStarts);
        for (int s = 0; s < kMultiStarts; ++s) strata[j][s] = s;
        for (int s = kMultiStarts - 1; s > 0; --s) {
          std::swap(strata[j][s], strata[j][rng.below(s + 1)]);
        }
      }
      for (int s = 0; s < kMultiStarts; ++s) {
        Eigen::VectorXd start(d);
        for (int j = 0; j < d; ++j) {
          const double cell = (strata[j][s] + rng.uniform01()) / kMultiStarts;
          start(j) = kLog10GammaLo + cell * (kLog10GammaHi - kLog10GammaLo);
        }
        starts.push_back(start);
      }
    }

    double best_ll = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_log_gamma = Eigen::VectorXd::Zero(d);
    for (const Eigen::VectorXd& start : starts) {
      Eigen::VectorXd log_gamma = start;
      double current = objective(log_gamma);
      for (int sweep = 0; sweep < kSweeps; ++sweep) {
        const double before = current;
        for (int j = 0; j < d; ++j) {
          const double chosen = golden_max(
              [&](double value) {
                Eigen::VectorXd probe = log_gamma;
                probe(j) = value;
                return objective(probe);
              },
              kLog10GammaLo, kLog10GammaHi, 18);
          Eigen::VectorXd probe = log_gamma;
          probe(j) = chosen;
          const double candidate = objective(probe);
          if (candidate > current) {
            log_gamma = probe;
            current = candidate;
          }
        }
        if (current - before < 1e-9) break;
      }
      if (current > best_ll) {
        best_ll = current;
        best_log_gamma = log_gamma;
      }
    }
    if (std::isfinite(best_ll)) {
      for (int j = 0; j < d; ++j) {
        model.gammas_(j) = std::pow(10.0, best_log_gamma(j));
      }
    }
  }

  model.finalize();
  return model;
}

void GpModel::finalize() {
  const auto fit = profile_likelihood(centers_, values_, gammas_);
  if (!fit) {
    throw NumericError(
        "kriging correlation matrix could not be factorized even at the "
        "maximum nugget");
  }
  nugget_ = fit->nugget;
  chol_ = fit->chol;
  mu_hat_ = fit->mu;
  sigma2_hat_ = degenerate_ ? 0.0 : fit->sigma2;

  const int n = static_cast<int>(centers_.rows());
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  alpha_ = chol_.solve(values_ - mu_hat_ * ones);
  rinv_ones_ = chol_.solve(ones);
  ones_rinv_ones_ = ones.dot(rinv_ones_);
}

GpModel::Prediction GpModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != centers_.cols()) {
    throw InvalidArgument("query dimension does not match model");
  }
  const int n = static_cast<int>(centers_.rows());
  Eigen::VectorXd r(n);
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd diff = centers_.row(j).transpose() - x;
    r(j) = std::exp(-(gammas_.array() * diff.array().square()).sum());
  }
  Prediction out;
  out.mean = mu_hat_ + r.dot(alpha_);
  const Eigen::VectorXd rinv_r = chol_.solve(r);
  const double mean_term = 1.0 - rinv_ones_.dot(r);
  out.mse = sigma2_hat_ *
            (1.0 - r.dot(rinv_r) + mean_term * mean_term / ones_rinv_ones_);
  if (out.mse < 0.0) out.mse = 0.0;
  return out;
}

GpModel::Prediction GpModel::predict(const LatticePoint& p) const {
  Eigen::VectorXd x(p.coords.size());
  for (std::size_t i = 0; i < p.coords.size(); ++i) x(i) = p.coords[i];
  return predict(x);
}

double GpModel::expected_improvement(const Eigen::VectorXd& x,
                                     double ell_best) const {
  const Prediction p = predict(x);
  return expected_improvement_value(p.mean, std::sqrt(p.mse), ell_best);
}

double GpModel::expected_improvement(const LatticePoint& p,
                                     double ell_best) const {
  Eigen::VectorXd x(p.coords.size());
  for (std::size_t i = 0; i < p.coords.size(); ++i) x(i) = p.coords[i];
  return expected_improvement(x, ell_best);
}

}  // namespace surropt
