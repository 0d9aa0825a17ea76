#include "surropt/testbed.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "surropt/errors.hpp"
#include "surropt/rng.hpp"

namespace surropt {

namespace {

std::uint64_t hash_raw(std::span<const double> raw) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (double v : raw) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    h ^= bits;
    h *= 0x100000001b3ull;
  }
  return h;
}

class QuadraticObjective final : public SyntheticObjective {
 public:
  QuadraticObjective(const IntegerDomain& domain, LatticePoint target)
      : target_(std::move(target)), target_raw_(domain.to_raw(target_)) {}

  double evaluate(std::span<const double> raw, std::uint64_t) const override {
    if (raw.size() != target_raw_.size()) {
      throw InvalidArgument("query dimension does not match objective");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double diff = raw[i] - target_raw_[i];
      acc += diff * diff;
    }
    return acc;
  }

  std::string descriptor() const override { return "quadratic"; }
  const LatticePoint& optimum() const override { return target_; }
  double optimum_value() const override { return 0.0; }

 private:
  LatticePoint target_;
  std::vector<double> target_raw_;
};

class MultimodalObjective final : public SyntheticObjective {
 public:
  MultimodalObjective(const IntegerDomain& domain, std::uint64_t seed) {
    if (domain.cardinality() > 1000000ull) {
      throw InvalidArgument(
          "multimodal testbed requires an enumerable lattice (<= 1e6 points)");
    }
    Rng rng(seed);
    const int d = domain.dimension();
    for (int b = 0; b < 3; ++b) {
      Bump bump;
      bump.center = domain.to_raw(domain.random_point(rng));
      bump.amplitude = rng.uniform(0.6, 1.0);
      double span = 0.0;
      for (int j = 0; j < d; ++j) {
        const auto& values = domain.dims()[j].values;
        span += values.back() - values.front();
      }
      span = std::max(span / d, 1.0);
      bump.width = rng.uniform(span / 6.0, span / 3.0);
      bumps_.push_back(std::move(bump));
    }

    double best = std::numeric_limits<double>::infinity();
    domain.for_each_point([&](const LatticePoint& p) {
      const double value = value_at(domain.to_raw(p));
      if (value < best) {
        best = value;
        optimum_ = p;
      }
    });
    optimum_value_ = best;
  }

  double evaluate(std::span<const double> raw, std::uint64_t) const override {
    return value_at(std::vector<double>(raw.begin(), raw.end()));
  }

  std::string descriptor() const override { return "multimodal"; }
  const LatticePoint& optimum() const override { return optimum_; }
  double optimum_value() const override { return optimum_value_; }

 private:
  struct Bump {
    std::vector<double> center;
    double amplitude = 1.0;
    double width = 1.0;
  };

  double value_at(const std::vector<double>& raw) const {
    double acc = 0.0;
    for (const Bump& bump : bumps_) {
      double sq = 0.0;
      for (std::size_t i = 0; i < raw.size(); ++i) {
        const double diff = raw[i] - bump.center[i];
        sq += diff * diff;
      }
      acc -= bump.amplitude * std::exp(-sq / (2.0 * bump.width * bump.width));
    }
    return acc;
  }

  std::vector<Bump> bumps_;
  LatticePoint optimum_;
  double optimum_value_ = 0.0;
};

class NoisyObjective final : public SyntheticObjective {
 public:
  NoisyObjective(std::unique_ptr<SyntheticObjective> base, double sigma)
      : base_(std::move(base)), sigma_(sigma) {
    if (sigma < 0.0) throw InvalidArgument("noise scale must be nonnegative");
  }

  double evaluate(std::span<const double> raw, std::uint64_t seed) const override {
    const double value = base_->evaluate(raw, seed);
    if (sigma_ == 0.0) return value;
    Rng rng(mix_seed(seed, hash_raw(raw)));
    return value + sigma_ * rng.normal();
  }

  std::string descriptor() const override {
    return base_->descriptor() + "+noise";
  }
  const LatticePoint& optimum() const override { return base_->optimum(); }
  double optimum_value() const override { return base_->optimum_value(); }

 private:
  std::unique_ptr<SyntheticObjective> base_;
  double sigma_;
};

}  // namespace

std::unique_ptr<SyntheticObjective> quadratic(const IntegerDomain& domain,
                                              const LatticePoint& target) {
  if (!domain.contains(target)) {
    throw InvalidArgument("quadratic target must lie in the domain");
  }
  return std::make_unique<QuadraticObjective>(domain, target);
}

std::unique_ptr<SyntheticObjective> multimodal(const IntegerDomain& domain,
                                               std::uint64_t seed) {
  return std::make_unique<MultimodalObjective>(domain, seed);
}

std::unique_ptr<SyntheticObjective> with_noise(
    std::unique_ptr<SyntheticObjective> base, double sigma) {
  return std::make_unique<NoisyObjective>(std::move(base), sigma);
}

}  // namespace surropt
