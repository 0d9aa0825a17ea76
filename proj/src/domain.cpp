#include "surropt/domain.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "surropt/errors.hpp"

namespace surropt {

IntegerDomain IntegerDomain::build(std::vector<DimensionSpec> specs) {
  if (specs.empty()) {
    throw InvalidArgument("domain requires at least one dimension");
  }
  std::uint64_t cardinality = 1;
  for (const DimensionSpec& dim : specs) {
    if (dim.values.empty()) {
      throw InvalidArgument("dimension '" + dim.name + "' has no values");
    }
    for (std::size_t i = 1; i < dim.values.size(); ++i) {
      if (!(dim.values[i - 1] < dim.values[i])) {
        throw InvalidArgument("dimension '" + dim.name +
                              "' values must be strictly increasing");
      }
    }
    if (__builtin_mul_overflow(cardinality, dim.values.size(), &cardinality)) {
      throw InvalidArgument("domain cardinality overflows 64 bits");
    }
  }
  return IntegerDomain(std::move(specs), cardinality);
}

bool IntegerDomain::contains(const LatticePoint& p) const {
  if (p.coords.size() != dims_.size()) return false;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (p.coords[i] < 0 ||
        p.coords[i] >= static_cast<std::int32_t>(dims_[i].values.size())) {
      return false;
    }
  }
  return true;
}

std::vector<double> IntegerDomain::to_raw(const LatticePoint& p) const {
  if (!contains(p)) {
    throw InvalidArgument("lattice point out of bounds");
  }
  std::vector<double> raw(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    raw[i] = dims_[i].values[static_cast<std::size_t>(p.coords[i])];
  }
  return raw;
}

LatticePoint IntegerDomain::from_raw(std::span<const double> raw) const {
  if (raw.size() != dims_.size()) {
    throw InvalidArgument("raw vector length does not match domain dimension");
  }
  LatticePoint p;
  p.coords.resize(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const std::vector<double>& values = dims_[i].values;
    int match = -1;
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double scale = std::max({1.0, std::fabs(values[j]), std::fabs(raw[i])});
      if (std::fabs(values[j] - raw[i]) <= 1e-9 * scale) {
        match = static_cast<int>(j);
        break;
      }
    }
    if (match < 0) {
      throw InvalidArgument("raw value " + std::to_string(raw[i]) +
                            " not found in dimension '" + dims_[i].name + "'");
    }
    p.coords[i] = match;
  }
  return p;
}

LatticePoint IntegerDomain::random_point(Rng& rng) const {
  LatticePoint p;
  p.coords.resize(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    p.coords[i] = static_cast<std::int32_t>(rng.below(dims_[i].values.size()));
  }
  return p;
}

LatticePoint IntegerDomain::reflect_into_bounds(
    std::span<const std::int64_t> coords) const {
  if (coords.size() != dims_.size()) {
    throw InvalidArgument("coordinate vector length does not match domain");
  }
  LatticePoint p;
  p.coords.resize(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const std::int64_t lo = 0;
    const std::int64_t hi = static_cast<std::int64_t>(dims_[i].values.size()) - 1;
    std::int64_t c = coords[i];
    for (int pass = 0; pass < 2 && (c < lo || c > hi); ++pass) {
      if (c < lo) {
        c = lo + (lo - c);
      } else if (c > hi) {
        c = hi - (c - hi);
      }
    }
    if (c < lo) c = lo;
    if (c > hi) c = hi;
    p.coords[i] = static_cast<std::int32_t>(c);
  }
  return p;
}

void IntegerDomain::for_each_point(
    const std::function<void(const LatticePoint&)>& fn) const {
  LatticePoint p;
  p.coords.assign(dims_.size(), 0);
  while (true) {
    fn(p);
    int i = static_cast<int>(dims_.size()) - 1;
    while (i >= 0) {
      if (++p.coords[i] < static_cast<std::int32_t>(dims_[i].values.size())) break;
      p.coords[i] = 0;
      --i;
    }
    if (i < 0) return;
  }
}

}  // namespace surropt
