#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "surropt/rng.hpp"

namespace surropt {

// One searchable hyperparameter: a name plus the ordered list of raw values it
// may assume. The mapped representation is the index 0..size-1.
struct DimensionSpec {
  std::string name;
  std::vector<double> values;  // non-empty, strictly increasing
};

// A point of the mapped lattice; coords[i] indexes dims[i].values.
struct LatticePoint {
  std::vector<std::int32_t> coords;

  bool operator==(const LatticePoint&) const = default;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::int32_t c : p.coords) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c));
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

using PointSet = std::unordered_set<LatticePoint, LatticePointHash>;

// The finite search lattice: the product of the mapped index ranges of all
// dimensions. Immutable after construction, safe to share across threads.
class IntegerDomain {
 public:
  static IntegerDomain build(std::vector<DimensionSpec> specs);

  int dimension() const { return static_cast<int>(dims_.size()); }
  std::uint64_t cardinality() const { return cardinality_; }
  const std::vector<DimensionSpec>& dims() const { return dims_; }
  int size(int dim) const { return static_cast<int>(dims_[dim].values.size()); }

  bool contains(const LatticePoint& p) const;

  // Mapped -> raw values; inverse of from_raw.
  std::vector<double> to_raw(const LatticePoint& p) const;

  // Raw values -> mapped indices; every component must match a stored value.
  LatticePoint from_raw(std::span<const double> raw) const;

  // Independent uniform draw per dimension.
  LatticePoint random_point(Rng& rng) const;

  // Per-dimension boundary reflection for perturbed coordinates; after two
  // reflections a still-outside coordinate is clamped to the nearest bound
  // (length-1 and length-2 dimensions cannot always terminate in one step).
  LatticePoint reflect_into_bounds(std::span<const std::int64_t> coords) const;

  // Enumerates every lattice point in row-major order (last dim fastest).
  void for_each_point(const std::function<void(const LatticePoint&)>& fn) const;

 private:
  IntegerDomain(std::vector<DimensionSpec> specs, std::uint64_t cardinality)
      : dims_(std::move(specs)), cardinality_(cardinality) {}

  std::vector<DimensionSpec> dims_;
  std::uint64_t cardinality_ = 0;
};

}  // namespace surropt
