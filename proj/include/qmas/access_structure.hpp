#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmas/errors.hpp"

namespace qmas {

// Participant subsets are bitmasks: participant i (1-based) <-> bit i-1.
using SubsetMask = std::uint32_t;

inline SubsetMask subset_to_mask(const std::vector<unsigned>& subset, unsigned n) {
  SubsetMask m = 0;
  for (unsigned p : subset) {
    if (p == 0 || p > n) throw ParseError("participant index out of range: " + std::to_string(p));
    m |= SubsetMask{1} << (p - 1);
  }
  return m;
}

inline std::vector<unsigned> mask_to_subset(SubsetMask m) {
  std::vector<unsigned> out;
  for (unsigned i = 0; m >> i; ++i) {
    if ((m >> i) & 1u) out.push_back(i + 1);
  }
  return out;
}

enum class SubsetClass { Qualified, Forbidden, Intermediate };

inline const char* to_string(SubsetClass c) {
  switch (c) {
    case SubsetClass::Qualified: return "qualified";
    case SubsetClass::Forbidden: return "forbidden";
    default: return "intermediate";
  }
}

// Monotone access structure stored as the antichain of minimal qualified
// sets. Construction normalizes: any listed superset of another listed set
// is dropped.
class AccessStructure {
public:
  AccessStructure(unsigned n, const std::vector<std::vector<unsigned>>& qualified_sets)
      : n_(n) {
    if (n == 0) throw ParseError("participant count must be at least 1");
    if (n > 30) throw ParameterViolation("participant count beyond supported range");
    if (qualified_sets.empty()) throw ParseError("qualified family must be nonempty");
    std::vector<SubsetMask> masks;
    for (const auto& s : qualified_sets) {
      if (s.empty()) throw ParseError("qualified sets must be nonempty");
      masks.push_back(subset_to_mask(s, n));
    }
    minimal_ = normalize(masks);
  }

  unsigned participants() const noexcept { return n_; }
  SubsetMask full_mask() const noexcept { return (SubsetMask{1} << n_) - 1; }
  const std::vector<SubsetMask>& minimal_qualified() const noexcept { return minimal_; }

  bool is_qualified(SubsetMask I) const {
    for (SubsetMask m : minimal_) {
      if ((m & I) == m) return true;
    }
    return false;
  }

  bool is_qualified(const std::vector<unsigned>& I) const {
    return is_qualified(subset_to_mask(I, n_));
  }

  // First subset (ascending mask order) violating
  // qualified(I) XOR qualified(complement(I)); nullopt when self-dual.
  std::optional<SubsetMask> check_self_dual() const {
    const SubsetMask full = full_mask();
    for (SubsetMask I = 0; I <= full; ++I) {
      if (is_qualified(I) == is_qualified(full & ~I)) return I;
    }
    return std::nullopt;
  }

  // All inclusion-maximal forbidden sets. A forbidden I is maximal iff
  // adding any absent participant makes it qualified.
  std::vector<SubsetMask> maximal_forbidden() const {
    const SubsetMask full = full_mask();
    std::vector<SubsetMask> out;
    for (SubsetMask I = 0; I <= full; ++I) {
      if (is_qualified(I)) continue;
      bool maximal = true;
      for (unsigned i = 0; i < n_ && maximal; ++i) {
        const SubsetMask bit = SubsetMask{1} << i;
        if (!(I & bit) && !is_qualified(I | bit)) maximal = false;
      }
      if (maximal) out.push_back(I);
    }
    return out;
  }

  static std::vector<SubsetMask> normalize(std::vector<SubsetMask> masks) {
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    std::vector<SubsetMask> minimal;
    for (SubsetMask a : masks) {
      bool dominated = false;
      for (SubsetMask b : masks) {
        if (b != a && (a & b) == b) {
          dominated = true;
          break;
        }
      }
      if (!dominated) minimal.push_back(a);
    }
    return minimal;
  }

private:
  unsigned n_;
  std::vector<SubsetMask> minimal_;
};

// Validation gate used by the pipeline: pure-state schemes require
// self-duality, so non-self-dual structures are rejected with the witness.
inline void require_self_dual(const AccessStructure& a) {
  if (auto witness = a.check_self_dual()) {
    auto subset = mask_to_subset(*witness);
    std::string desc = "{";
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (i) desc += ",";
      desc += std::to_string(subset[i]);
    }
    desc += "}";
    throw NotSelfDual(subset, "access structure is not self-dual; witness subset " + desc);
  }
}

} // namespace qmas
