#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "qmas/access_structure.hpp"
#include "qmas/code_builder.hpp"
#include "qmas/matrix.hpp"

namespace qmas {

// Rank criterion on a coordinate set: qualified when the projected rank
// difference reaches L, forbidden when it vanishes.
inline SubsetClass classify_subset(const NestedCodePair& pair, const IndexSet& coords) {
  const std::size_t d1 = rank(project_columns(pair.G1, coords));
  const std::size_t d2 = rank(project_columns(pair.G2, coords));
  const std::size_t diff = d1 - d2;
  if (diff == 0) return SubsetClass::Forbidden;
  if (diff == pair.secret_len()) return SubsetClass::Qualified;
  return SubsetClass::Intermediate;
}

struct SubsetVerdict {
  SubsetMask I = 0;
  SubsetClass classical = SubsetClass::Forbidden;
  bool quantum_qualified = false;
};

struct VerificationReport {
  unsigned n = 0;
  unsigned m_prime = 0;
  std::vector<SubsetVerdict> subsets;     // all 2^n, ascending mask
  std::vector<unsigned> share_sizes;      // qudits held per participant
  bool pass = false;
  std::vector<SubsetMask> mismatches;
};

inline IndexSet coords_of(const QuantumScheme& scheme, SubsetMask participants) {
  std::vector<std::uint32_t> coords;
  for (unsigned i = 0; i < scheme.n; ++i) {
    if (participants & (SubsetMask{1} << i))
      coords.insert(coords.end(), scheme.V_prime[i].begin(), scheme.V_prime[i].end());
  }
  std::sort(coords.begin(), coords.end());
  return IndexSet(std::move(coords));
}

// Quantum access structure of the scheme: I is qualified iff its qudits are
// classically qualified and the complement's qudits are classically
// forbidden.
inline VerificationReport derive_quantum_access(const QuantumScheme& scheme) {
  VerificationReport report;
  report.n = scheme.n;
  report.m_prime = scheme.m_prime;
  for (const auto& v : scheme.V_prime)
    report.share_sizes.push_back(static_cast<unsigned>(v.size()));

  const SubsetMask full = (SubsetMask{1} << scheme.n) - 1;
  std::vector<SubsetClass> cls(full + 1u);
  for (SubsetMask I = 0; I <= full; ++I)
    cls[I] = classify_subset(scheme.pair, coords_of(scheme, I));
  for (SubsetMask I = 0; I <= full; ++I) {
    SubsetVerdict v;
    v.I = I;
    v.classical = cls[I];
    v.quantum_qualified = cls[I] == SubsetClass::Qualified &&
                          cls[full & ~I] == SubsetClass::Forbidden;
    report.subsets.push_back(v);
  }
  return report;
}

// Compares the derived quantum access structure against the requested one;
// fills pass/mismatches and returns the offending subsets (empty = pass).
inline std::vector<SubsetMask> verify_against_spec(VerificationReport& report,
                                                   const AccessStructure& a) {
  report.mismatches.clear();
  for (const auto& v : report.subsets) {
    if (v.quantum_qualified != a.is_qualified(v.I)) report.mismatches.push_back(v.I);
  }
  report.pass = report.mismatches.empty();
  return report.mismatches;
}

} // namespace qmas
