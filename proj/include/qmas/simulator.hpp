#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "qmas/access_structure.hpp"
#include "qmas/code_builder.hpp"
#include "qmas/errors.hpp"
#include "qmas/matrix.hpp"
#include "qmas/verifier.hpp"

namespace qmas {

inline constexpr std::uint64_t kDefaultAmplitudeCap = 1ull << 22;

// Dense state over m' qudits; basis labels are vectors in F_q^{m'} in
// little-endian digit order (coordinate 1 is the least significant digit).
struct StateVector {
  std::uint32_t q = 2;
  unsigned num_qudits = 0;
  std::vector<std::complex<double>> amplitudes;

  double norm() const {
    double s = 0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
  }
};

struct DensityMatrix {
  std::size_t dim = 0;
  std::vector<std::complex<double>> entries;  // row-major dim x dim

  std::complex<double>& at(std::size_t r, std::size_t c) { return entries[r * dim + c]; }
  std::complex<double> at(std::size_t r, std::size_t c) const { return entries[r * dim + c]; }

  double trace_real() const {
    double t = 0;
    for (std::size_t i = 0; i < dim; ++i) t += at(i, i).real();
    return t;
  }
};

namespace detail {

inline std::uint64_t checked_dimension(std::uint32_t q, unsigned num_qudits,
                                       std::uint64_t cap) {
  std::uint64_t d = 1;
  for (unsigned i = 0; i < num_qudits; ++i) {
    if (d > cap / q)
      throw DimensionCap("q^" + std::to_string(num_qudits) + " exceeds the amplitude cap of " +
                         std::to_string(cap));
    d *= q;
  }
  if (d > cap)
    throw DimensionCap("q^" + std::to_string(num_qudits) + " exceeds the amplitude cap of " +
                       std::to_string(cap));
  return d;
}

inline std::uint64_t encode_label(const Row& digits, std::uint32_t q) {
  std::uint64_t label = 0;
  for (std::size_t j = digits.size(); j-- > 0;) label = label * q + digits[j];
  return label;
}

inline void decode_label(std::uint64_t label, std::uint32_t q, std::size_t len, Row& out) {
  out.resize(len);
  for (std::size_t j = 0; j < len; ++j) {
    out[j] = static_cast<std::uint32_t>(label % q);
    label /= q;
  }
}

// Visit every element of the row space of `basis` exactly once, as digit
// vectors. Walks an odometer over coefficients; q * any row returns to the
// start, so the vector is mutated in place without copies.
template <typename Fn>
inline void for_each_span_element(const GfMatrix& basis, Fn&& fn) {
  const std::uint32_t q = basis.modulus();
  Row current(basis.cols(), 0);
  auto rec = [&](auto&& self, std::size_t r) -> void {
    if (r == basis.rows()) {
      fn(current);
      return;
    }
    for (std::uint32_t c = 0; c < q; ++c) {
      self(self, r + 1);
      for (std::size_t j = 0; j < current.size(); ++j)
        current[j] = gf_add(current[j], basis.at(r, j), q);
    }
  };
  rec(rec, 0);
}

inline Row secret_shift(const NestedCodePair& pair, const Row& secret_digits) {
  Row shift(pair.length(), 0);
  for (std::size_t i = 0; i < secret_digits.size(); ++i) {
    for (std::size_t c = 0; c < shift.size(); ++c)
      shift[c] = gf_add(shift[c], gf_mul(secret_digits[i], pair.leaders[i][c], pair.q), pair.q);
  }
  return shift;
}

} // namespace detail

// Eq.-style CSS encoding: each basis secret |s> maps to the uniform
// superposition over the coset f(s) = sum_i s_i leader_i + C2, amplitude
// 1/sqrt(|C2|); general secrets extend linearly. The result is normalized.
inline StateVector encode_css(const QuantumScheme& scheme,
                              const std::vector<std::complex<double>>& secret_state,
                              std::uint64_t cap = kDefaultAmplitudeCap) {
  const std::uint32_t q = scheme.q;
  const std::uint64_t dim = detail::checked_dimension(q, scheme.m_prime, cap);
  const std::uint64_t secret_dim = detail::checked_dimension(q, scheme.L, cap);
  if (secret_state.size() != secret_dim)
    throw ParameterViolation("secret state must have q^L amplitudes");

  const GfMatrix basis2 = rref(scheme.pair.G2);
  const double amp = 1.0 / std::sqrt(std::pow(static_cast<double>(q),
                                              static_cast<double>(basis2.rows())));

  StateVector state;
  state.q = q;
  state.num_qudits = scheme.m_prime;
  state.amplitudes.assign(dim, {0.0, 0.0});

  Row secret_digits;
  for (std::uint64_t s = 0; s < secret_dim; ++s) {
    const std::complex<double> coef = secret_state[s];
    if (coef == std::complex<double>{0.0, 0.0}) continue;
    detail::decode_label(s, q, scheme.L, secret_digits);
    const Row shift = detail::secret_shift(scheme.pair, secret_digits);
    detail::for_each_span_element(basis2, [&](const Row& element) {
      Row sum(element.size());
      for (std::size_t j = 0; j < sum.size(); ++j) sum[j] = gf_add(element[j], shift[j], q);
      state.amplitudes[detail::encode_label(sum, q)] += coef * amp;
    });
  }

  const double nrm = state.norm();
  if (nrm == 0.0) throw ParameterViolation("secret state must be nonzero");
  for (auto& a : state.amplitudes) a /= nrm;
  return state;
}

// Reduced density matrix on the kept qudits (1-based positions).
inline DensityMatrix partial_trace(const StateVector& state, const IndexSet& keep) {
  for (auto c : keep) {
    if (c > state.num_qudits) throw IndexOutOfRange("kept qudit index out of range");
  }
  const std::uint32_t q = state.q;
  std::vector<bool> kept(state.num_qudits, false);
  for (auto c : keep) kept[c - 1] = true;

  std::uint64_t dim_keep = 1;
  for (std::size_t i = 0; i < keep.size(); ++i) dim_keep *= q;
  std::uint64_t dim_env = state.amplitudes.size() / dim_keep;

  DensityMatrix rho;
  rho.dim = dim_keep;
  rho.entries.assign(dim_keep * dim_keep, {0.0, 0.0});

  // Slice the state by environment label, then accumulate v_e v_e^dagger.
  std::vector<std::vector<std::complex<double>>> slices(
      dim_env, std::vector<std::complex<double>>(dim_keep, {0.0, 0.0}));
  for (std::uint64_t label = 0; label < state.amplitudes.size(); ++label) {
    const auto& a = state.amplitudes[label];
    if (a == std::complex<double>{0.0, 0.0}) continue;
    std::uint64_t rest = label, ka = 0, ke = 0, pk = 1, pe = 1;
    for (unsigned j = 0; j < state.num_qudits; ++j) {
      const std::uint64_t digit = rest % q;
      rest /= q;
      if (kept[j]) {
        ka += digit * pk;
        pk *= q;
      } else {
        ke += digit * pe;
        pe *= q;
      }
    }
    slices[ke][ka] = a;
  }
  for (std::uint64_t e = 0; e < dim_env; ++e) {
    for (std::uint64_t a = 0; a < dim_keep; ++a) {
      const auto va = slices[e][a];
      if (va == std::complex<double>{0.0, 0.0}) continue;
      for (std::uint64_t b = 0; b < dim_keep; ++b)
        rho.at(a, b) += va * std::conj(slices[e][b]);
    }
  }
  return rho;
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim != b.dim) throw ParameterViolation("trace distance requires equal dimensions");
  Eigen::MatrixXcd diff(a.dim, a.dim);
  for (std::size_t r = 0; r < a.dim; ++r) {
    for (std::size_t c = 0; c < a.dim; ++c) diff(r, c) = a.at(r, c) - b.at(r, c);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace detail {

// The certification engine works with exact integers: probe amplitudes are
// gaussian-integer numerators over a common sqrt(S) scale, so reduced
// density matrices have entries num/S with num a gaussian integer. Equality
// of reduced states is decided exactly; floating point enters only when a
// trace distance between two distinct classes is evaluated.
struct ExactReduced {
  std::vector<std::tuple<std::uint64_t, std::uint64_t, std::int64_t, std::int64_t>> entries;
  std::int64_t denom = 1;
  std::vector<std::uint64_t> kept_support;

  friend bool operator<(const ExactReduced& x, const ExactReduced& y) {
    if (x.denom != y.denom) return x.denom < y.denom;
    return x.entries < y.entries;
  }
  friend bool operator==(const ExactReduced& x, const ExactReduced& y) {
    return x.denom == y.denom && x.entries == y.entries;
  }
};

struct ProbeSupport {
  // label -> gaussian integer numerator
  std::unordered_map<std::uint64_t, std::pair<std::int64_t, std::int64_t>> terms;

  void add(std::uint64_t label, std::int64_t re, std::int64_t im) {
    auto& t = terms[label];
    t.first += re;
    t.second += im;
  }
};

inline ExactReduced reduce_exact(const ProbeSupport& probe, const std::vector<bool>& kept,
                                 std::uint32_t q, unsigned num_qudits) {
  // (env label, kept label, numerator), grouped by env.
  struct Term {
    std::uint64_t env;
    std::uint64_t kept;
    std::int64_t re;
    std::int64_t im;
  };
  std::vector<Term> terms;
  terms.reserve(probe.terms.size());
  std::int64_t S = 0;
  for (const auto& [label, num] : probe.terms) {
    if (num.first == 0 && num.second == 0) continue;
    S += num.first * num.first + num.second * num.second;
    std::uint64_t rest = label, ka = 0, ke = 0, pk = 1, pe = 1;
    for (unsigned j = 0; j < num_qudits; ++j) {
      const std::uint64_t digit = rest % q;
      rest /= q;
      if (kept[j]) {
        ka += digit * pk;
        pk *= q;
      } else {
        ke += digit * pe;
        pe *= q;
      }
    }
    terms.push_back({ke, ka, num.first, num.second});
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    return std::tie(a.env, a.kept) < std::tie(b.env, b.kept);
  });

  std::map<std::pair<std::uint64_t, std::uint64_t>, std::pair<std::int64_t, std::int64_t>> acc;
  std::size_t i = 0;
  while (i < terms.size()) {
    std::size_t j = i;
    while (j < terms.size() && terms[j].env == terms[i].env) ++j;
    for (std::size_t a = i; a < j; ++a) {
      for (std::size_t b = i; b < j; ++b) {
        // numerator(a) * conj(numerator(b))
        const std::int64_t re = terms[a].re * terms[b].re + terms[a].im * terms[b].im;
        const std::int64_t im = terms[a].im * terms[b].re - terms[a].re * terms[b].im;
        auto& cell = acc[{terms[a].kept, terms[b].kept}];
        cell.first += re;
        cell.second += im;
      }
    }
    i = j;
  }

  ExactReduced out;
  out.denom = S;
  std::int64_t g = S;
  for (const auto& [key, val] : acc) {
    if (val.first == 0 && val.second == 0) continue;
    g = std::gcd(g, std::gcd(std::abs(val.first), std::abs(val.second)));
  }
  if (g == 0) g = 1;
  out.denom = S / g;
  std::vector<std::uint64_t> support;
  for (const auto& [key, val] : acc) {
    if (val.first == 0 && val.second == 0) continue;
    out.entries.emplace_back(key.first, key.second, val.first / g, val.second / g);
    support.push_back(key.first);
  }
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  out.kept_support = std::move(support);
  return out;
}

inline double class_trace_distance(const ExactReduced& x, const ExactReduced& y) {
  std::vector<std::uint64_t> labels;
  labels.reserve(x.kept_support.size() + y.kept_support.size());
  labels.insert(labels.end(), x.kept_support.begin(), x.kept_support.end());
  labels.insert(labels.end(), y.kept_support.begin(), y.kept_support.end());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  std::unordered_map<std::uint64_t, std::size_t> pos;
  for (std::size_t i = 0; i < labels.size(); ++i) pos[labels[i]] = i;

  Eigen::MatrixXcd diff = Eigen::MatrixXcd::Zero(labels.size(), labels.size());
  for (const auto& [a, b, re, im] : x.entries)
    diff(pos.at(a), pos.at(b)) += std::complex<double>(static_cast<double>(re),
                                                       static_cast<double>(im)) /
                                  static_cast<double>(x.denom);
  for (const auto& [a, b, re, im] : y.entries)
    diff(pos.at(a), pos.at(b)) -= std::complex<double>(static_cast<double>(re),
                                                       static_cast<double>(im)) /
                                  static_cast<double>(y.denom);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// Frobenius upper bound on the trace distance between two classes:
// d <= 0.5 * sqrt(rank) * ||x - y||_F.
inline double class_distance_upper_bound(const ExactReduced& x, const ExactReduced& y) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::complex<double>> diff;
  for (const auto& [a, b, re, im] : x.entries)
    diff[{a, b}] += std::complex<double>(static_cast<double>(re), static_cast<double>(im)) /
                    static_cast<double>(x.denom);
  for (const auto& [a, b, re, im] : y.entries)
    diff[{a, b}] -= std::complex<double>(static_cast<double>(re), static_cast<double>(im)) /
                    static_cast<double>(y.denom);
  double frob2 = 0;
  for (const auto& [key, val] : diff) frob2 += std::norm(val);
  const double r = static_cast<double>(x.kept_support.size() + y.kept_support.size());
  return 0.5 * std::sqrt(r) * std::sqrt(frob2) * (1.0 + 1e-12);
}

} // namespace detail

struct ForbiddenCertificate {
  double max_trace_distance = 0.0;
  bool pass = false;
};

// Certifies secret-independence of the qudits held by participant subset I.
// Probes a tomographically complete family of secret states (all basis
// states |s>, and (|s>+|s'>)/sqrt2 and (|s>+i|s'>)/sqrt2 for each pair),
// reduces each onto the subset's qudits and reports the maximum pairwise
// trace distance. Reduced states are deduplicated by exact integer
// comparison, so a passing certificate reports exactly 0.
inline ForbiddenCertificate certify_forbidden(const QuantumScheme& scheme, SubsetMask I,
                                              double tolerance,
                                              std::uint64_t cap = kDefaultAmplitudeCap) {
  const std::uint32_t q = scheme.q;
  detail::checked_dimension(q, scheme.m_prime, cap);
  const std::uint64_t secret_dim = detail::checked_dimension(q, scheme.L, cap);

  std::vector<bool> kept(scheme.m_prime, false);
  for (unsigned i = 0; i < scheme.n; ++i) {
    if (I & (SubsetMask{1} << i)) {
      for (auto c : scheme.V_prime[i]) kept[c - 1] = true;
    }
  }

  // Coset supports per basis secret, as labels.
  const GfMatrix basis2 = rref(scheme.pair.G2);
  std::vector<std::vector<std::uint64_t>> coset(secret_dim);
  Row secret_digits;
  for (std::uint64_t s = 0; s < secret_dim; ++s) {
    detail::decode_label(s, q, scheme.L, secret_digits);
    const Row shift = detail::secret_shift(scheme.pair, secret_digits);
    coset[s].reserve(1);
    detail::for_each_span_element(basis2, [&](const Row& element) {
      Row sum(element.size());
      for (std::size_t j = 0; j < sum.size(); ++j) sum[j] = gf_add(element[j], shift[j], q);
      coset[s].push_back(detail::encode_label(sum, q));
    });
  }

  std::vector<detail::ExactReduced> classes;
  std::map<detail::ExactReduced, std::size_t> class_index;
  double max_distance = 0.0;
  // Trace distances never exceed 1; once the maximum is attained there is
  // nothing left to learn from further probes.
  const bool may_stop_at_one = tolerance <= 1.0 - 1e-9;
  bool saturated = false;

  auto register_probe = [&](const detail::ProbeSupport& probe) {
    detail::ExactReduced reduced =
        detail::reduce_exact(probe, kept, q, scheme.m_prime);
    auto [it, inserted] = class_index.try_emplace(reduced, classes.size());
    if (inserted) {
      classes.push_back(std::move(reduced));
      if (classes.size() >= 2) {
        const double d = detail::class_trace_distance(classes.front(), classes.back());
        max_distance = std::max(max_distance, d);
        if (may_stop_at_one && max_distance >= 1.0 - 1e-12) saturated = true;
      }
    }
  };

  for (std::uint64_t s = 0; s < secret_dim && !saturated; ++s) {
    detail::ProbeSupport probe;
    for (auto label : coset[s]) probe.add(label, 1, 0);
    register_probe(probe);
  }
  for (std::uint64_t s = 0; s < secret_dim && !saturated; ++s) {
    for (std::uint64_t s2 = s + 1; s2 < secret_dim && !saturated; ++s2) {
      detail::ProbeSupport plus;
      for (auto label : coset[s]) plus.add(label, 1, 0);
      for (auto label : coset[s2]) plus.add(label, 1, 0);
      register_probe(plus);
      if (saturated) break;
      detail::ProbeSupport imag;
      for (auto label : coset[s]) imag.add(label, 1, 0);
      for (auto label : coset[s2]) imag.add(label, 0, 1);
      register_probe(imag);
    }
  }

  if (classes.size() <= 1) return {0.0, 0.0 < tolerance};

  // Remaining class pairs (pairs against class 0 were evaluated on
  // insertion). A cheap Frobenius bound skips pairs that cannot raise the
  // maximum.
  for (std::size_t i = 1; i < classes.size() && !saturated; ++i) {
    for (std::size_t j = i + 1; j < classes.size() && !saturated; ++j) {
      const double ub = detail::class_distance_upper_bound(classes[i], classes[j]);
      if (ub <= max_distance) continue;
      const double d = detail::class_trace_distance(classes[i], classes[j]);
      max_distance = std::max(max_distance, d);
      if (may_stop_at_one && max_distance >= 1.0 - 1e-12) saturated = true;
    }
  }

  return {max_distance, max_distance < tolerance};
}

inline ForbiddenCertificate certify_forbidden(const QuantumScheme& scheme,
                                              const std::vector<unsigned>& I,
                                              double tolerance,
                                              std::uint64_t cap = kDefaultAmplitudeCap) {
  return certify_forbidden(scheme, subset_to_mask(I, scheme.n), tolerance, cap);
}

struct SimSubsetEntry {
  SubsetMask I = 0;
  double max_trace_distance = 0.0;
  bool forbidden_pass = false;
  bool agrees = false;
};

struct SimulationReport {
  std::vector<SimSubsetEntry> subsets;  // all 2^n, ascending mask
  bool agrees_with_rank_criteria = false;
  double tolerance = 0.0;
};

// Quantum-mechanical cross-check of the rank-criteria report: a subset's
// qudits must be certified secret-independent exactly when the report marks
// the complementary subset quantum-qualified.
inline SimulationReport cross_check(const QuantumScheme& scheme,
                                    const VerificationReport& report, double tolerance = 1e-9,
                                    std::uint64_t cap = kDefaultAmplitudeCap) {
  const SubsetMask full = (SubsetMask{1} << scheme.n) - 1;
  SimulationReport sim;
  sim.tolerance = tolerance;
  bool all = true;
  for (SubsetMask I = 0; I <= full; ++I) {
    const ForbiddenCertificate cert = certify_forbidden(scheme, I, tolerance, cap);
    SimSubsetEntry entry;
    entry.I = I;
    entry.max_trace_distance = cert.max_trace_distance;
    entry.forbidden_pass = cert.pass;
    entry.agrees = cert.pass == report.subsets[full & ~I].quantum_qualified;
    all = all && entry.agrees;
    sim.subsets.push_back(entry);
  }
  sim.agrees_with_rank_criteria = all;
  return sim;
}

} // namespace qmas
