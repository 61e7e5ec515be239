#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "qmas/errors.hpp"
#include "qmas/gf.hpp"
#include "qmas/matrix.hpp"
#include "qmas/optimizer.hpp"
#include "qmas/rng.hpp"

namespace qmas {

// Nested generator pair C2 < C1 over GF(q) together with the canonical
// coset transversal defining the secret embedding f.
struct NestedCodePair {
  std::uint32_t q = 2;
  GfMatrix G1{0, 0, 2};
  GfMatrix G2{0, 0, 2};
  std::vector<Row> leaders;
  std::vector<std::uint32_t> eval_points;  // empty after expansion

  std::size_t length() const noexcept { return G1.cols(); }
  std::size_t secret_len() const noexcept { return leaders.size(); }
};

struct QuantumScheme {
  NestedCodePair pair;  // expanded pair over m_prime coordinates
  std::vector<std::vector<std::uint32_t>> V_prime;  // disjoint, covers {1..m_prime}
  unsigned n = 0;
  unsigned L = 0;
  std::uint32_t q = 2;
  unsigned t = 0;
  unsigned m = 0;
  unsigned m_prime = 0;
  std::vector<unsigned> gamma;  // duplication count per original coordinate
};

// Ramp threshold pair: C1 evaluates polynomials of degree < t at the points
// 0..m-1, C2 those of degree < t-L. Any t coordinates are qualified, any
// t-L forbidden.
inline NestedCodePair build_rs_pair(unsigned t, unsigned L, unsigned m, std::uint32_t q) {
  if (!(1 <= L && L <= t && t <= m))
    throw ParameterViolation("ramp parameters must satisfy 1 <= L <= t <= m");
  if (m > q) throw ParameterViolation("code length m exceeds field size q");
  if (!is_prime(q)) throw ParameterViolation("field size q must be prime");

  NestedCodePair pair;
  pair.q = q;
  pair.eval_points.resize(m);
  for (unsigned j = 0; j < m; ++j) pair.eval_points[j] = j;

  auto vandermonde = [&](unsigned rows) {
    GfMatrix g(rows, m, q);
    for (unsigned j = 0; j < m; ++j) {
      std::uint32_t pw = 1;  // x^0 = 1, including x = 0
      for (unsigned r = 0; r < rows; ++r) {
        g.at(r, j) = pw;
        pw = gf_mul(pw, pair.eval_points[j], q);
      }
    }
    return g;
  };
  pair.G1 = vandermonde(t);
  pair.G2 = vandermonde(t - L);
  pair.leaders = rref_and_basis_completion(pair.G2, pair.G1);
  return pair;
}

// Coordinate duplication phi: coordinate j is replicated once per owning
// participant so that the expanded index sets V'_i are pairwise disjoint.
// Layout is blocks of duplicates of coordinate 1, then 2, ...; within a
// block, ascending participant index.
inline QuantumScheme expand_phi(const NestedCodePair& pair,
                                const std::vector<std::vector<std::uint32_t>>& V) {
  const unsigned m = static_cast<unsigned>(pair.length());
  const unsigned n = static_cast<unsigned>(V.size());

  std::vector<std::vector<unsigned>> owners(m);
  for (unsigned i = 0; i < n; ++i) {
    for (std::uint32_t j : V[i]) {
      if (j == 0 || j > m) throw IndexOutOfRange("share index outside {1..m}");
      owners[j - 1].push_back(i);
    }
  }

  QuantumScheme scheme;
  scheme.n = n;
  scheme.L = static_cast<unsigned>(pair.secret_len());
  scheme.q = pair.q;
  scheme.t = static_cast<unsigned>(rank(pair.G1));
  scheme.m = m;
  scheme.gamma.resize(m);
  scheme.V_prime.assign(n, {});

  std::vector<std::uint32_t> expanded_of;  // original coordinate per expanded column
  for (unsigned j = 0; j < m; ++j) {
    if (owners[j].empty())
      throw UncoveredCoordinate("coordinate " + std::to_string(j + 1) + " belongs to no participant");
    std::sort(owners[j].begin(), owners[j].end());
    scheme.gamma[j] = static_cast<unsigned>(owners[j].size());
    for (unsigned i : owners[j]) {
      expanded_of.push_back(j);
      scheme.V_prime[i].push_back(static_cast<std::uint32_t>(expanded_of.size()));
    }
  }
  scheme.m_prime = static_cast<unsigned>(expanded_of.size());

  auto expand_matrix = [&](const GfMatrix& g) {
    GfMatrix out(g.rows(), scheme.m_prime, pair.q);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      for (unsigned c = 0; c < scheme.m_prime; ++c) out.at(r, c) = g.at(r, expanded_of[c]);
    }
    return out;
  };
  scheme.pair.q = pair.q;
  scheme.pair.G1 = expand_matrix(pair.G1);
  scheme.pair.G2 = expand_matrix(pair.G2);
  for (const auto& leader : pair.leaders) {
    Row expanded(scheme.m_prime);
    for (unsigned c = 0; c < scheme.m_prime; ++c) expanded[c] = leader[expanded_of[c]];
    scheme.pair.leaders.push_back(std::move(expanded));
  }
  return scheme;
}

// Uniform sample from the coset f(secret) = sum_i s_i * leader_i + C2.
inline Row sample_coset(const NestedCodePair& pair, const Row& secret, SeededRng& rng) {
  if (pair.secret_len() == 0)
    throw ParameterViolation("pair has no secret space (L = 0)");
  if (secret.size() != pair.secret_len())
    throw ParameterViolation("secret length does not match L");
  const std::uint32_t q = pair.q;
  Row x(pair.length(), 0);
  for (std::size_t i = 0; i < secret.size(); ++i) {
    const std::uint32_t s = secret[i] % q;
    for (std::size_t c = 0; c < x.size(); ++c)
      x[c] = gf_add(x[c], gf_mul(s, pair.leaders[i][c], q), q);
  }
  const GfMatrix basis = rref(pair.G2);
  for (std::size_t r = 0; r < basis.rows(); ++r) {
    const auto coeff = static_cast<std::uint32_t>(rng.uniform_below(q));
    if (coeff == 0) continue;
    for (std::size_t c = 0; c < x.size(); ++c)
      x[c] = gf_add(x[c], gf_mul(coeff, basis.at(r, c), q), q);
  }
  return x;
}

// Per-participant shares: participant i gets the coordinates listed in
// index_sets[i], values ordered by ascending coordinate.
inline std::vector<Row> share_classical(const NestedCodePair& pair,
                                        const std::vector<std::vector<std::uint32_t>>& index_sets,
                                        const Row& secret, SeededRng& rng) {
  const Row x = sample_coset(pair, secret, rng);
  std::vector<Row> shares(index_sets.size());
  for (std::size_t i = 0; i < index_sets.size(); ++i) {
    auto coords = index_sets[i];
    std::sort(coords.begin(), coords.end());
    for (std::uint32_t c : coords) {
      if (c == 0 || c > x.size()) throw IndexOutOfRange("share index outside codeword");
      shares[i].push_back(x[c - 1]);
    }
  }
  return shares;
}

inline std::vector<Row> share_classical(const QuantumScheme& scheme, const Row& secret,
                                        SeededRng& rng) {
  return share_classical(scheme.pair, scheme.V_prime, secret, rng);
}

inline Row reconstruct_classical(const NestedCodePair& pair,
                                 const std::vector<std::vector<std::uint32_t>>& index_sets,
                                 const std::vector<unsigned>& participants,
                                 const std::vector<Row>& shares) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> obs;  // (coordinate, value)
  for (unsigned i : participants) {
    if (i == 0 || i > index_sets.size()) throw IndexOutOfRange("participant index out of range");
    auto coords = index_sets[i - 1];
    std::sort(coords.begin(), coords.end());
    if (shares[i - 1].size() != coords.size())
      throw ParameterViolation("share vector length does not match participant index set");
    for (std::size_t k = 0; k < coords.size(); ++k) obs.emplace_back(coords[k], shares[i - 1][k]);
  }
  std::sort(obs.begin(), obs.end());
  obs.erase(std::unique(obs.begin(), obs.end()), obs.end());
  std::vector<std::uint32_t> coords;
  Row observed;
  for (auto& [c, v] : obs) {
    if (!coords.empty() && coords.back() == c)
      throw InconsistentShares("conflicting values for one coordinate");
    coords.push_back(c);
    observed.push_back(v);
  }
  return solve_coset(pair.G1, pair.G2, pair.leaders, IndexSet(coords), observed);
}

inline Row reconstruct_classical(const QuantumScheme& scheme,
                                 const std::vector<unsigned>& participants,
                                 const std::vector<Row>& shares) {
  return reconstruct_classical(scheme.pair, scheme.V_prime, participants, shares);
}

// Field size for a scheme of length m: the smallest prime admitting m
// distinct evaluation points, unless overridden.
inline std::uint32_t choose_field(unsigned m, std::optional<std::uint32_t> q_override) {
  if (q_override) {
    if (!is_prime(*q_override))
      throw ParameterViolation("field override must be prime");
    if (*q_override < std::max(m, 2u))
      throw ParameterViolation("field override must be at least max(m, 2)");
    return *q_override;
  }
  return smallest_prime_geq(std::max(m, 2u));
}

inline QuantumScheme build_scheme(unsigned n, unsigned L, const IpSolution& sol,
                                  std::optional<std::uint32_t> q_override = std::nullopt) {
  const AssignmentMap map = solution_to_assignment(sol, n);
  const std::uint32_t q = choose_field(map.m, q_override);
  const NestedCodePair pair = build_rs_pair(sol.t, L, map.m, q);
  QuantumScheme scheme = expand_phi(pair, map.V);
  scheme.t = sol.t;
  return scheme;
}

} // namespace qmas
