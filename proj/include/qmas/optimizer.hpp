#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "qmas/access_structure.hpp"
#include "qmas/errors.hpp"

namespace qmas {

// Integer program minimizing the total assigned share count:
//   minimize   sum_p h_p x_p            (h_p = |pattern p|)
//   subject to s(A) >= t                for every minimal qualified A
//              s(A) <= t - L            for every maximal forbidden A
//              t, x >= 0
// with s(A) = sum over patterns p meeting A of x_p. Eliminating t turns
// feasibility into  min_Q s(A) >= max_F s(A) + L.
struct IpInstance {
  unsigned n = 0;
  unsigned L = 0;
  std::vector<unsigned> h;                  // index p in [0, 2^n), h[0] = 0
  std::vector<SubsetMask> qualified_rows;   // minimal qualified sets
  std::vector<SubsetMask> forbidden_rows;   // maximal forbidden sets

  unsigned pattern_count() const noexcept { return (1u << n) - 1; }

  unsigned row_sum(SubsetMask A, const std::vector<unsigned>& x) const {
    unsigned s = 0;
    for (unsigned p = 1; p <= pattern_count(); ++p) {
      if (A & p) s += x[p];
    }
    return s;
  }

  unsigned min_qualified_sum(const std::vector<unsigned>& x) const {
    unsigned best = ~0u;
    for (SubsetMask A : qualified_rows) best = std::min(best, row_sum(A, x));
    return best;
  }

  unsigned max_forbidden_sum(const std::vector<unsigned>& x) const {
    unsigned best = 0;
    for (SubsetMask A : forbidden_rows) best = std::max(best, row_sum(A, x));
    return best;
  }

  bool feasible(const std::vector<unsigned>& x) const {
    return min_qualified_sum(x) >= max_forbidden_sum(x) + L;
  }

  unsigned objective_of(const std::vector<unsigned>& x) const {
    unsigned o = 0;
    for (unsigned p = 1; p <= pattern_count(); ++p) o += h[p] * x[p];
    return o;
  }
};

struct IpSolution {
  unsigned t = 0;
  std::vector<unsigned> x;  // index p in [0, 2^n), x[0] unused
  unsigned objective = 0;
};

struct ShareGroup {
  SubsetMask pattern = 0;
  unsigned count = 0;
};

// Expansion of a solution into concrete share indices: group j of the
// underlying (t, L, m) scheme is handed to every participant in its pattern.
struct AssignmentMap {
  std::vector<ShareGroup> groups;
  std::vector<std::vector<std::uint32_t>> V;  // per participant, 1-based indices in {1..m}
  unsigned m = 0;
};

inline IpInstance build_ip(const AccessStructure& a, unsigned L) {
  if (L < 1) throw ParameterViolation("secret length L must be at least 1");
  if (a.participants() > 12)
    throw ParameterViolation("participant count exceeds the supported maximum of 12");
  require_self_dual(a);
  IpInstance ip;
  ip.n = a.participants();
  ip.L = L;
  ip.h.resize(1u << ip.n);
  for (unsigned p = 0; p < ip.h.size(); ++p) ip.h[p] = std::popcount(p);
  ip.qualified_rows = a.minimal_qualified();
  ip.forbidden_rows = a.maximal_forbidden();
  return ip;
}

namespace detail {

struct IpSearch {
  const IpInstance& ip;
  unsigned budget;
  std::vector<unsigned> x;
  std::vector<unsigned> q_sum;  // partial s(A) per qualified row
  std::vector<unsigned> f_sum;  // partial s(A) per forbidden row
  std::optional<std::vector<unsigned>> found;

  explicit IpSearch(const IpInstance& inst, unsigned b)
      : ip(inst), budget(b), x(inst.h.size(), 0),
        q_sum(inst.qualified_rows.size(), 0), f_sum(inst.forbidden_rows.size(), 0) {}

  bool prune(unsigned remaining) const {
    unsigned max_f = 0;
    for (unsigned s : f_sum) max_f = std::max(max_f, s);
    for (unsigned s : q_sum) {
      // each remaining budget unit can raise a row sum by at most one
      if (s + remaining < max_f + ip.L) return true;
    }
    return false;
  }

  // Lexicographic DFS over x_1..x_{2^n-1}; accepts the first exact-cost
  // feasible assignment, which is the lex-smallest at this objective.
  bool dfs(unsigned p, unsigned remaining) {
    if (prune(remaining)) return false;
    if (p > ip.pattern_count()) {
      if (remaining != 0 || !ip.feasible(x)) return false;
      found = x;
      return true;
    }
    const unsigned limit = remaining / ip.h[p];
    for (unsigned v = 0; v <= limit; ++v) {
      x[p] = v;
      if (v > 0) bump(p, 1);
      if (dfs(p + 1, remaining - v * ip.h[p])) return true;
    }
    bump_reset(p, x[p]);
    x[p] = 0;
    return false;
  }

  void bump(unsigned p, unsigned delta) {
    for (std::size_t i = 0; i < ip.qualified_rows.size(); ++i) {
      if (ip.qualified_rows[i] & p) q_sum[i] += delta;
    }
    for (std::size_t i = 0; i < ip.forbidden_rows.size(); ++i) {
      if (ip.forbidden_rows[i] & p) f_sum[i] += delta;
    }
  }

  void bump_reset(unsigned p, unsigned v) {
    if (v == 0) return;
    for (std::size_t i = 0; i < ip.qualified_rows.size(); ++i) {
      if (ip.qualified_rows[i] & p) q_sum[i] -= v;
    }
    for (std::size_t i = 0; i < ip.forbidden_rows.size(); ++i) {
      if (ip.forbidden_rows[i] & p) f_sum[i] -= v;
    }
  }
};

// Objective of the cumulative-style fallback assignment, which is always
// feasible: pattern complement(F) gets L copies for each maximal forbidden F.
inline unsigned feasible_upper_bound(const IpInstance& ip) {
  unsigned total = 0;
  const SubsetMask full = (SubsetMask{1} << ip.n) - 1;
  for (SubsetMask F : ip.forbidden_rows) {
    total += ip.L * std::popcount(full & ~F);
  }
  return total;
}

} // namespace detail

inline IpSolution finalize_solution(const IpInstance& ip, std::vector<unsigned> x) {
  IpSolution sol;
  sol.objective = ip.objective_of(x);
  sol.t = ip.max_forbidden_sum(x) + ip.L;  // smallest valid threshold
  sol.x = std::move(x);
  return sol;
}

// Exhaustive oracle: enumerates every x with objective <= budget in
// lexicographic order and keeps the first solution of minimal objective.
inline std::optional<IpSolution> brute_force_ip(const IpInstance& ip, unsigned budget) {
  std::vector<unsigned> x(ip.h.size(), 0);
  std::optional<std::vector<unsigned>> best;
  unsigned best_obj = budget + 1;

  auto rec = [&](auto&& self, unsigned p, unsigned spent) -> void {
    if (p > ip.pattern_count()) {
      if (spent < best_obj && ip.feasible(x)) {
        best = x;
        best_obj = spent;
      }
      return;
    }
    const unsigned limit = (budget - spent) / ip.h[p];
    for (unsigned v = 0; v <= limit; ++v) {
      x[p] = v;
      self(self, p + 1, spent + v * ip.h[p]);
    }
    x[p] = 0;
  };
  rec(rec, 1, 0);

  if (!best) return std::nullopt;
  return finalize_solution(ip, *best);
}

// Exact solver: iterative deepening on the objective, lexicographic
// branching, row-sum pruning. Matches brute_force_ip on every instance.
inline IpSolution solve_ip(const IpInstance& ip) {
  const unsigned cap = detail::feasible_upper_bound(ip);
  for (unsigned B = ip.L; B <= cap; ++B) {
    detail::IpSearch search(ip, B);
    if (search.dfs(1, B)) return finalize_solution(ip, *search.found);
  }
  throw Infeasible("no solution up to the structural upper bound; validation is inconsistent");
}

inline AssignmentMap solution_to_assignment(const IpSolution& sol, unsigned n) {
  AssignmentMap map;
  map.V.assign(n, {});
  std::uint32_t next = 1;
  for (unsigned p = 1; p < sol.x.size(); ++p) {
    if (sol.x[p] == 0) continue;
    map.groups.push_back({static_cast<SubsetMask>(p), sol.x[p]});
    for (unsigned c = 0; c < sol.x[p]; ++c, ++next) {
      for (unsigned i = 0; i < n; ++i) {
        if (p & (1u << i)) map.V[i].push_back(next);
      }
    }
  }
  map.m = next - 1;
  return map;
}

} // namespace qmas
