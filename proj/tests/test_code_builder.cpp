#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "qmas/code_builder.hpp"
#include "qmas/verifier.hpp"

using namespace qmas;

namespace {

// Oracle: enumerate a row span element by element.
std::set<Row> enumerate_span(const std::vector<Row>& rows, std::size_t cols, std::uint32_t q) {
  std::set<Row> span;
  std::vector<std::uint32_t> coeff(rows.size(), 0);
  while (true) {
    Row v(cols, 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < cols; ++c)
        v[c] = gf_add(v[c], gf_mul(coeff[r], rows[r][c], q), q);
    }
    span.insert(v);
    std::size_t i = 0;
    while (i < coeff.size() && ++coeff[i] == q) coeff[i++] = 0;
    if (i == coeff.size()) break;
  }
  return span;
}

std::set<Row> coset_of(const NestedCodePair& pair, const Row& secret) {
  std::set<Row> out;
  Row shift(pair.length(), 0);
  for (std::size_t i = 0; i < secret.size(); ++i) {
    for (std::size_t c = 0; c < shift.size(); ++c)
      shift[c] = gf_add(shift[c], gf_mul(secret[i], pair.leaders[i][c], pair.q), pair.q);
  }
  for (const Row& c : enumerate_span(pair.G2.row_list(), pair.length(), pair.q)) {
    Row v(shift.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = gf_add(shift[j], c[j], pair.q);
    out.insert(v);
  }
  return out;
}

QuantumScheme threshold_scheme() {
  const NestedCodePair pair = build_rs_pair(2, 1, 3, 3);
  return expand_phi(pair, {{1}, {2}, {3}});
}

} // namespace

TEST_CASE("single-point pair is trivial") {
  const NestedCodePair pair = build_rs_pair(1, 1, 1, 2);
  CHECK(pair.G1 == GfMatrix::from_rows({{1}}, 1, 2));
  CHECK(pair.G2.rows() == 0);
  CHECK(pair.leaders == std::vector<Row>{{1}});
}

TEST_CASE("the (2,1,3) pair over GF(3)") {
  const NestedCodePair pair = build_rs_pair(2, 1, 3, 3);
  CHECK(pair.G1 == GfMatrix::from_rows({{1, 1, 1}, {0, 1, 2}}, 3, 3));
  CHECK(pair.G2 == GfMatrix::from_rows({{1, 1, 1}}, 3, 3));
  CHECK(pair.leaders == std::vector<Row>{{0, 1, 2}});
  CHECK(pair.eval_points == std::vector<std::uint32_t>{0, 1, 2});

  // every 2-subset satisfies the qualified criterion, every 1-subset the
  // forbidden criterion
  for (unsigned mask = 0; mask < 8; ++mask) {
    std::vector<std::uint32_t> idx;
    for (unsigned b = 0; b < 3; ++b)
      if (mask & (1u << b)) idx.push_back(b + 1);
    const IndexSet I(idx);
    const auto d1 = rank(project_columns(pair.G1, I));
    const auto d2 = rank(project_columns(pair.G2, I));
    if (idx.size() >= 2) {
      CHECK(d1 - d2 == 1);
    } else {
      CHECK(d1 == d2);
    }
  }
}

TEST_CASE("the (4,2,6) ramp pair over GF(7)") {
  const NestedCodePair pair = build_rs_pair(4, 2, 6, 7);
  CHECK(pair.G1 == GfMatrix::from_rows({{1, 1, 1, 1, 1, 1},
                                        {0, 1, 2, 3, 4, 5},
                                        {0, 1, 4, 2, 2, 4},
                                        {0, 1, 1, 6, 1, 6}},
                                       6, 7));
  CHECK(pair.G2 == GfMatrix::from_rows({{1, 1, 1, 1, 1, 1}, {0, 1, 2, 3, 4, 5}}, 6, 7));

  // ramp profile: forbidden up to 2 coordinates, qualified from 4 on
  for (unsigned mask = 0; mask < 64; ++mask) {
    std::vector<std::uint32_t> idx;
    for (unsigned b = 0; b < 6; ++b)
      if (mask & (1u << b)) idx.push_back(b + 1);
    const IndexSet I(idx);
    const auto diff =
        rank(project_columns(pair.G1, I)) - rank(project_columns(pair.G2, I));
    if (idx.size() <= 2) {
      CHECK(diff == 0);
    } else if (idx.size() >= 4) {
      CHECK(diff == 2);
    } else {
      CHECK(diff == 1);
    }
  }
}

TEST_CASE("ramp parameters are validated") {
  CHECK_THROWS_AS(build_rs_pair(2, 1, 3, 2), ParameterViolation);  // m > q
  CHECK_THROWS_AS(build_rs_pair(2, 3, 3, 5), ParameterViolation);  // L > t
  CHECK_THROWS_AS(build_rs_pair(4, 1, 3, 5), ParameterViolation);  // t > m
  CHECK_THROWS_AS(build_rs_pair(2, 0, 3, 5), ParameterViolation);  // L = 0
  CHECK_THROWS_AS(build_rs_pair(2, 1, 3, 4), ParameterViolation);  // q not prime
}

TEST_CASE("threshold assignments expand to the identity") {
  const QuantumScheme scheme = threshold_scheme();
  CHECK(scheme.m_prime == 3);
  CHECK(scheme.gamma == std::vector<unsigned>{1, 1, 1});
  CHECK(scheme.pair.G1 == GfMatrix::from_rows({{1, 1, 1}, {0, 1, 2}}, 3, 3));
  CHECK(scheme.V_prime == std::vector<std::vector<std::uint32_t>>{{1}, {2}, {3}});
  CHECK(scheme.t == 2);
}

TEST_CASE("a share held by two participants is duplicated") {
  NestedCodePair pair = build_rs_pair(1, 1, 1, 3);
  const QuantumScheme scheme = expand_phi(pair, {{1}, {1}});
  CHECK(scheme.m_prime == 2);
  CHECK(scheme.gamma == std::vector<unsigned>{2});
  CHECK(scheme.pair.G1 == GfMatrix::from_rows({{1, 1}}, 2, 3));
  CHECK(scheme.V_prime == std::vector<std::vector<std::uint32_t>>{{1}, {2}});
}

TEST_CASE("ramp assignment with disjoint pairs expands to the identity") {
  const NestedCodePair pair = build_rs_pair(4, 2, 6, 7);
  const QuantumScheme scheme = expand_phi(pair, {{1, 2}, {3, 4}, {5, 6}});
  CHECK(scheme.m_prime == 6);
  CHECK(scheme.gamma == std::vector<unsigned>(6, 1));
  CHECK(scheme.pair.G1 == pair.G1);
  CHECK(scheme.pair.G2 == pair.G2);
}

TEST_CASE("interleaved duplication keeps per-coordinate blocks together") {
  const NestedCodePair pair = build_rs_pair(2, 1, 2, 3);
  const QuantumScheme scheme = expand_phi(pair, {{1}, {2}, {2}});
  CHECK(scheme.m_prime == 3);
  CHECK(scheme.gamma == std::vector<unsigned>{1, 2});
  CHECK(scheme.V_prime == std::vector<std::vector<std::uint32_t>>{{1}, {2}, {3}});
  // columns: coordinate 1 once, coordinate 2 twice
  CHECK(scheme.pair.G1 == GfMatrix::from_rows({{1, 1, 1}, {0, 1, 1}}, 3, 3));
}

TEST_CASE("uncovered coordinates are rejected") {
  const NestedCodePair pair = build_rs_pair(2, 1, 3, 3);
  CHECK_THROWS_AS(expand_phi(pair, {{1}, {2}, {2}}), UncoveredCoordinate);
}

TEST_CASE("expansion preserves ranks") {
  const NestedCodePair pair = build_rs_pair(4, 2, 6, 7);
  const QuantumScheme dup = expand_phi(pair, {{1, 2, 3}, {3, 4, 5}, {5, 6, 1}});
  CHECK(rank(dup.pair.G1) == rank(pair.G1));
  CHECK(rank(dup.pair.G2) == rank(pair.G2));

  // a duplicate column never changes a projected rank once a copy is kept:
  // coordinate 1 expands to columns 1 and 2 (participants 1 and 3)
  CHECK(dup.m_prime == 9);
  CHECK(rank(project_columns(dup.pair.G1, IndexSet({1}))) ==
        rank(project_columns(dup.pair.G1, IndexSet({1, 2}))));
  CHECK(rank(project_columns(dup.pair.G1, IndexSet({1, 3, 6}))) ==
        rank(project_columns(dup.pair.G1, IndexSet({1, 2, 3, 6}))));
}

TEST_CASE("sampling with no secret space is rejected") {
  NestedCodePair degenerate = build_rs_pair(2, 1, 3, 3);
  degenerate.G2 = degenerate.G1;
  degenerate.leaders.clear();
  SeededRng rng(1);
  CHECK_THROWS_AS(sample_coset(degenerate, {}, rng), ParameterViolation);
}

TEST_CASE("samples land in the right coset") {
  const NestedCodePair pair = build_rs_pair(2, 1, 3, 3);
  const auto c2 = coset_of(pair, {0});
  CHECK(c2 == std::set<Row>{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}});
  const auto coset1 = coset_of(pair, {1});
  CHECK(coset1 == std::set<Row>{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SeededRng rng(seed);
    CHECK(c2.count(sample_coset(pair, {0}, rng)) == 1);
    CHECK(coset1.count(sample_coset(pair, {1}, rng)) == 1);
  }
}

TEST_CASE("sampling is uniform over the coset") {
  const NestedCodePair pair = build_rs_pair(2, 1, 3, 3);
  std::map<Row, unsigned> counts;
  SeededRng rng(7);
  for (unsigned i = 0; i < 3000; ++i) ++counts[sample_coset(pair, {2}, rng)];
  REQUIRE(counts.size() == 3);
  for (const auto& [word, count] : counts) {
    CHECK(count > 800);
    CHECK(count < 1200);
  }
}

TEST_CASE("share and reconstruct round trip, exhaustive over secrets and subsets") {
  const QuantumScheme scheme = threshold_scheme();
  unsigned samples = 0;
  for (std::uint32_t s = 0; s < 3; ++s) {
    for (unsigned mask = 1; mask < 8; ++mask) {
      std::vector<unsigned> I;
      for (unsigned b = 0; b < 3; ++b)
        if (mask & (1u << b)) I.push_back(b + 1);
      for (std::uint64_t seed = 0; seed < 8; ++seed) {
        SeededRng rng(seed * 31 + mask);
        const auto shares = share_classical(scheme, {s}, rng);
        if (I.size() >= 2) {
          CHECK(reconstruct_classical(scheme, I, shares) == Row{s});
          ++samples;
        } else {
          CHECK_THROWS_AS(reconstruct_classical(scheme, I, shares), NotQualified);
        }
      }
    }
  }
  CHECK(samples >= 100);
}

TEST_CASE("ramp round trip over GF(7)") {
  const NestedCodePair pair = build_rs_pair(4, 2, 6, 7);
  const QuantumScheme scheme = expand_phi(pair, {{1, 2}, {3, 4}, {5, 6}});
  for (std::uint32_t a = 0; a < 7; ++a) {
    SeededRng rng(a);
    const Row secret{a, static_cast<std::uint32_t>((a * 3 + 1) % 7)};
    const auto shares = share_classical(scheme, secret, rng);
    CHECK(reconstruct_classical(scheme, {1, 2}, shares) == secret);
    CHECK(reconstruct_classical(scheme, {1, 2, 3}, shares) == secret);
    CHECK_THROWS_AS(reconstruct_classical(scheme, {3}, shares), NotQualified);
  }
}

TEST_CASE("forbidden projections have secret-independent distributions") {
  const NestedCodePair pair = build_rs_pair(2, 1, 3, 3);
  // exact check by coset projection counting, one forbidden coordinate at a time
  for (std::size_t coord = 0; coord < 3; ++coord) {
    std::vector<std::map<std::uint32_t, unsigned>> histograms;
    for (std::uint32_t s = 0; s < 3; ++s) {
      std::map<std::uint32_t, unsigned> h;
      for (const Row& word : coset_of(pair, {s})) ++h[word[coord]];
      histograms.push_back(h);
    }
    CHECK(histograms[0] == histograms[1]);
    CHECK(histograms[1] == histograms[2]);
  }
}

TEST_CASE("field choice for a scheme") {
  CHECK(choose_field(3, std::nullopt) == 3);
  CHECK(choose_field(6, std::nullopt) == 7);
  CHECK(choose_field(1, std::nullopt) == 2);
  CHECK(choose_field(3, 5) == 5);
  CHECK_THROWS_AS(choose_field(6, 5), ParameterViolation);   // q < m
  CHECK_THROWS_AS(choose_field(3, 9), ParameterViolation);   // not prime
}

TEST_CASE("scheme build from a solver solution") {
  IpSolution sol;
  sol.x.assign(8, 0);
  sol.x[1] = sol.x[2] = sol.x[4] = 1;
  sol.t = 2;
  sol.objective = 3;
  const QuantumScheme scheme = build_scheme(3, 1, sol);
  CHECK(scheme.q == 3);
  CHECK(scheme.m == 3);
  CHECK(scheme.m_prime == 3);
  CHECK(scheme.t == 2);
  CHECK(scheme.L == 1);
}
