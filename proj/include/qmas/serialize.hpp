#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmas/access_structure.hpp"
#include "qmas/code_builder.hpp"
#include "qmas/errors.hpp"
#include "qmas/optimizer.hpp"
#include "qmas/simulator.hpp"
#include "qmas/verifier.hpp"

namespace qmas {

using Json = nlohmann::json;

struct StructureInput {
  AccessStructure structure;
  unsigned L = 1;
  std::optional<std::uint32_t> q_override;
};

// Input schema: {"n": int, "qualified": [[int,...],...], "L": int, "q": int?}
// Participant indices are 1-based.
inline StructureInput parse_structure_input(const Json& j) {
  if (!j.is_object()) throw ParseError("input must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_unsigned())
    throw ParseError("field 'n' must be a positive integer");
  if (!j.contains("qualified") || !j["qualified"].is_array())
    throw ParseError("field 'qualified' must be an array of participant lists");
  if (!j.contains("L") || !j["L"].is_number_unsigned())
    throw ParseError("field 'L' must be a positive integer");

  const unsigned n = j["n"].get<unsigned>();
  std::vector<std::vector<unsigned>> qualified;
  for (const auto& entry : j["qualified"]) {
    if (!entry.is_array()) throw ParseError("each qualified set must be an array");
    std::vector<unsigned> subset;
    for (const auto& p : entry) {
      if (!p.is_number_unsigned()) throw ParseError("participant indices must be positive integers");
      subset.push_back(p.get<unsigned>());
    }
    qualified.push_back(std::move(subset));
  }
  StructureInput input{AccessStructure(n, qualified), j["L"].get<unsigned>(), std::nullopt};
  if (input.L < 1) throw ParseError("field 'L' must be at least 1");
  if (j.contains("q")) {
    if (!j["q"].is_number_unsigned()) throw ParseError("field 'q' must be a positive integer");
    input.q_override = j["q"].get<std::uint32_t>();
  }
  return input;
}

inline std::string pattern_key(SubsetMask pattern) {
  std::string key;
  for (unsigned p : mask_to_subset(pattern)) {
    if (!key.empty()) key += ",";
    key += std::to_string(p);
  }
  return key;
}

inline Json solver_report_to_json(const IpSolution& sol, unsigned n) {
  Json x = Json::object();
  unsigned m = 0;
  for (unsigned p = 1; p < sol.x.size(); ++p) {
    if (sol.x[p] == 0) continue;
    x[pattern_key(static_cast<SubsetMask>(p))] = sol.x[p];
    m += sol.x[p];
  }
  return Json{{"t", sol.t}, {"x", x}, {"objective", sol.objective}, {"m", m}};
}

inline Json matrix_to_json(const GfMatrix& g) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < g.rows(); ++r) rows.push_back(g.row(r));
  return rows;
}

inline GfMatrix matrix_from_json(const Json& j, std::size_t cols, std::uint32_t q) {
  std::vector<Row> rows;
  for (const auto& r : j) rows.push_back(r.get<Row>());
  return GfMatrix::from_rows(rows, cols, q);
}

// Scheme bundle: everything needed to share, reconstruct, verify, and
// simulate. Matrices are row-major with entries in 0..q-1; coordinates and
// participants are 1-based.
inline Json bundle_to_json(const QuantumScheme& scheme, const std::vector<ShareGroup>& groups,
                           std::uint64_t seed) {
  Json jgroups = Json::array();
  for (const auto& g : groups)
    jgroups.push_back(Json{{"subset", mask_to_subset(g.pattern)}, {"count", g.count}});
  Json leaders = Json::array();
  for (const auto& row : scheme.pair.leaders) leaders.push_back(row);
  return Json{
      {"n", scheme.n},
      {"L", scheme.L},
      {"q", scheme.q},
      {"t", scheme.t},
      {"m", scheme.m},
      {"m_prime", scheme.m_prime},
      {"G1", matrix_to_json(scheme.pair.G1)},
      {"G2", matrix_to_json(scheme.pair.G2)},
      {"leaders", leaders},
      {"V_prime", scheme.V_prime},
      {"groups", jgroups},
      {"rng", SeededRng::name()},
      {"seed", seed},
  };
}

struct LoadedBundle {
  QuantumScheme scheme;
  std::vector<ShareGroup> groups;
  std::uint64_t seed = 0;
  std::string rng_name;
};

inline LoadedBundle bundle_from_json(const Json& j) {
  LoadedBundle out;
  try {
    QuantumScheme& s = out.scheme;
    s.n = j.at("n").get<unsigned>();
    s.L = j.at("L").get<unsigned>();
    s.q = j.at("q").get<std::uint32_t>();
    s.t = j.at("t").get<unsigned>();
    s.m = j.at("m").get<unsigned>();
    s.m_prime = j.at("m_prime").get<unsigned>();
    s.pair.q = s.q;
    s.pair.G1 = matrix_from_json(j.at("G1"), s.m_prime, s.q);
    s.pair.G2 = matrix_from_json(j.at("G2"), s.m_prime, s.q);
    for (const auto& row : j.at("leaders")) s.pair.leaders.push_back(row.get<Row>());
    s.V_prime = j.at("V_prime").get<std::vector<std::vector<std::uint32_t>>>();
    for (const auto& g : j.at("groups")) {
      ShareGroup group;
      group.pattern = subset_to_mask(g.at("subset").get<std::vector<unsigned>>(), s.n);
      group.count = g.at("count").get<unsigned>();
      out.groups.push_back(group);
      for (unsigned c = 0; c < group.count; ++c)
        s.gamma.push_back(std::popcount(group.pattern));
    }
    if (j.contains("seed")) out.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("rng")) out.rng_name = j.at("rng").get<std::string>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed scheme bundle: ") + e.what());
  }
  return out;
}

inline Json verification_report_to_json(const VerificationReport& report) {
  Json subsets = Json::array();
  for (const auto& v : report.subsets) {
    subsets.push_back(Json{{"I", mask_to_subset(v.I)},
                           {"classical", to_string(v.classical)},
                           {"quantum_qualified", v.quantum_qualified}});
  }
  Json mismatches = Json::array();
  for (SubsetMask m : report.mismatches) mismatches.push_back(mask_to_subset(m));
  return Json{
      {"subsets", subsets},
      {"pass", report.pass},
      {"average_share_qudits", Json{{"num", report.m_prime}, {"den", report.n}}},
      {"share_qudits", report.share_sizes},
      {"mismatches", mismatches},
  };
}

inline Json simulation_report_to_json(const SimulationReport& sim) {
  Json subsets = Json::array();
  for (const auto& e : sim.subsets) {
    subsets.push_back(Json{{"I", mask_to_subset(e.I)},
                           {"max_trace_distance", e.max_trace_distance},
                           {"forbidden_pass", e.forbidden_pass},
                           {"agrees", e.agrees}});
  }
  return Json{{"subsets", subsets},
              {"agrees_with_rank_criteria", sim.agrees_with_rank_criteria},
              {"tolerance", sim.tolerance}};
}

} // namespace qmas
