#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "qmas/serialize.hpp"

namespace qmas {

enum class Stage { Validate, Optimize, Build, Verify, Simulate, Full };

inline std::optional<Stage> stage_from_string(const std::string& s) {
  if (s == "validate") return Stage::Validate;
  if (s == "optimize") return Stage::Optimize;
  if (s == "build") return Stage::Build;
  if (s == "verify") return Stage::Verify;
  if (s == "simulate") return Stage::Simulate;
  if (s == "full") return Stage::Full;
  return std::nullopt;
}

struct PipelineConfig {
  std::string input_path;
  std::string out_dir;
  Stage stage = Stage::Full;
  std::uint64_t seed = 0;
  std::uint64_t sim_cap = kDefaultAmplitudeCap;
  bool oracle = false;
  std::optional<std::uint32_t> q_override;
  double tolerance = 1e-9;
};

struct PipelineResult {
  int exit_code = 0;
  std::string error_code;
  std::string message;
};

// Exit codes: 0 ok, 2 parse/config, 3 structure rejected, 4 solver
// inconsistency, 5 verification mismatch, 6 simulation disagreement.
inline int exit_code_for(const Error& e) {
  const auto& c = e.code();
  if (c == "ParseError" || c == "ParameterViolation") return 2;
  if (c == "NotMonotone" || c == "NotSelfDual") return 3;
  if (c == "Infeasible") return 4;
  return 4;
}

namespace detail {

inline void write_artifact(const std::filesystem::path& dir, const std::string& name,
                           const Json& j) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  out << j.dump(2) << "\n";
}

inline PipelineResult fail(const PipelineConfig& config, int code, const std::string& error_code,
                           const std::string& message, Json extra = Json::object()) {
  Json err{{"error", error_code}, {"exit_code", code}, {"detail", message}};
  for (auto& [k, v] : extra.items()) err[k] = v;
  write_artifact(config.out_dir, "error.json", err);
  return {code, error_code, message};
}

} // namespace detail

// Runs validate -> optimize -> build -> verify -> simulate up to the
// configured stage, writing one JSON artifact per completed stage.
inline PipelineResult run_pipeline(const PipelineConfig& config, std::ostream& log) {
  // ---- parse
  Json input_json;
  StructureInput input{AccessStructure(1, {{1}}), 1, std::nullopt};
  try {
    std::ifstream in(config.input_path, std::ios::binary);
    if (!in) throw ParseError("cannot open input file: " + config.input_path);
    try {
      input_json = Json::parse(in);
    } catch (const Json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    input = parse_structure_input(input_json);
  } catch (const Error& e) {
    return detail::fail(config, 2, e.code(), e.what());
  }

  // ---- validate
  try {
    if (input.structure.participants() > 12)
      throw ParameterViolation("participant count exceeds the supported maximum of 12");
    require_self_dual(input.structure);
  } catch (const NotSelfDual& e) {
    return detail::fail(config, 3, e.code(), e.what(), Json{{"witness", e.witness()}});
  } catch (const Error& e) {
    return detail::fail(config, exit_code_for(e), e.code(), e.what());
  }
  log << "validate: structure on " << input.structure.participants()
      << " participants is monotone and self-dual\n";
  if (config.stage == Stage::Validate) return {0, "", "validated"};

  // ---- optimize
  IpSolution sol;
  try {
    const IpInstance ip = build_ip(input.structure, input.L);
    sol = solve_ip(ip);
    if (config.oracle) {
      const auto oracle = brute_force_ip(ip, sol.objective);
      if (!oracle || oracle->objective != sol.objective || oracle->x != sol.x ||
          oracle->t != sol.t) {
        throw Infeasible("solver disagrees with the exhaustive oracle");
      }
      log << "optimize: exhaustive oracle confirms objective " << sol.objective << "\n";
    }
  } catch (const Error& e) {
    return detail::fail(config, 4, e.code(), e.what());
  }
  detail::write_artifact(config.out_dir, "solver_report.json",
                         solver_report_to_json(sol, input.structure.participants()));
  log << "optimize: objective " << sol.objective << ", t = " << sol.t << "\n";
  if (config.stage == Stage::Optimize) return {0, "", "optimized"};

  // ---- build
  QuantumScheme scheme;
  std::vector<ShareGroup> groups;
  try {
    std::optional<std::uint32_t> q_override = config.q_override;
    if (!q_override) q_override = input.q_override;
    const AssignmentMap map = solution_to_assignment(sol, input.structure.participants());
    groups = map.groups;
    const std::uint32_t q = choose_field(map.m, q_override);
    const NestedCodePair pair = build_rs_pair(sol.t, input.L, map.m, q);
    scheme = expand_phi(pair, map.V);
    scheme.t = sol.t;
  } catch (const Error& e) {
    return detail::fail(config, exit_code_for(e), e.code(), e.what());
  }
  detail::write_artifact(config.out_dir, "scheme_bundle.json",
                         bundle_to_json(scheme, groups, config.seed));
  log << "build: q = " << scheme.q << ", m = " << scheme.m << ", m' = " << scheme.m_prime
      << "\n";
  if (config.stage == Stage::Build) return {0, "", "built"};

  // ---- verify
  VerificationReport report = derive_quantum_access(scheme);
  verify_against_spec(report, input.structure);
  detail::write_artifact(config.out_dir, "verification_report.json",
                         verification_report_to_json(report));
  if (!report.pass) {
    return detail::fail(config, 5, "VerificationMismatch",
                        "derived quantum access structure does not match the request",
                        Json{{"mismatch_count", report.mismatches.size()}});
  }
  log << "verify: all " << report.subsets.size() << " subsets match\n";
  if (config.stage == Stage::Verify) return {0, "", "verified"};

  // ---- simulate
  bool fits_cap = true;
  std::uint64_t dim = 1;
  for (unsigned i = 0; i < scheme.m_prime && fits_cap; ++i) {
    if (dim > config.sim_cap / scheme.q) fits_cap = false;
    dim *= scheme.q;
  }
  if (!fits_cap || dim > config.sim_cap) {
    detail::write_artifact(config.out_dir, "simulation_report.json",
                           Json{{"skipped", true},
                                {"reason", "state dimension q^m_prime exceeds sim_cap"},
                                {"q", scheme.q},
                                {"m_prime", scheme.m_prime},
                                {"sim_cap", config.sim_cap}});
    log << "simulate: skipped, q^m' exceeds sim_cap " << config.sim_cap << "\n";
    return {0, "", "simulation skipped"};
  }
  SimulationReport sim;
  try {
    sim = cross_check(scheme, report, config.tolerance, config.sim_cap);
  } catch (const Error& e) {
    return detail::fail(config, exit_code_for(e), e.code(), e.what());
  }
  detail::write_artifact(config.out_dir, "simulation_report.json",
                         simulation_report_to_json(sim));
  if (!sim.agrees_with_rank_criteria) {
    return detail::fail(config, 6, "SimulationDisagreement",
                        "state-vector simulation disagrees with the rank criteria");
  }
  log << "simulate: simulation agrees with rank criteria on all subsets\n";
  return {0, "", "ok"};
}

// Shares a secret under a stored bundle, prints the per-participant share
// listing, then reconstructs from subset I.
inline Row demo_share_roundtrip(const std::string& bundle_path, const Row& secret,
                                const std::vector<unsigned>& I, std::uint64_t seed,
                                std::ostream& out) {
  std::ifstream in(bundle_path, std::ios::binary);
  if (!in) throw ParseError("cannot open bundle: " + bundle_path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  const LoadedBundle bundle = bundle_from_json(j);
  const QuantumScheme& scheme = bundle.scheme;

  SeededRng rng(seed);
  const std::vector<Row> shares = share_classical(scheme, secret, rng);
  for (unsigned i = 0; i < scheme.n; ++i) {
    out << "participant " << (i + 1) << ": coords [";
    for (std::size_t k = 0; k < scheme.V_prime[i].size(); ++k)
      out << (k ? "," : "") << scheme.V_prime[i][k];
    out << "] values [";
    for (std::size_t k = 0; k < shares[i].size(); ++k) out << (k ? "," : "") << shares[i][k];
    out << "]\n";
  }

  const Row recovered = reconstruct_classical(scheme, I, shares);
  out << "reconstructed [";
  for (std::size_t k = 0; k < recovered.size(); ++k) out << (k ? "," : "") << recovered[k];
  out << "]\n";
  return recovered;
}

} // namespace qmas
