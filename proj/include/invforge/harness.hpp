#pragma once

#include "invforge/oracles.hpp"
#include "invforge/reductions.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace invforge {

struct Disagreement {
  std::uint64_t seed;
  std::string source;     // source-oracle decision
  std::string inversion;  // inversion-oracle decision
  std::string note;
};

struct VerifyReport {
  std::string family;
  std::uint64_t trials = 0;
  std::uint64_t agreements = 0;
  std::vector<Disagreement> disagreements;  // sorted by seed
  std::uint64_t boundary_trials = 0;        // included in trials
  std::uint64_t witness_checks = 0;
  std::vector<std::string> witness_failures;
  std::uint64_t artifacts_checked = 0;
  std::vector<std::string> constant_failures;
  std::uint64_t yes_count = 0;
  double wall_ms = 0;

  bool passed() const { return disagreements.empty() && witness_failures.empty() && constant_failures.empty(); }
};

nlohmann::json report_to_json(const VerifyReport& r);

struct VerifyOptions {
  std::string family;  // sat, sat-real, cvp, cvp-real, halfclique, halfclique-real, vertexcover
  int n_max = 4;
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;
  int p = 0;  // 0 picks the family's default mix
  bool exhaustive = false;
  std::uint64_t restarts = 2000;  // falsifier restarts for real approximate families
  Caps caps = Caps::from_env();
};

/// Source oracle vs inversion oracle on the family's reduction, with witness
/// forwarding in both directions and constant checks on every artifact.
VerifyReport run_verify(const VerifyOptions& opt);

std::vector<std::string> verify_families();

/// A (0,1)-CVP instance whose minimum distance is exactly its radius.
CvpInstance make_boundary_cvp(int n, int d, int p, std::uint64_t seed);

struct BenchRecord {
  std::string family;
  int n;
  int trials;
  double median_ms;
  std::uint64_t states;
};

/// Times invert_binary_bruteforce on the family's binary artifacts.
std::vector<BenchRecord> run_bench(const std::string& family, int n_from, int n_to, int trials, std::uint64_t seed,
                                   const Caps& caps = Caps::from_env());

std::string bench_csv(const std::vector<BenchRecord>& records);

/// Least-squares slope of log2(median_ms) against n.
double log2_time_slope(const std::vector<BenchRecord>& records);

/// The command-line program; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace invforge
