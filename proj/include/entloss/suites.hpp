#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "entloss/bounds.hpp"
#include "entloss/cbnorm.hpp"
#include "entloss/channels.hpp"

namespace entloss {

// Per-optimizer restart budgets used by the verification suites. Quick mode
// caps each at 8.
struct SuiteRestarts {
  int eof = 32;
  int recovery = 16;
  int diamond = 64;
  int climb = 32;
};

struct SuiteConfig {
  std::uint64_t seed = 42;
  std::vector<std::pair<int, int>> dims = {{2, 2}, {2, 3}, {3, 3}};
  // 0 keeps the per-family defaults; any positive value replaces every
  // family's random-instance count (structural instances are always run).
  int instances_per_dim = 0;
  bool quick = false;
  SuiteRestarts restarts;
  std::map<std::string, double> tolerances;  // per-family overrides
};

struct FamilySummary {
  std::string name;
  double tolerance = 0.0;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  int conditional = 0;
  double worst_slack = 0.0;       // smallest slack over non-skipped records
  std::string worst_instance;
  std::vector<BoundCheckRecord> records;  // every record, in run order
};

struct VerifyReport {
  SuiteConfig config;
  std::vector<FamilySummary> families;

  int total_checked() const;
  int total_passed() const;
  int total_failed() const;
  int total_skipped() const;
  int total_conditional() const;
  // 0: all pass; 1: some family failed; 3: a bound-chain family failed.
  int exit_code() const;
};

VerifyReport run_verify(const SuiteConfig& cfg);

std::string verify_report_json(const VerifyReport& report);
std::string verify_report_csv(const VerifyReport& report);

// CSV for the formation-vs-distillation floor curve: uniform grid of the
// given size on [0, log2 3] plus a logarithmic refinement near the maximum,
// both axes normalized by log2 3.
std::string fig2_csv(int grid_size);

struct ReportOptions {
  std::uint64_t seed = 42;
  bool quick = false;
  // Shown in the instance strings of state-level records; defaults to
  // "maximally_mixed" / "custom" depending on whether a state was given.
  std::string state_descriptor;
};

// Single-channel deep dive: channel-level estimates plus the bound records,
// evaluated on `rho` when given and on the maximally mixed input otherwise.
ChannelReport build_channel_report(const KrausChannel& ch,
                                   const std::string& descriptor,
                                   const DensityMatrix* rho,
                                   const ReportOptions& opts = {});

std::string channel_report_json(const ChannelReport& report);

// "name", "name:k=v,k=v", or "@file.json".
KrausChannel parse_channel_spec(const std::string& spec);
DensityMatrix parse_state_spec(const std::string& spec);

// "2x2,2x3,3x3" -> {(2,2),(2,3),(3,3)}.
std::vector<std::pair<int, int>> parse_dims(const std::string& text);

} // namespace entloss
