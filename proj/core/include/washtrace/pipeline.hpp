#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "washtrace/compliance.hpp"
#include "washtrace/detect.hpp"
#include "washtrace/ingest.hpp"

namespace washtrace {

/// Paths and toggles for one detection run.
struct RunConfig {
  std::filesystem::path transfers;
  std::filesystem::path transactions;
  std::filesystem::path labels;
  std::filesystem::path prices;
  std::filesystem::path contracts;
  std::filesystem::path compliance;
  std::filesystem::path marketplace_totals;
  std::filesystem::path out;
  bool require_compliance = false;
  std::optional<Decimal> epsilon_abs;
  std::optional<Decimal> epsilon_rel;
  unsigned jobs = 1;

  /// Throws InputError if a referenced file is missing or an epsilon is negative.
  void validate() const;
};

/// Fully materialized, immutable inputs.
struct PipelineInputs {
  std::vector<TransferEvent> transfers;
  TransactionIndex txs;
  LabelRegistry labels;
  PriceTable prices;
  KnownContracts contracts;
  std::optional<FixtureInterfaceClient> compliance;
  std::map<std::string, Decimal> marketplace_totals;
};

PipelineInputs load_inputs(const RunConfig& config, LoadDiagnostics* diagnostics = nullptr);

struct PipelineOptions {
  bool require_compliance = false;
  ZeroRiskTolerance tolerance{};
  unsigned jobs = 1;
};

PipelineOptions options_from(const RunConfig& config);

/// Per-stage tallies, at NFT and component granularity.
struct CleaningStep {
  std::string name;
  std::size_t nfts = 0;
  std::size_t components = 0;
  std::size_t accounts = 0;
};

struct PipelineResult {
  std::vector<CleaningStep> cleaning;  // scc, service, contract, zero_volume
  Confirmation confirmation;
  nlohmann::ordered_json report;
};

/// ingest -> per-NFT graph -> filters -> SCC -> detect -> analytics -> profit.
/// Per-NFT work fans out over `options.jobs` threads and merges in NFT order,
/// so the report does not depend on the thread count.
PipelineResult run_pipeline(const PipelineInputs& inputs, const PipelineOptions& options);

/// Loads, runs, and writes the JSON report to config.out (when set).
PipelineResult run_pipeline(const RunConfig& config, LoadDiagnostics* diagnostics = nullptr);

/// Canonical serialization used for report files.
std::string dump_report(const nlohmann::ordered_json& report);

/// Re-checks the report's internal consistency; throws InvariantViolation.
void check_report_consistency(const nlohmann::ordered_json& report);

/// Human-readable summary of a report.
std::string render_text(const nlohmann::ordered_json& report);

}  // namespace washtrace
