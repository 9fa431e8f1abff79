#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "washtrace/compliance.hpp"
#include "washtrace/detect.hpp"
#include "washtrace/ingest.hpp"
#include "washtrace/pipeline.hpp"

namespace washtrace {

/// Assembles a consistent transfer/transaction history. Transactions are
/// placed on chain by timestamp (ties by insertion order) when `build` runs.
class HistoryBuilder {
 public:
  explicit HistoryBuilder(std::uint64_t seed = 1, Timestamp genesis = 1640995200);

  Address new_account();
  TxHash new_hash();
  std::mt19937_64& rng() { return rng_; }
  Timestamp genesis() const { return genesis_; }

  /// Opens a transaction at `ts`; everything added with the returned hash
  /// shares its block position.
  TxHash open_tx(Timestamp ts);

  /// NFT sale: the transfer plus the buyer's payment call to `venue`.
  TxHash sale(const NftId& nft, const Address& from, const Address& to, Timestamp ts,
              const Address& venue, const Payment& payment, const Decimal& gas);
  /// Transfer with no payment, called on the collection contract by the sender.
  TxHash plain_transfer(const NftId& nft, const Address& from, const Address& to, Timestamp ts,
                        const Decimal& gas);
  TxHash mint(const NftId& nft, const Address& to, Timestamp ts);
  TxHash value_transfer(const Address& from, const Address& to, Timestamp ts, const Payment& payment,
                        const Decimal& gas);
  TxHash contract_call(const Address& from, const Address& to, Timestamp ts, const Payment& payment,
                       const Decimal& gas);
  /// Extra record inside an existing transaction (e.g. a fee split).
  void add_record(const TxHash& tx, const Address& from, const Address& to, const Payment& payment,
                  TxKind kind);

  struct History {
    std::vector<TransferEvent> transfers;
    std::vector<TransactionRecord> transactions;
  };
  History build() const;

 private:
  struct PendingTx {
    Timestamp ts;
    std::size_t seq;
  };
  struct PendingTransfer {
    TransferEvent event;
    std::size_t tx;
  };
  struct PendingRecord {
    TransactionRecord record;
    std::size_t tx;
  };

  std::size_t tx_slot(const TxHash& tx) const;

  std::mt19937_64 rng_;
  Timestamp genesis_;
  std::vector<PendingTx> txs_;
  std::map<TxHash, std::size_t> slot_of_;
  std::vector<PendingTransfer> transfers_;
  std::vector<PendingRecord> records_;
  std::set<Address> used_;
};

enum class ScenarioKind {
  RoundTrip,
  Cycle,
  SelfTrade,
  FundedExternal,
  FundedInternal,
  ExitExternal,
  ExitInternal,
  ZeroRisk,
  NoiseLegit,
  NoiseZeroVolume,
};

inline constexpr std::size_t kScenarioKinds = 10;

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view name);
bool is_wash(ScenarioKind kind);

/// Counts per scenario kind, parsed from "round_trip=5,cycle=5,...".
using ScenarioMix = std::map<ScenarioKind, std::size_t>;
ScenarioMix parse_mix(std::string_view text);
/// Roughly `nfts` scenarios: 40% wash kinds, 45% legit noise, 15% zero volume.
ScenarioMix default_mix(std::size_t nfts);
/// At least `per_wash` of each wash kind plus the given noise counts.
ScenarioMix minimum_mix(std::size_t per_wash, std::size_t legit, std::size_t zero_volume);

struct PlantedScenario {
  std::size_t id = 0;
  ScenarioKind kind = ScenarioKind::NoiseLegit;
  std::string variant;
  NftId nft;
  std::vector<Address> members;  // sorted; empty for noise without a cycle
  std::vector<EvidenceKind> expected_evidence;  // sorted, empty unless wash
  std::string expected_pattern;  // empty unless wash

  bool wash() const { return !expected_evidence.empty(); }
  std::string expected_key() const;
};

struct SynthDataset {
  std::vector<TransferEvent> transfers;
  std::vector<TransactionRecord> transactions;
  LabelRegistry labels;
  PriceTable prices;
  KnownContracts contracts;
  FixtureInterfaceClient compliance;
  std::vector<std::pair<Address, bool>> compliance_rows;
  std::map<std::string, Decimal> marketplace_totals;
  std::vector<PlantedScenario> truth;

  PipelineInputs to_inputs() const;
  /// Expected overlap cells over evidence kinds, keyed like OverlapSummary::by_kind_set.
  std::map<std::string, std::size_t> expected_overlap() const;
};

SynthDataset generate_dataset(const ScenarioMix& mix, std::uint64_t seed);

/// Writes transfers.jsonl, transactions.jsonl, labels.csv, prices.csv,
/// contracts.txt, compliance.csv, marketplace_totals.csv, ground_truth.json.
void write_dataset(const SynthDataset& data, const std::filesystem::path& dir);

/// RunConfig pointing at the files written by write_dataset.
RunConfig dataset_config(const std::filesystem::path& dir);

}  // namespace washtrace
