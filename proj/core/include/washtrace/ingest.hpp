#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "washtrace/decimal.hpp"
#include "washtrace/types.hpp"

namespace washtrace {

// keccak256("Transfer(address,address,uint256)")
inline constexpr Word32 kTransferSignature = {
    0xdd, 0xf2, 0x52, 0xad, 0x1b, 0xe2, 0xc8, 0x9b, 0x69, 0xc2, 0xb0, 0x68, 0xfc, 0x37, 0x8d, 0xaa,
    0x95, 0x2b, 0xa7, 0xf1, 0x63, 0xc4, 0xa1, 0x16, 0x28, 0xf5, 0x5a, 0x4d, 0xf5, 0x23, 0xb3, 0xef};

struct RawLogRecord {
  Address contract;
  std::vector<Word32> topics;
  std::uint64_t block_number = 0;
  TxHash tx_hash{};
  std::uint32_t tx_index = 0;
  std::uint32_t log_index = 0;
  Timestamp timestamp = 0;
};

/// One ERC-721 transfer with the settlement payment already joined on.
struct TransferEvent {
  NftId nft;
  Address from;
  Address to;
  std::uint64_t block_number = 0;
  TxHash tx_hash{};
  std::uint32_t tx_index = 0;
  std::uint32_t log_index = 0;
  Timestamp timestamp = 0;
  Address interacted_contract;
  Payment payment;

  TxPos pos() const { return {block_number, tx_index}; }

  friend bool operator==(const TransferEvent&, const TransferEvent&) = default;
};

/// Total chain order: (block, tx_index, log_index), ties broken on content so
/// that sorting any permutation of the same records gives one sequence.
bool chain_order_less(const TransferEvent& a, const TransferEvent& b);

enum class LogRejection { WrongSignature, Erc20Shape, MalformedTopics };

std::string_view to_string(LogRejection reason);

/// Transaction-level data a raw log does not carry.
struct Settlement {
  Address interacted_contract;
  Payment payment;
};

using ParsedLog = std::variant<TransferEvent, LogRejection>;

/// Decodes a Transfer log. Without a settlement the interacted contract is the
/// emitting contract and the payment is zero ETH.
ParsedLog parse_transfer_log(const RawLogRecord& record,
                             const std::optional<Settlement>& settlement = std::nullopt);

enum class TxKind { ValueTransfer, TokenTransfer, ContractCall };

std::string_view to_string(TxKind kind);
TxKind parse_tx_kind(std::string_view text);

struct TransactionRecord {
  TxHash tx_hash{};
  std::uint64_t block_number = 0;
  std::uint32_t tx_index = 0;
  Timestamp timestamp = 0;
  Address from;
  Address to;
  Payment payment;
  Decimal gas_fee;
  TxKind kind = TxKind::ValueTransfer;

  TxPos pos() const { return {block_number, tx_index}; }
  /// A plain value or token movement, as opposed to a contract call.
  bool is_transfer() const { return kind != TxKind::ContractCall; }

  friend bool operator==(const TransactionRecord&, const TransactionRecord&) = default;
};

bool chain_order_less(const TransactionRecord& a, const TransactionRecord& b);

class LabelRegistry {
 public:
  /// The null address is always a service account.
  LabelRegistry();

  void add_service(const Address& address, std::string name = {});
  void add_marketplace(const Address& address, std::string name);
  void add_reward_distributor(const Address& address, std::string marketplace);
  void add_treasury(const Address& address, std::string marketplace);

  bool is_service(const Address& address) const { return service_.count(address) > 0; }
  bool is_reward_distributor(const Address& a) const { return distributors_.count(a) > 0; }
  bool is_treasury(const Address& a) const { return treasuries_.count(a) > 0; }
  std::optional<std::string> marketplace_of(const Address& contract) const;
  /// Names of marketplaces that run a reward distributor.
  std::set<std::string> reward_marketplaces() const;

  const std::map<Address, std::string>& service_accounts() const { return service_; }
  const std::map<Address, std::string>& marketplaces() const { return marketplaces_; }
  const std::map<Address, std::string>& reward_distributors() const { return distributors_; }
  const std::map<Address, std::string>& treasuries() const { return treasuries_; }

 private:
  std::map<Address, std::string> service_;
  std::map<Address, std::string> marketplaces_;
  std::map<Address, std::string> distributors_;
  std::map<Address, std::string> treasuries_;
};

/// USD price per whole unit, keyed exactly by (asset, UTC day).
class PriceTable {
 public:
  /// Throws DuplicatePriceEntry, or InputError for a non-positive price.
  void add(const Asset& asset, UtcDate date, Decimal usd);
  /// Throws MissingPrice.
  const Decimal& usd(const Asset& asset, UtcDate date) const;
  const Decimal* find(const Asset& asset, UtcDate date) const;
  Decimal to_usd(const Payment& payment, Timestamp at) const;
  std::size_t size() const { return prices_.size(); }

  const std::map<std::pair<Asset, UtcDate>, Decimal>& entries() const { return prices_; }

 private:
  std::map<std::pair<Asset, UtcDate>, Decimal> prices_;
};

/// Answers whether an address holds bytecode. Unknown addresses hold none.
class CodePresenceOracle {
 public:
  virtual ~CodePresenceOracle() = default;
  virtual bool has_bytecode(const Address& address) const = 0;
};

class KnownContracts final : public CodePresenceOracle {
 public:
  KnownContracts() = default;
  explicit KnownContracts(std::set<Address> contracts) : contracts_(std::move(contracts)) {}

  void add(const Address& address) { contracts_.insert(address); }
  bool has_bytecode(const Address& address) const override { return contracts_.count(address) > 0; }
  const std::set<Address>& contracts() const { return contracts_; }

 private:
  std::set<Address> contracts_;
};

/// Per-account view over all transaction records, in chain order.
class TransactionIndex {
 public:
  TransactionIndex() = default;
  explicit TransactionIndex(std::vector<TransactionRecord> records);

  std::span<const TransactionRecord> records() const { return records_; }
  /// Records sent by `account`, chain order.
  std::vector<const TransactionRecord*> sent_by(const Address& account) const;
  /// Records received by `account`, chain order.
  std::vector<const TransactionRecord*> received_by(const Address& account) const;
  /// All records sharing a transaction hash.
  std::vector<const TransactionRecord*> by_hash(const TxHash& hash) const;
  /// Sum of gas over all records of a transaction.
  Decimal gas_of(const TxHash& hash) const;

 private:
  std::vector<TransactionRecord> records_;
  std::unordered_map<Address, std::vector<std::size_t>> sent_;
  std::unordered_map<Address, std::vector<std::size_t>> received_;
  std::unordered_map<TxHash, std::vector<std::size_t>, WordHash> by_hash_;
};

struct LoadDiagnostics {
  std::vector<std::string> warnings;
};

// Line-delimited JSON codecs. Amounts are decimal strings.
nlohmann::json transfer_to_json(const TransferEvent& event);
TransferEvent transfer_from_json(const nlohmann::json& object);
nlohmann::json transaction_to_json(const TransactionRecord& record);
TransactionRecord transaction_from_json(const nlohmann::json& object);

std::vector<TransferEvent> read_transfers(std::istream& in, const std::string& source,
                                          LoadDiagnostics* diagnostics = nullptr);
std::vector<TransactionRecord> read_transactions(std::istream& in, const std::string& source,
                                                 LoadDiagnostics* diagnostics = nullptr);
LabelRegistry read_labels(std::istream& in, const std::string& source);
PriceTable read_prices(std::istream& in, const std::string& source);
KnownContracts read_contracts(std::istream& in, const std::string& source);
std::map<std::string, Decimal> read_marketplace_totals(std::istream& in, const std::string& source);

std::vector<TransferEvent> load_transfers(const std::filesystem::path& path,
                                          LoadDiagnostics* diagnostics = nullptr);
std::vector<TransactionRecord> load_transactions(const std::filesystem::path& path,
                                                 LoadDiagnostics* diagnostics = nullptr);
LabelRegistry load_labels(const std::filesystem::path& path);
PriceTable load_prices(const std::filesystem::path& path);
KnownContracts load_contracts(const std::filesystem::path& path);
std::map<std::string, Decimal> load_marketplace_totals(const std::filesystem::path& path);

void write_transfers(std::ostream& out, std::span<const TransferEvent> events);
void write_transactions(std::ostream& out, std::span<const TransactionRecord> records);

/// Splits one CSV line, honoring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace washtrace
