#include "washtrace/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

#include "washtrace/errors.hpp"

namespace washtrace {

using nlohmann::json;

namespace {

const json& field(const json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) throw std::invalid_argument(std::string("missing key '") + key + "'");
  return *it;
}

const std::string& string_field(const json& object, const char* key) {
  const json& v = field(object, key);
  if (!v.is_string()) throw std::invalid_argument(std::string("'") + key + "' must be a string");
  return v.get_ref<const std::string&>();
}

template <typename T>
T unsigned_field(const json& object, const char* key) {
  const json& v = field(object, key);
  if (v.is_number_unsigned()) return static_cast<T>(v.get<std::uint64_t>());
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<T>(v.get<std::int64_t>());
  throw std::invalid_argument(std::string("'") + key + "' must be a non-negative integer");
}

Decimal amount_field(const json& object, const char* key) {
  const json& v = field(object, key);
  Decimal d;
  if (v.is_string()) {
    d = Decimal::parse(v.get_ref<const std::string&>());
  } else if (v.is_number_unsigned()) {
    d = Decimal(static_cast<long long>(v.get<std::uint64_t>()));
  } else {
    throw std::invalid_argument(std::string("'") + key + "' must be a decimal string");
  }
  if (d.sign() < 0) throw std::invalid_argument(std::string("'") + key + "' must be >= 0");
  return d;
}

std::string payment_amount_text(const Decimal& d) { return d.str(); }

template <typename Record, typename Decode>
std::vector<Record> read_jsonl(std::istream& in, const std::string& source,
                               LoadDiagnostics* diagnostics, Decode decode) {
  std::vector<Record> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json object = json::parse(line);
      if (!object.is_object()) throw std::invalid_argument("expected a JSON object");
      out.push_back(decode(object));
    } catch (const json::exception& e) {
      throw SchemaError(source, line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(source, line_no, e.what());
    }
  }
  auto less = [](const Record& a, const Record& b) { return chain_order_less(a, b); };
  if (!std::is_sorted(out.begin(), out.end(), less)) {
    if (diagnostics) {
      diagnostics->warnings.push_back(source + ": records not in chain order; re-sorted");
    }
    std::sort(out.begin(), out.end(), less);
  }
  return out;
}

template <typename Fn>
void for_each_csv_row(std::istream& in, const std::string& source, std::string_view header_first,
                      std::size_t columns, Fn fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    for (auto& c : cells) {
      auto b = c.find_first_not_of(" \t");
      auto e = c.find_last_not_of(" \t");
      c = b == std::string::npos ? std::string() : c.substr(b, e - b + 1);
    }
    if (line_no == 1 && !cells.empty() && cells[0] == header_first) continue;
    if (cells.size() != columns) {
      throw SchemaError(source, line_no,
                        "expected " + std::to_string(columns) + " columns, got " +
                            std::to_string(cells.size()));
    }
    try {
      fn(cells, line_no);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(source, line_no, e.what());
    }
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

}  // namespace

bool chain_order_less(const TransferEvent& a, const TransferEvent& b) {
  auto key = [](const TransferEvent& e) {
    return std::tie(e.block_number, e.tx_index, e.log_index, e.nft, e.from, e.to, e.tx_hash,
                    e.timestamp, e.interacted_contract, e.payment.asset);
  };
  if (key(a) != key(b)) return key(a) < key(b);
  return a.payment.amount < b.payment.amount;
}

bool chain_order_less(const TransactionRecord& a, const TransactionRecord& b) {
  auto key = [](const TransactionRecord& r) {
    return std::tie(r.block_number, r.tx_index, r.tx_hash, r.from, r.to, r.kind, r.timestamp,
                    r.payment.asset);
  };
  if (key(a) != key(b)) return key(a) < key(b);
  if (a.payment.amount != b.payment.amount) return a.payment.amount < b.payment.amount;
  return a.gas_fee < b.gas_fee;
}

std::string_view to_string(LogRejection reason) {
  switch (reason) {
    case LogRejection::WrongSignature: return "WrongSignature";
    case LogRejection::Erc20Shape: return "Erc20Shape";
    case LogRejection::MalformedTopics: return "MalformedTopics";
  }
  return "?";
}

ParsedLog parse_transfer_log(const RawLogRecord& record, const std::optional<Settlement>& settlement) {
  if (record.topics.empty()) return LogRejection::MalformedTopics;
  if (record.topics[0] != kTransferSignature) return LogRejection::WrongSignature;
  if (record.topics.size() == 3) return LogRejection::Erc20Shape;
  if (record.topics.size() != 4) return LogRejection::MalformedTopics;

  TransferEvent event;
  event.nft = NftId{record.contract, token_id_from_word(record.topics[3])};
  event.from = Address::from_word(record.topics[1]);
  event.to = Address::from_word(record.topics[2]);
  event.block_number = record.block_number;
  event.tx_hash = record.tx_hash;
  event.tx_index = record.tx_index;
  event.log_index = record.log_index;
  event.timestamp = record.timestamp;
  if (settlement) {
    event.interacted_contract = settlement->interacted_contract;
    event.payment = settlement->payment;
  } else {
    event.interacted_contract = record.contract;
    event.payment = Payment{Asset::native(), Decimal()};
  }
  return event;
}

std::string_view to_string(TxKind kind) {
  switch (kind) {
    case TxKind::ValueTransfer: return "value_transfer";
    case TxKind::TokenTransfer: return "token_transfer";
    case TxKind::ContractCall: return "contract_call";
  }
  return "?";
}

TxKind parse_tx_kind(std::string_view text) {
  if (text == "value_transfer") return TxKind::ValueTransfer;
  if (text == "token_transfer") return TxKind::TokenTransfer;
  if (text == "contract_call") return TxKind::ContractCall;
  throw std::invalid_argument("unknown transaction kind: " + std::string(text));
}

// --- registries --------------------------------------------------------------

LabelRegistry::LabelRegistry() { service_.emplace(Address::null(), "null"); }

void LabelRegistry::add_service(const Address& address, std::string name) {
  service_[address] = std::move(name);
}

void LabelRegistry::add_marketplace(const Address& address, std::string name) {
  marketplaces_[address] = std::move(name);
}

void LabelRegistry::add_reward_distributor(const Address& address, std::string marketplace) {
  distributors_[address] = std::move(marketplace);
}

void LabelRegistry::add_treasury(const Address& address, std::string marketplace) {
  treasuries_[address] = std::move(marketplace);
}

std::optional<std::string> LabelRegistry::marketplace_of(const Address& contract) const {
  auto it = marketplaces_.find(contract);
  if (it == marketplaces_.end()) return std::nullopt;
  return it->second;
}

std::set<std::string> LabelRegistry::reward_marketplaces() const {
  std::set<std::string> out;
  for (const auto& [_, name] : distributors_) out.insert(name);
  return out;
}

void PriceTable::add(const Asset& asset, UtcDate date, Decimal usd) {
  if (usd.sign() <= 0) {
    throw InputError("price for " + asset.str() + " on " + date.str() + " must be positive");
  }
  auto [it, inserted] = prices_.emplace(std::make_pair(asset, date), std::move(usd));
  if (!inserted) {
    throw DuplicatePriceEntry("duplicate price for " + asset.str() + " on " + date.str());
  }
}

const Decimal* PriceTable::find(const Asset& asset, UtcDate date) const {
  auto it = prices_.find({asset, date});
  return it == prices_.end() ? nullptr : &it->second;
}

const Decimal& PriceTable::usd(const Asset& asset, UtcDate date) const {
  if (const Decimal* p = find(asset, date)) return *p;
  throw MissingPrice(asset.str(), date.str());
}

Decimal PriceTable::to_usd(const Payment& payment, Timestamp at) const {
  if (payment.amount.is_zero()) return Decimal();
  return payment.amount * usd(payment.asset, UtcDate::from_timestamp(at));
}

// --- transaction index ---------------------------------------------------------

TransactionIndex::TransactionIndex(std::vector<TransactionRecord> records)
    : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(),
            [](const auto& a, const auto& b) { return chain_order_less(a, b); });
  for (std::size_t i = 0; i < records_.size(); ++i) {
    sent_[records_[i].from].push_back(i);
    received_[records_[i].to].push_back(i);
    by_hash_[records_[i].tx_hash].push_back(i);
  }
}

namespace {

std::vector<const TransactionRecord*> gather(
    const std::vector<TransactionRecord>& records,
    const std::unordered_map<Address, std::vector<std::size_t>>& map, const Address& key) {
  std::vector<const TransactionRecord*> out;
  auto it = map.find(key);
  if (it == map.end()) return out;
  out.reserve(it->second.size());
  for (auto i : it->second) out.push_back(&records[i]);
  return out;
}

}  // namespace

std::vector<const TransactionRecord*> TransactionIndex::sent_by(const Address& account) const {
  return gather(records_, sent_, account);
}

std::vector<const TransactionRecord*> TransactionIndex::received_by(const Address& account) const {
  return gather(records_, received_, account);
}

std::vector<const TransactionRecord*> TransactionIndex::by_hash(const TxHash& hash) const {
  std::vector<const TransactionRecord*> out;
  auto it = by_hash_.find(hash);
  if (it == by_hash_.end()) return out;
  for (auto i : it->second) out.push_back(&records_[i]);
  return out;
}

Decimal TransactionIndex::gas_of(const TxHash& hash) const {
  Decimal total;
  for (const auto* r : by_hash(hash)) total += r->gas_fee;
  return total;
}

// --- codecs --------------------------------------------------------------------

json transfer_to_json(const TransferEvent& e) {
  json o = json::object();
  o["contract"] = e.nft.contract.hex();
  o["token_id"] = e.nft.token_id.str();
  o["from"] = e.from.hex();
  o["to"] = e.to.hex();
  o["block"] = e.block_number;
  o["tx_hash"] = to_hex(e.tx_hash);
  o["tx_index"] = e.tx_index;
  o["log_index"] = e.log_index;
  o["timestamp"] = e.timestamp;
  o["interacted_contract"] = e.interacted_contract.hex();
  o["payment_asset"] = e.payment.asset.str();
  o["payment_amount"] = payment_amount_text(e.payment.amount);
  return o;
}

TransferEvent transfer_from_json(const json& o) {
  TransferEvent e;
  e.nft.contract = Address::parse(string_field(o, "contract"));
  const json& tid = field(o, "token_id");
  if (tid.is_string()) {
    e.nft.token_id = parse_token_id(tid.get_ref<const std::string&>());
  } else if (tid.is_number_unsigned()) {
    e.nft.token_id = tid.get<std::uint64_t>();
  } else {
    throw std::invalid_argument("'token_id' must be a string or unsigned integer");
  }
  e.from = Address::parse(string_field(o, "from"));
  e.to = Address::parse(string_field(o, "to"));
  e.block_number = unsigned_field<std::uint64_t>(o, "block");
  e.tx_hash = parse_word(string_field(o, "tx_hash"));
  e.tx_index = unsigned_field<std::uint32_t>(o, "tx_index");
  e.log_index = o.contains("log_index") ? unsigned_field<std::uint32_t>(o, "log_index") : 0;
  e.timestamp = unsigned_field<Timestamp>(o, "timestamp");
  e.interacted_contract = Address::parse(string_field(o, "interacted_contract"));
  e.payment.asset = Asset::parse(string_field(o, "payment_asset"));
  e.payment.amount = amount_field(o, "payment_amount");
  return e;
}

json transaction_to_json(const TransactionRecord& r) {
  json o = json::object();
  o["tx_hash"] = to_hex(r.tx_hash);
  o["block"] = r.block_number;
  o["tx_index"] = r.tx_index;
  o["timestamp"] = r.timestamp;
  o["from"] = r.from.hex();
  o["to"] = r.to.hex();
  o["asset"] = r.payment.asset.str();
  o["amount"] = r.payment.amount.str();
  o["gas_fee"] = r.gas_fee.str();
  o["kind"] = std::string(to_string(r.kind));
  return o;
}

TransactionRecord transaction_from_json(const json& o) {
  TransactionRecord r;
  r.tx_hash = parse_word(string_field(o, "tx_hash"));
  r.block_number = unsigned_field<std::uint64_t>(o, "block");
  r.tx_index = unsigned_field<std::uint32_t>(o, "tx_index");
  r.timestamp = unsigned_field<Timestamp>(o, "timestamp");
  r.from = Address::parse(string_field(o, "from"));
  r.to = Address::parse(string_field(o, "to"));
  r.payment.asset = Asset::parse(string_field(o, "asset"));
  r.payment.amount = amount_field(o, "amount");
  r.gas_fee = amount_field(o, "gas_fee");
  r.kind = parse_tx_kind(string_field(o, "kind"));
  return r;
}

std::vector<TransferEvent> read_transfers(std::istream& in, const std::string& source,
                                          LoadDiagnostics* diagnostics) {
  return read_jsonl<TransferEvent>(in, source, diagnostics, transfer_from_json);
}

std::vector<TransactionRecord> read_transactions(std::istream& in, const std::string& source,
                                                 LoadDiagnostics* diagnostics) {
  return read_jsonl<TransactionRecord>(in, source, diagnostics, transaction_from_json);
}

LabelRegistry read_labels(std::istream& in, const std::string& source) {
  LabelRegistry registry;
  for_each_csv_row(in, source, "address", 3, [&](const std::vector<std::string>& c, std::size_t) {
    Address address = Address::parse(c[0]);
    const std::string& category = c[1];
    if (category == "service") {
      registry.add_service(address, c[2]);
    } else if (category == "marketplace") {
      registry.add_marketplace(address, c[2]);
    } else if (category == "reward_distributor") {
      registry.add_reward_distributor(address, c[2]);
    } else if (category == "treasury") {
      registry.add_treasury(address, c[2]);
    } else {
      throw std::invalid_argument("unknown label category '" + category + "'");
    }
  });
  return registry;
}

PriceTable read_prices(std::istream& in, const std::string& source) {
  PriceTable table;
  for_each_csv_row(in, source, "asset", 3, [&](const std::vector<std::string>& c, std::size_t line) {
    Asset asset = Asset::parse(c[0]);
    UtcDate date = UtcDate::parse(c[1]);
    Decimal usd = Decimal::parse(c[2]);
    try {
      table.add(asset, date, std::move(usd));
    } catch (const DuplicatePriceEntry& e) {
      throw DuplicatePriceEntry(source + ":" + std::to_string(line) + ": " + e.what());
    } catch (const InputError& e) {
      throw SchemaError(source, line, e.what());
    }
  });
  return table;
}

KnownContracts read_contracts(std::istream& in, const std::string& source) {
  KnownContracts contracts;
  for_each_csv_row(in, source, "address", 1, [&](const std::vector<std::string>& c, std::size_t) {
    contracts.add(Address::parse(c[0]));
  });
  return contracts;
}

std::map<std::string, Decimal> read_marketplace_totals(std::istream& in, const std::string& source) {
  std::map<std::string, Decimal> totals;
  for_each_csv_row(in, source, "marketplace", 2, [&](const std::vector<std::string>& c, std::size_t) {
    Decimal v = Decimal::parse(c[1]);
    if (v.sign() < 0) throw std::invalid_argument("total_usd_volume must be >= 0");
    if (!totals.emplace(c[0], std::move(v)).second) {
      throw std::invalid_argument("duplicate marketplace '" + c[0] + "'");
    }
  });
  return totals;
}

std::vector<TransferEvent> load_transfers(const std::filesystem::path& path,
                                          LoadDiagnostics* diagnostics) {
  auto in = open_input(path);
  return read_transfers(in, path.string(), diagnostics);
}

std::vector<TransactionRecord> load_transactions(const std::filesystem::path& path,
                                                 LoadDiagnostics* diagnostics) {
  auto in = open_input(path);
  return read_transactions(in, path.string(), diagnostics);
}

LabelRegistry load_labels(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_labels(in, path.string());
}

PriceTable load_prices(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_prices(in, path.string());
}

KnownContracts load_contracts(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_contracts(in, path.string());
}

std::map<std::string, Decimal> load_marketplace_totals(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_marketplace_totals(in, path.string());
}

void write_transfers(std::ostream& out, std::span<const TransferEvent> events) {
  for (const auto& e : events) out << transfer_to_json(e).dump() << '\n';
}

void write_transactions(std::ostream& out, std::span<const TransactionRecord> records) {
  for (const auto& r : records) out << transaction_to_json(r).dump() << '\n';
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cells.back().push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cells.back().push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.emplace_back();
    } else {
      cells.back().push_back(ch);
    }
  }
  return cells;
}

}  // namespace washtrace
