#include "washtrace/synth.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "washtrace/errors.hpp"

namespace washtrace {

namespace {

constexpr Timestamp kDay = 86400;
constexpr std::uint64_t kFirstBlock = 13916166;
constexpr Timestamp kBlockTime = 12;

std::uint64_t uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

bool chance(std::mt19937_64& rng, unsigned percent) { return rng() % 100 < percent; }

Decimal milli(std::uint64_t v) { return Decimal::from_units(BigInt(v), 3); }

Payment eth(const Decimal& amount) { return Payment{Asset::native(), amount}; }

}  // namespace

// --- HistoryBuilder ------------------------------------------------------------------

HistoryBuilder::HistoryBuilder(std::uint64_t seed, Timestamp genesis)
    : rng_(seed), genesis_(genesis) {}

Address HistoryBuilder::new_account() {
  for (;;) {
    Word32 w{};
    for (std::size_t i = 12; i < w.size(); ++i) w[i] = static_cast<std::uint8_t>(rng_());
    Address a = Address::from_word(w);
    if (!a.is_null() && used_.insert(a).second) return a;
  }
}

TxHash HistoryBuilder::new_hash() {
  for (;;) {
    TxHash h{};
    for (auto& byte : h) byte = static_cast<std::uint8_t>(rng_());
    if (!slot_of_.count(h)) return h;
  }
}

TxHash HistoryBuilder::open_tx(Timestamp ts) {
  if (ts < genesis_) throw std::invalid_argument("transaction before genesis");
  TxHash h = new_hash();
  slot_of_.emplace(h, txs_.size());
  txs_.push_back(PendingTx{ts, txs_.size()});
  return h;
}

std::size_t HistoryBuilder::tx_slot(const TxHash& tx) const {
  auto it = slot_of_.find(tx);
  if (it == slot_of_.end()) throw std::invalid_argument("unknown transaction");
  return it->second;
}

TxHash HistoryBuilder::sale(const NftId& nft, const Address& from, const Address& to, Timestamp ts,
                            const Address& venue, const Payment& payment, const Decimal& gas) {
  TxHash tx = open_tx(ts);
  std::size_t slot = tx_slot(tx);
  TransferEvent e;
  e.nft = nft;
  e.from = from;
  e.to = to;
  e.tx_hash = tx;
  e.timestamp = ts;
  e.interacted_contract = venue;
  e.payment = payment;
  transfers_.push_back({e, slot});
  TransactionRecord r;
  r.tx_hash = tx;
  r.timestamp = ts;
  r.from = to;
  r.to = venue;
  r.payment = payment;
  r.gas_fee = gas;
  r.kind = TxKind::ContractCall;
  records_.push_back({r, slot});
  return tx;
}

TxHash HistoryBuilder::plain_transfer(const NftId& nft, const Address& from, const Address& to,
                                      Timestamp ts, const Decimal& gas) {
  TxHash tx = open_tx(ts);
  std::size_t slot = tx_slot(tx);
  TransferEvent e;
  e.nft = nft;
  e.from = from;
  e.to = to;
  e.tx_hash = tx;
  e.timestamp = ts;
  e.interacted_contract = nft.contract;
  e.payment = eth(Decimal());
  transfers_.push_back({e, slot});
  TransactionRecord r;
  r.tx_hash = tx;
  r.timestamp = ts;
  r.from = from;
  r.to = nft.contract;
  r.payment = eth(Decimal());
  r.gas_fee = gas;
  r.kind = TxKind::ContractCall;
  records_.push_back({r, slot});
  return tx;
}

TxHash HistoryBuilder::mint(const NftId& nft, const Address& to, Timestamp ts) {
  TxHash tx = open_tx(ts);
  TransferEvent e;
  e.nft = nft;
  e.from = Address::null();
  e.to = to;
  e.tx_hash = tx;
  e.timestamp = ts;
  e.interacted_contract = nft.contract;
  e.payment = eth(Decimal());
  transfers_.push_back({e, tx_slot(tx)});
  return tx;
}

TxHash HistoryBuilder::value_transfer(const Address& from, const Address& to, Timestamp ts,
                                      const Payment& payment, const Decimal& gas) {
  TxHash tx = open_tx(ts);
  TransactionRecord r;
  r.tx_hash = tx;
  r.timestamp = ts;
  r.from = from;
  r.to = to;
  r.payment = payment;
  r.gas_fee = gas;
  r.kind = payment.asset.is_native() ? TxKind::ValueTransfer : TxKind::TokenTransfer;
  records_.push_back({r, tx_slot(tx)});
  return tx;
}

TxHash HistoryBuilder::contract_call(const Address& from, const Address& to, Timestamp ts,
                                     const Payment& payment, const Decimal& gas) {
  TxHash tx = open_tx(ts);
  TransactionRecord r;
  r.tx_hash = tx;
  r.timestamp = ts;
  r.from = from;
  r.to = to;
  r.payment = payment;
  r.gas_fee = gas;
  r.kind = TxKind::ContractCall;
  records_.push_back({r, tx_slot(tx)});
  return tx;
}

void HistoryBuilder::add_record(const TxHash& tx, const Address& from, const Address& to,
                                const Payment& payment, TxKind kind) {
  std::size_t slot = tx_slot(tx);
  TransactionRecord r;
  r.tx_hash = tx;
  r.timestamp = txs_[slot].ts;
  r.from = from;
  r.to = to;
  r.payment = payment;
  r.kind = kind;
  records_.push_back({r, slot});
}

HistoryBuilder::History HistoryBuilder::build() const {
  std::vector<std::size_t> order(txs_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(txs_[a].ts, txs_[a].seq) < std::tie(txs_[b].ts, txs_[b].seq);
  });
  std::vector<TxPos> pos(txs_.size());
  TxPos last{0, 0};
  bool first = true;
  for (std::size_t slot : order) {
    std::uint64_t block = kFirstBlock + static_cast<std::uint64_t>((txs_[slot].ts - genesis_) / kBlockTime);
    if (!first && block == last.block) {
      last.tx_index += 1;
    } else {
      last = TxPos{block, 0};
    }
    first = false;
    pos[slot] = last;
  }

  History h;
  std::vector<std::uint32_t> next_log(txs_.size(), 0);
  for (const auto& t : transfers_) {
    TransferEvent e = t.event;
    e.block_number = pos[t.tx].block;
    e.tx_index = pos[t.tx].tx_index;
    e.log_index = next_log[t.tx]++;
    h.transfers.push_back(std::move(e));
  }
  for (const auto& r : records_) {
    TransactionRecord rec = r.record;
    rec.block_number = pos[r.tx].block;
    rec.tx_index = pos[r.tx].tx_index;
    h.transactions.push_back(std::move(rec));
  }
  std::stable_sort(h.transfers.begin(), h.transfers.end(),
                   [](const TransferEvent& a, const TransferEvent& b) { return chain_order_less(a, b); });
  std::stable_sort(h.transactions.begin(), h.transactions.end(),
                   [](const TransactionRecord& a, const TransactionRecord& b) {
                     return chain_order_less(a, b);
                   });
  return h;
}

// --- scenario kinds ------------------------------------------------------------------

namespace {

constexpr std::array<std::string_view, kScenarioKinds> kScenarioNames = {
    "round_trip",    "cycle",         "self_trade", "funded_external", "funded_internal",
    "exit_external", "exit_internal", "zero_risk",  "noise_legit",     "noise_zero_volume"};

}  // namespace

std::string_view to_string(ScenarioKind kind) { return kScenarioNames[static_cast<std::size_t>(kind)]; }

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (std::size_t i = 0; i < kScenarioNames.size(); ++i) {
    if (kScenarioNames[i] == name) return static_cast<ScenarioKind>(i);
  }
  throw InputError("unknown scenario kind '" + std::string(name) + "'");
}

bool is_wash(ScenarioKind kind) {
  return kind != ScenarioKind::NoiseLegit && kind != ScenarioKind::NoiseZeroVolume;
}

ScenarioMix parse_mix(std::string_view text) {
  ScenarioMix mix;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    if (!item.empty()) {
      std::size_t eq = item.find('=');
      if (eq == std::string_view::npos) throw InputError("mix entries look like kind=count");
      ScenarioKind kind = parse_scenario_kind(item.substr(0, eq));
      std::string count(item.substr(eq + 1));
      if (count.empty() || count.find_first_not_of("0123456789") != std::string::npos) {
        throw InputError("bad scenario count '" + count + "'");
      }
      mix[kind] = std::stoull(count);
    }
    start = end + 1;
  }
  return mix;
}

ScenarioMix default_mix(std::size_t nfts) {
  ScenarioMix mix;
  const std::size_t per_wash = nfts * 5 / 100;
  for (std::size_t k = 0; k < 8; ++k) mix[static_cast<ScenarioKind>(k)] = per_wash;
  mix[ScenarioKind::NoiseZeroVolume] = nfts * 15 / 100;
  mix[ScenarioKind::NoiseLegit] = nfts - 8 * per_wash - mix[ScenarioKind::NoiseZeroVolume];
  return mix;
}

ScenarioMix minimum_mix(std::size_t per_wash, std::size_t legit, std::size_t zero_volume) {
  ScenarioMix mix;
  for (std::size_t k = 0; k < 8; ++k) mix[static_cast<ScenarioKind>(k)] = per_wash;
  mix[ScenarioKind::NoiseLegit] = legit;
  mix[ScenarioKind::NoiseZeroVolume] = zero_volume;
  return mix;
}

std::string PlantedScenario::expected_key() const {
  std::string key;
  for (auto k : expected_evidence) {
    if (!key.empty()) key += '+';
    key += to_string(k);
  }
  return key;
}

PipelineInputs SynthDataset::to_inputs() const {
  PipelineInputs in;
  in.transfers = transfers;
  in.txs = TransactionIndex(transactions);
  in.labels = labels;
  in.prices = prices;
  in.contracts = contracts;
  in.compliance = compliance;
  in.marketplace_totals = marketplace_totals;
  return in;
}

std::map<std::string, std::size_t> SynthDataset::expected_overlap() const {
  std::map<std::string, std::size_t> cells;
  for (const auto& s : truth) {
    if (s.wash()) ++cells[s.expected_key()];
  }
  return cells;
}

// --- generator -----------------------------------------------------------------------

namespace {

struct Venue {
  std::string name;
  Address exchange;
  bool rewards = false;
  Address distributor;
  Address treasury;
  Asset token = Asset::native();
};

Address fixed_address(std::string_view hex) { return Address::parse(hex); }

class Generator {
 public:
  Generator(std::uint64_t seed) : b_(seed) {
    venues_.push_back(Venue{"OpenSea", fixed_address("0x7be8076f4ea4a4ad08075c2508e481d6c946d12b"), false, {}, {}, Asset::native()});
    venues_.push_back(Venue{"LooksRare", fixed_address("0x59728544b08ab483533076417fbbb2fd0b17ce3a"),
                            true, fixed_address("0x0554f068365ed43dcc98dcd7fd7a8208a5638c72"),
                            fixed_address("0x5924a28caaf1cc016617874a2f0c3710d881f3c1"),
                            Asset::token(fixed_address("0xf4d2888d29d722226fafa5d9b24f9164c092421e"))});
    venues_.push_back(Venue{"X2Y2", fixed_address("0x74312363e45dcaba76c59ec49a7aa8a65a67eed3"), true,
                            fixed_address("0x897249fef87fa6d1e7fedcb960c2a01ec99ecc6c"),
                            fixed_address("0xd823c605807cc5e6bd6fc0d7e4eea50d3e2d66cd"),
                            Asset::token(fixed_address("0x1e4ede388cbc9f4b5c79681b7f94d36a11abebc9"))});
    for (const auto& v : venues_) {
      data_.labels.add_marketplace(v.exchange, v.name);
      data_.contracts.add(v.exchange);
      if (v.rewards) {
        data_.labels.add_reward_distributor(v.distributor, v.name);
        data_.labels.add_treasury(v.treasury, v.name);
        data_.contracts.add(v.distributor);
      }
    }
    for (int i = 0; i < 3; ++i) {
      Address a = b_.new_account();
      data_.labels.add_service(a, "exchange-" + std::to_string(i + 1));
      exchanges_.push_back(a);
    }
    for (int i = 0; i < 3; ++i) {
      Address a = b_.new_account();
      data_.contracts.add(a);
      pools_.push_back(a);
    }
    for (int i = 0; i < 20; ++i) {
      Address a = b_.new_account();
      data_.contracts.add(a);
      data_.compliance.set(a, kErc721InterfaceId, true);
      data_.compliance_rows.emplace_back(a, true);
      collections_.push_back(a);
    }
    non_compliant_ = b_.new_account();
    data_.contracts.add(non_compliant_);
    data_.compliance.set(non_compliant_, kErc721InterfaceId, false);
    data_.compliance_rows.emplace_back(non_compliant_, false);
  }

  SynthDataset run(const ScenarioMix& mix) {
    std::vector<ScenarioKind> plan;
    for (const auto& [kind, count] : mix) plan.insert(plan.end(), count, kind);
    // Interleave kinds deterministically so collections and venues mix.
    for (std::size_t i = plan.size(); i > 1; --i) std::swap(plan[i - 1], plan[rng()() % i]);
    std::map<ScenarioKind, std::size_t> seen;
    for (std::size_t i = 0; i < plan.size(); ++i) plant(i, plan[i], seen[plan[i]]++);

    add_prices();
    data_.marketplace_totals["OpenSea"] = Decimal(25000000000LL);
    data_.marketplace_totals["LooksRare"] = Decimal(20000000000LL);
    data_.marketplace_totals["X2Y2"] = Decimal(3000000000LL);
    auto h = b_.build();
    data_.transfers = std::move(h.transfers);
    data_.transactions = std::move(h.transactions);
    return std::move(data_);
  }

 private:
  std::mt19937_64& rng() { return b_.rng(); }

  Decimal gas() { return Decimal::from_units(BigInt(uniform(rng(), 800, 9000)), 6); }
  Decimal price() { return milli(uniform(rng(), 50, 8000)); }
  Decimal funding() { return milli(uniform(rng(), 500, 20000)); }
  Decimal step_up() { return milli(uniform(rng(), 200, 4000)); }

  NftId next_nft(bool compliant = true) {
    Address contract = compliant ? collections_[rng()() % collections_.size()] : non_compliant_;
    return NftId{contract, TokenId(++token_counter_[contract])};
  }

  // One scenario's clock: a random start within the first ~11 months, fixed step.
  struct Clock {
    Timestamp at;
    Timestamp step;
    Timestamp next() { return at += step; }
  };
  Clock clock() {
    return Clock{b_.genesis() + static_cast<Timestamp>(uniform(rng(), 0, 330 * kDay)),
                 static_cast<Timestamp>(uniform(rng(), 60, 30000))};
  }

  const Venue& pick_venue() { return venues_[rng()() % venues_.size()]; }

  // Mint to a creator and sell to the first holder.
  void acquire(const NftId& nft, const Address& holder, Clock& t, const Venue& v) {
    Address creator = b_.new_account();
    b_.mint(nft, creator, t.next());
    b_.sale(nft, creator, holder, t.next(), v.exchange, eth(price()), gas());
  }

  void wash_sale(const NftId& nft, const Address& seller, const Address& buyer, const Decimal& amount,
                 Clock& t, const Venue& v) {
    TxHash tx = b_.sale(nft, seller, buyer, t.next(), v.exchange, eth(amount), gas());
    if (v.rewards) {
      b_.add_record(tx, seller, v.treasury, eth(amount * Decimal::from_units(2, 2)),
                    TxKind::ValueTransfer);
    }
  }

  void fund(const Address& from, const Address& to, Clock& t) {
    b_.value_transfer(from, to, t.next(), eth(funding()), gas());
  }

  // Reward claims on reward venues, otherwise an occasional resale.
  void wrap_up(const NftId& nft, const std::vector<Address>& members, const Address& holder,
               Clock& t, const Venue& v) {
    if (v.rewards) {
      for (const auto& m : members) {
        if (!chance(rng(), 75)) continue;
        Decimal tokens = Decimal::from_units(BigInt(uniform(rng(), 100, 800000)), 2);
        b_.contract_call(m, v.distributor, t.next(), Payment{v.token, tokens}, gas());
      }
    } else if (chance(rng(), 50)) {
      b_.sale(nft, holder, b_.new_account(), t.next() + kDay * static_cast<Timestamp>(uniform(rng(), 0, 40)),
              v.exchange, eth(price()), gas());
    }
  }

  // Two-account round trip with the return leg priced differently.
  void asymmetric_round_trip(const NftId& nft, const Address& a, const Address& b, Clock& t,
                             const Venue& v) {
    Decimal p = price();
    wash_sale(nft, a, b, p, t, v);
    wash_sale(nft, b, a, p + step_up(), t, v);
  }

  void plant(std::size_t id, ScenarioKind kind, std::size_t ordinal) {
    PlantedScenario s;
    s.id = id;
    s.kind = kind;
    Clock t = clock();
    const Venue& v = pick_venue();
    NftId nft = next_nft(!(kind == ScenarioKind::NoiseLegit && ordinal % 6 == 5));
    s.nft = nft;
    std::vector<Address> members;
    Address holder;

    auto pair = [&] {
      Address a = b_.new_account();
      Address b = b_.new_account();
      members = {a, b};
      acquire(nft, a, t, v);
      holder = a;
      return std::pair{a, b};
    };

    switch (kind) {
      case ScenarioKind::RoundTrip: {
        auto [a, b] = pair();
        Address funder = b_.new_account();
        fund(funder, a, t);
        fund(funder, b, t);
        asymmetric_round_trip(nft, a, b, t, v);
        Address sink = b_.new_account();
        fund(a, sink, t);
        fund(b, sink, t);
        s.expected_evidence = {EvidenceKind::CommonFunderExternal, EvidenceKind::CommonExitExternal};
        s.expected_pattern = "P1";
        break;
      }
      case ScenarioKind::Cycle: {
        const std::size_t n = 3 + ordinal % 3;
        for (std::size_t i = 0; i < n; ++i) members.push_back(b_.new_account());
        acquire(nft, members[0], t, v);
        holder = members[0];
        for (std::size_t i = 1; i < n; ++i) fund(members[0], members[i], t);
        Decimal p = price();
        for (std::size_t i = 0; i < n; ++i) {
          wash_sale(nft, members[i], members[(i + 1) % n], p, t, v);
          p += step_up();
        }
        for (std::size_t i = 1; i < n; ++i) fund(members[i], members[0], t);
        s.variant = std::to_string(n) + "-cycle";
        s.expected_evidence = {EvidenceKind::CommonFunderInternal, EvidenceKind::CommonExitInternal};
        s.expected_pattern = n == 3 ? "P2" : n == 4 ? "P5" : "P10";
        break;
      }
      case ScenarioKind::SelfTrade: {
        Address a = b_.new_account();
        members = {a};
        acquire(nft, a, t, v);
        holder = a;
        wash_sale(nft, a, a, price(), t, v);
        s.expected_evidence = {EvidenceKind::SelfTrade};
        s.expected_pattern = "Other";
        break;
      }
      case ScenarioKind::FundedExternal: {
        auto [a, b] = pair();
        Address funder = b_.new_account();
        fund(funder, a, t);
        fund(funder, b, t);
        asymmetric_round_trip(nft, a, b, t, v);
        s.expected_evidence = {EvidenceKind::CommonFunderExternal};
        s.expected_pattern = "P1";
        break;
      }
      case ScenarioKind::FundedInternal: {
        auto [a, b] = pair();
        fund(a, b, t);
        asymmetric_round_trip(nft, a, b, t, v);
        s.expected_evidence = {EvidenceKind::CommonFunderInternal};
        s.expected_pattern = "P1";
        break;
      }
      case ScenarioKind::ExitExternal: {
        auto [a, b] = pair();
        asymmetric_round_trip(nft, a, b, t, v);
        Address sink = b_.new_account();
        fund(a, sink, t);
        fund(b, sink, t);
        s.expected_evidence = {EvidenceKind::CommonExitExternal};
        s.expected_pattern = "P1";
        break;
      }
      case ScenarioKind::ExitInternal: {
        auto [a, b] = pair();
        asymmetric_round_trip(nft, a, b, t, v);
        fund(b, a, t);
        s.expected_evidence = {EvidenceKind::CommonExitInternal};
        s.expected_pattern = "P1";
        break;
      }
      case ScenarioKind::ZeroRisk: {
        const std::size_t n = ordinal % 2 == 0 ? 2 : 3;
        for (std::size_t i = 0; i < n; ++i) members.push_back(b_.new_account());
        acquire(nft, members[0], t, v);
        holder = members[0];
        Decimal p = price();
        for (std::size_t i = 0; i < n; ++i) wash_sale(nft, members[i], members[(i + 1) % n], p, t, v);
        s.variant = std::to_string(n) + "-account";
        s.expected_evidence = {EvidenceKind::ZeroRisk};
        s.expected_pattern = n == 2 ? "P1" : "P2";
        break;
      }
      case ScenarioKind::NoiseLegit:
        plant_noise(s, ordinal % 6, nft, t, v, members, holder);
        break;
      case ScenarioKind::NoiseZeroVolume: {
        auto [a, b] = pair();
        Address funder = b_.new_account();
        fund(funder, a, t);
        fund(funder, b, t);
        b_.plain_transfer(nft, a, b, t.next(), gas());
        b_.plain_transfer(nft, b, a, t.next(), gas());
        s.variant = "unpaid-round-trip";
        break;
      }
    }
    if (!members.empty() && (is_wash(kind) || s.variant == "independent" ||
                             s.variant == "exchange-funded")) {
      wrap_up(nft, members, holder, t, v);
    }
    std::sort(members.begin(), members.end());
    s.members = std::move(members);
    data_.truth.push_back(std::move(s));
  }

  void plant_noise(PlantedScenario& s, std::size_t variant, const NftId& nft, Clock& t,
                   const Venue& v, std::vector<Address>& members, Address& holder) {
    switch (variant) {
      case 0: {
        s.variant = "chain";
        Address a = b_.new_account();
        acquire(nft, a, t, v);
        for (int i = 0; i < 3; ++i) {
          Address next = b_.new_account();
          b_.sale(nft, a, next, t.next(), v.exchange, eth(price()), gas());
          a = next;
        }
        break;
      }
      case 1:
      case 2: {
        s.variant = variant == 1 ? "via-service" : "via-contract";
        Address hub = variant == 1 ? exchanges_[rng()() % exchanges_.size()]
                                   : pools_[rng()() % pools_.size()];
        Address a = b_.new_account();
        Address b = b_.new_account();
        acquire(nft, a, t, v);
        b_.sale(nft, a, hub, t.next(), v.exchange, eth(price()), gas());
        b_.sale(nft, hub, b, t.next(), v.exchange, eth(price()), gas());
        b_.sale(nft, b, a, t.next(), v.exchange, eth(price()), gas());
        break;
      }
      case 3: {
        s.variant = "independent";
        Address a = b_.new_account();
        Address b = b_.new_account();
        members = {a, b};
        acquire(nft, a, t, v);
        holder = a;
        fund(b_.new_account(), a, t);
        fund(b_.new_account(), b, t);
        asymmetric_round_trip(nft, a, b, t, v);
        fund(a, b_.new_account(), t);
        fund(b, b_.new_account(), t);
        break;
      }
      case 4: {
        s.variant = "exchange-funded";
        Address a = b_.new_account();
        Address b = b_.new_account();
        members = {a, b};
        acquire(nft, a, t, v);
        holder = a;
        Address exchange = exchanges_[rng()() % exchanges_.size()];
        fund(exchange, a, t);
        fund(exchange, b, t);
        asymmetric_round_trip(nft, a, b, t, v);
        break;
      }
      default: {
        // Would be a confirmed round trip, but the collection is not ERC-721.
        s.variant = "non-compliant";
        Address a = b_.new_account();
        Address b = b_.new_account();
        acquire(nft, a, t, v);
        Address funder = b_.new_account();
        fund(funder, a, t);
        fund(funder, b, t);
        asymmetric_round_trip(nft, a, b, t, v);
        break;
      }
    }
  }

  void add_prices() {
    // Daily random walks over 400 days, in cents (ETH) and 1/10000 USD (tokens).
    std::int64_t eth_cents = 370000;
    std::vector<std::int64_t> token_units(venues_.size(), 40000);
    for (int d = 0; d < 400; ++d) {
      UtcDate date = UtcDate::from_timestamp(b_.genesis() + d * kDay);
      eth_cents += static_cast<std::int64_t>(uniform(rng(), 0, 16000)) - 8000;
      eth_cents = std::max<std::int64_t>(eth_cents, 80000);
      data_.prices.add(Asset::native(), date, Decimal::from_units(BigInt(eth_cents), 2));
      for (std::size_t i = 0; i < venues_.size(); ++i) {
        if (!venues_[i].rewards) continue;
        token_units[i] += static_cast<std::int64_t>(uniform(rng(), 0, 4000)) - 2000;
        token_units[i] = std::max<std::int64_t>(token_units[i], 500);
        data_.prices.add(venues_[i].token, date, Decimal::from_units(BigInt(token_units[i]), 4));
      }
    }
  }

  HistoryBuilder b_;
  SynthDataset data_;
  std::vector<Venue> venues_;
  std::vector<Address> exchanges_;
  std::vector<Address> pools_;
  std::vector<Address> collections_;
  Address non_compliant_;
  std::map<Address, std::uint64_t> token_counter_;
};

}  // namespace

SynthDataset generate_dataset(const ScenarioMix& mix, std::uint64_t seed) {
  return Generator(seed).run(mix);
}

void write_dataset(const SynthDataset& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw InputError("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("transfers.jsonl");
    write_transfers(out, data.transfers);
  }
  {
    auto out = open("transactions.jsonl");
    write_transactions(out, data.transactions);
  }
  {
    auto out = open("labels.csv");
    out << "address,category,name\n";
    for (const auto& [a, name] : data.labels.service_accounts()) {
      if (!a.is_null()) out << a.hex() << ",service," << name << "\n";
    }
    for (const auto& [a, name] : data.labels.marketplaces()) out << a.hex() << ",marketplace," << name << "\n";
    for (const auto& [a, name] : data.labels.reward_distributors()) {
      out << a.hex() << ",reward_distributor," << name << "\n";
    }
    for (const auto& [a, name] : data.labels.treasuries()) out << a.hex() << ",treasury," << name << "\n";
  }
  {
    auto out = open("prices.csv");
    out << "asset,date,usd\n";
    for (const auto& [key, usd] : data.prices.entries()) {
      out << key.first.str() << "," << key.second.str() << "," << usd.str() << "\n";
    }
  }
  {
    auto out = open("contracts.txt");
    out << "address\n";
    for (const auto& a : data.contracts.contracts()) out << a.hex() << "\n";
  }
  {
    auto out = open("compliance.csv");
    out << "contract,supports_erc721\n";
    for (const auto& [a, ok] : data.compliance_rows) out << a.hex() << "," << (ok ? "true" : "false") << "\n";
  }
  {
    auto out = open("marketplace_totals.csv");
    out << "marketplace,total_usd_volume\n";
    for (const auto& [name, total] : data.marketplace_totals) out << name << "," << total.str() << "\n";
  }
  {
    nlohmann::ordered_json truth = nlohmann::ordered_json::array();
    for (const auto& s : data.truth) {
      nlohmann::ordered_json members = nlohmann::ordered_json::array();
      for (const auto& m : s.members) members.push_back(m.hex());
      truth.push_back({{"id", s.id},
                       {"kind", std::string(to_string(s.kind))},
                       {"variant", s.variant},
                       {"nft", s.nft.str()},
                       {"members", std::move(members)},
                       {"wash", s.wash()},
                       {"expected_evidence", s.expected_key()},
                       {"expected_pattern", s.expected_pattern}});
    }
    auto out = open("ground_truth.json");
    out << truth.dump(2) << "\n";
  }
}

RunConfig dataset_config(const std::filesystem::path& dir) {
  RunConfig c;
  c.transfers = dir / "transfers.jsonl";
  c.transactions = dir / "transactions.jsonl";
  c.labels = dir / "labels.csv";
  c.prices = dir / "prices.csv";
  c.contracts = dir / "contracts.txt";
  c.compliance = dir / "compliance.csv";
  c.marketplace_totals = dir / "marketplace_totals.csv";
  return c;
}

}  // namespace washtrace
