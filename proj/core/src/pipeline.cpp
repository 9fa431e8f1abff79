#include "washtrace/pipeline.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <fstream>
#include <set>
#include <thread>

#include "washtrace/analytics.hpp"
#include "washtrace/errors.hpp"
#include "washtrace/filter.hpp"
#include "washtrace/graph.hpp"
#include "washtrace/profit.hpp"

namespace washtrace {

using nlohmann::ordered_json;

void RunConfig::validate() const {
  if (transfers.empty()) throw InputError("no transfers file given");
  for (const auto* p : {&transfers, &transactions, &labels, &prices, &contracts, &compliance,
                        &marketplace_totals}) {
    if (!p->empty() && !std::filesystem::exists(*p)) {
      throw InputError("input file does not exist: " + p->string());
    }
  }
  if (epsilon_abs && epsilon_abs->sign() < 0) throw InputError("--epsilon-abs must be >= 0");
  if (epsilon_rel && epsilon_rel->sign() < 0) throw InputError("--epsilon-rel must be >= 0");
  if (require_compliance && compliance.empty()) {
    throw ClientUnavailable("--require-compliance needs a --compliance fixture");
  }
}

PipelineInputs load_inputs(const RunConfig& config, LoadDiagnostics* diagnostics) {
  config.validate();
  PipelineInputs in;
  in.transfers = load_transfers(config.transfers, diagnostics);
  if (!config.transactions.empty()) {
    in.txs = TransactionIndex(load_transactions(config.transactions, diagnostics));
  }
  if (!config.labels.empty()) in.labels = load_labels(config.labels);
  if (!config.prices.empty()) in.prices = load_prices(config.prices);
  if (!config.contracts.empty()) in.contracts = load_contracts(config.contracts);
  if (!config.compliance.empty()) in.compliance = load_compliance_fixture(config.compliance);
  if (!config.marketplace_totals.empty()) {
    in.marketplace_totals = load_marketplace_totals(config.marketplace_totals);
  }
  return in;
}

PipelineOptions options_from(const RunConfig& config) {
  PipelineOptions o;
  o.require_compliance = config.require_compliance;
  if (config.epsilon_abs) o.tolerance.absolute = *config.epsilon_abs;
  if (config.epsilon_rel) o.tolerance.relative = *config.epsilon_rel;
  o.jobs = std::max(1u, config.jobs);
  return o;
}

namespace {

constexpr std::array<const char*, 4> kStepNames = {"scc", "service_accounts", "contract_accounts",
                                                   "zero_volume"};

struct NftGroup {
  NftId nft;
  std::vector<TransferEvent> transfers;
};

struct NftOutcome {
  std::array<std::size_t, 4> components{};
  std::array<std::vector<Address>, 4> accounts;
  std::vector<CandidateVerdict> verdicts;
};

void collect_accounts(const std::vector<SccCandidate>& cs, std::vector<Address>& out) {
  for (const auto& c : cs) out.insert(out.end(), c.members.begin(), c.members.end());
}

NftOutcome process_nft(const NftGroup& group, const PipelineInputs& in, const DetectionContext& ctx) {
  NftOutcome out;
  TransactionGraph g0 = build_graph(group.nft, group.transfers);
  auto s0 = find_sccs(g0);
  out.components[0] = s0.size();
  collect_accounts(s0, out.accounts[0]);
  if (s0.empty()) return out;

  TransactionGraph g1 = remove_service_accounts(g0, in.labels);
  auto s1 = find_sccs(g1);
  out.components[1] = s1.size();
  collect_accounts(s1, out.accounts[1]);

  TransactionGraph g2 = remove_contract_accounts(g1, in.contracts);
  auto s2 = find_sccs(g2);
  out.components[2] = s2.size();
  collect_accounts(s2, out.accounts[2]);

  auto s3 = drop_zero_volume_candidates(std::move(s2));
  out.components[3] = s3.size();
  collect_accounts(s3, out.accounts[3]);

  for (const auto& c : s3) out.verdicts.push_back(evaluate_candidate(c, ctx));
  return out;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  const unsigned n = std::min<std::size_t>(jobs, count);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  pool.clear();
  // Report the error of the lowest-indexed item so failures do not depend on scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string ratio_text(const Rational& r, unsigned digits = 6) { return to_fixed_string(r, digits); }

std::string mean_text(const Decimal& sum, std::size_t count, unsigned digits = 6) {
  if (count == 0) return "0";
  return ratio_text(sum.to_rational() / Rational(count), digits);
}

ordered_json cdf_json(const std::vector<CdfPoint>& points) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : points) arr.push_back(ordered_json::array({p.value, p.fraction}));
  return arr;
}

ordered_json evidence_json(const Evidence& e) {
  ordered_json o;
  o["kind"] = std::string(to_string(e.kind));
  o["witness"] = e.witness ? ordered_json(e.witness->hex()) : ordered_json(nullptr);
  ordered_json txs = ordered_json::array();
  for (const auto& h : e.supporting_txs) txs.push_back(to_hex(h));
  o["supporting_txs"] = std::move(txs);
  return o;
}

ordered_json members_json(const std::vector<Address>& members) {
  ordered_json arr = ordered_json::array();
  for (const auto& m : members) arr.push_back(m.hex());
  return arr;
}

struct VerdictStats {
  std::size_t count = 0;
  std::optional<Decimal> min_volume;
  std::optional<Decimal> max_volume;
  Decimal volume_sum;
  std::optional<Decimal> extreme_balance;  // max gain for successes, max loss for failures
  Decimal balance_sum;

  void add(const Decimal& volume_eth, const Decimal& balance, bool success) {
    ++count;
    if (!min_volume || volume_eth < *min_volume) min_volume = volume_eth;
    if (!max_volume || volume_eth > *max_volume) max_volume = volume_eth;
    volume_sum += volume_eth;
    if (!extreme_balance || (success ? balance > *extreme_balance : balance < *extreme_balance)) {
      extreme_balance = balance;
    }
    balance_sum += balance;
  }

  ordered_json json(bool with_balances) const {
    ordered_json o;
    o["events"] = count;
    o["min_volume_eth"] = min_volume ? min_volume->str() : "0";
    o["max_volume_eth"] = max_volume ? max_volume->str() : "0";
    o["mean_volume_eth"] = mean_text(volume_sum, count);
    if (with_balances) {
      o["extreme_balance_usd"] = extreme_balance ? extreme_balance->fixed(2) : "0.00";
      o["mean_balance_usd"] = mean_text(balance_sum, count, 2);
      o["total_balance_usd"] = balance_sum.fixed(2);
    }
    return o;
  }
};

struct OutcomeStats {
  std::size_t profit = 0;
  std::size_t loss = 0;
  Decimal gain_sum;
  Decimal loss_sum;
  std::optional<Decimal> max_gain;
  std::optional<Decimal> max_loss;

  void add(const Decimal& balance) {
    if (balance.sign() > 0) {
      ++profit;
      gain_sum += balance;
      if (!max_gain || balance > *max_gain) max_gain = balance;
    } else {
      ++loss;
      loss_sum += balance;
      if (!max_loss || balance < *max_loss) max_loss = balance;
    }
  }

  ordered_json json(unsigned digits) const {
    ordered_json o;
    o["profit"] = profit;
    o["loss"] = loss;
    o["mean_gain"] = mean_text(gain_sum, profit, digits);
    o["mean_loss"] = mean_text(loss_sum, loss, digits);
    o["max_gain"] = max_gain ? ordered_json(max_gain->fixed(digits)) : ordered_json(nullptr);
    o["max_loss"] = max_loss ? ordered_json(max_loss->fixed(digits)) : ordered_json(nullptr);
    return o;
  }
};

Decimal native_volume(const WashTradeEvent& e) {
  auto it = e.volume.find(Asset::native());
  return it == e.volume.end() ? Decimal() : it->second;
}

}  // namespace

PipelineResult run_pipeline(const PipelineInputs& in, const PipelineOptions& options) {
  PipelineResult result;
  ordered_json report;
  report["schema"] = "washtrace.report/1";

  // --- ERC-721 compliance -----------------------------------------------------
  std::set<Address> contracts;
  for (const auto& t : in.transfers) contracts.insert(t.nft.contract);
  std::set<Address> rejected;
  std::size_t compliant = 0;
  std::size_t unverified = 0;
  const InterfaceQueryClient* client = in.compliance ? &*in.compliance : nullptr;
  if (options.require_compliance && client == nullptr) {
    throw ClientUnavailable("compliance is required but no interface query client is configured");
  }
  for (const auto& c : contracts) {
    if (client == nullptr) {
      ++unverified;
      continue;
    }
    try {
      if (check_erc721_compliance(c, client)) {
        ++compliant;
      } else {
        rejected.insert(c);
      }
    } catch (const ClientUnavailable&) {
      ++unverified;
      if (options.require_compliance) rejected.insert(c);
    }
  }

  // --- group by NFT -----------------------------------------------------------
  std::map<NftId, std::vector<TransferEvent>> by_nft;
  std::size_t dropped_transfers = 0;
  for (const auto& t : in.transfers) {
    if (rejected.count(t.nft.contract)) {
      ++dropped_transfers;
      continue;
    }
    by_nft[t.nft].push_back(t);
  }
  std::vector<NftGroup> groups;
  groups.reserve(by_nft.size());
  for (auto& [nft, transfers] : by_nft) groups.push_back(NftGroup{nft, std::move(transfers)});
  by_nft.clear();

  report["inputs"] = {
      {"transfers", in.transfers.size()},
      {"transactions", in.txs.records().size()},
      {"nfts", groups.size()},
      {"contracts",
       {{"total", contracts.size()},
        {"compliant", compliant},
        {"non_compliant", rejected.size() - (options.require_compliance ? unverified : 0)},
        {"unverified", unverified},
        {"dropped_transfers", dropped_transfers}}},
  };

  // --- per-NFT graph, cleaning, SCC, direct detection -----------------------------
  DetectionContext ctx{in.txs, in.labels, in.contracts, options.tolerance};
  std::vector<NftOutcome> outcomes(groups.size());
  parallel_for(groups.size(), options.jobs,
               [&](std::size_t i) { outcomes[i] = process_nft(groups[i], in, ctx); });

  std::array<std::set<Address>, 4> step_accounts;
  result.cleaning.resize(4);
  std::vector<CandidateVerdict> verdicts;
  for (auto& o : outcomes) {
    for (std::size_t s = 0; s < 4; ++s) {
      if (o.components[s] > 0) ++result.cleaning[s].nfts;
      result.cleaning[s].components += o.components[s];
      step_accounts[s].insert(o.accounts[s].begin(), o.accounts[s].end());
    }
    for (auto& v : o.verdicts) verdicts.push_back(std::move(v));
  }
  outcomes.clear();
  ordered_json cleaning = ordered_json::array();
  for (std::size_t s = 0; s < 4; ++s) {
    result.cleaning[s].name = kStepNames[s];
    result.cleaning[s].accounts = step_accounts[s].size();
    cleaning.push_back({{"step", s},
                        {"name", result.cleaning[s].name},
                        {"nfts", result.cleaning[s].nfts},
                        {"components", result.cleaning[s].components},
                        {"accounts", result.cleaning[s].accounts}});
  }
  report["cleaning"] = std::move(cleaning);

  // --- confirmation ----------------------------------------------------------
  result.confirmation = finalize_verdicts(std::move(verdicts));
  const auto& events = result.confirmation.events;
  const auto& summary = result.confirmation.summary;
  report["detection"] = {
      {"candidates", summary.candidates},
      {"confirmed", summary.confirmed},
      {"exchange_funded_unconfirmed", summary.exchange_funded_unconfirmed},
      {"per_kind", summary.per_kind},
      {"overlap_kinds", summary.by_kind_set},
      {"overlap_approaches", summary.by_approach_set},
  };

  auto history_of = [&](const NftId& nft) -> std::span<const TransferEvent> {
    auto it = std::lower_bound(groups.begin(), groups.end(), nft,
                               [](const NftGroup& g, const NftId& id) { return g.nft < id; });
    if (it == groups.end() || !(it->nft == nft)) return {};
    return it->transfers;
  };

  // --- analytics ---------------------------------------------------------------
  std::vector<ActivityReport> activities;
  activities.reserve(events.size());
  for (const auto& e : events) {
    activities.push_back(describe_activity(e, history_of(e.candidate.nft), in.labels, in.prices));
  }

  Decimal total_usd;
  std::map<Asset, Decimal> per_asset;
  for (const auto& a : activities) total_usd += a.usd_volume;
  for (const auto& e : events) {
    for (const auto& [asset, amount] : e.volume) per_asset[asset] += amount;
  }
  ordered_json per_asset_json = ordered_json::object();
  for (const auto& [asset, amount] : per_asset) per_asset_json[asset.str()] = amount.str();
  report["volume"] = {{"total_usd", total_usd.fixed(2)}, {"per_asset", per_asset_json}};

  ordered_json markets = ordered_json::array();
  for (const auto& row :
       marketplace_breakdown(events, in.labels, in.prices, in.marketplace_totals)) {
    markets.push_back({{"name", row.name},
                       {"events", row.events},
                       {"nfts", row.nfts},
                       {"usd_volume", row.usd_volume.fixed(2)},
                       {"share_of_total_pct",
                        row.share ? ordered_json(ratio_text(*row.share * 100, 4))
                                  : ordered_json(nullptr)}});
  }
  report["marketplaces"] = std::move(markets);

  std::map<Address, std::pair<std::size_t, Decimal>> collections;
  for (const auto& a : activities) {
    auto& slot = collections[a.collection];
    ++slot.first;
    slot.second += a.usd_volume;
  }
  ordered_json collections_json = ordered_json::array();
  for (const auto& [contract, v] : collections) {
    collections_json.push_back(
        {{"contract", contract.hex()}, {"events", v.first}, {"usd_volume", v.second.fixed(2)}});
  }
  report["collections"] = std::move(collections_json);

  constexpr std::int64_t kDay = 86400;
  std::vector<std::int64_t> lifetimes;
  std::vector<std::int64_t> latencies;
  std::size_t lt_1d = 0, lt_10d = 0, lat_same_day = 0, lat_14d = 0;
  for (const auto& a : activities) {
    lifetimes.push_back(a.lifetime_seconds);
    if (a.lifetime_seconds <= kDay) ++lt_1d;
    if (a.lifetime_seconds <= 10 * kDay) ++lt_10d;
    if (a.acquisition_latency_seconds) {
      auto v = *a.acquisition_latency_seconds;
      latencies.push_back(v);
      if (v <= kDay) ++lat_same_day;
      if (v <= 14 * kDay) ++lat_14d;
    }
  }
  report["lifetime"] = {{"events", lifetimes.size()},
                        {"le_1_day", lt_1d},
                        {"le_10_days", lt_10d},
                        {"cdf", cdf_json(empirical_cdf(lifetimes))}};
  report["acquisition_latency"] = {{"events", latencies.size()},
                                   {"le_1_day", lat_same_day},
                                   {"le_14_days", lat_14d},
                                   {"cdf", cdf_json(empirical_cdf(latencies))}};

  ordered_json patterns = ordered_json::object();
  for (int p = 0; p <= static_cast<int>(Pattern::Other); ++p) {
    patterns[PatternId{static_cast<Pattern>(p), 0}.name()] = 0;
  }
  std::map<std::size_t, std::size_t> sizes;
  for (const auto& a : activities) {
    patterns[a.pattern.name()] = patterns[a.pattern.name()].get<std::size_t>() + 1;
    ++sizes[a.pattern.node_count];
  }
  report["patterns"] = std::move(patterns);
  ordered_json sizes_json = ordered_json::object();
  for (const auto& [n, count] : sizes) sizes_json[std::to_string(n)] = count;
  report["accounts_per_event"] = std::move(sizes_json);

  SerialReport serial = serial_stats(events);
  report["serial"] = {{"accounts", serial.activity_counts.size()},
                      {"serial", serial.serial.size()},
                      {"events_with_serials", serial.events_with_serials},
                      {"only_with_serials", serial.only_with_serials.size()},
                      {"events_by_serials_only", serial.events_by_serials_only},
                      {"repeat_collection", serial.repeat_collection.size()},
                      {"max_activity", serial.max_activity}};

  // --- profit ------------------------------------------------------------------
  const auto reward_markets = in.labels.reward_marketplaces();
  std::map<std::string, std::array<VerdictStats, 3>> reward_tables;
  for (const auto& m : reward_markets) reward_tables[m];
  std::size_t reward_events = 0;
  std::size_t resale_candidates = 0;
  std::size_t not_resold = 0;
  OutcomeStats gross_native, net_native, net_usd;
  std::size_t sold_same_day = 0, sold_within_30d = 0;

  ordered_json event_rows = ordered_json::array();
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    const auto& a = activities[i];
    const auto& c = e.candidate;
    auto history = history_of(c.nft);
    std::string primary = primary_marketplace(c, in.labels);

    ordered_json profit = nullptr;
    if (reward_markets.count(primary)) {
      ++reward_events;
      auto claims = extract_claims(c, in.txs, in.labels);
      ProfitLedger ledger = reward_balance(e, claims, in.txs, in.labels, in.prices);
      reward_tables[primary][static_cast<std::size_t>(ledger.verdict)].add(
          native_volume(e), ledger.balance_usd, ledger.verdict == Verdict::Successful);
      ordered_json claims_json = ordered_json::array();
      for (const auto& cl : claims) {
        claims_json.push_back({{"account", cl.account.hex()},
                               {"token", cl.token.str()},
                               {"tokens", cl.tokens.str()}});
      }
      profit = {{"model", "reward"},
                {"marketplace", primary},
                {"claims", std::move(claims_json)},
                {"rewards_usd", ledger.rewards_usd.fixed(2)},
                {"nftm_fees_usd", ledger.nftm_fees_usd.fixed(2)},
                {"transaction_fees_usd", ledger.transaction_fees_usd.fixed(2)},
                {"balance_usd", ledger.balance_usd.fixed(2)},
                {"verdict", std::string(to_string(ledger.verdict))}};
    } else {
      ++resale_candidates;
      auto resale = resale_balance(e, history, in.txs, in.labels, &in.prices);
      if (!resale) {
        ++not_resold;
        profit = {{"model", "resale"}, {"resold", false}};
      } else {
        gross_native.add(resale->gross());
        net_native.add(resale->balance);
        net_usd.add(resale->usd->balance);
        Timestamp end_ts = c.internal_edges.back().timestamp;
        for (const auto& edge : c.internal_edges) end_ts = std::max(end_ts, edge.timestamp);
        if (UtcDate::from_timestamp(resale->resale.timestamp) == UtcDate::from_timestamp(end_ts)) {
          ++sold_same_day;
        }
        if (resale->resale.timestamp - end_ts <= 30 * kDay) ++sold_within_30d;
        profit = {{"model", "resale"},
                  {"resold", true},
                  {"buy_price", resale->buy_price.str()},
                  {"resell_price", resale->resell_price.str()},
                  {"fees", resale->fees().str()},
                  {"balance", resale->balance.str()},
                  {"balance_usd", resale->usd->balance.fixed(2)}};
      }
    }

    ordered_json volume = ordered_json::object();
    for (const auto& [asset, amount] : e.volume) volume[asset.str()] = amount.str();
    ordered_json evidence = ordered_json::array();
    for (const auto& ev : e.evidence) evidence.push_back(evidence_json(ev));
    ordered_json market_usd = ordered_json::object();
    for (const auto& [name, usd] : a.marketplaces) market_usd[name] = usd.fixed(2);
    event_rows.push_back(
        {{"nft", c.nft.str()},
         {"collection", c.nft.contract.hex()},
         {"token_id", c.nft.token_id.str()},
         {"members", members_json(c.members)},
         {"first_move", to_string(c.first_move)},
         {"last_move", to_string(c.last_move)},
         {"internal_transfers", c.internal_edges.size()},
         {"evidence_kinds", e.kind_key()},
         {"evidence", std::move(evidence)},
         {"pattern", a.pattern.name()},
         {"volume", std::move(volume)},
         {"usd_volume", a.usd_volume.fixed(2)},
         {"marketplaces", std::move(market_usd)},
         {"primary_marketplace", primary},
         {"lifetime_seconds", a.lifetime_seconds},
         {"acquisition_latency_seconds", a.acquisition_latency_seconds
                                             ? ordered_json(*a.acquisition_latency_seconds)
                                             : ordered_json(nullptr)},
         {"profit", std::move(profit)}});
  }

  ordered_json reward_json = ordered_json::object();
  for (const auto& [market, stats] : reward_tables) {
    reward_json[market] = {
        {"successful", stats[static_cast<std::size_t>(Verdict::Successful)].json(true)},
        {"failed", stats[static_cast<std::size_t>(Verdict::Failed)].json(true)},
        {"no_claim", stats[static_cast<std::size_t>(Verdict::NoClaim)].json(false)}};
  }
  report["profit"] = {
      {"reward_events", reward_events},
      {"reward", std::move(reward_json)},
      {"resale",
       {{"events", resale_candidates},
        {"not_resold", not_resold},
        {"resold", resale_candidates - not_resold},
        {"sold_same_day", sold_same_day},
        {"sold_within_30_days", sold_within_30d},
        {"gross_eth", gross_native.json(6)},
        {"net_eth", net_native.json(6)},
        {"net_usd", net_usd.json(2)}}},
  };
  report["events"] = std::move(event_rows);

  check_report_consistency(report);
  result.report = std::move(report);
  return result;
}

PipelineResult run_pipeline(const RunConfig& config, LoadDiagnostics* diagnostics) {
  PipelineInputs inputs = load_inputs(config, diagnostics);
  PipelineResult result = run_pipeline(inputs, options_from(config));
  if (!config.out.empty()) {
    std::ofstream out(config.out, std::ios::binary);
    if (!out) throw InputError("cannot write report to " + config.out.string());
    out << dump_report(result.report);
  }
  return result;
}

std::string dump_report(const ordered_json& report) { return report.dump(2) + "\n"; }

}  // namespace washtrace
