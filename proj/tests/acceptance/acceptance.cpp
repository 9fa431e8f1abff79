// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/pattern_oracle.hpp"
#include "oracles/scc_oracle.hpp"
#include "washtrace/analytics.hpp"
#include "washtrace/filter.hpp"
#include "washtrace/pipeline.hpp"
#include "washtrace/profit.hpp"
#include "washtrace/synth.hpp"

using namespace washtrace;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Decimal dec(const char* s) { return Decimal::parse(s); }
Payment eth(const Decimal& d) { return Payment{Asset::native(), d}; }

// --- 1 -------------------------------------------------------------------------------

Outcome scc_oracle_equivalence() {
  std::mt19937_64 rng(20220101);
  auto start = Clock::now();
  std::size_t mismatches = 0;
  for (int round = 0; round < 1000; ++round) {
    std::size_t n = 1 + rng() % 10;
    std::size_t m = rng() % 31;
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    for (std::size_t i = 0; i < m; ++i) arcs.emplace_back(rng() % n, rng() % n);

    bool ok = oracle::normalize(strongly_connected_components(n, arcs)) ==
              oracle::mutual_reachability(n, arcs);

    // Same graph through the address-level candidate extraction.
    TransactionGraph g;
    g.nft = NftId{Address::null(), TokenId(round)};
    std::vector<Address> names;
    for (std::size_t v = 0; v < n; ++v) {
      Word32 w{};
      w[31] = static_cast<std::uint8_t>(v + 1);
      names.push_back(Address::from_word(w));
    }
    std::vector<TransferEvent> events;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      TransferEvent e;
      e.nft = g.nft;
      e.from = names[arcs[i].first];
      e.to = names[arcs[i].second];
      e.block_number = i + 1;
      events.push_back(e);
    }
    g = build_graph(g.nft, events);
    oracle::Partition got;
    for (const auto& c : find_sccs(g)) {
      std::vector<std::size_t> ids;
      for (const auto& a : c.members) ids.push_back(static_cast<std::size_t>(a.to_word()[31] - 1));
      got.insert(ids);
    }
    ok = ok && got == oracle::candidate_components(n, arcs);
    if (!ok) ++mismatches;
  }
  double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "1000 graphs, " << mismatches << " mismatches, " << elapsed << " s";
  return {mismatches == 0 && elapsed < 5.0, os.str()};
}

// --- 2 -------------------------------------------------------------------------------

Outcome reward_case_study() {
  HistoryBuilder b(42);
  LabelRegistry labels;
  const Address exchange = b.new_account(), distributor = b.new_account(),
                treasury = b.new_account(), token = b.new_account();
  labels.add_marketplace(exchange, "LooksRare");
  labels.add_reward_distributor(distributor, "LooksRare");
  labels.add_treasury(treasury, "LooksRare");
  const Asset looks = Asset::token(token);
  const NftId id{b.new_account(), TokenId(1)};
  const Address creator = b.new_account(), a = b.new_account(), c = b.new_account(),
                funder = b.new_account();

  Timestamp t = b.genesis() + 100 * 86400;
  b.mint(id, creator, t);
  b.sale(id, creator, a, t += 600, exchange, eth(dec("10")), dec("0"));
  b.value_transfer(funder, a, t += 600, eth(dec("300")), dec("0"));
  b.value_transfer(funder, c, t += 600, eth(dec("300")), dec("0"));
  // Eight sales at 0.038 ETH gas, treasury fees 7 x 14.33 + 14.34 = 114.65 ETH.
  for (int i = 0; i < 8; ++i) {
    Address seller = i % 2 == 0 ? a : c;
    Address buyer = i % 2 == 0 ? c : a;
    TxHash tx = b.sale(id, seller, buyer, t += 600, exchange, eth(dec("700")), dec("0.038"));
    b.add_record(tx, seller, treasury, eth(dec(i == 7 ? "14.34" : "14.33")), TxKind::ValueTransfer);
  }
  // Two claims totalling 388,641.28 LOOKS at 0.026 ETH gas each.
  b.contract_call(a, distributor, t += 600, Payment{looks, dec("200000")}, dec("0.026"));
  b.contract_call(c, distributor, t += 600, Payment{looks, dec("188641.28")}, dec("0.026"));
  auto h = b.build();

  PriceTable prices;
  const Rational looks_usd = dec("1492640.94").to_rational() / dec("388641.28").to_rational();
  for (int d = 0; d < 400; ++d) {
    UtcDate day = UtcDate::from_timestamp(b.genesis() + d * 86400);
    prices.add(Asset::native(), day, dec("3373"));
    prices.add(looks, day, Decimal::from_rational(looks_usd, 18));
  }

  PipelineInputs in;
  in.transfers = h.transfers;
  in.txs = TransactionIndex(h.transactions);
  in.labels = labels;
  in.prices = prices;
  in.contracts.add(exchange);
  in.contracts.add(distributor);
  auto result = run_pipeline(in, {});
  if (result.confirmation.events.size() != 1) return {false, "expected one confirmed event"};
  const auto& ev = result.confirmation.events[0];
  auto claims = extract_claims(ev.candidate, in.txs, labels);
  auto ledger = reward_balance(ev, claims, in.txs, labels, prices);

  // Independent arithmetic on rationals.
  Rational rewards = dec("1492640.94").to_rational();
  Rational costs = (dec("114.65") + dec("0.356")).to_rational() * 3373;
  Rational expected = rewards - costs;
  Rational target = 1104722;
  Rational deviation = ledger.balance_usd.to_rational() - target;
  if (deviation < 0) deviation = -deviation;
  bool rewards_ok = ledger.rewards_usd.rounded(2) == dec("1492640.94");
  bool fees_ok = ledger.nftm_fees_usd == dec("114.65") * dec("3373") &&
                 ledger.transaction_fees_usd == dec("0.356") * dec("3373");
  Rational diff = ledger.balance_usd.to_rational() - expected;
  if (diff < 0) diff = -diff;
  bool report_ok = result.report["events"][0]["profit"]["balance_usd"] == ledger.balance_usd.fixed(2) &&
                   result.report["events"][0]["profit"]["verdict"] == "successful";
  bool ok = rewards_ok && fees_ok && report_ok && diff < Rational(1, 1000) &&
            deviation <= target / 1000 && ledger.verdict == Verdict::Successful;
  std::ostringstream os;
  os << "rewards $" << ledger.rewards_usd.fixed(2) << ", NFTM fees $" << ledger.nftm_fees_usd.fixed(2)
     << ", tx fees $" << ledger.transaction_fees_usd.fixed(2) << ", balance $"
     << ledger.balance_usd.fixed(2) << " (target 1104722 +/- 0.1%)";
  return {ok, os.str()};
}

// --- 3 -------------------------------------------------------------------------------

Outcome resale_case_study() {
  HistoryBuilder b(43);
  LabelRegistry labels;
  const Address opensea = b.new_account();
  labels.add_marketplace(opensea, "OpenSea");
  const NftId id{b.new_account(), TokenId(7)};
  const Address seller = b.new_account(), funder = b.new_account(), outside = b.new_account();
  std::vector<Address> m = {b.new_account(), b.new_account(), b.new_account()};

  Timestamp t = b.genesis() + 50 * 86400;
  b.mint(id, seller, t);
  b.sale(id, seller, m[0], t += 3600, opensea, eth(dec("0.99")), dec("0"));
  for (const auto& member : m) b.value_transfer(funder, member, t += 600, eth(dec("5")), dec("0"));
  b.sale(id, m[0], m[1], t += 3600, opensea, eth(dec("0.66")), dec("0.25"));
  b.sale(id, m[1], m[2], t += 3600, opensea, eth(dec("6.64")), dec("0.25"));
  b.sale(id, m[2], m[0], t += 3600, opensea, eth(dec("12.5")), dec("0.25"));
  b.sale(id, m[0], outside, t += 86400, opensea, eth(dec("14.85")), dec("0.2532"));
  auto h = b.build();

  PriceTable prices;
  for (int d = 0; d < 120; ++d) {
    prices.add(Asset::native(), UtcDate::from_timestamp(b.genesis() + d * 86400), dec("3446.03"));
  }
  PipelineInputs in;
  in.transfers = h.transfers;
  in.txs = TransactionIndex(h.transactions);
  in.labels = labels;
  in.prices = prices;
  in.contracts.add(opensea);
  auto result = run_pipeline(in, {});
  if (result.confirmation.events.size() != 1) return {false, "expected one confirmed event"};
  const auto& ev = result.confirmation.events[0];
  auto ledger = resale_balance(ev, in.transfers, in.txs, labels, &prices);
  if (!ledger || !ledger->usd) return {false, "no resale found"};

  bool gross_ok = ledger->gross() == dec("13.86");
  Decimal fees_usd = ledger->usd->fees;
  Rational fees_diff = fees_usd.to_rational() - 3457;
  if (fees_diff < 0) fees_diff = -fees_diff;
  bool fees_ok = fees_diff < 5;  // "about $3,457"
  bool profit_ok = ledger->usd->balance > Decimal(44000);
  bool report_ok = result.report["profit"]["resale"]["net_usd"]["profit"] == 1;
  std::ostringstream os;
  os << "gross " << ledger->gross().str() << " ETH, fees $" << fees_usd.fixed(2) << ", profit $"
     << ledger->usd->balance.fixed(2);
  return {gross_ok && fees_ok && profit_ok && report_ok, os.str()};
}

// --- 4 -------------------------------------------------------------------------------

Outcome reward_conservation() {
  std::mt19937_64 rng(4);
  std::size_t exact = 0;
  for (int round = 0; round < 100; ++round) {
    std::vector<Decimal> volumes;
    Decimal market;
    std::size_t users = 1 + rng() % 50;
    for (std::size_t i = 0; i < users; ++i) {
      volumes.push_back(Decimal::from_units(BigInt(1 + rng() % 100000000000ULL), rng() % 19));
      market += volumes.back();
    }
    Decimal emission = Decimal::from_units(BigInt(rng() % 1000000000000ULL), rng() % 19);
    Rational sum = 0;
    for (const auto& v : volumes) sum += reward_share({v, market, emission});
    if (sum == emission.to_rational()) ++exact;
  }
  return {exact == 100, std::to_string(exact) + "/100 vectors sum exactly to c"};
}

// --- 5 -------------------------------------------------------------------------------

Outcome synth_recall_precision() {
  ScenarioMix mix = minimum_mix(6, 60, 24);
  mix[ScenarioKind::Cycle] = 9;  // three each of 3-, 4- and 5-cycles
  SynthDataset data = generate_dataset(mix, 2024);
  auto result = run_pipeline(data.to_inputs(), {});
  const auto& events = result.confirmation.events;

  std::map<std::pair<NftId, std::vector<Address>>, const WashTradeEvent*> found;
  for (const auto& e : events) found[{e.candidate.nft, e.candidate.members}] = &e;

  std::size_t planted = 0, recalled = 0, kinds_match = 0, patterns_match = 0, zero_volume = 0;
  std::set<std::pair<NftId, std::vector<Address>>> expected;
  std::map<std::string, std::size_t> expected_approaches;
  for (const auto& s : data.truth) {
    if (s.kind == ScenarioKind::NoiseZeroVolume) ++zero_volume;
    if (!s.wash()) continue;
    ++planted;
    expected.insert({s.nft, s.members});
    std::vector<std::string_view> approaches;  // evidence order, adjacent duplicates merged
    for (auto k : s.expected_evidence) {
      if (approaches.empty() || approaches.back() != approach_of(k)) approaches.push_back(approach_of(k));
    }
    std::string key;
    for (auto a : approaches) key += (key.empty() ? "" : "+") + std::string(a);
    ++expected_approaches[key];
    auto it = found.find({s.nft, s.members});
    if (it == found.end()) continue;
    ++recalled;
    if (it->second->kind_key() == s.expected_key()) ++kinds_match;
    if (classify_pattern(*it->second).name() == s.expected_pattern) ++patterns_match;
  }
  std::size_t true_positives = 0;
  for (const auto& e : events) true_positives += expected.count({e.candidate.nft, e.candidate.members});

  std::map<std::size_t, std::size_t> per_kind;
  for (const auto& s : data.truth) ++per_kind[static_cast<std::size_t>(s.kind)];
  bool mix_ok = per_kind[static_cast<std::size_t>(ScenarioKind::NoiseLegit)] >= 50 && zero_volume >= 20;
  for (std::size_t k = 0; k < 8; ++k) mix_ok = mix_ok && per_kind[k] >= 5;

  bool overlap_ok = result.confirmation.summary.by_kind_set == data.expected_overlap() &&
                    result.confirmation.summary.by_approach_set == expected_approaches;

  std::ostringstream os;
  os << "planted " << planted << ", recall " << recalled << "/" << planted << ", precision "
     << true_positives << "/" << events.size() << ", evidence sets " << kinds_match
     << ", patterns " << patterns_match << ", overlap " << (overlap_ok ? "match" : "MISMATCH");
  bool ok = mix_ok && recalled == planted && true_positives == events.size() &&
            kinds_match == planted && patterns_match == planted && overlap_ok;
  return {ok, os.str()};
}

// --- 6 -------------------------------------------------------------------------------

SccCandidate relabeled(std::size_t n, const oracle::ArcSet& arcs, std::mt19937_64& rng) {
  std::vector<Address> names;
  std::set<Address> used;
  while (names.size() < n) {
    Word32 w{};
    for (std::size_t i = 12; i < 32; ++i) w[i] = static_cast<std::uint8_t>(rng());
    Address a = Address::from_word(w);
    if (used.insert(a).second) names.push_back(a);
  }
  std::vector<std::pair<std::size_t, std::size_t>> order(arcs.begin(), arcs.end());
  // Repeat some arcs: parallel transfers do not change the shape.
  for (std::size_t i = 0, extra = rng() % 3; i < extra; ++i) order.push_back(order[rng() % order.size()]);
  std::shuffle(order.begin(), order.end(), rng);
  SccCandidate c;
  c.nft = NftId{names[0], TokenId(1)};
  std::uint64_t block = 1;
  for (auto [u, v] : order) {
    TransferEdge e;
    e.from = names[u];
    e.to = names[v];
    e.block_number = block++;
    c.internal_edges.push_back(e);
  }
  c.members = names;
  std::sort(c.members.begin(), c.members.end());
  return c;
}

Outcome pattern_relabeling() {
  std::mt19937_64 rng(6);
  auto reference = oracle::reference_patterns();
  std::size_t stable = 0;
  for (std::size_t p = 0; p < reference.size(); ++p) {
    std::set<std::string> names;
    for (int i = 0; i < 50; ++i) {
      names.insert(classify_pattern(relabeled(reference[p].first, reference[p].second, rng)).name());
    }
    if (names.size() == 1 && *names.begin() == "P" + std::to_string(p + 1)) ++stable;
  }
  // 100 events, 60 of them round trips; the rest drawn from P2..P10.
  std::size_t p1 = 0;
  for (int i = 0; i < 100; ++i) {
    std::size_t p = i < 60 ? 0 : 1 + rng() % 9;
    if (classify_pattern(relabeled(reference[p].first, reference[p].second, rng)).id == Pattern::P1) ++p1;
  }
  std::ostringstream os;
  os << stable << "/10 patterns stable under 50 relabelings, cohort P1 = " << p1 << "/100";
  return {stable == 10 && p1 == 60, os.str()};
}

// --- 7 -------------------------------------------------------------------------------

bool same_graph(const TransactionGraph& a, const TransactionGraph& b) {
  return a.nft == b.nft && a.nodes == b.nodes && a.edges == b.edges;
}

Outcome filter_algebra() {
  std::mt19937_64 rng(7);
  std::size_t ok_graphs = 0;
  for (int round = 0; round < 200; ++round) {
    HistoryBuilder b(rng());
    std::size_t n = 2 + rng() % 12;
    std::vector<Address> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back(b.new_account());
    LabelRegistry labels;
    KnownContracts code;
    for (const auto& a : nodes) {
      auto r = rng() % 6;
      if (r == 0) labels.add_service(a, "svc");
      if (r == 1) code.add(a);
      if (r == 2) {  // both labels
        labels.add_service(a, "svc");
        code.add(a);
      }
    }
    NftId id{b.new_account(), TokenId(round)};
    std::vector<TransferEvent> events;
    std::size_t m = rng() % 40;
    for (std::size_t i = 0; i < m; ++i) {
      TransferEvent e;
      e.nft = id;
      e.from = rng() % 10 == 0 ? Address::null() : nodes[rng() % n];
      e.to = nodes[rng() % n];
      e.block_number = i + 1;
      e.payment = eth(Decimal::from_units(BigInt(rng() % 3), 0));
      events.push_back(e);
    }
    auto g = build_graph(id, events);
    auto fs = [&](const TransactionGraph& x) { return remove_service_accounts(x, labels); };
    auto fc = [&](const TransactionGraph& x) { return remove_contract_accounts(x, code); };
    bool ok = same_graph(fs(fs(g)), fs(g)) && same_graph(fc(fc(g)), fc(g)) &&
              same_graph(fs(fc(g)), fc(fs(g)));
    auto z1 = drop_zero_volume_candidates(find_sccs(fs(fc(g))));
    auto z2 = drop_zero_volume_candidates(z1);
    ok = ok && z1.size() == z2.size();
    for (std::size_t i = 0; ok && i < z1.size(); ++i) {
      ok = z1[i].members == z2[i].members && z1[i].internal_edges == z2[i].internal_edges;
    }
    if (ok) ++ok_graphs;
  }
  return {ok_graphs == 200, std::to_string(ok_graphs) + "/200 graphs idempotent and commutative"};
}

// --- 8 -------------------------------------------------------------------------------

Outcome parallel_determinism() {
  SynthDataset data = generate_dataset(default_mix(10000), 8);
  auto dir = std::filesystem::temp_directory_path() / "washtrace_acceptance_10k";
  std::filesystem::remove_all(dir);
  write_dataset(data, dir);
  std::vector<std::string> reports;
  std::ostringstream os;
  bool fast = true;
  for (unsigned jobs : {1u, 4u, 16u}) {
    RunConfig config = dataset_config(dir);
    config.jobs = jobs;
    config.out = dir / ("report_" + std::to_string(jobs) + ".json");
    auto start = Clock::now();
    run_pipeline(config);
    double elapsed = seconds_since(start);
    fast = fast && elapsed < 60.0;
    std::ifstream in(config.out, std::ios::binary);
    reports.emplace_back((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    os << "jobs=" << jobs << " " << elapsed << " s; ";
  }
  bool identical = reports[0] == reports[1] && reports[0] == reports[2] && !reports[0].empty();
  os << data.truth.size() << " NFTs, reports " << (identical ? "byte-identical" : "DIFFER");
  std::filesystem::remove_all(dir);
  return {identical && fast, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"scc-oracle-equivalence", scc_oracle_equivalence},
      {"reward-case-study", reward_case_study},
      {"resale-case-study", resale_case_study},
      {"reward-share-conservation", reward_conservation},
      {"synth-recall-precision-overlap", synth_recall_precision},
      {"pattern-relabeling-invariance", pattern_relabeling},
      {"filter-idempotence-commutativity", filter_algebra},
      {"parallel-report-determinism", parallel_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
