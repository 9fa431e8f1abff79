#include "washtrace/detect.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace washtrace {

std::string_view to_string(EvidenceKind kind) {
  switch (kind) {
    case EvidenceKind::ZeroRisk: return "zero_risk";
    case EvidenceKind::CommonFunderInternal: return "common_funder_internal";
    case EvidenceKind::CommonFunderExternal: return "common_funder_external";
    case EvidenceKind::CommonExitInternal: return "common_exit_internal";
    case EvidenceKind::CommonExitExternal: return "common_exit_external";
    case EvidenceKind::SelfTrade: return "self_trade";
    case EvidenceKind::Propagated: return "propagated";
  }
  return "?";
}

std::string_view approach_of(EvidenceKind kind) {
  switch (kind) {
    case EvidenceKind::ZeroRisk: return "zero_risk";
    case EvidenceKind::CommonFunderInternal:
    case EvidenceKind::CommonFunderExternal: return "common_funder";
    case EvidenceKind::CommonExitInternal:
    case EvidenceKind::CommonExitExternal: return "common_exit";
    case EvidenceKind::SelfTrade: return "self_trade";
    case EvidenceKind::Propagated: return "propagated";
  }
  return "?";
}

namespace {

struct Flow {
  Decimal net;
  Decimal turnover;
};

void push_unique(std::vector<TxHash>& hashes, const TxHash& h) {
  if (std::find(hashes.begin(), hashes.end(), h) == hashes.end()) hashes.push_back(h);
}

// Picks the account linked to the most members; ties go to the lowest address.
std::optional<Address> best_witness(const std::map<Address, std::set<Address>>& links,
                                    std::size_t min_members) {
  std::optional<Address> best;
  std::size_t best_count = 0;
  for (const auto& [account, members] : links) {
    if (members.size() >= min_members && members.size() > best_count) {
      best = account;
      best_count = members.size();
    }
  }
  return best;
}

Evidence make_evidence(EvidenceKind kind, const Address& witness,
                       const std::map<Address, std::vector<TxHash>>& txs_by_account) {
  Evidence e{kind, witness, {}};
  for (const auto& h : txs_by_account.at(witness)) push_unique(e.supporting_txs, h);
  return e;
}

// Shared scan for funder (incoming, before the first move) and exit (outgoing,
// after the last move) evidence. Maps are keyed by the counterparty account.
struct LinkScan {
  std::map<Address, std::set<Address>> internal;  // member counterparty -> linked members
  std::map<Address, std::set<Address>> external;
  std::map<Address, std::set<Address>> service;
  std::map<Address, std::vector<TxHash>> internal_txs;
  std::map<Address, std::vector<TxHash>> external_txs;
};

template <typename Select, typename InWindow>
LinkScan scan_links(const SccCandidate& c, const LabelRegistry& registry,
                    const CodePresenceOracle* code, Select select, InWindow in_window,
                    bool incoming) {
  LinkScan scan;
  for (const auto& member : c.members) {
    for (const TransactionRecord* r : select(member)) {
      if (!r->is_transfer() || r->payment.amount.sign() <= 0 || !in_window(r->pos())) continue;
      const Address& other = incoming ? r->from : r->to;
      if (other == member) continue;
      if (c.is_member(other)) {
        scan.internal[other].insert(member);
        scan.internal_txs[other].push_back(r->tx_hash);
      } else if (other.is_null() || registry.is_service(other)) {
        scan.service[other].insert(member);
      } else if (code == nullptr || !code->has_bytecode(other)) {
        scan.external[other].insert(member);
        scan.external_txs[other].push_back(r->tx_hash);
      }
    }
  }
  return scan;
}

std::vector<Evidence> evidences_from(const LinkScan& scan, EvidenceKind internal_kind,
                                     EvidenceKind external_kind) {
  std::vector<Evidence> out;
  if (auto w = best_witness(scan.internal, 1)) {
    out.push_back(make_evidence(internal_kind, *w, scan.internal_txs));
  }
  if (auto w = best_witness(scan.external, 2)) {
    out.push_back(make_evidence(external_kind, *w, scan.external_txs));
  }
  return out;
}

}  // namespace

std::optional<Evidence> check_zero_risk(const SccCandidate& c, const TransactionIndex& txs,
                                        const ZeroRiskTolerance& tolerance) {
  if (c.members.size() < 2) return std::nullopt;

  std::map<std::pair<Address, Asset>, Flow> flows;
  Evidence evidence{EvidenceKind::ZeroRisk, std::nullopt, {}};
  std::unordered_set<TxHash, WordHash> edge_hashes;

  auto move = [&](const Address& payer, const Address& payee, const Payment& p) {
    Flow& out = flows[{payer, p.asset}];
    Flow& in = flows[{payee, p.asset}];
    out.net -= p.amount;
    out.turnover += p.amount;
    in.net += p.amount;
    in.turnover += p.amount;
  };

  for (const auto& edge : c.internal_edges) {
    edge_hashes.insert(edge.tx_hash);
    push_unique(evidence.supporting_txs, edge.tx_hash);
    if (edge.is_self_loop() || edge.payment.amount.is_zero()) continue;
    move(edge.to, edge.from, edge.payment);  // buyer pays seller
  }

  for (const auto& member : c.members) {
    for (const TransactionRecord* r : txs.sent_by(member)) {
      if (!r->is_transfer() || r->to == member || !c.is_member(r->to)) continue;
      if (r->pos() < c.first_move || c.last_move < r->pos()) continue;
      if (edge_hashes.count(r->tx_hash)) continue;
      if (r->payment.amount.is_zero()) continue;
      move(r->from, r->to, r->payment);
      push_unique(evidence.supporting_txs, r->tx_hash);
    }
  }

  for (const auto& [key, flow] : flows) {
    Decimal bound = tolerance.relative * flow.turnover;
    if (bound < tolerance.absolute) bound = tolerance.absolute;
    if (flow.net.abs() > bound) return std::nullopt;
  }
  return evidence;
}

std::vector<Evidence> find_common_funder(const SccCandidate& c, const TransactionIndex& txs,
                                         const LabelRegistry& registry,
                                         const CodePresenceOracle& code) {
  auto scan = scan_links(
      c, registry, &code, [&](const Address& m) { return txs.received_by(m); },
      [&](const TxPos& p) { return p < c.first_move; }, true);
  return evidences_from(scan, EvidenceKind::CommonFunderInternal,
                        EvidenceKind::CommonFunderExternal);
}

std::vector<Evidence> find_common_exit(const SccCandidate& c, const TransactionIndex& txs,
                                       const LabelRegistry& registry,
                                       const CodePresenceOracle& code) {
  auto scan = scan_links(
      c, registry, &code, [&](const Address& m) { return txs.sent_by(m); },
      [&](const TxPos& p) { return c.last_move < p; }, false);
  // Keyed by the receiving account, so an internal exit's witness is the member collecting funds.
  return evidences_from(scan, EvidenceKind::CommonExitInternal, EvidenceKind::CommonExitExternal);
}

std::optional<Evidence> check_self_trade(const SccCandidate& c) {
  Evidence e{EvidenceKind::SelfTrade, std::nullopt, {}};
  for (const auto& edge : c.internal_edges) {
    if (edge.is_self_loop()) push_unique(e.supporting_txs, edge.tx_hash);
  }
  if (e.supporting_txs.empty()) return std::nullopt;
  return e;
}

std::optional<Address> find_service_funder(const SccCandidate& c, const TransactionIndex& txs,
                                           const LabelRegistry& registry) {
  auto scan = scan_links(
      c, registry, nullptr, [&](const Address& m) { return txs.received_by(m); },
      [&](const TxPos& p) { return p < c.first_move; }, true);
  return best_witness(scan.service, 2);
}

CandidateVerdict evaluate_candidate(const SccCandidate& c, const DetectionContext& ctx) {
  CandidateVerdict v;
  v.candidate = c;
  if (auto e = check_zero_risk(c, ctx.txs, ctx.tolerance)) v.evidence.push_back(std::move(*e));
  for (auto& e : find_common_funder(c, ctx.txs, ctx.registry, ctx.code)) {
    v.evidence.push_back(std::move(e));
  }
  for (auto& e : find_common_exit(c, ctx.txs, ctx.registry, ctx.code)) {
    v.evidence.push_back(std::move(e));
  }
  if (auto e = check_self_trade(c)) v.evidence.push_back(std::move(*e));
  std::stable_sort(v.evidence.begin(), v.evidence.end(),
                   [](const Evidence& a, const Evidence& b) { return a.kind < b.kind; });
  v.service_funded = find_service_funder(c, ctx.txs, ctx.registry).has_value();
  return v;
}

void propagate_confirmed(std::vector<CandidateVerdict>& verdicts) {
  std::set<std::vector<Address>> confirmed;
  for (const auto& v : verdicts) {
    if (v.confirmed()) confirmed.insert(v.candidate.members);
  }
  for (auto& v : verdicts) {
    if (!v.confirmed() && confirmed.count(v.candidate.members)) {
      v.evidence.push_back(Evidence{EvidenceKind::Propagated, std::nullopt, {}});
    }
  }
}

bool WashTradeEvent::has(EvidenceKind kind) const {
  return std::any_of(evidence.begin(), evidence.end(),
                     [&](const Evidence& e) { return e.kind == kind; });
}

std::string WashTradeEvent::kind_key() const {
  std::string key;
  for (const auto& e : evidence) {
    if (!key.empty()) key += '+';
    key += to_string(e.kind);
  }
  return key;
}

std::string WashTradeEvent::approach_key() const {
  std::string key;
  std::string_view last;
  for (const auto& e : evidence) {
    auto a = approach_of(e.kind);
    if (a == last) continue;
    if (!key.empty()) key += '+';
    key += a;
    last = a;
  }
  return key;
}

std::map<Asset, Decimal> internal_volume(const SccCandidate& c) {
  std::map<Asset, Decimal> volume;
  for (const auto& edge : c.internal_edges) volume[edge.payment.asset] += edge.payment.amount;
  return volume;
}

Confirmation finalize_verdicts(std::vector<CandidateVerdict> verdicts) {
  propagate_confirmed(verdicts);
  Confirmation out;
  out.summary.candidates = verdicts.size();
  for (auto& v : verdicts) {
    if (!v.confirmed()) {
      if (v.service_funded) ++out.summary.exchange_funded_unconfirmed;
      continue;
    }
    WashTradeEvent event;
    event.volume = internal_volume(v.candidate);
    event.candidate = std::move(v.candidate);
    event.evidence = std::move(v.evidence);
    std::set<std::string_view> kinds;
    for (const auto& e : event.evidence) kinds.insert(to_string(e.kind));
    for (auto k : kinds) ++out.summary.per_kind[std::string(k)];
    ++out.summary.by_kind_set[event.kind_key()];
    ++out.summary.by_approach_set[event.approach_key()];
    out.events.push_back(std::move(event));
  }
  out.summary.confirmed = out.events.size();
  return out;
}

Confirmation confirm_all(std::span<const SccCandidate> candidates, const DetectionContext& context) {
  std::vector<CandidateVerdict> verdicts;
  verdicts.reserve(candidates.size());
  for (const auto& c : candidates) verdicts.push_back(evaluate_candidate(c, context));
  return finalize_verdicts(std::move(verdicts));
}

}  // namespace washtrace
