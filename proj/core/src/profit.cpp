#include "washtrace/profit.hpp"

#include <algorithm>
#include <set>

#include "washtrace/analytics.hpp"
#include "washtrace/errors.hpp"

namespace washtrace {

Rational reward_share(const RewardQuery& q) {
  if (q.market_volume.is_zero()) throw ZeroMarketVolume("marketplace daily volume is zero");
  if (q.market_volume.sign() < 0 || q.user_volume.sign() < 0 || q.user_volume > q.market_volume) {
    throw InputError("reward query needs 0 <= user volume <= market volume");
  }
  if (q.emission.sign() < 0) throw InputError("reward emission must be >= 0");
  return q.user_volume.to_rational() / q.market_volume.to_rational() * q.emission.to_rational();
}

std::vector<ClaimRecord> extract_claims(const SccCandidate& c, const TransactionIndex& txs,
                                        const LabelRegistry& registry) {
  std::vector<ClaimRecord> claims;
  for (const auto& member : c.members) {
    for (const TransactionRecord* r : txs.sent_by(member)) {
      if (!(c.last_move < r->pos()) || !registry.is_reward_distributor(r->to)) continue;
      claims.push_back(ClaimRecord{member, r->to, r->payment.asset, r->payment.amount, r->timestamp,
                                   r->gas_fee, r->tx_hash, r->pos()});
      break;  // records are in chain order; only the first claim counts
    }
  }
  return claims;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Successful: return "successful";
    case Verdict::Failed: return "failed";
    case Verdict::NoClaim: return "no_claim";
  }
  return "?";
}

namespace {

Decimal internal_gas_usd(const SccCandidate& c, const TransactionIndex& txs,
                         const PriceTable& prices, Decimal* native_total) {
  Decimal usd;
  std::set<TxHash> seen;
  for (const auto& edge : c.internal_edges) {
    if (!seen.insert(edge.tx_hash).second) continue;
    Decimal gas = txs.gas_of(edge.tx_hash);
    if (native_total) *native_total += gas;
    usd += prices.to_usd(Payment{Asset::native(), gas}, edge.timestamp);
  }
  return usd;
}

// Member transfers to treasury accounts within [from, to].
std::vector<const TransactionRecord*> treasury_payments(const SccCandidate& c,
                                                        const TransactionIndex& txs,
                                                        const LabelRegistry& registry, TxPos from,
                                                        TxPos to) {
  std::vector<const TransactionRecord*> out;
  for (const auto& member : c.members) {
    for (const TransactionRecord* r : txs.sent_by(member)) {
      if (r->pos() < from || to < r->pos()) continue;
      if (registry.is_treasury(r->to) && r->payment.amount.sign() > 0) out.push_back(r);
    }
  }
  return out;
}

}  // namespace

ProfitLedger reward_balance(const WashTradeEvent& event, std::span<const ClaimRecord> claims,
                            const TransactionIndex& txs, const LabelRegistry& registry,
                            const PriceTable& prices) {
  const auto& c = event.candidate;
  ProfitLedger ledger;
  for (const auto& claim : claims) {
    ledger.rewards_usd += prices.to_usd(Payment{claim.token, claim.tokens}, claim.claim_timestamp);
    ledger.transaction_fees_usd +=
        prices.to_usd(Payment{Asset::native(), claim.claim_gas_fee}, claim.claim_timestamp);
  }
  ledger.transaction_fees_usd += internal_gas_usd(c, txs, prices, nullptr);
  for (const auto* r : treasury_payments(c, txs, registry, c.first_move, c.last_move)) {
    ledger.nftm_fees_usd += prices.to_usd(r->payment, r->timestamp);
  }
  ledger.balance_usd = ledger.rewards_usd - (ledger.nftm_fees_usd + ledger.transaction_fees_usd);
  if (claims.empty()) {
    ledger.verdict = Verdict::NoClaim;
  } else {
    ledger.verdict = ledger.balance_usd.sign() > 0 ? Verdict::Successful : Verdict::Failed;
  }
  return ledger;
}

const TransferEvent* find_resale(const SccCandidate& c, std::span<const TransferEvent> history) {
  const TransferEvent* first = nullptr;
  for (const auto& t : history) {
    if (!(t.nft == c.nft) || !(c.last_move < t.pos())) continue;
    if (!c.is_member(t.from) || c.is_member(t.to) || t.payment.amount.sign() <= 0) continue;
    if (first == nullptr || chain_order_less(t, *first)) first = &t;
  }
  return first;
}

std::optional<ResaleLedger> resale_balance(const WashTradeEvent& event,
                                           std::span<const TransferEvent> history,
                                           const TransactionIndex& txs,
                                           const LabelRegistry& registry,
                                           const PriceTable* prices) {
  const auto& c = event.candidate;
  const TransferEvent* resale = find_resale(c, history);
  if (resale == nullptr) return std::nullopt;

  ResaleLedger ledger;
  ledger.resale = *resale;
  ledger.resell_price = resale->payment.amount;
  const TransferEvent* acquired = acquiring_transfer(c, history);
  if (acquired != nullptr && !acquired->from.is_null()) {
    ledger.purchase = *acquired;
    ledger.buy_price = acquired->payment.amount;
  }

  std::set<TxHash> gas_txs;
  for (const auto& edge : c.internal_edges) gas_txs.insert(edge.tx_hash);
  gas_txs.insert(resale->tx_hash);
  for (const auto& h : gas_txs) ledger.gas_fees += txs.gas_of(h);

  auto fee_records = treasury_payments(c, txs, registry, c.first_move, resale->pos());
  for (const auto* r : fee_records) ledger.marketplace_fees += r->payment.amount;
  ledger.balance = ledger.resell_price - (ledger.buy_price + ledger.fees());

  if (prices != nullptr) {
    ResaleLedger::Usd usd;
    usd.resell_price = prices->to_usd(resale->payment, resale->timestamp);
    if (ledger.purchase) {
      usd.buy_price = prices->to_usd(ledger.purchase->payment, ledger.purchase->timestamp);
    }
    usd.fees = internal_gas_usd(c, txs, *prices, nullptr);
    if (!std::any_of(c.internal_edges.begin(), c.internal_edges.end(),
                     [&](const TransferEdge& e) { return e.tx_hash == resale->tx_hash; })) {
      usd.fees += prices->to_usd(Payment{Asset::native(), txs.gas_of(resale->tx_hash)},
                                 resale->timestamp);
    }
    for (const auto* r : fee_records) usd.fees += prices->to_usd(r->payment, r->timestamp);
    usd.balance = usd.resell_price - (usd.buy_price + usd.fees);
    ledger.usd = std::move(usd);
  }
  return ledger;
}

}  // namespace washtrace
