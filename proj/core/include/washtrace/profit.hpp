#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "washtrace/decimal.hpp"
#include "washtrace/detect.hpp"
#include "washtrace/ingest.hpp"

namespace washtrace {

/// One user's day on a reward marketplace, in native units (tokens for emission).
struct RewardQuery {
  Decimal user_volume;    // a
  Decimal market_volume;  // b
  Decimal emission;       // c
};

/// Pro-rata daily reward a / b * c, exact. Throws ZeroMarketVolume when b is
/// zero and InputError unless 0 <= a <= b and c >= 0.
Rational reward_share(const RewardQuery& query);

struct ClaimRecord {
  Address account;
  Address distributor;
  Asset token;
  Decimal tokens;
  Timestamp claim_timestamp = 0;
  Decimal claim_gas_fee;
  TxHash tx_hash{};
  TxPos pos;
};

/// For each member, the earliest transaction strictly after the last move
/// sent to a reward distributor.
std::vector<ClaimRecord> extract_claims(const SccCandidate& candidate, const TransactionIndex& txs,
                                        const LabelRegistry& registry);

enum class Verdict { Successful, Failed, NoClaim };

std::string_view to_string(Verdict verdict);

/// balance = rewards - (NFTM fees + transaction fees), all in USD.
struct ProfitLedger {
  Decimal rewards_usd;
  Decimal nftm_fees_usd;
  Decimal transaction_fees_usd;
  Decimal balance_usd;
  Verdict verdict = Verdict::NoClaim;
};

/// Rewards are claim tokens priced on the claim day. Transaction fees are the
/// gas of every internal-transfer transaction and every claim, priced in ETH on
/// their days. NFTM fees are member transfers to treasuries inside the window.
/// Throws MissingPrice.
ProfitLedger reward_balance(const WashTradeEvent& event, std::span<const ClaimRecord> claims,
                            const TransactionIndex& txs, const LabelRegistry& registry,
                            const PriceTable& prices);

struct ResaleLedger {
  TransferEvent resale;
  std::optional<TransferEvent> purchase;  // empty when minted to the group

  // Native units (ETH); treasury fees in other assets are counted at face value.
  Decimal buy_price;
  Decimal resell_price;
  Decimal gas_fees;
  Decimal marketplace_fees;
  Decimal balance;  // resell - (buy + gas + marketplace fees)

  struct Usd {
    Decimal buy_price;
    Decimal resell_price;
    Decimal fees;
    Decimal balance;
  };
  std::optional<Usd> usd;  // priced at each transaction's day

  Decimal fees() const { return gas_fees + marketplace_fees; }
  Decimal gross() const { return resell_price - buy_price; }
};

/// The first paid transfer from a member to a non-member after the last move.
const TransferEvent* find_resale(const SccCandidate& candidate,
                                 std::span<const TransferEvent> full_history);

/// Empty if the NFT was not sold to an outside account. The USD side is filled
/// when `prices` is given and throws MissingPrice if a day is not priced.
std::optional<ResaleLedger> resale_balance(const WashTradeEvent& event,
                                           std::span<const TransferEvent> full_history,
                                           const TransactionIndex& txs,
                                           const LabelRegistry& registry,
                                           const PriceTable* prices);

}  // namespace washtrace
