#include <doctest.h>

#include <random>

#include "support.hpp"
#include "washtrace/errors.hpp"
#include "washtrace/profit.hpp"

using namespace testing;

namespace {

WashTradeEvent event_of(const NftId& id, std::vector<TransferEvent> events) {
  auto sccs = find_sccs(build_graph(id, events));
  REQUIRE(sccs.size() == 1);
  WashTradeEvent e;
  e.candidate = sccs[0];
  e.evidence = {Evidence{EvidenceKind::ZeroRisk, std::nullopt, {}}};
  e.volume = internal_volume(e.candidate);
  return e;
}

}  // namespace

TEST_CASE("reward share is exact and validated") {
  CHECK(reward_share({dec("1"), dec("3"), dec("100")}) == Rational(100, 3));
  CHECK(reward_share({dec("0"), dec("3"), dec("100")}) == Rational(0));
  CHECK(reward_share({dec("3"), dec("3"), dec("7.5")}) == Rational(15, 2));
  CHECK_THROWS_AS(reward_share({dec("0"), dec("0"), dec("1")}), ZeroMarketVolume);
  CHECK_THROWS_AS(reward_share({dec("4"), dec("3"), dec("1")}), InputError);
  CHECK_THROWS_AS(reward_share({dec("-1"), dec("3"), dec("1")}), InputError);
  CHECK_THROWS_AS(reward_share({dec("1"), dec("3"), dec("-1")}), InputError);
}

TEST_CASE("reward shares of a full market sum to the emission") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 50; ++round) {
    std::vector<Decimal> volumes;
    Decimal market;
    for (std::size_t i = 0; i < 1 + rng() % 20; ++i) {
      volumes.push_back(Decimal::from_units(BigInt(rng() % 1000000), 4));
      market += volumes.back();
    }
    if (market.is_zero()) continue;
    Decimal emission = Decimal::from_units(BigInt(rng() % 100000000), 2);
    Rational total = 0;
    for (const auto& v : volumes) total += reward_share({v, market, emission});
    CHECK(total == emission.to_rational());
  }
}

TEST_CASE("claims and the reward balance") {
  LabelRegistry labels;
  const unsigned distributor = 0xd1, treasury = 0x7e;
  labels.add_reward_distributor(addr(distributor), "LooksRare");
  labels.add_treasury(addr(treasury), "LooksRare");
  const Asset looks = Asset::token(addr(0x100c));

  auto id = nft(1);
  auto e = event_of(id, {move(id, 1, 2, 100, "10"), move(id, 2, 1, 101, "10")});
  std::vector<TransactionRecord> recs = {
      record(1, 0xeeee, 100, "10", TxKind::ContractCall, "0.01"),
      record(2, treasury, 100, "0.2"),  // fee split of the first sale
      record(2, 0xeeee, 101, "10", TxKind::ContractCall, "0.02"),
      record(1, distributor, 90, "999", TxKind::ContractCall, "0.5"),  // before the episode
      record(1, distributor, 200, "1000", TxKind::ContractCall, "0.03"),
      record(1, distributor, 201, "5000", TxKind::ContractCall, "0.03"),  // second claim ignored
  };
  recs[1].tx_hash = recs[0].tx_hash;
  recs[1].gas_fee = dec("0");
  for (auto& r : recs) {
    if (r.to == addr(distributor)) r.payment.asset = looks;
  }
  // Edge hashes come from the transfer helper; align them with the sale records.
  e.candidate.internal_edges[0].tx_hash = recs[0].tx_hash;
  e.candidate.internal_edges[1].tx_hash = recs[2].tx_hash;
  TransactionIndex txs(recs);

  auto claims = extract_claims(e.candidate, txs, labels);
  REQUIRE(claims.size() == 1);
  CHECK(claims[0].account == addr(1));
  CHECK(claims[0].tokens == dec("1000"));

  PriceTable prices;
  prices.add(Asset::native(), UtcDate::parse("2022-01-01"), dec("3000"));
  prices.add(looks, UtcDate::parse("2022-01-01"), dec("2.5"));
  auto ledger = reward_balance(e, claims, txs, labels, prices);
  // Hand-computed: rewards 1000 * 2.5; fees 0.2 ETH; gas 0.01 + 0.02 + 0.03 ETH.
  CHECK(ledger.rewards_usd == dec("2500"));
  CHECK(ledger.nftm_fees_usd == dec("600"));
  CHECK(ledger.transaction_fees_usd == dec("180"));
  CHECK(ledger.balance_usd == dec("1720"));
  CHECK(ledger.verdict == Verdict::Successful);

  auto none = reward_balance(e, {}, txs, labels, prices);
  CHECK(none.verdict == Verdict::NoClaim);
  CHECK(none.balance_usd == dec("-690"));  // no claim tx, so gas is 0.01 + 0.02 ETH only

  PriceTable zero_gain;
  zero_gain.add(Asset::native(), UtcDate::parse("2022-01-01"), dec("3000"));
  zero_gain.add(looks, UtcDate::parse("2022-01-01"), dec("0.78"));  // 780 USD exactly
  CHECK(reward_balance(e, claims, txs, labels, zero_gain).verdict == Verdict::Failed);
}

TEST_CASE("resale balance") {
  LabelRegistry labels;
  auto id = nft(1);
  std::vector<TransferEvent> history = {move(id, 9, 1, 50, "0.99"), move(id, 1, 2, 100, "1"),
                                        move(id, 2, 1, 101, "2"), move(id, 1, 2, 102, "3"),
                                        move(id, 2, 8, 300, "14.85")};
  WashTradeEvent e;
  {
    std::vector<TransferEvent> window(history.begin() + 1, history.end() - 1);
    e = event_of(id, window);
  }
  std::vector<TransactionRecord> recs;
  for (const auto& t : history) {
    TransactionRecord r;
    r.tx_hash = t.tx_hash;
    r.block_number = t.block_number;
    r.timestamp = t.timestamp;
    r.from = t.to;
    r.to = t.interacted_contract;
    r.payment = t.payment;
    r.gas_fee = dec("0.01");
    r.kind = TxKind::ContractCall;
    recs.push_back(r);
  }
  TransactionIndex txs(recs);

  CHECK(find_resale(e.candidate, history) == &history.back());
  auto ledger = resale_balance(e, history, txs, labels, nullptr);
  REQUIRE(ledger.has_value());
  CHECK(ledger->buy_price == dec("0.99"));
  CHECK(ledger->gross() == dec("13.86"));
  CHECK(ledger->gas_fees == dec("0.04"));
  CHECK(ledger->balance == dec("13.82"));
  CHECK_FALSE(ledger->usd.has_value());

  PriceTable prices;
  for (int d = 0; d < 3; ++d) {
    prices.add(Asset::native(), UtcDate::from_timestamp(1640995200 + d * 86400), dec("2000"));
  }
  auto priced = resale_balance(e, history, txs, labels, &prices);
  CHECK(priced->usd->balance == dec("27640"));

  std::vector<TransferEvent> kept(history.begin(), history.end() - 1);
  CHECK_FALSE(resale_balance(e, kept, txs, labels, nullptr).has_value());
}
