#pragma once

#include <string>

#include "washtrace/graph.hpp"
#include "washtrace/ingest.hpp"
#include "washtrace/types.hpp"

namespace testing {

using namespace washtrace;

inline Address addr(unsigned n) {
  Word32 w{};
  w[12] = 0xaa;
  for (int i = 0; i < 4; ++i) w[31 - i] = static_cast<std::uint8_t>(n >> (8 * i));
  return Address::from_word(w);
}

inline TxHash hash(unsigned n) {
  TxHash h{};
  h[0] = 0x77;
  for (int i = 0; i < 4; ++i) h[31 - i] = static_cast<std::uint8_t>(n >> (8 * i));
  return h;
}

inline NftId nft(unsigned token, unsigned collection = 0xc011) {
  return NftId{addr(collection), TokenId(token)};
}

inline Decimal dec(const char* text) { return Decimal::parse(text); }

inline Payment eth(const char* amount) { return Payment{Asset::native(), Decimal::parse(amount)}; }

/// Transfer in block `block`, tx index 0, hash derived from the block number.
inline TransferEvent move(const NftId& id, unsigned from, unsigned to, std::uint64_t block,
                          const char* amount = "1", unsigned venue = 0xeeee) {
  TransferEvent e;
  e.nft = id;
  e.from = addr(from);
  e.to = addr(to);
  e.block_number = block;
  e.tx_hash = hash(static_cast<unsigned>(block));
  e.timestamp = 1640995200 + static_cast<Timestamp>(block) * 12;
  e.interacted_contract = addr(venue);
  e.payment = eth(amount);
  return e;
}

inline TransactionRecord record(unsigned from, unsigned to, std::uint64_t block, const char* amount,
                                TxKind kind = TxKind::ValueTransfer, const char* gas = "0") {
  TransactionRecord r;
  r.tx_hash = hash(0x100000u + static_cast<unsigned>(block));
  r.block_number = block;
  r.timestamp = 1640995200 + static_cast<Timestamp>(block) * 12;
  r.from = addr(from);
  r.to = addr(to);
  r.payment = eth(amount);
  r.gas_fee = dec(gas);
  r.kind = kind;
  return r;
}

}  // namespace testing
