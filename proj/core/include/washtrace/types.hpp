#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "washtrace/decimal.hpp"

namespace washtrace {

using Word32 = std::array<std::uint8_t, 32>;

/// Parses exactly 64 hex digits with an optional 0x prefix.
Word32 parse_word(std::string_view text);
std::string to_hex(const Word32& word);

/// 20-byte account or contract address, rendered as 0x + 40 lowercase hex digits.
class Address {
 public:
  using Bytes = std::array<std::uint8_t, 20>;

  constexpr Address() = default;
  explicit constexpr Address(const Bytes& bytes) : bytes_(bytes) {}

  /// Accepts 0x-prefixed, 40-hex-digit text in any letter case.
  static Address parse(std::string_view text);
  /// Low 20 bytes of an ABI-encoded 32-byte word.
  static Address from_word(const Word32& word);
  static constexpr Address null() { return Address(); }

  const Bytes& bytes() const noexcept { return bytes_; }
  bool is_null() const noexcept;
  std::string hex() const;
  Word32 to_word() const;

  friend auto operator<=>(const Address&, const Address&) = default;

 private:
  Bytes bytes_{};
};

using TxHash = Word32;

using TokenId = boost::multiprecision::checked_uint256_t;

/// Decimal or 0x-hex text, at most 2^256 - 1.
TokenId parse_token_id(std::string_view text);
TokenId token_id_from_word(const Word32& word);
Word32 token_id_to_word(const TokenId& id);

struct NftId {
  Address contract;
  TokenId token_id;

  std::string str() const;  // "<contract>#<token_id>"

  friend bool operator==(const NftId& a, const NftId& b) {
    return a.contract == b.contract && a.token_id == b.token_id;
  }
  friend std::strong_ordering operator<=>(const NftId& a, const NftId& b) {
    if (auto c = a.contract <=> b.contract; c != 0) return c;
    if (a.token_id < b.token_id) return std::strong_ordering::less;
    if (b.token_id < a.token_id) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

/// Either the chain's native asset (ETH) or an ERC-20 token contract.
class Asset {
 public:
  Asset() = default;
  static Asset native() { return Asset(); }
  static Asset token(const Address& contract) { return Asset(contract); }
  /// "ETH" or "native" (any case) for the native asset, otherwise a token address.
  static Asset parse(std::string_view text);

  bool is_native() const noexcept { return !token_.has_value(); }
  const std::optional<Address>& token_contract() const noexcept { return token_; }
  std::string str() const;

  friend auto operator<=>(const Asset&, const Asset&) = default;

 private:
  explicit Asset(const Address& contract) : token_(contract) {}
  std::optional<Address> token_;
};

struct Payment {
  Asset asset;
  Decimal amount;

  friend bool operator==(const Payment&, const Payment&) = default;
};

using Timestamp = std::int64_t;

/// A UTC calendar day, stored as days since 1970-01-01.
class UtcDate {
 public:
  constexpr UtcDate() = default;
  explicit constexpr UtcDate(std::int32_t days) : days_(days) {}

  static UtcDate from_timestamp(Timestamp seconds);
  /// Strict YYYY-MM-DD; throws std::invalid_argument otherwise.
  static UtcDate parse(std::string_view text);

  std::int32_t days() const noexcept { return days_; }
  std::string str() const;

  friend auto operator<=>(const UtcDate&, const UtcDate&) = default;

 private:
  std::int32_t days_ = 0;
};

/// Position of a transaction in chain order.
struct TxPos {
  std::uint64_t block = 0;
  std::uint32_t tx_index = 0;

  friend auto operator<=>(const TxPos&, const TxPos&) = default;
};

std::string to_string(const TxPos& pos);

struct WordHash {
  std::size_t operator()(const Word32& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto b : w) h = (h ^ b) * 1099511628211ull;
    return h;
  }
};

}  // namespace washtrace

template <>
struct std::hash<washtrace::Address> {
  std::size_t operator()(const washtrace::Address& a) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto b : a.bytes()) h = (h ^ b) * 1099511628211ull;
    return h;
  }
};
