#include "washtrace/types.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace washtrace {

namespace {

int hex_value(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

std::string_view strip_0x(std::string_view text) {
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    return text.substr(2);
  }
  return text;
}

template <std::size_t N>
void decode_hex(std::string_view digits, std::array<std::uint8_t, N>& out, std::string_view what) {
  if (digits.size() != 2 * N) {
    throw std::invalid_argument(std::string(what) + " must have " + std::to_string(2 * N) +
                                " hex digits");
  }
  for (std::size_t i = 0; i < N; ++i) {
    int hi = hex_value(digits[2 * i]);
    int lo = hex_value(digits[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument(std::string(what) + " has a non-hex digit");
    out[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
}

template <std::size_t N>
std::string encode_hex(const std::array<std::uint8_t, N>& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "0x";
  out.reserve(2 + 2 * N);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

}  // namespace

Word32 parse_word(std::string_view text) {
  Word32 out{};
  decode_hex(strip_0x(text), out, "32-byte word");
  return out;
}

std::string to_hex(const Word32& word) { return encode_hex(word); }

Address Address::parse(std::string_view text) {
  if (text.size() != 42 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) {
    throw std::invalid_argument("address must be 0x followed by 40 hex digits: " +
                                std::string(text));
  }
  Bytes bytes{};
  decode_hex(text.substr(2), bytes, "address");
  return Address(bytes);
}

Address Address::from_word(const Word32& word) {
  Bytes bytes{};
  std::copy(word.begin() + 12, word.end(), bytes.begin());
  return Address(bytes);
}

bool Address::is_null() const noexcept {
  return std::all_of(bytes_.begin(), bytes_.end(), [](std::uint8_t b) { return b == 0; });
}

std::string Address::hex() const { return encode_hex(bytes_); }

Word32 Address::to_word() const {
  Word32 word{};
  std::copy(bytes_.begin(), bytes_.end(), word.begin() + 12);
  return word;
}

TokenId parse_token_id(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty token id");
  std::string_view digits = strip_0x(text);
  const bool hex = digits.size() != text.size();
  if (digits.empty()) throw std::invalid_argument("empty token id");
  for (char ch : digits) {
    if (hex ? hex_value(ch) < 0 : !std::isdigit(static_cast<unsigned char>(ch))) {
      throw std::invalid_argument("bad token id: " + std::string(text));
    }
  }
  try {
    return TokenId(std::string(text));
  } catch (const std::exception&) {
    throw std::invalid_argument("token id exceeds 256 bits: " + std::string(text));
  }
}

TokenId token_id_from_word(const Word32& word) {
  TokenId id = 0;
  for (auto b : word) id = (id << 8) | b;
  return id;
}

Word32 token_id_to_word(const TokenId& id) {
  Word32 word{};
  TokenId rest = id;
  for (int i = 31; i >= 0; --i) {
    word[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rest & 0xff);
    rest >>= 8;
  }
  return word;
}

std::string NftId::str() const { return contract.hex() + "#" + token_id.str(); }

Asset Asset::parse(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "eth" || lower == "native") return Asset::native();
  return Asset::token(Address::parse(text));
}

std::string Asset::str() const { return token_ ? token_->hex() : "ETH"; }

UtcDate UtcDate::from_timestamp(Timestamp seconds) {
  using namespace std::chrono;
  auto days = floor<std::chrono::days>(sys_seconds{std::chrono::seconds{seconds}});
  return UtcDate(static_cast<std::int32_t>(days.time_since_epoch().count()));
}

UtcDate UtcDate::parse(std::string_view text) {
  auto bad = [&] { return std::invalid_argument("date must be YYYY-MM-DD: " + std::string(text)); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  auto number = [&](std::size_t from, std::size_t len) {
    int v = 0;
    for (std::size_t i = from; i < from + len; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw bad();
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  using namespace std::chrono;
  year_month_day ymd{year{number(0, 4)}, month{static_cast<unsigned>(number(5, 2))},
                     day{static_cast<unsigned>(number(8, 2))}};
  if (!ymd.ok()) throw bad();
  return UtcDate(static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count()));
}

std::string UtcDate::str() const {
  using namespace std::chrono;
  year_month_day ymd{sys_days{std::chrono::days{days_}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string to_string(const TxPos& pos) {
  return std::to_string(pos.block) + ":" + std::to_string(pos.tx_index);
}

}  // namespace washtrace
