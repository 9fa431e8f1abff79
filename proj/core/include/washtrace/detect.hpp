#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "washtrace/decimal.hpp"
#include "washtrace/graph.hpp"
#include "washtrace/ingest.hpp"

namespace washtrace {

enum class EvidenceKind {
  ZeroRisk,
  CommonFunderInternal,
  CommonFunderExternal,
  CommonExitInternal,
  CommonExitExternal,
  SelfTrade,
  Propagated,
};

inline constexpr std::size_t kEvidenceKindCount = 7;

std::string_view to_string(EvidenceKind kind);

/// Detection approach an evidence kind belongs to; funder and exit kinds fold
/// their internal/external variants together.
std::string_view approach_of(EvidenceKind kind);

struct Evidence {
  EvidenceKind kind = EvidenceKind::ZeroRisk;
  std::optional<Address> witness;  // funder or exit account
  std::vector<TxHash> supporting_txs;

  friend bool operator==(const Evidence&, const Evidence&) = default;
};

/// Per-member, per-asset net must satisfy |net| <= max(absolute, relative * turnover).
struct ZeroRiskTolerance {
  Decimal absolute = Decimal::parse("0.000001");
  Decimal relative = Decimal::parse("0.001");
};

/// Immutable inputs shared by every candidate check.
struct DetectionContext {
  const TransactionIndex& txs;
  const LabelRegistry& registry;
  const CodePresenceOracle& code;
  ZeroRiskTolerance tolerance{};
};

/// Zero balance of the colluding group over the episode window, gas excluded.
/// Flows are the internal NFT sales (buyer pays seller) plus direct
/// member-to-member transfers inside the window. Needs at least two members.
std::optional<Evidence> check_zero_risk(const SccCandidate& candidate, const TransactionIndex& txs,
                                        const ZeroRiskTolerance& tolerance = {});

/// Funding transfers received by members strictly before the first move.
/// Returns internal and/or external funder evidence, internal first.
std::vector<Evidence> find_common_funder(const SccCandidate& candidate, const TransactionIndex& txs,
                                         const LabelRegistry& registry,
                                         const CodePresenceOracle& code);

/// Transfers sent by members strictly after the last move. Mirror of the funder rule.
std::vector<Evidence> find_common_exit(const SccCandidate& candidate, const TransactionIndex& txs,
                                       const LabelRegistry& registry,
                                       const CodePresenceOracle& code);

std::optional<Evidence> check_self_trade(const SccCandidate& candidate);

/// A labeled service account that would otherwise qualify as a common
/// external funder (funds two or more members before the first move).
std::optional<Address> find_service_funder(const SccCandidate& candidate,
                                           const TransactionIndex& txs,
                                           const LabelRegistry& registry);

struct CandidateVerdict {
  SccCandidate candidate;
  std::vector<Evidence> evidence;  // sorted by kind
  bool service_funded = false;

  bool confirmed() const { return !evidence.empty(); }
};

/// Runs the four direct approaches (zero risk, funder, exit, self trade).
CandidateVerdict evaluate_candidate(const SccCandidate& candidate, const DetectionContext& context);

/// Unconfirmed candidates whose member set exactly equals the member set of a
/// directly confirmed candidate gain propagated evidence. One pass; propagated
/// confirmations do not seed further propagation.
void propagate_confirmed(std::vector<CandidateVerdict>& verdicts);

struct WashTradeEvent {
  SccCandidate candidate;
  std::vector<Evidence> evidence;  // non-empty, sorted by kind
  std::map<Asset, Decimal> volume;  // sum of internal edge payments per asset

  TxPos window_start() const { return candidate.first_move; }
  TxPos window_end() const { return candidate.last_move; }
  bool has(EvidenceKind kind) const;
  /// "zero_risk+self_trade" style key over the evidence kinds present.
  std::string kind_key() const;
  /// Same over detection approaches.
  std::string approach_key() const;
};

std::map<Asset, Decimal> internal_volume(const SccCandidate& candidate);

struct OverlapSummary {
  std::size_t candidates = 0;
  std::size_t confirmed = 0;
  std::size_t exchange_funded_unconfirmed = 0;
  std::map<std::string, std::size_t> per_kind;        // events carrying each kind
  std::map<std::string, std::size_t> by_kind_set;     // Venn cells over evidence kinds
  std::map<std::string, std::size_t> by_approach_set; // Venn cells over approaches
};

struct Confirmation {
  std::vector<WashTradeEvent> events;
  OverlapSummary summary;
};

/// Propagation plus summary over already evaluated candidates.
Confirmation finalize_verdicts(std::vector<CandidateVerdict> verdicts);

Confirmation confirm_all(std::span<const SccCandidate> candidates, const DetectionContext& context);

}  // namespace washtrace
