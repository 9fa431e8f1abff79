#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "washtrace/decimal.hpp"
#include "washtrace/detect.hpp"
#include "washtrace/graph.hpp"
#include "washtrace/ingest.hpp"

namespace washtrace {

inline constexpr const char* kOffMarket = "off-market";

// --- volume ---------------------------------------------------------------------

/// Sum of amount x USD price on the edge's UTC day. Throws MissingPrice.
Decimal usd_volume(std::span<const TransferEdge> edges, const PriceTable& prices);
Decimal usd_volume(const WashTradeEvent& event, const PriceTable& prices);

// --- time -----------------------------------------------------------------------

/// Seconds between the first and the last internal transfer.
Timestamp lifetime(const WashTradeEvent& event);

/// Seconds between the latest transfer delivering the NFT to a member strictly
/// before the first move and the first internal transfer. Empty if the NFT
/// reached the group through a mint or was never delivered to it.
std::optional<Timestamp> acquisition_latency(const WashTradeEvent& event,
                                             std::span<const TransferEvent> full_history);

/// The acquiring transfer used by acquisition_latency, if any (mints included).
const TransferEvent* acquiring_transfer(const SccCandidate& candidate,
                                        std::span<const TransferEvent> full_history);

struct CdfPoint {
  std::int64_t value = 0;
  double fraction = 0.0;  // share of samples <= value
};

/// Empirical CDF with one point per distinct value.
std::vector<CdfPoint> empirical_cdf(std::vector<std::int64_t> samples);

// --- patterns -------------------------------------------------------------------

enum class Pattern { P1, P2, P3, P4, P5, P6, P7, P8, P9, P10, Other };

struct PatternId {
  Pattern id = Pattern::Other;
  std::size_t node_count = 0;

  std::string name() const;
  friend bool operator==(const PatternId&, const PatternId&) = default;
};

/// Canonical code of a simple directed graph on n <= kMaxPatternNodes nodes:
/// the minimum adjacency bit string over all node relabelings. Parallel arcs
/// collapse; self-loops are kept.
inline constexpr std::size_t kMaxPatternNodes = 6;
std::uint64_t canonical_shape(std::size_t node_count,
                              std::span<const std::pair<std::size_t, std::size_t>> arcs);

/// Arcs of a catalog pattern over nodes 0..n-1 (Other has none).
std::pair<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> pattern_shape(Pattern p);

/// Matches the internal edges' shape against the catalog:
///   P1 2-node round trip          P2 3-cycle
///   P3 round trip + 3-cycle       P4 3-node double round trip
///   P5 4-cycle                    P6 4-node round-trip star
///   P7 4-node round-trip path     P8 3-cycle with a round-trip spur
///   P9 4-cycle with one reversed arc
///   P10 5-cycle
PatternId classify_pattern(const SccCandidate& candidate);
PatternId classify_pattern(const WashTradeEvent& event);

// --- marketplaces ---------------------------------------------------------------

/// Marketplace name for an edge's interacted contract, or kOffMarket.
std::string marketplace_of(const TransferEdge& edge, const LabelRegistry& registry);

/// Marketplace carrying the most internal edges (ties: lowest name).
std::string primary_marketplace(const SccCandidate& candidate, const LabelRegistry& registry);

struct MarketplaceRow {
  std::string name;
  std::size_t events = 0;
  std::size_t nfts = 0;
  Decimal usd_volume;
  std::optional<Rational> share;  // of the marketplace's total volume
};

std::vector<MarketplaceRow> marketplace_breakdown(std::span<const WashTradeEvent> events,
                                                  const LabelRegistry& registry,
                                                  const PriceTable& prices,
                                                  const std::map<std::string, Decimal>& totals);

// --- serial traders -------------------------------------------------------------

struct SerialReport {
  std::map<Address, std::size_t> activity_counts;
  std::set<Address> serial;
  /// Serial accounts whose every event has only serial members.
  std::set<Address> only_with_serials;
  std::size_t events_with_serials = 0;
  std::size_t events_by_serials_only = 0;
  /// Serial accounts with two or more events on one collection.
  std::set<Address> repeat_collection;
  /// Per collection: serial accounts repeating on it.
  std::map<Address, std::size_t> repeaters_per_collection;
  std::size_t max_activity = 0;
};

SerialReport serial_stats(std::span<const WashTradeEvent> events);

// --- per-event record -----------------------------------------------------------

struct ActivityReport {
  const WashTradeEvent* event = nullptr;
  Decimal usd_volume;
  Timestamp lifetime_seconds = 0;
  std::optional<Timestamp> acquisition_latency_seconds;
  PatternId pattern;
  std::map<std::string, Decimal> marketplaces;  // name -> USD volume
  Address collection;
};

ActivityReport describe_activity(const WashTradeEvent& event, std::span<const TransferEvent> history,
                                 const LabelRegistry& registry, const PriceTable& prices);

}  // namespace washtrace
