#include "washtrace/analytics.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace washtrace {

Decimal usd_volume(std::span<const TransferEdge> edges, const PriceTable& prices) {
  Decimal total;
  for (const auto& e : edges) total += prices.to_usd(e.payment, e.timestamp);
  return total;
}

Decimal usd_volume(const WashTradeEvent& event, const PriceTable& prices) {
  return usd_volume(event.candidate.internal_edges, prices);
}

Timestamp lifetime(const WashTradeEvent& event) {
  const auto& edges = event.candidate.internal_edges;
  if (edges.empty()) return 0;
  auto [lo, hi] = std::minmax_element(
      edges.begin(), edges.end(),
      [](const TransferEdge& a, const TransferEdge& b) { return a.timestamp < b.timestamp; });
  return hi->timestamp - lo->timestamp;
}

namespace {

Timestamp first_move_timestamp(const SccCandidate& c) {
  const TransferEdge* first = &c.internal_edges.front();
  for (const auto& e : c.internal_edges) {
    if (e.pos() < first->pos()) first = &e;
  }
  return first->timestamp;
}

}  // namespace

const TransferEvent* acquiring_transfer(const SccCandidate& c,
                                        std::span<const TransferEvent> history) {
  const TransferEvent* latest = nullptr;
  for (const auto& t : history) {
    if (!(t.nft == c.nft) || !(t.pos() < c.first_move) || !c.is_member(t.to)) continue;
    if (latest == nullptr || chain_order_less(*latest, t)) latest = &t;
  }
  return latest;
}

std::optional<Timestamp> acquisition_latency(const WashTradeEvent& event,
                                             std::span<const TransferEvent> history) {
  const auto& c = event.candidate;
  const TransferEvent* acquired = acquiring_transfer(c, history);
  if (acquired == nullptr || acquired->from.is_null()) return std::nullopt;
  return first_move_timestamp(c) - acquired->timestamp;
}

std::vector<CdfPoint> empirical_cdf(std::vector<std::int64_t> samples) {
  std::vector<CdfPoint> out;
  if (samples.empty()) return out;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
    out.push_back({samples[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

// --- patterns -------------------------------------------------------------------

std::string PatternId::name() const {
  if (id == Pattern::Other) return "Other";
  return "P" + std::to_string(static_cast<int>(id) + 1);
}

std::uint64_t canonical_shape(std::size_t n,
                              std::span<const std::pair<std::size_t, std::size_t>> arcs) {
  std::array<std::array<bool, kMaxPatternNodes>, kMaxPatternNodes> adj{};
  for (const auto& [u, v] : arcs) adj[u][v] = true;

  std::array<std::size_t, kMaxPatternNodes> perm{};
  std::iota(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        code = (code << 1) | (adj[perm[i]][perm[j]] ? 1u : 0u);
      }
    }
    best = std::min(best, code);
  } while (std::next_permutation(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n)));
  return best;
}

std::pair<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> pattern_shape(Pattern p) {
  using Arcs = std::vector<std::pair<std::size_t, std::size_t>>;
  switch (p) {
    case Pattern::P1: return {2, Arcs{{0, 1}, {1, 0}}};
    case Pattern::P2: return {3, Arcs{{0, 1}, {1, 2}, {2, 0}}};
    case Pattern::P3: return {3, Arcs{{0, 1}, {1, 0}, {1, 2}, {2, 0}}};
    case Pattern::P4: return {3, Arcs{{0, 1}, {1, 0}, {1, 2}, {2, 1}}};
    case Pattern::P5: return {4, Arcs{{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
    case Pattern::P6: return {4, Arcs{{0, 1}, {1, 0}, {0, 2}, {2, 0}, {0, 3}, {3, 0}}};
    case Pattern::P7: return {4, Arcs{{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}}};
    case Pattern::P8: return {4, Arcs{{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 0}}};
    case Pattern::P9: return {4, Arcs{{0, 1}, {1, 0}, {1, 2}, {2, 3}, {3, 0}}};
    case Pattern::P10: return {5, Arcs{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}};
    case Pattern::Other: break;
  }
  return {0, Arcs{}};
}

namespace {

struct CatalogEntry {
  std::size_t nodes;
  std::uint64_t code;
  Pattern pattern;
};

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (int i = 0; i < 10; ++i) {
      auto p = static_cast<Pattern>(i);
      auto [n, arcs] = pattern_shape(p);
      out.push_back({n, canonical_shape(n, arcs), p});
    }
    return out;
  }();
  return entries;
}

}  // namespace

PatternId classify_pattern(const SccCandidate& c) {
  const std::size_t n = c.members.size();
  PatternId out{Pattern::Other, n};
  if (n > kMaxPatternNodes) return out;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  arcs.reserve(c.internal_edges.size());
  auto index_of = [&](const Address& a) {
    return static_cast<std::size_t>(std::lower_bound(c.members.begin(), c.members.end(), a) -
                                    c.members.begin());
  };
  for (const auto& e : c.internal_edges) arcs.emplace_back(index_of(e.from), index_of(e.to));
  const std::uint64_t code = canonical_shape(n, arcs);
  for (const auto& entry : catalog()) {
    if (entry.nodes == n && entry.code == code) {
      out.id = entry.pattern;
      break;
    }
  }
  return out;
}

PatternId classify_pattern(const WashTradeEvent& event) { return classify_pattern(event.candidate); }

// --- marketplaces ---------------------------------------------------------------

std::string marketplace_of(const TransferEdge& edge, const LabelRegistry& registry) {
  if (auto name = registry.marketplace_of(edge.interacted_contract)) return *name;
  return kOffMarket;
}

std::string primary_marketplace(const SccCandidate& c, const LabelRegistry& registry) {
  std::map<std::string, std::size_t> counts;
  for (const auto& e : c.internal_edges) ++counts[marketplace_of(e, registry)];
  std::string best = kOffMarket;
  std::size_t best_count = 0;
  for (const auto& [name, count] : counts) {
    if (count > best_count) {
      best = name;
      best_count = count;
    }
  }
  return best;
}

std::vector<MarketplaceRow> marketplace_breakdown(std::span<const WashTradeEvent> events,
                                                  const LabelRegistry& registry,
                                                  const PriceTable& prices,
                                                  const std::map<std::string, Decimal>& totals) {
  struct Acc {
    std::size_t events = 0;
    std::set<NftId> nfts;
    Decimal usd;
  };
  std::map<std::string, Acc> acc;
  for (const auto& event : events) {
    std::set<std::string> touched;
    for (const auto& edge : event.candidate.internal_edges) {
      auto name = marketplace_of(edge, registry);
      acc[name].usd += prices.to_usd(edge.payment, edge.timestamp);
      touched.insert(std::move(name));
    }
    for (const auto& name : touched) {
      ++acc[name].events;
      acc[name].nfts.insert(event.candidate.nft);
    }
  }
  std::vector<MarketplaceRow> rows;
  for (auto& [name, a] : acc) {
    MarketplaceRow row{name, a.events, a.nfts.size(), a.usd, std::nullopt};
    auto t = totals.find(name);
    if (t != totals.end() && t->second.sign() > 0) {
      row.share = a.usd.to_rational() / t->second.to_rational();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- serial traders -------------------------------------------------------------

SerialReport serial_stats(std::span<const WashTradeEvent> events) {
  SerialReport r;
  for (const auto& e : events) {
    for (const auto& m : e.candidate.members) ++r.activity_counts[m];
  }
  for (const auto& [account, count] : r.activity_counts) {
    if (count >= 2) r.serial.insert(account);
    r.max_activity = std::max(r.max_activity, count);
  }

  std::set<Address> mixed;  // serials seen alongside a non-serial
  std::map<std::pair<Address, Address>, std::size_t> per_collection;  // (account, collection)
  for (const auto& e : events) {
    bool any_serial = false;
    bool all_serial = true;
    for (const auto& m : e.candidate.members) {
      bool s = r.serial.count(m) > 0;
      any_serial |= s;
      all_serial &= s;
    }
    if (any_serial) ++r.events_with_serials;
    if (all_serial) ++r.events_by_serials_only;
    for (const auto& m : e.candidate.members) {
      if (!r.serial.count(m)) continue;
      if (!all_serial) mixed.insert(m);
      ++per_collection[{m, e.candidate.nft.contract}];
    }
  }
  for (const auto& s : r.serial) {
    if (!mixed.count(s)) r.only_with_serials.insert(s);
  }
  for (const auto& [key, count] : per_collection) {
    if (count >= 2) {
      r.repeat_collection.insert(key.first);
      ++r.repeaters_per_collection[key.second];
    }
  }
  return r;
}

ActivityReport describe_activity(const WashTradeEvent& event, std::span<const TransferEvent> history,
                                 const LabelRegistry& registry, const PriceTable& prices) {
  ActivityReport a;
  a.event = &event;
  a.usd_volume = usd_volume(event, prices);
  a.lifetime_seconds = lifetime(event);
  a.acquisition_latency_seconds = acquisition_latency(event, history);
  a.pattern = classify_pattern(event);
  for (const auto& edge : event.candidate.internal_edges) {
    a.marketplaces[marketplace_of(edge, registry)] += prices.to_usd(edge.payment, edge.timestamp);
  }
  a.collection = event.candidate.nft.contract;
  return a;
}

}  // namespace washtrace
