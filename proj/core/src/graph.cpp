#include "washtrace/graph.hpp"

#include <algorithm>
#include <limits>

#include "washtrace/errors.hpp"

namespace washtrace {

TransferEdge edge_from(const TransferEvent& e) {
  return TransferEdge{e.from,          e.to,        e.timestamp,   e.tx_hash,  e.interacted_contract,
                      e.payment,       e.block_number, e.tx_index, e.log_index};
}

bool TransactionGraph::has_node(const Address& a) const {
  return std::binary_search(nodes.begin(), nodes.end(), a);
}

TransactionGraph build_graph(const NftId& nft, std::span<const TransferEvent> events) {
  TransactionGraph graph;
  graph.nft = nft;
  graph.edges.reserve(events.size());
  for (const auto& e : events) {
    if (!(e.nft == nft)) {
      throw MixedNft("transfer of " + e.nft.str() + " in graph of " + nft.str() + " (tx " +
                     to_hex(e.tx_hash) + ")");
    }
    graph.nodes.push_back(e.from);
    graph.nodes.push_back(e.to);
    graph.edges.push_back(edge_from(e));
  }
  std::sort(graph.nodes.begin(), graph.nodes.end());
  graph.nodes.erase(std::unique(graph.nodes.begin(), graph.nodes.end()), graph.nodes.end());
  return graph;
}

bool SccCandidate::is_member(const Address& a) const {
  return std::binary_search(members.begin(), members.end(), a);
}

bool SccCandidate::has_self_loop() const {
  return std::any_of(internal_edges.begin(), internal_edges.end(),
                     [](const TransferEdge& e) { return e.is_self_loop(); });
}

std::vector<std::vector<std::size_t>> strongly_connected_components(
    std::size_t node_count, std::span<const std::pair<std::size_t, std::size_t>> arcs) {
  std::vector<std::vector<std::size_t>> adjacency(node_count);
  for (const auto& [u, v] : arcs) adjacency[u].push_back(v);

  constexpr std::size_t kUnvisited = 0;
  std::vector<std::size_t> preorder(node_count, kUnvisited);
  std::vector<std::size_t> lowlink(node_count, 0);
  std::vector<std::size_t> cursor(node_count, 0);
  std::vector<bool> assigned(node_count, false);
  std::vector<std::size_t> call_stack;
  std::vector<std::size_t> component_stack;  // non-root nodes awaiting their root
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  for (std::size_t source = 0; source < node_count; ++source) {
    if (preorder[source] != kUnvisited) continue;
    preorder[source] = lowlink[source] = ++counter;
    call_stack.push_back(source);

    while (!call_stack.empty()) {
      const std::size_t v = call_stack.back();
      if (cursor[v] < adjacency[v].size()) {
        const std::size_t w = adjacency[v][cursor[v]++];
        if (preorder[w] == kUnvisited) {
          preorder[w] = lowlink[w] = ++counter;
          call_stack.push_back(w);
        } else if (!assigned[w]) {
          lowlink[v] = std::min(lowlink[v], preorder[w]);
        }
        continue;
      }

      call_stack.pop_back();
      if (lowlink[v] == preorder[v]) {
        std::vector<std::size_t> component{v};
        while (!component_stack.empty() && preorder[component_stack.back()] > preorder[v]) {
          component.push_back(component_stack.back());
          component_stack.pop_back();
        }
        for (auto n : component) assigned[n] = true;
        components.push_back(std::move(component));
      } else {
        component_stack.push_back(v);
      }
      if (!call_stack.empty()) {
        const std::size_t parent = call_stack.back();
        lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
      }
    }
  }
  return components;
}

std::vector<SccCandidate> find_sccs(const TransactionGraph& graph) {
  const std::size_t n = graph.nodes.size();
  auto index_of = [&](const Address& a) {
    return static_cast<std::size_t>(
        std::lower_bound(graph.nodes.begin(), graph.nodes.end(), a) - graph.nodes.begin());
  };

  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  arcs.reserve(graph.edges.size());
  std::vector<bool> self_loop(n, false);
  for (const auto& e : graph.edges) {
    auto u = index_of(e.from);
    auto v = index_of(e.to);
    arcs.emplace_back(u, v);
    if (u == v) self_loop[u] = true;
  }

  auto components = strongly_connected_components(n, arcs);

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> candidate_of(n, kNone);
  std::vector<SccCandidate> candidates;
  for (const auto& component : components) {
    if (component.size() < 2 && !self_loop[component.front()]) continue;
    SccCandidate c;
    c.nft = graph.nft;
    for (auto node : component) {
      c.members.push_back(graph.nodes[node]);
      candidate_of[node] = candidates.size();
    }
    std::sort(c.members.begin(), c.members.end());
    candidates.push_back(std::move(c));
  }

  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    const auto [u, v] = arcs[i];
    if (candidate_of[u] != kNone && candidate_of[u] == candidate_of[v]) {
      candidates[candidate_of[u]].internal_edges.push_back(graph.edges[i]);
    }
  }
  for (auto& c : candidates) {
    auto [lo, hi] = std::minmax_element(
        c.internal_edges.begin(), c.internal_edges.end(),
        [](const TransferEdge& a, const TransferEdge& b) { return a.pos() < b.pos(); });
    c.first_move = lo->pos();
    c.last_move = hi->pos();
  }

  std::sort(candidates.begin(), candidates.end(), [](const SccCandidate& a, const SccCandidate& b) {
    if (a.first_move != b.first_move) return a.first_move < b.first_move;
    return a.members < b.members;
  });
  return candidates;
}

}  // namespace washtrace
