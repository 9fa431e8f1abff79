#include "washtrace/filter.hpp"

#include <algorithm>

namespace washtrace {

TransactionGraph remove_nodes_if(const TransactionGraph& graph,
                                 const std::function<bool(const Address&)>& drop) {
  TransactionGraph out;
  out.nft = graph.nft;
  for (const auto& node : graph.nodes) {
    if (!drop(node)) out.nodes.push_back(node);
  }
  for (const auto& edge : graph.edges) {
    if (out.has_node(edge.from) && out.has_node(edge.to)) out.edges.push_back(edge);
  }
  return out;
}

TransactionGraph remove_service_accounts(const TransactionGraph& graph,
                                         const LabelRegistry& registry) {
  return remove_nodes_if(graph, [&](const Address& a) {
    return a.is_null() || registry.is_service(a);
  });
}

TransactionGraph remove_contract_accounts(const TransactionGraph& graph,
                                          const CodePresenceOracle& oracle) {
  return remove_nodes_if(graph, [&](const Address& a) { return oracle.has_bytecode(a); });
}

bool is_zero_volume(const SccCandidate& candidate) {
  return std::all_of(candidate.internal_edges.begin(), candidate.internal_edges.end(),
                     [](const TransferEdge& e) { return e.payment.amount.is_zero(); });
}

std::vector<SccCandidate> drop_zero_volume_candidates(std::vector<SccCandidate> candidates) {
  std::erase_if(candidates, is_zero_volume);
  return candidates;
}

}  // namespace washtrace
