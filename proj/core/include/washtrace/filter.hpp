#pragma once

#include <functional>
#include <vector>

#include "washtrace/graph.hpp"
#include "washtrace/ingest.hpp"

namespace washtrace {

/// Deletes every node for which `drop` holds, with all incident edges.
/// Surviving nodes and edges keep their order.
TransactionGraph remove_nodes_if(const TransactionGraph& graph,
                                 const std::function<bool(const Address&)>& drop);

/// Drops exchange/CeFi/game/escrow accounts and the null address.
TransactionGraph remove_service_accounts(const TransactionGraph& graph,
                                         const LabelRegistry& registry);

/// Drops accounts that hold bytecode.
TransactionGraph remove_contract_accounts(const TransactionGraph& graph,
                                          const CodePresenceOracle& oracle);

/// Removes candidates whose internal edges all carry a zero payment. A
/// candidate with at least one paid edge is kept whole.
std::vector<SccCandidate> drop_zero_volume_candidates(std::vector<SccCandidate> candidates);

bool is_zero_volume(const SccCandidate& candidate);

}  // namespace washtrace
