#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "washtrace/ingest.hpp"
#include "washtrace/types.hpp"

namespace washtrace {

/// A move of the NFT from `from` to `to` with its time, hash, interacted
/// contract, payment and chain position.
struct TransferEdge {
  Address from;
  Address to;
  Timestamp timestamp = 0;
  TxHash tx_hash{};
  Address interacted_contract;
  Payment payment;
  std::uint64_t block_number = 0;
  std::uint32_t tx_index = 0;
  std::uint32_t log_index = 0;

  TxPos pos() const { return {block_number, tx_index}; }
  bool is_self_loop() const { return from == to; }

  friend bool operator==(const TransferEdge&, const TransferEdge&) = default;
};

TransferEdge edge_from(const TransferEvent& event);

/// Directed multigraph of one NFT's transfers. Nodes are sorted; edges keep
/// chain order.
struct TransactionGraph {
  NftId nft;
  std::vector<Address> nodes;
  std::vector<TransferEdge> edges;

  bool has_node(const Address& a) const;
};

/// Throws MixedNft if an event belongs to another NFT.
TransactionGraph build_graph(const NftId& nft, std::span<const TransferEvent> events);

struct SccCandidate {
  NftId nft;
  std::vector<Address> members;  // sorted
  std::vector<TransferEdge> internal_edges;  // chain order
  TxPos first_move;
  TxPos last_move;

  bool is_member(const Address& a) const;
  bool has_self_loop() const;
};

/// Maximal strongly connected components with two or more nodes, plus single
/// nodes carrying a self-loop. Sorted by first_move, then members.
std::vector<SccCandidate> find_sccs(const TransactionGraph& graph);

/// Strongly connected components of an index graph (Tarjan with Nuutila's
/// root-only stack). Every node appears in exactly one component, including
/// trivial ones; components are emitted in reverse topological order.
std::vector<std::vector<std::size_t>> strongly_connected_components(
    std::size_t node_count, std::span<const std::pair<std::size_t, std::size_t>> arcs);

}  // namespace washtrace
