#include <doctest.h>

#include <random>

#include "oracles/scc_oracle.hpp"
#include "support.hpp"
#include "washtrace/errors.hpp"

using namespace testing;

TEST_CASE("index SCCs match the brute-force oracle") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 300; ++round) {
    std::size_t n = 1 + rng() % 12;
    std::size_t m = rng() % 40;
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    for (std::size_t i = 0; i < m; ++i) arcs.emplace_back(rng() % n, rng() % n);
    auto got = strongly_connected_components(n, arcs);
    std::size_t covered = 0;
    for (const auto& c : got) covered += c.size();
    CHECK(covered == n);
    CHECK(oracle::normalize(got) == oracle::mutual_reachability(n, arcs));
  }
}

TEST_CASE("SCC traversal handles long paths without recursion") {
  const std::size_t n = 200000;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t i = 0; i + 1 < n; ++i) arcs.emplace_back(i, i + 1);
  arcs.emplace_back(n - 1, 0);
  auto comps = strongly_connected_components(n, arcs);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].size() == n);
}

TEST_CASE("graph construction and candidate extraction") {
  auto id = nft(1);
  std::vector<TransferEvent> events = {
      move(id, 0, 1, 10, "0"),  // mint from the null address
      move(id, 1, 2, 11, "1"),  move(id, 2, 3, 12, "2"),  move(id, 3, 1, 13, "3"),
      move(id, 1, 4, 14, "4"),  move(id, 4, 4, 15, "5"),  // self-loop singleton
      move(id, 4, 5, 16, "6"),
  };
  events[0].from = Address::null();
  auto g = build_graph(id, events);
  CHECK(g.nodes.size() == 6);
  CHECK(g.edges.size() == events.size());

  auto sccs = find_sccs(g);
  REQUIRE(sccs.size() == 2);
  CHECK(sccs[0].members == std::vector<Address>{addr(1), addr(2), addr(3)});
  CHECK(sccs[0].internal_edges.size() == 3);
  CHECK(sccs[0].first_move == TxPos{11, 0});
  CHECK(sccs[0].last_move == TxPos{13, 0});
  CHECK(sccs[1].members == std::vector<Address>{addr(4)});
  CHECK(sccs[1].has_self_loop());

  auto other = move(nft(2), 1, 2, 20);
  events.push_back(other);
  CHECK_THROWS_AS(build_graph(id, events), MixedNft);
}

TEST_CASE("parallel edges stay in the candidate") {
  auto id = nft(3);
  std::vector<TransferEvent> events = {move(id, 1, 2, 10), move(id, 2, 1, 11), move(id, 1, 2, 12),
                                       move(id, 2, 1, 13)};
  auto sccs = find_sccs(build_graph(id, events));
  REQUIRE(sccs.size() == 1);
  CHECK(sccs[0].internal_edges.size() == 4);
}
