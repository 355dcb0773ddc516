#include <gtest/gtest.h>

#include <map>
#include <random>

#include "clusterrep/balancing.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace clusterrep;
using clusterrep::testing::item;
using clusterrep::testing::make_topology;
using clusterrep::testing::PeerSpec;

namespace {

Catalog uniform_catalog(std::size_t n, std::uint64_t size) {
  Catalog c;
  for (std::uint32_t i = 0; i < n; ++i) c.push_back(item(i, 0, size));
  return c;
}

HotItemList hot(std::initializer_list<std::uint32_t> ids) {
  HotItemList h;
  for (auto i : ids) h.items.push_back(content_id(i));
  return h;
}

LoadReport report(std::uint32_t p, std::uint64_t load, std::uint64_t disk = 10000) {
  return {peer_id(p), load, disk};
}

LeaderView leader(std::uint32_t id, std::vector<std::pair<std::uint64_t, std::uint64_t>> members) {
  LeaderView v{cluster_id(id), {}};
  std::uint32_t p = id * 100;
  for (auto [load, disk] : members) v.members.push_back({peer_id(p++), load, disk});
  return v;
}

}  // namespace

// ---- cleanup ---------------------------------------------------------------

TEST(Cleanup, AlphaBoundaryIsStrict) {
  const Topology t = make_topology({PeerSpec{}, PeerSpec{}, PeerSpec{}});
  const Catalog catalog{item(0, 0, 1000), item(1, 1, 700)};
  ReplicaMap rm(t, catalog);
  ASSERT_TRUE(rm.add_replica(peer_id(2), catalog[0], 3, 0));
  ASSERT_TRUE(rm.add_replica(peer_id(2), catalog[1], 3, 0));
  rm.store(peer_id(2)).find(content_id(0))->window_accesses = 2;  // alpha - 1
  rm.store(peer_id(2)).find(content_id(1))->window_accesses = 3;  // alpha
  const std::uint64_t before = rm.store(peer_id(2)).disk_free;

  const auto deleted = cleanup_replicas(rm, peer_id(2), catalog, 3);
  EXPECT_EQ(deleted, std::vector<ContentId>{content_id(0)});
  EXPECT_FALSE(rm.store(peer_id(2)).hosts(content_id(0)));
  EXPECT_TRUE(rm.store(peer_id(2)).hosts(content_id(1)));
  EXPECT_EQ(rm.store(peer_id(2)).disk_free, before + 1000);
  EXPECT_EQ(rm.store(peer_id(2)).find(content_id(1))->window_accesses, 0u);
}

TEST(Cleanup, OriginCopyKept) {
  const Topology t = make_topology({PeerSpec{}, PeerSpec{}});
  const Catalog catalog{item(0, 0, 1000)};
  ReplicaMap rm(t, catalog);
  EXPECT_TRUE(cleanup_replicas(rm, peer_id(0), catalog, 5).empty());
  EXPECT_TRUE(rm.store(peer_id(0)).hosts(content_id(0)));
}

TEST(Cleanup, NoReplicasNoChange) {
  const Topology t = make_topology({PeerSpec{}, PeerSpec{}});
  const Catalog catalog{item(0, 0, 1000)};
  ReplicaMap rm(t, catalog);
  EXPECT_TRUE(cleanup_replicas(rm, peer_id(1), catalog, 5).empty());
  EXPECT_EQ(rm.store(peer_id(1)).disk_free, rm.store(peer_id(1)).disk_capacity);
}

// ---- availability ------------------------------------------------------------

TEST(Availability, NoRiskNoMoves) {
  const Catalog catalog = uniform_catalog(3, 100);
  std::vector<MemberSnapshot> ms{{peer_id(0), 5, 5000, 4, 0.0, {content_id(0)}},
                                 {peer_id(1), 1, 5000, 4, 0.0, {}}};
  EXPECT_TRUE(availability_replicate(ms, hot({0}), catalog, BalancingConfig{}).empty());
}

TEST(Availability, RiskyPeerReplicatesHottest) {
  const Catalog catalog = uniform_catalog(3, 100);
  std::vector<MemberSnapshot> ms{{peer_id(0), 5, 5000, 4, 0.9, {content_id(0)}},
                                 {peer_id(1), 1, 5000, 4, 0.0, {}}};
  const auto moves = availability_replicate(ms, hot({0}), catalog, BalancingConfig{});
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0], (ReplicationMove{content_id(0), peer_id(0), peer_id(1), MoveReason::Availability}));
}

TEST(Availability, AlreadyCoveredItemNotCopied) {
  const Catalog catalog = uniform_catalog(3, 100);
  std::vector<MemberSnapshot> ms{{peer_id(0), 5, 5000, 4, 0.9, {content_id(0)}},
                                 {peer_id(1), 1, 5000, 4, 0.0, {content_id(0)}},
                                 {peer_id(2), 0, 5000, 4, 0.0, {}}};
  EXPECT_TRUE(availability_replicate(ms, hot({0}), catalog, BalancingConfig{}).empty());
}

TEST(Availability, PicksLowestLoadedTargetWithRoom) {
  const Catalog catalog = uniform_catalog(3, 100);
  std::vector<MemberSnapshot> ms{{peer_id(0), 5, 5000, 4, 0.5, {content_id(0), content_id(1)}},
                                 {peer_id(1), 0, 50, 4, 0.0, {}},
                                 {peer_id(2), 3, 5000, 4, 0.0, {}},
                                 {peer_id(3), 2, 5000, 4, 0.0, {}}};
  const auto moves = availability_replicate(ms, hot({1, 0}), catalog, BalancingConfig{});
  ASSERT_EQ(moves.size(), 2u);
  EXPECT_EQ(moves[0].item, content_id(1));
  EXPECT_EQ(moves[0].target, peer_id(3));
  EXPECT_EQ(moves[1].target, peer_id(3));
}

// ---- intra-cluster -----------------------------------------------------------

TEST(Intra, EqualLoadsNoMoves) {
  const Catalog catalog = uniform_catalog(4, 100);
  const std::vector<LoadReport> rs{report(0, 7), report(1, 7), report(2, 7)};
  std::map<PeerId, HotItemList> hp{{peer_id(0), hot({0})}, {peer_id(1), hot({1})}, {peer_id(2), hot({2})}};
  BalancingConfig cfg;
  cfg.load_diff_threshold = 0.5;
  EXPECT_TRUE(intra_cluster_balance(rs, hp, catalog, cfg).empty());
}

TEST(Intra, FourPeerTrace) {
  const Catalog catalog = uniform_catalog(8, 100);
  // shuffled input order on purpose
  const std::vector<LoadReport> rs{report(3, 3), report(1, 10), report(4, 1), report(2, 8)};
  std::map<PeerId, HotItemList> hp{{peer_id(1), hot({5, 6})}, {peer_id(2), hot({7})},
                                   {peer_id(3), hot({})}, {peer_id(4), hot({})}};
  BalancingConfig cfg;
  cfg.load_diff_threshold = 5;
  cfg.s_th = 1000;
  const auto moves = intra_cluster_balance(rs, hp, catalog, cfg);
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0], (ReplicationMove{content_id(5), peer_id(1), peer_id(4), MoveReason::IntraBalance}));
}

TEST(Intra, TwoPeersLightPrunedByDisk) {
  const Catalog catalog = uniform_catalog(2, 100);
  const std::vector<LoadReport> rs{report(0, 10, 5000), report(1, 2, 10)};
  std::map<PeerId, HotItemList> hp{{peer_id(0), hot({0})}};
  BalancingConfig cfg;
  cfg.load_diff_threshold = 1;
  cfg.s_th = 1000;
  EXPECT_TRUE(intra_cluster_balance(rs, hp, catalog, cfg).empty());
}

TEST(Intra, SkipsItemsTheLightPeerAlreadyHolds) {
  const Catalog catalog = uniform_catalog(3, 100);
  const std::vector<LoadReport> rs{report(0, 100), report(1, 0)};
  std::map<PeerId, HotItemList> hp{{peer_id(0), hot({2, 1})}, {peer_id(1), hot({2})}};
  BalancingConfig cfg;
  cfg.load_diff_threshold = 1;
  const auto moves = intra_cluster_balance(rs, hp, catalog, cfg);
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].item, content_id(1));
}

TEST(Intra, MatchesOracleOnRandomClusters) {
  std::mt19937_64 eng(21);
  const std::vector<std::uint64_t> sizes{100, 300, 900, 2000, 50, 700};
  Catalog catalog;
  for (std::uint32_t i = 0; i < sizes.size(); ++i) catalog.push_back(item(i, 0, sizes[i]));
  BalancingConfig cfg;
  cfg.s_th = 1000;
  cfg.load_diff_threshold = 20;
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t n = 1 + eng() % 9;
    std::vector<LoadReport> rs;
    std::map<PeerId, HotItemList> hp;
    std::vector<oracle::Peer> op;
    for (std::uint32_t p = 0; p < n; ++p) {
      const std::uint64_t load = eng() % 60, disk = eng() % 2500;
      HotItemList h;
      std::vector<std::uint32_t> raw;
      for (std::uint32_t it = 0; it < sizes.size(); ++it) {
        if (eng() % 3 == 0) {
          h.items.push_back(content_id(it));
          raw.push_back(it);
        }
      }
      rs.push_back({peer_id(p), load, disk});
      hp[peer_id(p)] = h;
      op.push_back({p, load, disk, raw});
    }
    const auto got = intra_cluster_balance(rs, hp, catalog, cfg);
    const auto want = oracle::intra(op, cfg.load_diff_threshold, cfg.s_th, sizes);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(index_of(got[i].item), want[i].item);
      EXPECT_EQ(index_of(got[i].source), want[i].from);
      EXPECT_EQ(index_of(got[i].target), want[i].to);
    }
    // legality
    for (const ReplicationMove& m : got) {
      const LoadReport& s = *std::find_if(rs.begin(), rs.end(), [&](auto& r) { return r.peer == m.source; });
      const LoadReport& t = *std::find_if(rs.begin(), rs.end(), [&](auto& r) { return r.peer == m.target; });
      EXPECT_NE(m.source, m.target);
      EXPECT_TRUE(hp[m.source].contains(m.item));
      EXPECT_FALSE(hp[m.target].contains(m.item));
      EXPECT_GE(t.disk_free, catalog_item(catalog, m.item).size);
      EXPECT_GT(static_cast<double>(s.load) - static_cast<double>(t.load), cfg.load_diff_threshold);
    }
  }
}

// ---- inter-cluster -----------------------------------------------------------

TEST(Inter, EqualLoadDoesNotTrigger) {
  const Catalog catalog = uniform_catalog(3, 100);
  const LeaderView self = leader(0, {{100, 5000}});
  const std::vector<LeaderView> nb{leader(1, {{100, 5000}})};
  const InterAssignment a = inter_cluster_balance(self, nb, hot({0}), catalog, BalancingConfig{});
  EXPECT_FALSE(a.triggered);
  EXPECT_TRUE(a.assignment.empty());
}

TEST(Inter, TriggerIsStrict) {
  const Catalog catalog = uniform_catalog(3, 100);
  const std::vector<LeaderView> nb{leader(1, {{80, 5000}}), leader(2, {{120, 5000}})};
  EXPECT_TRUE(inter_cluster_balance(leader(0, {{111, 0}}), nb, hot({0}), catalog, BalancingConfig{}).triggered);
  EXPECT_FALSE(inter_cluster_balance(leader(0, {{110, 0}}), nb, hot({0}), catalog, BalancingConfig{}).triggered);
}

TEST(Inter, RoundRobinTwoLeadersThreeItems) {
  const Catalog catalog = uniform_catalog(3, 100);
  // L1 (cluster 2) load 5, L2 (cluster 1) load 9
  const std::vector<LeaderView> nb{leader(1, {{9, 5000}}), leader(2, {{5, 5000}})};
  const InterAssignment a = inter_cluster_balance(leader(0, {{100, 0}}), nb, hot({0, 1, 2}), catalog,
                                                  BalancingConfig{});
  ASSERT_TRUE(a.triggered);
  ASSERT_EQ(a.willing.size(), 2u);
  EXPECT_EQ(a.willing[0].cluster, cluster_id(2));
  const std::vector<std::pair<ContentId, ClusterId>> want{
      {content_id(0), cluster_id(2)}, {content_id(1), cluster_id(1)}, {content_id(2), cluster_id(2)}};
  EXPECT_EQ(a.assignment, want);
}

TEST(Inter, MoreLeadersThanItems) {
  const Catalog catalog = uniform_catalog(3, 100);
  const std::vector<LeaderView> nb{leader(1, {{9, 5000}}), leader(2, {{5, 5000}}), leader(3, {{1, 5000}})};
  const InterAssignment a = inter_cluster_balance(leader(0, {{100, 0}}), nb, hot({0, 1}), catalog,
                                                  BalancingConfig{});
  const std::vector<std::pair<ContentId, ClusterId>> want{{content_id(0), cluster_id(3)},
                                                          {content_id(1), cluster_id(2)}};
  EXPECT_EQ(a.assignment, want);
}

TEST(Inter, NoWillingLeaders) {
  const Catalog catalog = uniform_catalog(3, 100);
  // disk_free must exceed the smallest hot item strictly
  const std::vector<LeaderView> nb{leader(1, {{1, 100}}), leader(2, {{2, 50}})};
  const InterAssignment a = inter_cluster_balance(leader(0, {{100, 0}}), nb, hot({0, 1}), catalog,
                                                  BalancingConfig{});
  EXPECT_TRUE(a.triggered);
  EXPECT_TRUE(a.willing.empty());
  EXPECT_TRUE(a.assignment.empty());
  EXPECT_EQ(a.unassigned.size(), 2u);
}

TEST(Inter, WillingTotalsCountOnlyWillingMembers) {
  const Catalog catalog = uniform_catalog(3, 100);
  const std::vector<LeaderView> nb{leader(1, {{7, 500}, {40, 20}})};
  const InterAssignment a = inter_cluster_balance(leader(0, {{100, 0}}), nb, hot({0}), catalog,
                                                  BalancingConfig{});
  ASSERT_EQ(a.willing.size(), 1u);
  EXPECT_EQ(a.willing[0].total_load, 7u);
  EXPECT_EQ(a.willing[0].total_space, 500u);
}

TEST(Inter, NoNeighborsNeverTriggers) {
  const Catalog catalog = uniform_catalog(3, 100);
  EXPECT_FALSE(inter_cluster_balance(leader(0, {{100, 0}}), {}, hot({0}), catalog, BalancingConfig{}).triggered);
}

TEST(ClusterLoad, Sums) {
  EXPECT_EQ(compute_cluster_load(std::vector<LoadReport>{report(0, 7)}), 7u);
  EXPECT_EQ(compute_cluster_load(std::vector<LoadReport>{report(0, 3), report(1, 4), report(2, 5)}), 12u);
  EXPECT_EQ(compute_cluster_load(std::vector<LoadReport>{report(0, 0), report(1, 0)}), 0u);
}

TEST(PlaceAssigned, LightestMemberFirst) {
  const Catalog catalog = uniform_catalog(3, 100);
  std::vector<MemberSnapshot> rx{{peer_id(5), 10, 5000, 2, 0, {}},
                                 {peer_id(6), 2, 5000, 2, 0, {content_id(0)}},
                                 {peer_id(7), 4, 5000, 2, 0, {}}};
  const std::vector<std::pair<ContentId, PeerId>> items{{content_id(0), peer_id(1)},
                                                        {content_id(1), peer_id(1)}};
  const auto moves = place_assigned_items(items, rx, catalog);
  ASSERT_EQ(moves.size(), 2u);
  EXPECT_EQ(moves[0].target, peer_id(7));  // peer 6 already holds item 0
  EXPECT_EQ(moves[1].target, peer_id(6));
}

TEST(DepartureEstimate, Ewma) {
  EXPECT_DOUBLE_EQ(update_departure_estimate(0.0, true, 0.25), 0.25);
  EXPECT_DOUBLE_EQ(update_departure_estimate(0.5, false, 0.5), 0.25);
}

TEST(HotList, OrdersByCountThenId) {
  const HotItemList h = make_hot_list({{content_id(3), 2}, {content_id(1), 5}, {content_id(0), 2}});
  EXPECT_EQ(h, hot({1, 0, 3}));
}
