#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "clusterrep/errors.hpp"
#include "clusterrep/placement.hpp"
#include "clusterrep/simulation.hpp"
#include "fixtures.hpp"

using namespace clusterrep;
using clusterrep::testing::cluster;
using clusterrep::testing::item;
using clusterrep::testing::make_topology;
using clusterrep::testing::PeerSpec;

namespace {

// Peers 0..2 strong with weights 3, 2, 1; peer 3 weak and origin of item 0,
// peer 4 weak and origin of item 1.
struct Fixture {
  Topology topology = make_topology({PeerSpec{.weight = 1.0},
                                     PeerSpec{.weight = 3.0},
                                     PeerSpec{.weight = 2.0},
                                     PeerSpec{.weight = 0.5},
                                     PeerSpec{.weight = 0.4}});
  Catalog catalog{item(0, 3, 1000), item(1, 4, 1000)};
  std::vector<Cluster> clusters{cluster(0, ClusterLabel::Strong, {1, 2, 0}),
                                cluster(1, ClusterLabel::Weak, {3, 4})};
  ClusterTable table{clusters, 5};
  std::vector<NodeWeight> weights = node_weights(topology);
};

}  // namespace

TEST(QueryServer, RegisterCountsPerItem) {
  Fixture f;
  QueryServer qs(f.catalog, f.table);
  qs.register_query({peer_id(0), content_id(0), 1.0});
  EXPECT_EQ(qs.log().size(), 1u);
  EXPECT_EQ(qs.window_count(content_id(0)), 1u);
  for (int i = 0; i < 4; ++i) qs.register_query({peer_id(1), content_id(0), 2.0});
  qs.register_query({peer_id(1), content_id(1), 3.0});
  EXPECT_EQ(qs.window_count(content_id(0)), 5u);
  EXPECT_EQ(qs.window_count(content_id(1)), 1u);
}

TEST(QueryServer, UnknownKeywordLeavesLogUnchanged) {
  Fixture f;
  QueryServer qs(f.catalog, f.table);
  qs.register_query({peer_id(0), content_id(0), 1.0});
  EXPECT_THROW(qs.register_query({peer_id(0), content_id(9), 2.0}), QueryMissError);
  EXPECT_EQ(qs.log().size(), 1u);
}

TEST(Classify, ThresholdIsInclusive) {
  Catalog catalog{item(0, 0, 10), item(1, 1, 10), item(2, 2, 10)};
  const std::vector<Cluster> cs{cluster(0, ClusterLabel::Strong, {0, 1, 2})};
  QueryServer qs(catalog, ClusterTable(cs, 3));
  for (int i = 0; i < 3; ++i) qs.register_query({peer_id(0), content_id(0), 0});
  const ClassMap m = classify_content(qs, 3);
  EXPECT_EQ(m.at(content_id(0)), ContentClass::Class1);
  EXPECT_EQ(m.at(content_id(1)), ContentClass::Class2);
}

TEST(Classify, MixedCounts) {
  Catalog catalog{item(0, 0, 10), item(1, 1, 10), item(2, 2, 10)};
  const std::vector<Cluster> cs{cluster(0, ClusterLabel::Strong, {0, 1, 2})};
  QueryServer qs(catalog, ClusterTable(cs, 3));
  auto hit = [&](std::uint32_t id, int n) {
    for (int i = 0; i < n; ++i) qs.register_query({peer_id(0), content_id(id), 0});
  };
  hit(0, 5);
  hit(1, 2);
  hit(2, 9);
  const ClassMap m = classify_content(qs, 4);
  EXPECT_EQ(m.at(content_id(0)), ContentClass::Class1);
  EXPECT_EQ(m.at(content_id(1)), ContentClass::Class2);
  EXPECT_EQ(m.at(content_id(2)), ContentClass::Class1);
}

TEST(PlanPlacement, ZeroCopiesGivesEmptyPlan) {
  Fixture f;
  ReplicaMap rm(f.topology, f.catalog);
  PlacementConfig cfg;
  cfg.copies_class1 = 0;
  cfg.copies_class2 = 0;
  const ClassMap classes{{content_id(0), ContentClass::Class1}, {content_id(1), ContentClass::Class2}};
  const PlacementPlan plan = plan_placement(classes, f.clusters, f.weights, rm, f.catalog, cfg);
  EXPECT_TRUE(plan.assignments.empty());
  EXPECT_TRUE(plan.failures.empty());
}

TEST(PlanPlacement, Class1TakesHeaviestStrongPeers) {
  Fixture f;
  ReplicaMap rm(f.topology, f.catalog);
  PlacementConfig cfg;
  cfg.copies_class1 = 2;
  const ClassMap classes{{content_id(0), ContentClass::Class1}};
  const PlacementPlan plan = plan_placement(classes, f.clusters, f.weights, rm, f.catalog, cfg);
  EXPECT_EQ(plan.assignments.at(content_id(0)), (std::vector<PeerId>{peer_id(1), peer_id(2)}));
  EXPECT_TRUE(plan.shortfalls.empty());
}

TEST(PlanPlacement, SkipsPeerWithoutDisk) {
  Fixture f;
  f.topology = make_topology({PeerSpec{.weight = 1.0}, PeerSpec{.weight = 3.0, .disk = 999},
                              PeerSpec{.weight = 2.0}, PeerSpec{.weight = 0.5},
                              PeerSpec{.weight = 0.4}});
  ReplicaMap rm(f.topology, f.catalog);
  PlacementConfig cfg;
  cfg.copies_class1 = 2;
  const ClassMap classes{{content_id(0), ContentClass::Class1}};
  const PlacementPlan plan = plan_placement(classes, f.clusters, f.weights, rm, f.catalog, cfg);
  EXPECT_EQ(plan.assignments.at(content_id(0)), (std::vector<PeerId>{peer_id(2), peer_id(0)}));
}

TEST(PlanPlacement, ShortfallAndFailureRecorded) {
  Fixture f;
  ReplicaMap rm(f.topology, f.catalog);
  PlacementConfig cfg;
  cfg.copies_class1 = 5;
  cfg.copies_class2 = 3;
  // Item 0's origin is weak peer 3, so only peer 4 is a weak target for it.
  const ClassMap classes{{content_id(0), ContentClass::Class2}, {content_id(1), ContentClass::Class1}};
  const PlacementPlan plan = plan_placement(classes, f.clusters, f.weights, rm, f.catalog, cfg);
  ASSERT_EQ(plan.shortfalls.size(), 2u);
  EXPECT_EQ(plan.assignments.at(content_id(0)), (std::vector<PeerId>{peer_id(4)}));
  EXPECT_EQ(plan.assignments.at(content_id(1)).size(), 3u);

  const std::vector<Cluster> all_weak{cluster(0, ClusterLabel::Weak, {0, 1, 2, 3, 4})};
  const PlacementPlan none = plan_placement({{content_id(0), ContentClass::Class1}}, all_weak,
                                            f.weights, rm, f.catalog, cfg);
  EXPECT_EQ(none.failures, std::vector<ContentId>{content_id(0)});
}

TEST(ExecutePlacement, EmptyPlanChangesNothing) {
  Fixture f;
  ReplicaMap rm(f.topology, f.catalog);
  const auto before = std::vector<PeerStore>(rm.stores().begin(), rm.stores().end());
  const PlacementResult r = execute_placement(rm, PlacementPlan{}, f.catalog, f.weights, f.table, f.topology, 0);
  EXPECT_TRUE(r.announcements.empty());
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_EQ(rm.stores()[i].disk_free, before[i].disk_free);
}

TEST(ExecutePlacement, DiskBookkeepingAndAnnouncement) {
  Fixture f;
  f.topology = make_topology({PeerSpec{.weight = 1.0}, PeerSpec{.weight = 3.0, .disk = 5000},
                              PeerSpec{.weight = 2.0}, PeerSpec{.weight = 0.5},
                              PeerSpec{.weight = 0.4}});
  ReplicaMap rm(f.topology, f.catalog);
  PlacementPlan plan;
  plan.assignments[content_id(0)] = {peer_id(1)};
  const PlacementResult r = execute_placement(rm, plan, f.catalog, f.weights, f.table, f.topology, 100);
  EXPECT_EQ(rm.store(peer_id(1)).disk_free, 4000u);
  ASSERT_EQ(r.announcements.size(), 1u);
  EXPECT_EQ(r.announcements[0].nid, peer_id(1));
  EXPECT_EQ(r.announcements[0].clid, ClusterLabel::Strong);
  EXPECT_EQ(r.announcements[0].contents, std::vector<ContentId>{content_id(0)});
  const HostedCopy* copy = rm.store(peer_id(1)).find(content_id(0));
  ASSERT_NE(copy, nullptr);
  EXPECT_EQ(copy->host_weight, 3.0);
  EXPECT_EQ(copy->available_at_ms, 100 + transfer_time(f.topology, peer_id(3), peer_id(1), 1000));
}

TEST(ExecutePlacement, TwoItemsOnePeerOneAnnouncement) {
  Fixture f;
  ReplicaMap rm(f.topology, f.catalog);
  PlacementPlan plan;
  plan.assignments[content_id(0)] = {peer_id(2)};
  plan.assignments[content_id(1)] = {peer_id(2)};
  const PlacementResult r = execute_placement(rm, plan, f.catalog, f.weights, f.table, f.topology, 0);
  ASSERT_EQ(r.announcements.size(), 1u);
  EXPECT_EQ(r.announcements[0].contents, (std::vector<ContentId>{content_id(0), content_id(1)}));
}

TEST(ExecutePlacement, CopyThatNoLongerFitsIsSkipped) {
  Fixture f;
  f.topology = make_topology({PeerSpec{.weight = 1.0}, PeerSpec{.weight = 3.0, .disk = 1500},
                              PeerSpec{.weight = 2.0}, PeerSpec{.weight = 0.5},
                              PeerSpec{.weight = 0.4}});
  ReplicaMap rm(f.topology, f.catalog);
  PlacementPlan plan;
  plan.assignments[content_id(0)] = {peer_id(1)};
  plan.assignments[content_id(1)] = {peer_id(1)};
  const PlacementResult r = execute_placement(rm, plan, f.catalog, f.weights, f.table, f.topology, 0);
  EXPECT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(rm.store(peer_id(1)).disk_free, 500u);
}

TEST(RouteQuery, SingleStrongHolder) {
  Fixture f;
  ReplicaMap rm(f.topology, f.catalog);
  ASSERT_TRUE(rm.add_replica(peer_id(2), f.catalog[0], 2.0, 0.0));
  EXPECT_EQ(route_query({peer_id(4), content_id(0), 0}, f.table, rm, f.catalog, f.topology, 0), peer_id(2));
}

TEST(RouteQuery, NearestStrongHolderWins) {
  // Requester 4; holders 0 (e2e 10) and 1 (e2e 30).
  Fixture f;
  f.topology = make_topology({PeerSpec{.weight = 1.0, .up_ms = 10, .down_ms = 0},
                              PeerSpec{.weight = 3.0, .up_ms = 30, .down_ms = 0},
                              PeerSpec{.weight = 2.0}, PeerSpec{.weight = 0.5},
                              PeerSpec{.weight = 0.4, .up_ms = 0, .down_ms = 0}});
  ReplicaMap rm(f.topology, f.catalog);
  ASSERT_TRUE(rm.add_replica(peer_id(0), f.catalog[0], 1.0, 0.0));
  ASSERT_TRUE(rm.add_replica(peer_id(1), f.catalog[0], 3.0, 0.0));
  EXPECT_EQ(e2e_delay(f.topology, peer_id(0), peer_id(4)), 10.0);
  EXPECT_EQ(e2e_delay(f.topology, peer_id(1), peer_id(4)), 30.0);
  EXPECT_EQ(route_query({peer_id(4), content_id(0), 0}, f.table, rm, f.catalog, f.topology, 0), peer_id(0));
}

TEST(RouteQuery, FallsBackToWeakThenOrigin) {
  Fixture f;
  ReplicaMap rm(f.topology, f.catalog);
  // origin only
  EXPECT_EQ(route_query({peer_id(0), content_id(0), 0}, f.table, rm, f.catalog, f.topology, 0), peer_id(3));
  // weak replica at 4 competes with weak origin 3; both weak, nearest wins (all equal -> lower id)
  ASSERT_TRUE(rm.add_replica(peer_id(4), f.catalog[0], 0.4, 0.0));
  EXPECT_EQ(route_query({peer_id(0), content_id(0), 0}, f.table, rm, f.catalog, f.topology, 0), peer_id(3));
  // a copy still in transit is not a candidate
  ASSERT_TRUE(rm.add_replica(peer_id(1), f.catalog[0], 3.0, 50.0));
  EXPECT_EQ(route_query({peer_id(0), content_id(0), 0}, f.table, rm, f.catalog, f.topology, 10), peer_id(3));
  EXPECT_EQ(route_query({peer_id(0), content_id(0), 0}, f.table, rm, f.catalog, f.topology, 50), peer_id(1));
}

TEST(RouteQuery, OfflineHoldersSkipped) {
  Fixture f;
  ReplicaMap rm(f.topology, f.catalog);
  ASSERT_TRUE(rm.add_replica(peer_id(1), f.catalog[0], 3.0, 0.0));
  rm.take_offline(peer_id(1), f.catalog);
  EXPECT_EQ(route_query({peer_id(0), content_id(0), 0}, f.table, rm, f.catalog, f.topology, 0), peer_id(3));
  rm.take_offline(peer_id(3), f.catalog);
  EXPECT_THROW(route_query({peer_id(0), content_id(0), 0}, f.table, rm, f.catalog, f.topology, 0), RoutingError);
}

TEST(ReplicaMap, OriginCopiesAreNeverRemoved) {
  Fixture f;
  ReplicaMap rm(f.topology, f.catalog);
  EXPECT_FALSE(rm.remove_replica(peer_id(3), f.catalog[0]));
  EXPECT_TRUE(rm.store(peer_id(3)).hosts(content_id(0)));
  rm.take_offline(peer_id(3), f.catalog);
  EXPECT_TRUE(rm.store(peer_id(3)).hosts(content_id(0)));
}

TEST(ReplicaMap, SlotsLimitReplicas) {
  Fixture f;
  f.topology = make_topology({PeerSpec{.weight = 1.0, .slots = 1}, PeerSpec{.weight = 3.0},
                              PeerSpec{.weight = 2.0}, PeerSpec{.weight = 0.5},
                              PeerSpec{.weight = 0.4}});
  ReplicaMap rm(f.topology, f.catalog);
  EXPECT_TRUE(rm.add_replica(peer_id(0), f.catalog[0], 1.0, 0));
  EXPECT_FALSE(rm.add_replica(peer_id(0), f.catalog[1], 1.0, 0));
}

// Placement invariants over generated worlds.
TEST(PlacementProperties, ClassDisciplineDiskAndAnnouncements) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    SimulationConfig cfg;
    cfg.seed = seed;
    cfg.topology.n_peers = 30 + seed;
    cfg.workload.catalog_size = 25;
    cfg.topology.disk_capacity_bytes = {1500, 6000};
    const World w = build_world(cfg);
    ReplicaMap rm(w.topology, w.catalog);
    ClassMap classes;
    for (const ContentItem& c : w.catalog) {
      classes[c.id] = index_of(c.id) % 3 == 0 ? ContentClass::Class1 : ContentClass::Class2;
    }
    const PlacementPlan plan = plan_placement(classes, w.clusters, w.weights, rm, w.catalog, cfg.placement);
    const PlacementResult res = execute_placement(rm, plan, w.catalog, w.weights, w.table, w.topology, 0);
    EXPECT_TRUE(res.skipped.empty());

    std::uint64_t used = 0, expected = 0;
    std::set<std::pair<PeerId, ContentId>> hosted;
    for (const PeerStore& s : rm.stores()) {
      used += s.disk_capacity - s.disk_free;
      for (const HostedCopy& c : s.copies) {
        expected += catalog_item(w.catalog, c.item).size;
        hosted.insert({s.peer, c.item});
        if (c.origin) continue;
        const ClusterLabel want =
            classes.at(c.item) == ContentClass::Class1 ? ClusterLabel::Strong : ClusterLabel::Weak;
        EXPECT_EQ(w.table.label(s.peer), want);
        EXPECT_NE(catalog_item(w.catalog, c.item).origin, s.peer);
      }
    }
    EXPECT_EQ(used, expected);

    // every peer's announcement, taken together, is the hosted relation
    std::set<std::pair<PeerId, ContentId>> announced;
    for (const PeerStore& s : rm.stores()) {
      for (ContentId id : announce(rm, w.table, s.peer).contents) announced.insert({s.peer, id});
    }
    EXPECT_EQ(announced, hosted);
    // and the announcements emitted by placement cover exactly the peers that gained copies
    std::set<PeerId> touched;
    for (const ReplicaTransfer& t : res.transfers) touched.insert(t.target);
    std::set<PeerId> ann;
    for (const auto& a : res.announcements) ann.insert(a.nid);
    EXPECT_EQ(ann, touched);

    // routing soundness
    for (const ContentItem& c : w.catalog) {
      for (std::uint32_t r = 0; r < w.topology.size(); r += 7) {
        const PeerId who = route_query({peer_id(r), c.id, 0}, w.table, rm, w.catalog, w.topology, 1e9);
        EXPECT_TRUE(rm.store(who).hosts(c.id));
      }
    }
  }
}
