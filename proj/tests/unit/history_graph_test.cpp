#include "evograph/error.hpp"
#include "evograph/history_graph.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace evograph;

namespace {

Timestamp at_second(int s) { return Timestamp{std::chrono::seconds(s)}; }

Checkpoint node(const std::string& id, CheckpointKind kind, std::vector<std::string> parents, int second) {
    Checkpoint cp;
    cp.id = CheckpointId{id};
    cp.kind = kind;
    for (auto& p : parents)
        cp.parents.push_back(CheckpointId{p});
    cp.snapshot = SnapshotId{"s-" + id};
    cp.chat = ChatId{"c-" + id};
    cp.title = id;
    cp.created_at = at_second(second);
    return cp;
}

DevGraph origin_only() { return DevGraph::with_origin(node("O", CheckpointKind::Origin, {}, 0)); }

CheckpointId id(const std::string& s) { return CheckpointId{s}; }

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::Io;
}

} // namespace

TEST(DevGraph, AddMakesNodeActive) {
    auto g = origin_only();
    g.add(node("A", CheckpointKind::ManualChange, {"O"}, 1));
    EXPECT_EQ(g.active(), id("A"));
    EXPECT_EQ(g.size(), 2u);
    EXPECT_EQ(g.children(id("O")), std::vector<CheckpointId>{id("A")});
}

TEST(DevGraph, BranchingFromEarlierCheckpoint) {
    auto g = origin_only();
    g.add(node("A", CheckpointKind::AiPrompt, {"O"}, 1));
    g.set_active(id("O"));
    g.add(node("B", CheckpointKind::AiPrompt, {"O"}, 2));
    EXPECT_EQ(g.children(id("O")).size(), 2u);
    EXPECT_EQ(g.lowest_common_ancestor(id("A"), id("B")), id("O"));
    g.validate();
}

TEST(DevGraph, RejectsBadParents) {
    auto g = origin_only();
    EXPECT_EQ(code_of([&] { g.add(node("A", CheckpointKind::ManualChange, {"missing"}, 1)); }), ErrorCode::NotFound);
    EXPECT_EQ(code_of([&] { g.add(node("A", CheckpointKind::ManualChange, {}, 1)); }), ErrorCode::Integrity);
    EXPECT_EQ(code_of([&] { g.add(node("M", CheckpointKind::Merge, {"O", "O"}, 1)); }), ErrorCode::Integrity);
    EXPECT_EQ(code_of([&] { g.add(node("X", CheckpointKind::Origin, {}, 1)); }), ErrorCode::Validation);
    EXPECT_EQ(g.size(), 1u);
}

TEST(DevGraph, DeleteMiddleOfChainReattachesChild) {
    auto g = origin_only();
    g.add(node("A", CheckpointKind::ManualChange, {"O"}, 1));
    g.add(node("B", CheckpointKind::ManualChange, {"A"}, 2));
    auto delta = g.remove(id("A"));
    EXPECT_EQ(delta.new_parent, id("O"));
    EXPECT_EQ(delta.reattached, std::vector<CheckpointId>{id("B")});
    EXPECT_FALSE(delta.active_moved);
    EXPECT_EQ(g.at(id("B")).parents, std::vector<CheckpointId>{id("O")});
    g.validate();
}

TEST(DevGraph, DeleteActiveLeafActivatesParent) {
    auto g = origin_only();
    g.add(node("A", CheckpointKind::ManualChange, {"O"}, 1));
    g.add(node("B", CheckpointKind::ManualChange, {"A"}, 2));
    auto delta = g.remove(id("B"));
    EXPECT_TRUE(delta.active_moved);
    EXPECT_EQ(g.active(), id("A"));
}

TEST(DevGraph, OriginCannotBeDeleted) {
    auto g = origin_only();
    EXPECT_EQ(code_of([&] { g.remove(id("O")); }), ErrorCode::Forbidden);
    EXPECT_EQ(code_of([&] { g.remove(id("nope")); }), ErrorCode::NotFound);
}

TEST(DevGraph, DeletingMergeParentKeepsSecondarySlot) {
    auto g = origin_only();
    g.add(node("A", CheckpointKind::ManualChange, {"O"}, 1));
    g.set_active(id("O"));
    g.add(node("B", CheckpointKind::ManualChange, {"O"}, 2));
    g.add(node("M", CheckpointKind::Merge, {"B", "A"}, 3));
    g.remove(id("A"));
    EXPECT_EQ(g.at(id("M")).parents, (std::vector<CheckpointId>{id("B"), id("O")}));
    g.validate();
}

TEST(DevGraph, DeletingBothSidesOfMergeCollapsesDuplicateParent) {
    auto g = origin_only();
    g.add(node("A", CheckpointKind::ManualChange, {"O"}, 1));
    g.set_active(id("O"));
    g.add(node("B", CheckpointKind::ManualChange, {"O"}, 2));
    g.add(node("M", CheckpointKind::Merge, {"B", "A"}, 3));
    g.remove(id("A"));
    g.remove(id("B"));
    EXPECT_EQ(g.at(id("M")).parents, std::vector<CheckpointId>{id("O")});
    g.validate();
}

TEST(DevGraph, EditMetadata) {
    auto g = origin_only();
    g.edit_metadata(id("O"), std::string("Start"), std::nullopt);
    EXPECT_EQ(g.at(id("O")).title, "Start");
    EXPECT_EQ(code_of([&] { g.edit_metadata(id("O"), std::string("  "), std::nullopt); }), ErrorCode::Validation);
    EXPECT_EQ(code_of([&] { g.edit_metadata(id("O"), std::string(61, 't'), std::nullopt); }),
              ErrorCode::Validation);
    EXPECT_EQ(code_of([&] { g.edit_metadata(id("O"), std::nullopt, std::nullopt); }), ErrorCode::Validation);
    EXPECT_EQ(g.at(id("O")).title, "Start");
}

TEST(DevGraph, ClampTitle) {
    EXPECT_EQ(clamp_title("short"), "short");
    auto long_title = clamp_title(std::string(100, 'x'));
    EXPECT_EQ(long_title.size(), kMaxTitleChars);
    EXPECT_TRUE(long_title.ends_with("..."));
    // Two-byte characters must not be split.
    std::string accents;
    for (int i = 0; i < 40; ++i)
        accents += "\xc3\xa9";
    auto clamped = clamp_title(accents);
    EXPECT_LE(clamped.size(), kMaxTitleChars);
    EXPECT_EQ((clamped.size() - 3) % 2, 0u);
}

TEST(DevGraph, LcaOfCrissCrossPicksLatest) {
    // O -> A, O -> B, M1 = (A, B), M2 = (B, A): common maximal ancestors are A and B.
    auto g = origin_only();
    g.add(node("A", CheckpointKind::ManualChange, {"O"}, 1));
    g.set_active(id("O"));
    g.add(node("B", CheckpointKind::ManualChange, {"O"}, 2));
    g.add(node("M1", CheckpointKind::Merge, {"A", "B"}, 3));
    g.add(node("M2", CheckpointKind::Merge, {"B", "A"}, 4));
    EXPECT_EQ(g.lowest_common_ancestor(id("M1"), id("M2")), id("B"));
    EXPECT_EQ(g.lowest_common_ancestor(id("M1"), id("A")), id("A"));
    EXPECT_EQ(g.lowest_common_ancestor(id("O"), id("M2")), id("O"));
}

TEST(DevGraph, LcaMatchesOracleOnRandomDag) {
    std::mt19937_64 rng(42);
    auto g = origin_only();
    std::vector<std::string> ids{"O"};
    for (int i = 1; i < 60; ++i) {
        auto name = "N" + std::to_string(100 + i);
        auto p1 = ids[rng() % ids.size()];
        auto p2 = ids[rng() % ids.size()];
        if (rng() % 3 == 0 && p1 != p2)
            g.add(node(name, CheckpointKind::Merge, {p1, p2}, i));
        else
            g.add(node(name, CheckpointKind::ManualChange, {p1}, i));
        ids.push_back(name);
    }
    auto oracle = evograph::testing::oracle_graph(g);
    for (std::size_t i = 0; i < ids.size(); i += 3)
        for (std::size_t j = 0; j < ids.size(); j += 5)
            EXPECT_EQ(g.lowest_common_ancestor(id(ids[i]), id(ids[j])).str(),
                      evograph::testing::oracle_lca(oracle, ids[i], ids[j]));
}

TEST(DevGraph, TopologicalOrderPutsParentsFirst) {
    auto g = origin_only();
    g.add(node("A", CheckpointKind::ManualChange, {"O"}, 1));
    g.set_active(id("O"));
    g.add(node("B", CheckpointKind::ManualChange, {"O"}, 2));
    g.add(node("M", CheckpointKind::Merge, {"B", "A"}, 3));
    EXPECT_EQ(g.topological_order(), (std::vector<CheckpointId>{id("O"), id("A"), id("B"), id("M")}));
}

TEST(DevGraph, FromPartsRejectsDanglingParentAndCycle) {
    std::map<CheckpointId, Checkpoint> parts;
    parts[id("O")] = node("O", CheckpointKind::Origin, {}, 0);
    parts[id("A")] = node("A", CheckpointKind::ManualChange, {"ghost"}, 1);
    EXPECT_EQ(code_of([&] { DevGraph::from_parts(parts, id("O")); }), ErrorCode::Integrity);

    parts[id("A")] = node("A", CheckpointKind::ManualChange, {"B"}, 1);
    parts[id("B")] = node("B", CheckpointKind::ManualChange, {"A"}, 1);
    EXPECT_EQ(code_of([&] { DevGraph::from_parts(parts, id("O")); }), ErrorCode::Integrity);

    parts.erase(id("B"));
    parts[id("A")] = node("A", CheckpointKind::ManualChange, {"O"}, 1);
    EXPECT_EQ(code_of([&] { DevGraph::from_parts(parts, id("zzz")); }), ErrorCode::Integrity);
    EXPECT_EQ(DevGraph::from_parts(parts, id("A")).size(), 2u);
}

TEST(DevGraph, KindNamesRoundTrip) {
    for (auto k : {CheckpointKind::Origin, CheckpointKind::ManualChange, CheckpointKind::AiPrompt,
                   CheckpointKind::AiCodeApplied, CheckpointKind::Merge})
        EXPECT_EQ(parse_checkpoint_kind(to_string(k)), k);
    EXPECT_EQ(color_token(CheckpointKind::Merge), color_token(CheckpointKind::ManualChange));
}
