#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "spire/model.hpp"

namespace spire {

// All unique routes between two node sets on one act map.
struct PathSet {
    std::vector<std::vector<NodeId>> paths;  // sorted lexicographically by node id
    std::vector<NodeId> start_set;           // sorted, deduplicated
    std::vector<NodeId> end_set;

    std::size_t size() const { return paths.size(); }
    bool empty() const { return paths.empty(); }
};

namespace detail {

// Per-walk scratch shared by walk_paths. `productive[n]` marks nodes from
// which some end node can still be reached.
struct WalkPlan {
    std::vector<char> is_end;
    std::vector<char> productive;
    std::vector<NodeId> starts;  // sorted, deduplicated, productive only
};

WalkPlan make_walk_plan(const ActMap& map, std::span<const NodeId> starts,
                        std::span<const NodeId> ends);

}  // namespace detail

// Depth-first enumeration of every simple, floor-increasing route from any
// start to any end, in ascending node-id (floor, column) order. The visitor
// sees:
//   enter(NodeId)                      node appended to the current path
//   leave(NodeId)                      node removed again
//   complete(std::span<const NodeId>)  current path ends at an end node
// A path that passes through one end node on its way to another is reported
// at both. A membership set guards against cycles so malformed adjacency
// cannot hang the walk.
template <class Visitor>
void walk_paths(const ActMap& map, std::span<const NodeId> starts, std::span<const NodeId> ends,
                Visitor& visitor) {
    const detail::WalkPlan plan = detail::make_walk_plan(map, starts, ends);
    std::vector<NodeId> path;
    std::vector<char> on_path(map.node_count(), 0);
    path.reserve(static_cast<std::size_t>(map.boss_floor));

    auto dfs = [&](auto&& self, NodeId node) -> void {
        on_path[static_cast<std::size_t>(node)] = 1;
        path.push_back(node);
        visitor.enter(node);
        if (plan.is_end[static_cast<std::size_t>(node)]) {
            visitor.complete(std::span<const NodeId>(path));
        }
        for (NodeId next : map.successors[static_cast<std::size_t>(node)]) {
            if (!plan.productive[static_cast<std::size_t>(next)]) continue;
            if (on_path[static_cast<std::size_t>(next)]) continue;
            self(self, next);
        }
        visitor.leave(node);
        path.pop_back();
        on_path[static_cast<std::size_t>(node)] = 0;
    };
    for (NodeId s : plan.starts) dfs(dfs, s);
}

// Materializes the full choice set. Result paths are deduplicated and
// sorted, so the output is independent of the ordering of `starts`/`ends`.
PathSet all_paths(const ActMap& map, std::span<const NodeId> starts, std::span<const NodeId> ends);

// Choice set for a run that ended on `death_floor`: every route from a start
// node to any node on that floor. At the boss floor this equals
// all_paths(starts, {boss}).
PathSet prefix_paths(const ActMap& map, int death_floor);

// Independent count of the same path set via layered-DAG dynamic programming
// (ways[n] = sum of ways over predecessors). Saturates at UINT64_MAX.
std::uint64_t count_paths(const ActMap& map, std::span<const NodeId> starts,
                          std::span<const NodeId> ends);

// Number of paths the walker would report, without materializing them.
std::uint64_t enumerate_path_count(const ActMap& map, std::span<const NodeId> starts,
                                   std::span<const NodeId> ends);

}  // namespace spire
