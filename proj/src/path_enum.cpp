#include "spire/path_enum.hpp"

#include <limits>

namespace spire {

namespace detail {

namespace {

std::vector<NodeId> sorted_unique(std::span<const NodeId> ids, const ActMap& map, const char* what) {
    std::vector<NodeId> out(ids.begin(), ids.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (NodeId id : out) {
        if (id < 0 || static_cast<std::size_t>(id) >= map.node_count()) {
            throw std::out_of_range(std::string(what) + " node id " + std::to_string(id) +
                                    " not in map");
        }
    }
    return out;
}

}  // namespace

WalkPlan make_walk_plan(const ActMap& map, std::span<const NodeId> starts,
                        std::span<const NodeId> ends) {
    WalkPlan plan;
    plan.is_end.assign(map.node_count(), 0);
    plan.productive.assign(map.node_count(), 0);

    const std::vector<NodeId> end_ids = sorted_unique(ends, map, "end");
    for (NodeId e : end_ids) {
        plan.is_end[static_cast<std::size_t>(e)] = 1;
        plan.productive[static_cast<std::size_t>(e)] = 1;
    }
    // Nodes are id-ordered by floor, so a reverse sweep is a reverse
    // topological order.
    for (std::size_t i = map.node_count(); i-- > 0;) {
        if (plan.productive[i]) continue;
        for (NodeId next : map.successors[i]) {
            if (plan.productive[static_cast<std::size_t>(next)]) {
                plan.productive[i] = 1;
                break;
            }
        }
    }

    for (NodeId s : sorted_unique(starts, map, "start")) {
        if (plan.productive[static_cast<std::size_t>(s)]) plan.starts.push_back(s);
    }
    return plan;
}

}  // namespace detail

namespace {

struct CollectVisitor {
    std::vector<std::vector<NodeId>>* out;
    void enter(NodeId) {}
    void leave(NodeId) {}
    void complete(std::span<const NodeId> path) { out->emplace_back(path.begin(), path.end()); }
};

struct CountVisitor {
    std::uint64_t count = 0;
    void enter(NodeId) {}
    void leave(NodeId) {}
    void complete(std::span<const NodeId>) { ++count; }
};

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    return (a > kMax - b) ? kMax : a + b;
}

}  // namespace

PathSet all_paths(const ActMap& map, std::span<const NodeId> starts, std::span<const NodeId> ends) {
    PathSet set;
    set.start_set.assign(starts.begin(), starts.end());
    std::sort(set.start_set.begin(), set.start_set.end());
    set.start_set.erase(std::unique(set.start_set.begin(), set.start_set.end()),
                        set.start_set.end());
    set.end_set.assign(ends.begin(), ends.end());
    std::sort(set.end_set.begin(), set.end_set.end());
    set.end_set.erase(std::unique(set.end_set.begin(), set.end_set.end()), set.end_set.end());

    CollectVisitor visitor{&set.paths};
    walk_paths(map, starts, ends, visitor);
    std::sort(set.paths.begin(), set.paths.end());
    set.paths.erase(std::unique(set.paths.begin(), set.paths.end()), set.paths.end());
    return set;
}

PathSet prefix_paths(const ActMap& map, int death_floor) {
    if (death_floor < 1 || death_floor > map.boss_floor) {
        throw std::out_of_range("death floor " + std::to_string(death_floor) +
                                " outside 1.." + std::to_string(map.boss_floor));
    }
    const std::vector<NodeId> ends = map.nodes_on_floor(death_floor);
    return all_paths(map, map.start_nodes, ends);
}

std::uint64_t count_paths(const ActMap& map, std::span<const NodeId> starts,
                          std::span<const NodeId> ends) {
    const detail::WalkPlan plan = detail::make_walk_plan(map, starts, ends);
    std::vector<std::uint64_t> ways(map.node_count(), 0);
    for (NodeId s : plan.starts) ways[static_cast<std::size_t>(s)] = 1;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < map.node_count(); ++i) {
        if (ways[i] == 0) continue;
        if (plan.is_end[i]) total = sat_add(total, ways[i]);
        for (NodeId next : map.successors[i]) {
            auto& slot = ways[static_cast<std::size_t>(next)];
            slot = sat_add(slot, ways[i]);
        }
    }
    return total;
}

std::uint64_t enumerate_path_count(const ActMap& map, std::span<const NodeId> starts,
                                   std::span<const NodeId> ends) {
    CountVisitor visitor;
    walk_paths(map, starts, ends, visitor);
    return visitor.count;
}

}  // namespace spire
