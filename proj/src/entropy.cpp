#include "spire/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spire {
namespace {

// Ranges narrower than this carry no usable signal between min and max.
constexpr double kDegenerateWidth = 1e-12;
// Played totals may drift from the bound sweep by accumulation order.
constexpr double kBoundSlack = 1e-9;

double plog2p(double p) {
    return p > 0.0 ? p * std::log2(p) : 0.0;
}

}  // namespace

double entropy_bits(std::span<const double> probabilities) {
    double h = 0.0;
    for (double p : probabilities) h -= plog2p(p);
    // -0.0 shows up when every outcome is 0 or 1; keep the sign clean.
    return h == 0.0 ? 0.0 : h;
}

double table_entropy(const EncounterTable& table) {
    table.validate();
    return entropy_bits(table.probabilities);
}

UnknownChain::UnknownChain(const UnknownTables& tables) : tables_(&tables) {
    tables.validate();
    marginal_ = tables.initial;
}

std::pair<double, UnknownChain> unknown_step_entropy(const UnknownChain& chain, int k) {
    if (k != chain.steps_ + 1) {
        throw OutOfRange("unknown_step_entropy: expected step " +
                         std::to_string(chain.steps_ + 1) + ", got " + std::to_string(k));
    }
    UnknownChain next = chain;
    next.steps_ = k;
    if (k == 1) {
        // First Unknown room of the act: the marginal *is* the initial
        // distribution and doubles as P(X_1) for the following step.
        return {entropy_bits(chain.marginal_), next};
    }
    // Conditional entropy of visit k given visit k-1, weighted by the
    // current marginal, then advance the marginal one transition.
    const auto& t = chain.tables_->transition;
    double h = 0.0;
    std::array<double, 5> advanced{};
    for (std::size_t from = 0; from < 5; ++from) {
        const double w = chain.marginal_[from];
        if (w > 0.0) h += w * entropy_bits(t[from]);
        for (std::size_t to = 0; to < 5; ++to) advanced[to] += w * t[from][to];
    }
    next.marginal_ = advanced;
    return {h, next};
}

namespace {

// Entropy of the k-th Unknown visit, computed from scratch. O(k), only used
// by the pure lookup below; hot paths go through PathScorer's cache.
double unknown_entropy_at(const UnknownTables& tables, int k) {
    if (k < 1) throw OutOfRange("unknown visit index must be >= 1");
    UnknownChain chain(tables);
    double h = 0.0;
    for (int i = 1; i <= k; ++i) std::tie(h, chain) = unknown_step_entropy(chain, i);
    return h;
}

}  // namespace

double location_entropy(const EncounterTables& tables, RoomType room, int act,
                        const VisitCounters& counters) {
    switch (room) {
        case RoomType::Monster: {
            const MonsterTables& m = tables.monster_for_act(act);
            return table_entropy(counters.monsters < m.first_visits ? m.first : m.rest);
        }
        case RoomType::Elite:
            return table_entropy(counters.elites == 0 ? tables.elite_first : tables.elite_rest);
        case RoomType::Boss:
            return table_entropy(tables.boss);
        case RoomType::Treasure:
            return table_entropy(tables.treasure);
        case RoomType::Shop:
            return table_entropy(tables.shop);
        case RoomType::Rest:
            return table_entropy(tables.rest_site);
        case RoomType::Unknown:
            return unknown_entropy_at(tables.unknown, counters.unknowns + 1);
    }
    throw OutOfRange("location_entropy: unhandled room type");
}

PathScorer::PathScorer(const EncounterTables& tables, int act, int max_path_length) {
    const MonsterTables& m = tables.monster_for_act(act);
    monster_first_visits_ = m.first_visits;
    monster_first_ = table_entropy(m.first);
    monster_rest_ = table_entropy(m.rest);
    elite_first_ = table_entropy(tables.elite_first);
    elite_rest_ = table_entropy(tables.elite_rest);
    boss_ = table_entropy(tables.boss);
    treasure_ = table_entropy(tables.treasure);
    shop_ = table_entropy(tables.shop);
    rest_ = table_entropy(tables.rest_site);

    unknown_step_.reserve(static_cast<std::size_t>(std::max(max_path_length, 0)));
    UnknownChain chain(tables.unknown);
    for (int k = 1; k <= max_path_length; ++k) {
        auto [h, next] = unknown_step_entropy(chain, k);
        unknown_step_.push_back(h);
        chain = next;
    }
}

double PathScorer::contribution(RoomType room, VisitCounters& counters) const {
    switch (room) {
        case RoomType::Monster:
            return counters.monsters++ < monster_first_visits_ ? monster_first_ : monster_rest_;
        case RoomType::Elite:
            return counters.elites++ == 0 ? elite_first_ : elite_rest_;
        case RoomType::Boss:
            return boss_;
        case RoomType::Treasure:
            return treasure_;
        case RoomType::Shop:
            return shop_;
        case RoomType::Rest:
            return rest_;
        case RoomType::Unknown: {
            const auto k = static_cast<std::size_t>(counters.unknowns++);
            if (k >= unknown_step_.size())
                throw OutOfRange("PathScorer: unknown visit beyond precomputed length");
            return unknown_step_[k];
        }
    }
    throw OutOfRange("PathScorer: unhandled room type");
}

PathEntropy path_entropy(const EncounterTables& tables, const ActMap& map,
                         std::span<const NodeId> path) {
    PathEntropy out;
    if (path.empty()) return out;
    PathScorer scorer(tables, map.act, static_cast<int>(path.size()));
    VisitCounters counters;
    out.per_node.reserve(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        const MapNode& node = map.node(path[i]);
        if (i > 0 && !map.has_edge(path[i - 1], path[i])) {
            throw InvalidPath("no edge between node " + std::to_string(path[i - 1]) +
                              " and node " + std::to_string(path[i]));
        }
        const double bits = scorer.contribution(node.room_type, counters);
        out.per_node.push_back({node.id, node.room_type, bits});
        out.total += bits;
    }
    return out;
}

PathEntropy sequence_entropy(const EncounterTables& tables, int act,
                             std::span<const RoomType> rooms) {
    PathEntropy out;
    if (rooms.empty()) return out;
    PathScorer scorer(tables, act, static_cast<int>(rooms.size()));
    VisitCounters counters;
    out.per_node.reserve(rooms.size());
    for (std::size_t i = 0; i < rooms.size(); ++i) {
        const double bits = scorer.contribution(rooms[i], counters);
        out.per_node.push_back({static_cast<NodeId>(i), rooms[i], bits});
        out.total += bits;
    }
    return out;
}

EntropyBounds entropy_bounds(const EncounterTables& tables, const ActMap& map,
                             const PathSet& choice_set) {
    if (choice_set.empty()) throw EmptyChoiceSet("entropy bounds over an empty choice set");
    EntropyBounds bounds;
    bounds.min_bits = std::numeric_limits<double>::infinity();
    bounds.max_bits = -std::numeric_limits<double>::infinity();
    for (const auto& path : choice_set.paths) {
        const double total = path_entropy(tables, map, path).total;
        bounds.min_bits = std::min(bounds.min_bits, total);
        bounds.max_bits = std::max(bounds.max_bits, total);
        ++bounds.path_count;
    }
    return bounds;
}

namespace {

// Streaming visitor: keeps per-depth prefix sums plus the counters needed
// to undo each step, so bounds over huge choice sets never materialize a
// path.
struct BoundsVisitor {
    const ActMap& map;
    const PathScorer& scorer;
    VisitCounters counters{};
    EntropyBounds bounds{std::numeric_limits<double>::infinity(),
                         -std::numeric_limits<double>::infinity(), 0};

    // Prefix sums instead of add-then-subtract backtracking: every path's
    // total is the same left-to-right accumulation a fresh scoring pass
    // would produce, bit for bit.
    struct Frame {
        VisitCounters saved;
        double prefix;
    };
    std::vector<Frame> stack{};

    void enter(NodeId node) {
        Frame frame{counters, stack.empty() ? 0.0 : stack.back().prefix};
        frame.prefix += scorer.contribution(map.node(node).room_type, counters);
        stack.push_back(frame);
    }
    void leave(NodeId) {
        counters = stack.back().saved;
        stack.pop_back();
    }
    void complete(std::span<const NodeId>) {
        bounds.min_bits = std::min(bounds.min_bits, stack.back().prefix);
        bounds.max_bits = std::max(bounds.max_bits, stack.back().prefix);
        ++bounds.path_count;
    }
};

}  // namespace

EntropyBounds entropy_bounds(const EncounterTables& tables, const ActMap& map,
                             std::span<const NodeId> starts, std::span<const NodeId> ends) {
    PathScorer scorer(tables, map.act, map.boss_floor);
    BoundsVisitor visitor{map, scorer};
    visitor.stack.reserve(static_cast<std::size_t>(map.boss_floor));
    walk_paths(map, starts, ends, visitor);
    if (visitor.bounds.path_count == 0)
        throw EmptyChoiceSet("no path connects the start set to the end set");
    return visitor.bounds;
}

bool degenerate_range(double min_bits, double max_bits) {
    return max_bits - min_bits <= kDegenerateWidth;
}

double normalize(double played, double min_bits, double max_bits) {
    if (degenerate_range(min_bits, max_bits)) return 0.0;
    if (played < min_bits - kBoundSlack || played > max_bits + kBoundSlack) {
        throw OutOfRange("played entropy " + std::to_string(played) + " outside bounds [" +
                         std::to_string(min_bits) + ", " + std::to_string(max_bits) + "]");
    }
    const double clamped = std::clamp(played, min_bits, max_bits);
    return (clamped - min_bits) / (max_bits - min_bits);
}

double per_step(double normalized, int path_length) {
    if (path_length <= 0) throw ZeroLength("per-step entropy of a zero-length path");
    return normalized / path_length;
}

EntropyReport make_report(const EncounterTables& tables, const ActMap& map,
                          std::span<const NodeId> played, const EntropyBounds& bounds) {
    if (played.empty()) throw ZeroLength("cannot report on an empty played path");
    EntropyReport report;
    PathEntropy scored = path_entropy(tables, map, played);
    report.per_node = std::move(scored.per_node);
    report.total = scored.total;
    report.min_possible = bounds.min_bits;
    report.max_possible = bounds.max_bits;
    report.path_length = static_cast<int>(played.size());
    report.degenerate = degenerate_range(bounds.min_bits, bounds.max_bits);
    report.normalized = normalize(scored.total, bounds.min_bits, bounds.max_bits);
    report.per_step = per_step(report.normalized, report.path_length);
    return report;
}

}  // namespace spire
