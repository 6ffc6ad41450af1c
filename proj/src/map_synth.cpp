#include "spire/map_synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spire/rng.hpp"

namespace spire {
namespace {

constexpr double kWeightTolerance = 1e-9;

// RoomType order matching RoomMixBand::weights.
constexpr std::array<RoomType, 6> kMixRooms = {RoomType::Monster,   RoomType::Elite,
                                               RoomType::Unknown,   RoomType::Shop,
                                               RoomType::Treasure,  RoomType::Rest};

const RoomMixBand& band_for_floor(const std::vector<RoomMixBand>& bands, int floor) {
    const RoomMixBand* chosen = &bands.front();
    for (const RoomMixBand& band : bands)
        if (band.first_floor <= floor) chosen = &band;
    return *chosen;
}

RoomType sample_room(std::mt19937_64& rng, const RoomMixBand& band) {
    const double r = draw_unit(rng);
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < band.weights.size(); ++i) {
        if (band.weights[i] <= 0.0) continue;
        last_positive = i;
        cumulative += band.weights[i];
        if (r < cumulative) return kMixRooms[i];
    }
    return kMixRooms[last_positive];  // r landed in the 1e-9 rounding sliver
}

std::vector<int> pick_start_columns(std::mt19937_64& rng, int columns, int count) {
    std::vector<int> pool(static_cast<std::size_t>(columns));
    std::iota(pool.begin(), pool.end(), 0);
    // Partial Fisher-Yates with our own bounded draw (std::shuffle is not
    // bit-stable across standard libraries).
    for (int i = 0; i < count; ++i) {
        const int j = i + static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(
                                                               columns - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    std::vector<int> picked(pool.begin(), pool.begin() + count);
    std::sort(picked.begin(), picked.end());
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
    return picked;
}

ActMap generate_act(std::uint64_t act_seed, int act, const SynthParams& p) {
    std::mt19937_64 rng(act_seed);
    const int top_floor = p.floors_per_act;
    const int boss_floor = top_floor + 1;

    // Structure first: per-floor active columns plus the edge list. Every
    // node gets at least one forced successor, so all routes funnel upward
    // into the campfire row and the boss — connectivity by construction.
    std::vector<std::vector<int>> active(static_cast<std::size_t>(boss_floor + 1));
    active[1] = pick_start_columns(rng, p.columns, std::min(p.start_node_count, p.columns));

    std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> edges;
    for (int floor = 1; floor < top_floor; ++floor) {
        std::vector<bool> next(static_cast<std::size_t>(p.columns), false);
        for (int column : active[static_cast<std::size_t>(floor)]) {
            int candidates[3];
            int candidate_count = 0;
            for (int delta = -1; delta <= 1; ++delta) {
                const int target = column + delta;
                if (target >= 0 && target < p.columns) candidates[candidate_count++] = target;
            }
            const int forced = candidates[draw_below(
                rng, static_cast<std::uint64_t>(candidate_count))];
            for (int i = 0; i < candidate_count; ++i) {
                const int target = candidates[i];
                if (target != forced && !draw_chance(rng, p.edge_density)) continue;
                edges.push_back({{floor, column}, {floor + 1, target}});
                next[static_cast<std::size_t>(target)] = true;
            }
        }
        auto& row = active[static_cast<std::size_t>(floor + 1)];
        for (int c = 0; c < p.columns; ++c)
            if (next[static_cast<std::size_t>(c)]) row.push_back(c);
    }

    const int boss_column = p.columns / 2;
    for (int column : active[static_cast<std::size_t>(top_floor)])
        edges.push_back({{top_floor, column}, {boss_floor, boss_column}});
    active[static_cast<std::size_t>(boss_floor)] = {boss_column};

    // Room assignment, floors ascending and columns ascending so the draw
    // sequence — and therefore the document — is reproducible byte for byte.
    std::vector<MapNode> nodes;
    for (int floor = 1; floor <= boss_floor; ++floor) {
        for (int column : active[static_cast<std::size_t>(floor)]) {
            MapNode node;
            node.act = act;
            node.floor = floor;
            node.column = column;
            if (floor == boss_floor) {
                node.room_type = RoomType::Boss;
            } else if (floor == top_floor) {
                node.room_type = RoomType::Rest;
            } else if (floor == 1) {
                node.room_type = RoomType::Monster;
            } else if (floor == 9 && top_floor > 9) {
                node.room_type = RoomType::Treasure;
            } else {
                node.room_type = sample_room(rng, band_for_floor(p.room_mix, floor));
            }
            nodes.push_back(node);
        }
    }
    return build_act_map(act, std::move(nodes), edges);
}

}  // namespace

SynthParams SynthParams::defaults() {
    SynthParams p;
    p.room_mix = {
        // Early floors: fights, events, the odd shop or chest. No elites or
        // campfires low in the act, like the real generator.
        {2, {0.55, 0.00, 0.25, 0.10, 0.10, 0.00}},
        {6, {0.38, 0.12, 0.25, 0.08, 0.07, 0.10}},
        {10, {0.32, 0.14, 0.26, 0.08, 0.05, 0.15}},
    };
    return p;
}

void SynthParams::validate() const {
    if (columns < 1) throw InfeasibleParams("columns must be >= 1");
    if (floors_per_act < 2)
        throw InfeasibleParams("need at least 2 regular floors (start row + campfire row)");
    if (floors_per_act > 15)
        throw InfeasibleParams("floors_per_act above 15 would push the boss past floor 16");
    if (start_node_count < 1) throw InfeasibleParams("start_node_count must be >= 1");
    if (!(edge_density > 0.0) || edge_density > 1.0)
        throw InfeasibleParams("edge_density must be in (0, 1]");
    if (room_mix.empty()) throw InfeasibleParams("room_mix has no bands");
    if (room_mix.front().first_floor > 2)
        throw InfeasibleParams("first room_mix band must start at floor 2");
    int previous = 0;
    for (const RoomMixBand& band : room_mix) {
        if (band.first_floor <= previous)
            throw InfeasibleParams("room_mix bands must have increasing first_floor");
        previous = band.first_floor;
        double sum = 0.0;
        for (double w : band.weights) {
            if (w < 0.0 || w > 1.0)
                throw InfeasibleParams("room_mix weights must be in [0, 1]");
            sum += w;
        }
        if (std::abs(sum - 1.0) > kWeightTolerance)
            throw InfeasibleParams("room_mix band weights must sum to 1");
    }
}

MapSet generate_map(std::uint64_t seed, const SynthParams& params) {
    params.validate();
    MapSet set;
    set.seed = std::to_string(seed);
    const std::uint64_t stream = splitmix64(seed);
    for (int act = 1; act <= 3; ++act)
        set.acts.push_back(
            generate_act(splitmix64(stream + static_cast<std::uint64_t>(act)), act, params));
    return set;
}

const char* generator_name() {
    return "spire-synth/1 (mt19937_64 raw draws, splitmix64 act streams)";
}

}  // namespace spire
