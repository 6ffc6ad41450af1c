#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spire/model.hpp"

namespace spire {

struct InfeasibleParams : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Room-type weights for a band of floors, applying from `first_floor` until
// the next band takes over. Weights cover the six non-boss room types in
// RoomType order (Monster, Elite, Unknown, Shop, Treasure, Rest) and must
// sum to 1 +- 1e-9.
struct RoomMixBand {
    int first_floor = 2;
    std::array<double, 6> weights{};
};

// Knobs for the synthetic act-map generator. Defaults mimic the shape of a
// standard act: 15 regular floors plus a boss, 7 columns, monster-heavy
// early floors, elites and campfires only from floor 6, a treasure row at
// floor 9, and an all-campfire row right under the boss.
struct SynthParams {
    int floors_per_act = 15;  // regular floors; the boss adds one more
    int columns = 7;
    int start_node_count = 3;
    double edge_density = 0.35;  // chance of keeping each optional +-1 edge
    std::vector<RoomMixBand> room_mix;

    static SynthParams defaults();
    void validate() const;  // throws InfeasibleParams
};

// Deterministically generates a 3-act map set from a 64-bit seed. Structure
// mirrors the real game's layered layout: floor-1 start columns, edges only
// to adjacent columns one floor up, every route funnelling into a campfire
// row and then the boss. Determinism is bit-exact across platforms (the
// engine named by generator_name() is used with raw-output draws only).
MapSet generate_map(std::uint64_t seed, const SynthParams& params = SynthParams::defaults());

// Name of the PRNG scheme stamped into generated map documents.
const char* generator_name();

}  // namespace spire
