#pragma once

// Independent reference implementations used as test oracles, plus fixture
// builders. Everything here is deliberately written with different
// algorithms than the library code it checks.

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spire/entropy.hpp"
#include "spire/model.hpp"
#include "spire/tables.hpp"

namespace spire::testing {

// Every start-to-end route via breadth-first partial-path extension; no
// pruning, no recursion, paths through one end toward another included.
std::vector<std::vector<NodeId>> brute_force_paths(const ActMap& map,
                                                   std::span<const NodeId> starts,
                                                   std::span<const NodeId> ends);

// Path count via memoized "routes from node to any end" recursion (the
// library sweeps forward instead).
std::uint64_t dp_path_count(const ActMap& map, std::span<const NodeId> starts,
                            std::span<const NodeId> ends);

// Exact joint entropy of the first k Unknown visits, enumerating all 5^k
// state sequences.
double joint_unknown_entropy(const UnknownTables& tables, int k);

// --- map builders -------------------------------------------------------

// Single-column act: one node per floor, symbols bottom to top. The last
// symbol should be 'B' and the one before it 'R' for a valid map.
ActMap chain_act(int act, std::string_view symbols);

// Grid act from per-floor symbol rows (row 0 = floor 1). '.' leaves a hole.
// With no explicit edge list, consecutive floors are fully connected.
// Explicit edges are {from_floor, from_column, to_floor, to_column}.
ActMap act_from_rows(int act, const std::vector<std::string>& rows);
ActMap act_from_rows(int act, const std::vector<std::string>& rows,
                     const std::vector<std::array<int, 4>>& edges);

// Three chain acts under one seed.
MapSet chain_set(const std::string& seed, std::string_view act1, std::string_view act2,
                 std::string_view act3);

// --- corpus builders ----------------------------------------------------

// Highest- or lowest-entropy full path (start to boss) on the map.
std::vector<NodeId> extreme_path(const EncounterTables& tables, const ActMap& map,
                                 bool maximize);

// Uniform random successor walk from a random start to the boss floor.
std::vector<NodeId> random_full_path(const ActMap& map, std::mt19937_64& rng);

// Assembles a RunRecord whose symbols replay the given per-act node paths.
// Fields are set to pass the default corpus filter. A final act that stops
// short of the boss makes the run a defeat candidate; `victory` is still
// recorded as passed.
RunRecord run_from_traces(const MapSet& maps,
                          const std::vector<std::vector<NodeId>>& act_paths, bool victory,
                          int ascension);

// --- statistics helpers -------------------------------------------------

// Kolmogorov-Smirnov uniformity p-value (asymptotic, with the small-sample
// correction factor) for values expected ~ U(0,1).
double ks_uniform_p(std::vector<double> values);

}  // namespace spire::testing
