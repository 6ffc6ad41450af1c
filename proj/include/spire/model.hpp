#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spire {

// Room kinds appearing on an act map. Each has a one-character canonical
// symbol used in map documents and run logs: M, E, ?, $, T, R, B.
enum class RoomType : std::uint8_t {
    Monster,
    Elite,
    Unknown,
    Shop,
    Treasure,
    Rest,
    Boss,
};

inline constexpr int kRoomTypeCount = 7;

struct UnknownSymbol : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidTopology : std::runtime_error {
    using std::runtime_error::runtime_error;
};

char room_to_symbol(RoomType room);
RoomType symbol_to_room(char symbol);  // throws UnknownSymbol
const char* room_name(RoomType room);

// Index of a node inside its ActMap's node vector.
using NodeId = std::int32_t;

struct MapNode {
    int act = 0;     // 1..3
    int floor = 0;   // 1..boss floor; boss sits on the act's final floor
    int column = 0;  // 0..6
    RoomType room_type = RoomType::Monster;
    NodeId id = -1;
};

// One act's map: a layered DAG. Edges only connect floor f to floor f+1.
// Nodes are stored sorted by (floor, column) and NodeId equals the index,
// so ascending-id traversal is (floor, column)-lexicographic.
struct ActMap {
    int act = 0;
    std::vector<MapNode> nodes;
    std::vector<std::vector<NodeId>> successors;    // ascending ids
    std::vector<std::vector<NodeId>> predecessors;  // ascending ids
    std::vector<NodeId> start_nodes;                // all floor-1 nodes
    NodeId boss_node = -1;
    int boss_floor = 0;

    const MapNode& node(NodeId id) const { return nodes[static_cast<std::size_t>(id)]; }
    std::size_t node_count() const { return nodes.size(); }
    bool has_edge(NodeId from, NodeId to) const;
    // Nodes on a floor, ascending by column. Empty when out of range.
    std::vector<NodeId> nodes_on_floor(int floor) const;
    NodeId find_node(int floor, int column) const;  // -1 when absent
};

// Builds an ActMap from loose nodes and (floor,column) edge pairs and checks
// every structural invariant. Violations throw InvalidTopology:
//   - edges must go from floor f to exactly floor f+1
//   - exactly one boss node, on the act's final floor
//   - every node on the floor below the boss is a Rest site
//   - every non-boss node with successors can reach the boss
// Duplicate edges are collapsed.
ActMap build_act_map(int act, std::vector<MapNode> nodes,
                     const std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>>& edges);

// Re-checks the invariants on an already-assembled map.
void validate_act_map(const ActMap& map);

// All three acts of one procedurally generated layout, keyed by seed.
struct MapSet {
    std::string seed;
    std::vector<ActMap> acts;  // acts 1..3 in order

    const ActMap& act(int n) const { return acts.at(static_cast<std::size_t>(n - 1)); }
};

// One logged run, already mapped onto the canonical symbol alphabet.
struct RunRecord {
    bool victory = false;
    int ascension = 0;
    std::string seed;
    std::vector<char> path_symbols;  // one canonical symbol per floor visited
    bool is_ascension_mode = false;
    bool is_trial = false;
    bool is_daily = false;
    bool chose_seed = false;
    bool is_beta = false;
    bool is_endless = false;
    std::string character;
};

// A run's route through a single act, resolved onto map nodes.
// `ambiguous` marks traces where the symbol log matched more than one node
// sequence; the leftmost-column sequence is kept (room types, and therefore
// entropies, are identical across the alternatives).
struct PathTrace {
    int act = 0;
    std::vector<NodeId> nodes;
    bool complete = false;  // last node is the boss
    bool ambiguous = false;

    int length() const { return static_cast<int>(nodes.size()); }
};

}  // namespace spire
