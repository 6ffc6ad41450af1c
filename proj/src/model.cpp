#include "spire/model.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace spire {

char room_to_symbol(RoomType room) {
    switch (room) {
        case RoomType::Monster: return 'M';
        case RoomType::Elite: return 'E';
        case RoomType::Unknown: return '?';
        case RoomType::Shop: return '$';
        case RoomType::Treasure: return 'T';
        case RoomType::Rest: return 'R';
        case RoomType::Boss: return 'B';
    }
    throw UnknownSymbol("invalid RoomType value");
}

RoomType symbol_to_room(char symbol) {
    switch (symbol) {
        case 'M': return RoomType::Monster;
        case 'E': return RoomType::Elite;
        case '?': return RoomType::Unknown;
        case '$': return RoomType::Shop;
        case 'T': return RoomType::Treasure;
        case 'R': return RoomType::Rest;
        case 'B': return RoomType::Boss;
    }
    throw UnknownSymbol(std::string("unknown room symbol '") + symbol + "'");
}

const char* room_name(RoomType room) {
    switch (room) {
        case RoomType::Monster: return "Monster";
        case RoomType::Elite: return "Elite";
        case RoomType::Unknown: return "Unknown";
        case RoomType::Shop: return "Shop";
        case RoomType::Treasure: return "Treasure";
        case RoomType::Rest: return "Rest";
        case RoomType::Boss: return "Boss";
    }
    return "?";
}

bool ActMap::has_edge(NodeId from, NodeId to) const {
    const auto& succ = successors[static_cast<std::size_t>(from)];
    return std::binary_search(succ.begin(), succ.end(), to);
}

std::vector<NodeId> ActMap::nodes_on_floor(int floor) const {
    std::vector<NodeId> out;
    for (const MapNode& n : nodes) {
        if (n.floor == floor) out.push_back(n.id);
    }
    return out;
}

NodeId ActMap::find_node(int floor, int column) const {
    for (const MapNode& n : nodes) {
        if (n.floor == floor && n.column == column) return n.id;
    }
    return -1;
}

ActMap build_act_map(int act, std::vector<MapNode> nodes,
                     const std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>>& edges) {
    if (nodes.empty()) throw InvalidTopology("act map has no nodes");

    std::sort(nodes.begin(), nodes.end(), [](const MapNode& a, const MapNode& b) {
        return std::tie(a.floor, a.column) < std::tie(b.floor, b.column);
    });

    ActMap map;
    map.act = act;
    std::map<std::pair<int, int>, NodeId> index;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        nodes[i].id = static_cast<NodeId>(i);
        nodes[i].act = act;
        auto key = std::make_pair(nodes[i].floor, nodes[i].column);
        if (!index.emplace(key, nodes[i].id).second) {
            throw InvalidTopology("duplicate node at floor " + std::to_string(nodes[i].floor) +
                                  ", column " + std::to_string(nodes[i].column));
        }
    }
    map.nodes = std::move(nodes);
    map.successors.assign(map.nodes.size(), {});
    map.predecessors.assign(map.nodes.size(), {});

    std::set<std::pair<NodeId, NodeId>> seen;
    for (const auto& [from, to] : edges) {
        auto fit = index.find(from);
        auto tit = index.find(to);
        if (fit == index.end() || tit == index.end()) {
            throw InvalidTopology("edge references a node that does not exist");
        }
        if (!seen.emplace(fit->second, tit->second).second) continue;
        map.successors[static_cast<std::size_t>(fit->second)].push_back(tit->second);
        map.predecessors[static_cast<std::size_t>(tit->second)].push_back(fit->second);
    }
    for (auto& v : map.successors) std::sort(v.begin(), v.end());
    for (auto& v : map.predecessors) std::sort(v.begin(), v.end());

    map.boss_floor = 0;
    for (const MapNode& n : map.nodes) map.boss_floor = std::max(map.boss_floor, n.floor);
    map.start_nodes = map.nodes_on_floor(1);
    for (const MapNode& n : map.nodes) {
        if (n.room_type == RoomType::Boss) map.boss_node = n.id;
    }

    validate_act_map(map);
    return map;
}

void validate_act_map(const ActMap& map) {
    if (map.act < 1 || map.act > 3) throw InvalidTopology("act must be 1..3");
    if (map.nodes.empty()) throw InvalidTopology("act map has no nodes");

    int boss_count = 0;
    for (const MapNode& n : map.nodes) {
        if (n.floor < 1 || n.floor > 16) {
            throw InvalidTopology("floor " + std::to_string(n.floor) + " out of range 1..16");
        }
        if (n.column < 0 || n.column > 6) {
            throw InvalidTopology("column " + std::to_string(n.column) + " out of range 0..6");
        }
        if (n.room_type == RoomType::Boss) {
            ++boss_count;
            if (n.floor != map.boss_floor) {
                throw InvalidTopology("boss node must be on the final floor");
            }
        }
    }
    if (boss_count != 1) {
        throw InvalidTopology("expected exactly one boss node, found " + std::to_string(boss_count));
    }
    if (map.boss_node < 0 || map.node(map.boss_node).room_type != RoomType::Boss) {
        throw InvalidTopology("boss_node does not point at a Boss room");
    }

    for (const MapNode& n : map.nodes) {
        if (n.floor == map.boss_floor - 1 && n.room_type != RoomType::Rest) {
            throw InvalidTopology("node before the boss floor must be a Rest site");
        }
        for (NodeId s : map.successors[static_cast<std::size_t>(n.id)]) {
            if (map.node(s).floor != n.floor + 1) {
                throw InvalidTopology("edge from floor " + std::to_string(n.floor) + " to floor " +
                                      std::to_string(map.node(s).floor) + " skips a floor");
            }
        }
    }

    // Backward reachability from the boss; any node that has successors but
    // cannot reach the boss is a trap the player could not escape.
    std::vector<char> reaches(map.nodes.size(), 0);
    reaches[static_cast<std::size_t>(map.boss_node)] = 1;
    for (int floor = map.boss_floor - 1; floor >= 1; --floor) {
        for (const MapNode& n : map.nodes) {
            if (n.floor != floor) continue;
            for (NodeId s : map.successors[static_cast<std::size_t>(n.id)]) {
                if (reaches[static_cast<std::size_t>(s)]) {
                    reaches[static_cast<std::size_t>(n.id)] = 1;
                    break;
                }
            }
        }
    }
    for (const MapNode& n : map.nodes) {
        if (!map.successors[static_cast<std::size_t>(n.id)].empty() &&
            !reaches[static_cast<std::size_t>(n.id)]) {
            throw InvalidTopology("node at floor " + std::to_string(n.floor) + ", column " +
                                  std::to_string(n.column) + " cannot reach the boss");
        }
    }
}

}  // namespace spire
