#include "spire/map_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spire {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

using EdgeList = std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>>;

std::string seed_to_string(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_integer()) return std::to_string(value.get<long long>());
    if (value.is_number_unsigned()) return std::to_string(value.get<unsigned long long>());
    throw MalformedDocument("seed must be a string or integer");
}

RoomType room_from_field(const json& value) {
    if (!value.is_string() || value.get<std::string>().size() != 1)
        throw MalformedDocument("room type must be a one-character symbol");
    try {
        return symbol_to_room(value.get<std::string>()[0]);
    } catch (const UnknownSymbol& e) {
        throw MalformedDocument(e.what());
    }
}

ActMap parse_native_act(const json& act_obj, int expected_act) {
    const int act = act_obj.at("act").get<int>();
    if (act != expected_act)
        throw MalformedDocument("acts must appear in order 1..3; found act " +
                                std::to_string(act) + " in position " +
                                std::to_string(expected_act));
    std::vector<MapNode> nodes;
    for (const json& n : act_obj.at("nodes")) {
        MapNode node;
        node.act = act;
        node.floor = n.at("floor").get<int>();
        node.column = n.at("column").get<int>();
        node.room_type = room_from_field(n.at("type"));
        nodes.push_back(node);
    }
    EdgeList edges;
    for (const json& e : act_obj.at("edges")) {
        const json& from = e.at("from");
        const json& to = e.at("to");
        if (!from.is_array() || from.size() != 2 || !to.is_array() || to.size() != 2)
            throw MalformedDocument("edge endpoints must be [floor, column] pairs");
        edges.push_back({{from[0].get<int>(), from[1].get<int>()},
                         {to[0].get<int>(), to[1].get<int>()}});
    }
    return build_act_map(act, std::move(nodes), edges);
}

ActMap parse_oracle_act(const json& act_obj, int expected_act) {
    const int act = act_obj.contains("act") ? act_obj.at("act").get<int>() : expected_act;
    if (act != expected_act)
        throw MalformedDocument("oracle acts must appear in order 1..3");

    std::vector<MapNode> nodes;
    EdgeList edges;
    int top_y = -1;
    bool has_boss = false;
    for (const json& n : act_obj.at("nodes")) {
        MapNode node;
        node.act = act;
        const int y = n.at("y").get<int>();
        node.floor = y + 1;  // oracle rows count from 0
        node.column = n.at("x").get<int>();
        node.room_type = room_from_field(n.at("symbol"));
        top_y = std::max(top_y, y);
        has_boss = has_boss || node.room_type == RoomType::Boss;
        for (const json& child : n.at("children")) {
            if (!child.is_array() || child.size() != 2)
                throw MalformedDocument("oracle children must be [x, y] pairs");
            const int cx = child[0].get<int>();
            const int cy = child[1].get<int>();
            if (cy != y + 1)
                throw MalformedDocument("oracle child must sit one row above its parent");
            edges.push_back({{node.floor, node.column}, {cy + 1, cx}});
        }
        nodes.push_back(node);
    }
    if (nodes.empty()) throw MalformedDocument("oracle act has no nodes");
    if (!has_boss) {
        // The oracle layout stops at the top row; the boss room is implied.
        MapNode boss;
        boss.act = act;
        boss.floor = top_y + 2;
        boss.column = 3;
        boss.room_type = RoomType::Boss;
        for (const MapNode& n : nodes)
            if (n.floor == top_y + 1)
                edges.push_back({{n.floor, n.column}, {boss.floor, boss.column}});
        nodes.push_back(boss);
    }
    return build_act_map(act, std::move(nodes), edges);
}

json parse_json_or_throw(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw MalformedDocument(std::string("map document is not valid JSON: ") + e.what());
    }
}

MapSet parse_acts(const json& doc, bool oracle_layout, bool require_three) {
    MapSet set;
    try {
        set.seed = seed_to_string(doc.at("seed"));
        const json& acts = doc.at("acts");
        if (!acts.is_array() || acts.empty() || acts.size() > 3)
            throw MalformedDocument("map document must hold 1..3 acts");
        if (require_three && acts.size() != 3)
            throw MalformedDocument("map document must hold exactly 3 acts");
        for (std::size_t i = 0; i < acts.size(); ++i) {
            const int expected = static_cast<int>(i) + 1;
            set.acts.push_back(oracle_layout ? parse_oracle_act(acts[i], expected)
                                             : parse_native_act(acts[i], expected));
        }
    } catch (const json::exception& e) {
        throw MalformedDocument(std::string("map document missing or mistyped field: ") +
                                e.what());
    }
    return set;
}

}  // namespace

MapSet parse_map(const std::string& text) {
    return parse_acts(parse_json_or_throw(text), /*oracle_layout=*/false,
                      /*require_three=*/true);
}

MapSet parse_oracle_document(const std::string& text) {
    // The oracle shim tolerates partial documents (a single act is a common
    // fixture) — the run pipeline itself insists on all three acts.
    return parse_acts(parse_json_or_throw(text), /*oracle_layout=*/true,
                      /*require_three=*/false);
}

MapSet load_map_file(const std::string& path) {
    const std::string text = read_text_file(path);
    const json doc = parse_json_or_throw(text);
    try {
        const json& acts = doc.at("acts");
        if (!acts.is_array() || acts.empty())
            throw MalformedDocument("map document must hold at least one act");
        const json& nodes = acts[0].at("nodes");
        if (!nodes.is_array() || nodes.empty())
            throw MalformedDocument("map act has no nodes");
        const bool oracle_layout = nodes[0].contains("x");
        return parse_acts(doc, oracle_layout, /*require_three=*/!oracle_layout);
    } catch (const json::exception& e) {
        throw MalformedDocument(std::string("map document missing or mistyped field: ") +
                                e.what());
    }
}

std::string write_map_document(const MapSet& set, const std::string& generator) {
    ordered_json doc;
    doc["seed"] = set.seed;
    if (!generator.empty()) doc["generator"] = generator;
    doc["acts"] = ordered_json::array();
    for (const ActMap& act : set.acts) {
        ordered_json a;
        a["act"] = act.act;
        a["nodes"] = ordered_json::array();
        for (const MapNode& n : act.nodes) {
            a["nodes"].push_back({{"floor", n.floor},
                                  {"column", n.column},
                                  {"type", std::string(1, room_to_symbol(n.room_type))}});
        }
        a["edges"] = ordered_json::array();
        for (const MapNode& n : act.nodes) {
            for (NodeId to : act.successors[static_cast<std::size_t>(n.id)]) {
                const MapNode& t = act.node(to);
                a["edges"].push_back({{"from", {n.floor, n.column}},
                                      {"to", {t.floor, t.column}}});
            }
        }
        doc["acts"].push_back(std::move(a));
    }
    return doc.dump(2) + "\n";
}

PathTrace resolve_act(const ActMap& map, std::span<const char> symbols) {
    const int n = static_cast<int>(symbols.size());
    if (n == 0) throw PathMismatch("empty act segment");
    if (n > map.boss_floor)
        throw PathMismatch("act segment longer than the map (" + std::to_string(n) + " > " +
                           std::to_string(map.boss_floor) + " floors)");

    std::vector<RoomType> wanted;
    wanted.reserve(symbols.size());
    for (char c : symbols) wanted.push_back(symbol_to_room(c));

    // ways[i][node]: matching assignments of symbols[i..] starting at `node`
    // (which sits on floor i+1), saturated at 2 — we only need to tell
    // "unique" from "ambiguous". 0 means the suffix cannot be placed there.
    std::vector<std::vector<std::uint8_t>> ways(
        static_cast<std::size_t>(n), std::vector<std::uint8_t>(map.node_count(), 0));
    for (int i = n - 1; i >= 0; --i) {
        for (NodeId id : map.nodes_on_floor(i + 1)) {
            if (map.node(id).room_type != wanted[static_cast<std::size_t>(i)]) continue;
            if (i == n - 1) {
                ways[static_cast<std::size_t>(i)][static_cast<std::size_t>(id)] = 1;
                continue;
            }
            int total = 0;
            for (NodeId next : map.successors[static_cast<std::size_t>(id)])
                total += ways[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(next)];
            ways[static_cast<std::size_t>(i)][static_cast<std::size_t>(id)] =
                static_cast<std::uint8_t>(std::min(total, 2));
        }
    }

    int total = 0;
    for (NodeId s : map.start_nodes)
        total += ways[0][static_cast<std::size_t>(s)];
    if (total == 0) {
        throw PathMismatch("logged symbols do not fit act " + std::to_string(map.act) +
                           " of the map");
    }

    PathTrace trace;
    trace.act = map.act;
    trace.ambiguous = total > 1;
    // Greedy smallest column at every floor = lexicographically smallest
    // column sequence; node ids are (floor, column)-ordered so "first with
    // ways > 0" is exactly "leftmost".
    NodeId current = -1;
    for (NodeId s : map.start_nodes) {
        if (ways[0][static_cast<std::size_t>(s)] > 0) {
            current = s;
            break;
        }
    }
    trace.nodes.push_back(current);
    for (int i = 1; i < n; ++i) {
        for (NodeId next : map.successors[static_cast<std::size_t>(current)]) {
            if (ways[static_cast<std::size_t>(i)][static_cast<std::size_t>(next)] > 0) {
                current = next;
                break;
            }
        }
        trace.nodes.push_back(current);
    }
    trace.complete = map.node(trace.nodes.back()).room_type == RoomType::Boss;
    return trace;
}

std::vector<PathTrace> resolve_path(const MapSet& maps, const RunRecord& run) {
    if (run.path_symbols.empty()) throw PathMismatch("run has no logged path");

    // Each 'B' closes an act.
    std::vector<std::vector<char>> segments;
    std::vector<char> current;
    for (char c : run.path_symbols) {
        current.push_back(c);
        if (c == 'B') {
            segments.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) segments.push_back(std::move(current));

    if (segments.size() > maps.acts.size()) {
        throw PathMismatch("run enters " + std::to_string(segments.size()) +
                           " acts but the map has " + std::to_string(maps.acts.size()));
    }
    std::vector<PathTrace> traces;
    traces.reserve(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i)
        traces.push_back(resolve_act(maps.acts[i], segments[i]));
    return traces;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace spire
