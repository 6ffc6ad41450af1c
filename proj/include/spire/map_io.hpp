#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spire/model.hpp"

namespace spire {

struct MalformedDocument : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No edge-consistent assignment of logged symbols onto map nodes exists.
// Callers discard the run (and count it) rather than aborting the corpus.
struct PathMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses the native map document: top-level `seed` plus `acts`, each act
// holding `nodes` ({floor, column, type}) and `edges` ({from:[f,c],
// to:[f+1,c']}). Topology violations surface as InvalidTopology.
MapSet parse_map(const std::string& text);

// Adapter for the community map-oracle's output layout: per act a flat node
// list of {x, y, symbol, children:[[x,y]...]} with y counted from 0. The
// boss room is implicit in that layout, so a B node is synthesized one floor
// above the top row and wired to every top-row node unless the document
// already carries one.
MapSet parse_oracle_document(const std::string& text);

// Reads a map file in either layout, sniffing by node field names.
MapSet load_map_file(const std::string& path);

// Serializes to the native document format. Key order and indentation are
// fixed, so equal MapSets always produce byte-identical text. `generator`,
// when non-empty, is recorded as provenance metadata.
std::string write_map_document(const MapSet& set, const std::string& generator = "");

// Resolves one act's symbol segment onto map nodes: symbol i names the room
// type on floor i+1. When several column choices fit, the lexicographically
// smallest column sequence wins and the trace is flagged ambiguous. Throws
// PathMismatch when nothing fits.
PathTrace resolve_act(const ActMap& map, std::span<const char> symbols);

// Splits a run's full symbol log into acts (each 'B' closes an act) and
// resolves every segment. The last trace is complete only when that act's
// boss was reached.
std::vector<PathTrace> resolve_path(const MapSet& maps, const RunRecord& run);

std::string read_text_file(const std::string& path);

}  // namespace spire
