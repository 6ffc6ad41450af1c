#include "spire/run_pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "spire/map_io.hpp"
#include "spire/path_enum.hpp"
#include "spire/rng.hpp"

namespace spire {

bool passes_filter(const CorpusFilter& filter, const RunRecord& run,
                   FilterCounters* counters) {
    if (counters) ++counters->input;
    // First failing predicate claims the rejection, keeping counters disjoint.
    std::uint64_t* reject = nullptr;
    if (run.is_ascension_mode != filter.is_ascension_mode)
        reject = counters ? &counters->not_ascension_mode : nullptr;
    else if (run.is_trial != filter.is_trial)
        reject = counters ? &counters->trial : nullptr;
    else if (run.is_daily != filter.is_daily)
        reject = counters ? &counters->daily : nullptr;
    else if (run.chose_seed != filter.chose_seed)
        reject = counters ? &counters->chose_seed : nullptr;
    else if (run.is_beta != filter.is_beta)
        reject = counters ? &counters->beta : nullptr;
    else if (run.is_endless != filter.is_endless)
        reject = counters ? &counters->endless : nullptr;
    else if (run.character != filter.character)
        reject = counters ? &counters->wrong_character : nullptr;
    else {
        if (counters) ++counters->passed;
        return true;
    }
    if (reject) ++*reject;
    return false;
}

std::vector<RunRecord> filter_runs(std::span<const RunRecord> records,
                                   const CorpusFilter& filter, FilterCounters& counters) {
    std::vector<RunRecord> passed;
    for (const RunRecord& run : records)
        if (passes_filter(filter, run, &counters)) passed.push_back(run);
    return passed;
}

const char* discard_reason_name(DiscardReason reason) {
    switch (reason) {
        case DiscardReason::None: return "";
        case DiscardReason::PathMismatch: return "path_mismatch";
        case DiscardReason::MissingMap: return "missing_map";
    }
    return "";
}

const EntropyBounds& BoundsCache::lookup(const std::string& seed, const ActMap& map,
                                         Kind kind, int key) {
    const auto cache_key = std::make_tuple(seed, map.act, static_cast<int>(kind), key);
    auto it = cache_.find(cache_key);
    if (it != cache_.end()) return it->second;

    std::vector<NodeId> ends;
    switch (kind) {
        case kFull: ends.push_back(map.boss_node); break;
        case kFloor: ends = map.nodes_on_floor(key); break;
        case kNode: ends.push_back(static_cast<NodeId>(key)); break;
    }
    EntropyBounds bounds = entropy_bounds(*tables_, map, map.start_nodes, ends);
    return cache_.emplace(cache_key, bounds).first->second;
}

const EntropyBounds& BoundsCache::full_act(const std::string& seed, const ActMap& map) {
    return lookup(seed, map, kFull, 0);
}

const EntropyBounds& BoundsCache::to_floor(const std::string& seed, const ActMap& map,
                                           int floor) {
    return lookup(seed, map, kFloor, floor);
}

const EntropyBounds& BoundsCache::to_node(const std::string& seed, const ActMap& map,
                                          NodeId node) {
    return lookup(seed, map, kNode, static_cast<int>(node));
}

RunAnalysis analyze_run(const EncounterTables& tables, const MapSet& maps,
                        const RunRecord& run, DefeatEndSet mode, BoundsCache* cache) {
    if (maps.seed != run.seed)
        throw SeedMismatch("map set is for seed " + maps.seed + ", run played " + run.seed);

    RunAnalysis out;
    out.seed = run.seed;
    out.victory = run.victory;
    out.ascension = run.ascension;

    std::vector<PathTrace> traces;
    try {
        traces = resolve_path(maps, run);
    } catch (const PathMismatch&) {
        out.discarded = DiscardReason::PathMismatch;
        return out;
    }

    BoundsCache local(tables);
    BoundsCache& bounds_cache = cache ? *cache : local;
    for (const PathTrace& trace : traces) {
        const ActMap& map = maps.act(trace.act);
        const EntropyBounds* bounds = nullptr;
        if (trace.complete) {
            bounds = &bounds_cache.full_act(maps.seed, map);
        } else if (mode == DefeatEndSet::Wide) {
            bounds = &bounds_cache.to_floor(maps.seed, map, trace.length());
        } else {
            bounds = &bounds_cache.to_node(maps.seed, map, trace.nodes.back());
        }
        EntropyReport report = make_report(tables, map, trace.nodes, *bounds);
        out.ambiguous = out.ambiguous || trace.ambiguous;
        if (report.degenerate) ++out.degenerate_acts;
        out.per_act.push_back(std::move(report));
    }
    out.acts_entered = static_cast<int>(out.per_act.size());

    // Across-act means skip degenerate acts; a single-route act says nothing
    // about the player's appetite for risk.
    int counted = 0;
    for (const EntropyReport& report : out.per_act) {
        if (report.degenerate) continue;
        out.avg_normalized += report.normalized;
        out.avg_per_step += report.per_step;
        ++counted;
    }
    if (counted > 0) {
        out.avg_normalized /= counted;
        out.avg_per_step /= counted;
    }
    return out;
}

void MapStore::add(MapSet set) {
    const std::string seed = set.seed;
    if (!maps_.emplace(seed, std::move(set)).second) ++duplicates_;
}

const MapSet* MapStore::find(const std::string& seed) const {
    auto it = maps_.find(seed);
    return it == maps_.end() ? nullptr : &it->second;
}

MapStore MapStore::load_directory(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw std::runtime_error("map directory not found: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    MapStore store;
    for (const fs::path& file : files) store.add(load_map_file(file.string()));
    return store;
}

CorpusResult analyze_corpus(const EncounterTables& tables, std::span<const RunRecord> runs,
                            const MapStore& store, const CorpusOptions& options) {
    CorpusResult result;

    // Filter, remembering each survivor's position in the input stream —
    // that index is the row identity everything downstream sorts by.
    std::vector<std::uint64_t> kept;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (passes_filter(options.filter, runs[i], &result.filter))
            kept.push_back(static_cast<std::uint64_t>(i));
    }

    if (options.sample_size && kept.size() > *options.sample_size) {
        // Partial Fisher-Yates over the kept indices, then restore input
        // order; same seed, same subsample, on any platform.
        std::mt19937_64 rng(splitmix64(options.sample_seed));
        const std::size_t want = static_cast<std::size_t>(*options.sample_size);
        for (std::size_t i = 0; i < want; ++i) {
            const std::size_t j =
                i + static_cast<std::size_t>(draw_below(rng, kept.size() - i));
            std::swap(kept[i], kept[j]);
        }
        result.sampled_out = kept.size() - want;
        kept.resize(want);
        std::sort(kept.begin(), kept.end());
    }

    BoundsCache cache(tables);
    result.rows.reserve(kept.size());
    for (std::uint64_t index : kept) {
        const RunRecord& run = runs[static_cast<std::size_t>(index)];
        const MapSet* maps = store.find(run.seed);
        RunAnalysis row;
        if (!maps) {
            row.seed = run.seed;
            row.victory = run.victory;
            row.ascension = run.ascension;
            row.discarded = DiscardReason::MissingMap;
        } else {
            row = analyze_run(tables, *maps, run, options.defeat_end_set, &cache);
        }
        row.run_index = index;
        switch (row.discarded) {
            case DiscardReason::None: ++result.analyzed; break;
            case DiscardReason::PathMismatch: ++result.discarded_path_mismatch; break;
            case DiscardReason::MissingMap: ++result.discarded_missing_map; break;
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

namespace {

using nlohmann::json;

RunRecord record_from_json(const json& j) {
    RunRecord run;
    run.victory = j.at("victory").get<bool>();
    run.ascension = j.at("ascension_level").get<int>();
    run.seed = j.at("seed_played").is_string()
                   ? j.at("seed_played").get<std::string>()
                   : std::to_string(j.at("seed_played").get<long long>());
    for (const json& sym : j.at("path_per_floor")) {
        if (!sym.is_string() || sym.get<std::string>().size() != 1)
            throw MalformedDocument("path_per_floor entries must be single symbols");
        const char symbol = sym.get<std::string>()[0];
        symbol_to_room(symbol);  // reject non-canonical symbols early
        run.path_symbols.push_back(symbol);
    }
    run.is_ascension_mode = j.at("is_ascension_mode").get<bool>();
    run.is_trial = j.at("is_trial").get<bool>();
    run.is_daily = j.at("is_daily").get<bool>();
    run.chose_seed = j.at("chose_seed").get<bool>();
    run.is_beta = j.at("is_beta").get<bool>();
    run.is_endless = j.at("is_endless").get<bool>();
    run.character = j.at("character_chosen").get<std::string>();
    return run;
}

}  // namespace

CorpusReadResult read_run_corpus(std::istream& in) {
    CorpusReadResult result;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++result.total_lines;
        try {
            result.records.push_back(record_from_json(json::parse(line)));
        } catch (const std::exception&) {
            ++result.malformed_lines;
        }
    }
    return result;
}

CorpusReadResult load_run_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open run corpus: " + path);
    return read_run_corpus(in);
}

std::string write_run_line(const RunRecord& run) {
    json j;
    j["victory"] = run.victory;
    j["ascension_level"] = run.ascension;
    j["seed_played"] = run.seed;
    json path = json::array();
    for (char c : run.path_symbols) path.push_back(std::string(1, c));
    j["path_per_floor"] = std::move(path);
    j["is_ascension_mode"] = run.is_ascension_mode;
    j["is_trial"] = run.is_trial;
    j["is_daily"] = run.is_daily;
    j["chose_seed"] = run.chose_seed;
    j["is_beta"] = run.is_beta;
    j["is_endless"] = run.is_endless;
    j["character_chosen"] = run.character;
    return j.dump();
}

}  // namespace spire
