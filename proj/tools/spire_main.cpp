// spire: path-risk analytics for Slay-the-Spire-style act maps.
//
// Subcommands:
//   gen-map   deterministic synthetic map documents
//   paths     choice-set enumeration on a map document
//   entropy   per-room breakdown for a symbol sequence, optionally on a map
//   analyze   full corpus pipeline: filter, resolve, score, compare, report
//
// Exit codes: 0 success, 2 configuration, 3 input parsing/validation,
// 4 empty result (nothing survived to analyze).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spire/entropy.hpp"
#include "spire/map_io.hpp"
#include "spire/map_synth.hpp"
#include "spire/model.hpp"
#include "spire/path_enum.hpp"
#include "spire/report.hpp"
#include "spire/run_pipeline.hpp"
#include "spire/stats.hpp"
#include "spire/tables.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitEmpty = 4;

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string checksum_hex(std::string_view bytes) {
    char buffer[20];
    std::snprintf(buffer, sizeof(buffer), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buffer;
}

std::string file_checksum(const std::string& path) {
    return checksum_hex(spire::read_text_file(path));
}

spire::EncounterTables load_tables(const std::string& tables_path) {
    if (tables_path.empty()) return spire::EncounterTables::bundled();
    return spire::EncounterTables::load(tables_path);
}

std::vector<char> parse_symbols(const std::string& text) {
    std::vector<char> symbols;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') continue;
        spire::symbol_to_room(c);  // throws UnknownSymbol on junk
        symbols.push_back(c);
    }
    return symbols;
}

std::string node_label(const spire::ActMap& map, spire::NodeId id) {
    const spire::MapNode& n = map.node(id);
    return std::to_string(n.floor) + ":" + std::to_string(n.column);
}

// "floor:column" addressing for --start/--end.
spire::NodeId parse_node_ref(const spire::ActMap& map, const std::string& ref) {
    const auto colon = ref.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--start/--end", "expected floor:column, got '" + ref + "'");
    const int floor = std::stoi(ref.substr(0, colon));
    const int column = std::stoi(ref.substr(colon + 1));
    const spire::NodeId id = map.find_node(floor, column);
    if (id < 0)
        throw CLI::ValidationError("--start/--end", "no node at " + ref + " in act " +
                                       std::to_string(map.act));
    return id;
}

struct GenMapOptions {
    std::uint64_t seed = 0;
    std::string out;
    spire::SynthParams params = spire::SynthParams::defaults();
};

int run_gen_map(const GenMapOptions& opt) {
    const spire::MapSet set = spire::generate_map(opt.seed, opt.params);
    std::string generator = spire::generator_name();
    generator += " floors=" + std::to_string(opt.params.floors_per_act) +
                 " columns=" + std::to_string(opt.params.columns) +
                 " starts=" + std::to_string(opt.params.start_node_count) +
                 " density=" + spire::format_double(opt.params.edge_density);
    const std::string document = spire::write_map_document(set, generator);
    if (opt.out.empty()) {
        std::cout << document;
        return kExitOk;
    }
    std::ofstream out(opt.out, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << opt.out << "\n";
        return kExitConfig;
    }
    out << document;
    out.flush();
    if (!out) {
        std::cerr << "error: write failed for " << opt.out << "\n";
        return kExitConfig;
    }
    std::cout << "wrote " << opt.out << " (seed " << set.seed << ")\n";
    return kExitOk;
}

struct PathsOptions {
    std::string map_file;
    int act = 0;  // 0 = every act
    int death_floor = 0;
    std::vector<std::string> starts;
    std::vector<std::string> ends;
    bool list = false;
};

int run_paths(const PathsOptions& opt) {
    const spire::MapSet set = spire::load_map_file(opt.map_file);
    bool printed_any = false;
    for (const spire::ActMap& map : set.acts) {
        if (opt.act != 0 && map.act != opt.act) continue;
        std::vector<spire::NodeId> starts = map.start_nodes;
        std::vector<spire::NodeId> ends = {map.boss_node};
        if (!opt.starts.empty()) {
            starts.clear();
            for (const std::string& ref : opt.starts) starts.push_back(parse_node_ref(map, ref));
        }
        if (!opt.ends.empty()) {
            ends.clear();
            for (const std::string& ref : opt.ends) ends.push_back(parse_node_ref(map, ref));
        } else if (opt.death_floor > 0) {
            ends = map.nodes_on_floor(opt.death_floor);
            if (ends.empty()) {
                std::cerr << "error: no nodes on floor " << opt.death_floor << " of act "
                          << map.act << "\n";
                return kExitConfig;
            }
        }
        if (opt.list) {
            const spire::PathSet paths = spire::all_paths(map, starts, ends);
            for (const auto& path : paths.paths) {
                std::string line = "act " + std::to_string(map.act) + ":";
                for (spire::NodeId id : path) line += " " + node_label(map, id);
                std::cout << line << "\n";
            }
            std::cout << "act " << map.act << ": " << paths.size() << " paths\n";
        } else {
            std::cout << "act " << map.act << ": "
                      << spire::enumerate_path_count(map, starts, ends) << " paths\n";
        }
        printed_any = true;
    }
    if (!printed_any) {
        std::cerr << "error: map has no act " << opt.act << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

struct EntropyOptions {
    std::string map_file;
    std::string tables_file;
    std::string symbols;
    int act = 1;
    std::string defeat_end_set = "wide";
};

int run_entropy(const EntropyOptions& opt) {
    const spire::EncounterTables tables = load_tables(opt.tables_file);
    const std::vector<char> symbols = parse_symbols(opt.symbols);
    if (symbols.empty()) {
        std::cerr << "error: --symbols is empty\n";
        return kExitConfig;
    }

    if (opt.map_file.empty()) {
        // No map: score the bare sequence (no bounds, no normalization).
        std::vector<spire::RoomType> rooms;
        for (char c : symbols) rooms.push_back(spire::symbol_to_room(c));
        const spire::PathEntropy scored = spire::sequence_entropy(tables, opt.act, rooms);
        std::printf("%-6s %-8s %s\n", "step", "symbol", "bits");
        for (std::size_t i = 0; i < scored.per_node.size(); ++i) {
            std::printf("%-6zu %-8c %s\n", i + 1, symbols[i],
                        spire::format_double(scored.per_node[i].bits).c_str());
        }
        std::printf("total  %s bits (act %d, no map: bounds unavailable)\n",
                    spire::format_double(scored.total).c_str(), opt.act);
        return kExitOk;
    }

    const spire::MapSet set = spire::load_map_file(opt.map_file);
    if (opt.act < 1 || opt.act > static_cast<int>(set.acts.size())) {
        std::cerr << "error: map has no act " << opt.act << "\n";
        return kExitConfig;
    }
    const spire::ActMap& map = set.act(opt.act);
    const spire::PathTrace trace = spire::resolve_act(map, symbols);
    spire::BoundsCache cache(tables);
    const spire::EntropyBounds& bounds =
        trace.complete ? cache.full_act(set.seed, map)
        : opt.defeat_end_set == "narrow"
            ? cache.to_node(set.seed, map, trace.nodes.back())
            : cache.to_floor(set.seed, map, trace.length());
    const spire::EntropyReport report =
        spire::make_report(tables, map, trace.nodes, bounds);

    std::printf("%-6s %-6s %-8s %s\n", "floor", "node", "symbol", "bits");
    for (const spire::NodeContribution& c : report.per_node) {
        const spire::MapNode& n = map.node(c.node);
        std::printf("%-6d %-6s %-8c %s\n", n.floor, node_label(map, c.node).c_str(),
                    spire::room_to_symbol(c.room), spire::format_double(c.bits).c_str());
    }
    std::printf("total       %s bits\n", spire::format_double(report.total).c_str());
    std::printf("min         %s bits over %llu paths\n",
                spire::format_double(report.min_possible).c_str(),
                static_cast<unsigned long long>(bounds.path_count));
    std::printf("max         %s bits\n", spire::format_double(report.max_possible).c_str());
    std::printf("normalized  %s\n", spire::format_double(report.normalized).c_str());
    std::printf("per-step    %s\n", spire::format_double(report.per_step).c_str());
    if (report.degenerate) std::printf("degenerate  true (min = max; no real choice)\n");
    if (trace.ambiguous)
        std::printf("ambiguous   true (several column routes fit; leftmost kept)\n");
    if (!trace.complete)
        std::printf("complete    false (scored as a death on floor %d)\n", trace.length());
    return kExitOk;
}

struct AnalyzeOptions {
    std::string runs_file;
    std::string maps_dir;
    std::string out_dir;
    std::string tables_file;
    std::string defeat_end_set = "wide";
    std::string metric = "both";
    double alpha = 0.05;
    std::optional<std::uint64_t> sample_size;
    std::uint64_t sample_seed = 0;
};

int run_analyze(const AnalyzeOptions& opt) {
    using nlohmann::ordered_json;

    const spire::EncounterTables tables = load_tables(opt.tables_file);
    const spire::CorpusReadResult corpus = spire::load_run_corpus(opt.runs_file);
    const spire::MapStore store = spire::MapStore::load_directory(opt.maps_dir);

    spire::CorpusOptions options;
    options.defeat_end_set = opt.defeat_end_set == "narrow" ? spire::DefeatEndSet::Narrow
                                                            : spire::DefeatEndSet::Wide;
    options.sample_size = opt.sample_size;
    options.sample_seed = opt.sample_seed;
    const spire::CorpusResult result =
        spire::analyze_corpus(tables, corpus.records, store, options);

    spire::StatsConfig stats_config;
    stats_config.alpha = opt.alpha;
    std::vector<spire::Metric> metrics;
    if (opt.metric == "normalized" || opt.metric == "both")
        metrics.push_back(spire::Metric::Normalized);
    if (opt.metric == "per-step" || opt.metric == "both")
        metrics.push_back(spire::Metric::PerStep);

    std::vector<spire::GroupComparison> comparisons;
    std::vector<std::string> skipped;
    for (spire::GroupSplit split : {spire::GroupSplit::Victory, spire::GroupSplit::Ascension}) {
        for (spire::Scope scope : {spire::Scope::Act1, spire::Scope::Act2, spire::Scope::Act3,
                                   spire::Scope::AllActs}) {
            for (spire::Metric metric : metrics) {
                const std::string label = std::string(spire::split_name(split)) + "/" +
                                          spire::scope_name(scope) + "/" +
                                          spire::metric_name(metric);
                try {
                    comparisons.push_back(spire::compare_groups(result.rows, split, scope,
                                                                metric, stats_config));
                } catch (const spire::EmptyGroup& e) {
                    skipped.push_back(label + ": " + e.what());
                } catch (const spire::InsufficientSample& e) {
                    skipped.push_back(label + ": " + e.what());
                }
            }
        }
    }

    const spire::ReportFiles files =
        spire::emit_report(result.rows, comparisons, stats_config, opt.out_dir);

    // Provenance: everything needed to reproduce the outputs bit for bit.
    // Deliberately no timestamps — reruns must be byte-identical.
    ordered_json prov;
    prov["command"] = "analyze";
    prov["options"] = {{"runs", opt.runs_file},
                       {"maps", opt.maps_dir},
                       {"out", opt.out_dir},
                       {"tables", opt.tables_file.empty() ? "bundled" : opt.tables_file},
                       {"defeat_end_set", opt.defeat_end_set},
                       {"metric", opt.metric},
                       {"alpha", opt.alpha},
                       {"ascension_threshold", stats_config.ascension_threshold}};
    if (opt.sample_size) {
        prov["options"]["sample"] = *opt.sample_size;
        prov["options"]["sample_seed"] = opt.sample_seed;
    }
    prov["inputs"]["runs_file"] = {{"path", opt.runs_file},
                                   {"fnv1a64", file_checksum(opt.runs_file)},
                                   {"lines", corpus.total_lines},
                                   {"malformed_lines", corpus.malformed_lines}};
    ordered_json map_files = ordered_json::array();
    {
        std::vector<std::filesystem::path> paths;
        for (const auto& entry : std::filesystem::directory_iterator(opt.maps_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                paths.push_back(entry.path());
        std::sort(paths.begin(), paths.end());
        for (const auto& p : paths)
            map_files.push_back(
                {{"file", p.filename().string()}, {"fnv1a64", file_checksum(p.string())}});
    }
    prov["inputs"]["maps_dir"] = {{"path", opt.maps_dir}, {"files", std::move(map_files)}};
    prov["inputs"]["tables"] = {
        {"version", tables.version},
        {"fnv1a64", checksum_hex(opt.tables_file.empty()
                                     ? spire::EncounterTables::bundled_json_text()
                                     : spire::read_text_file(opt.tables_file))}};
    prov["counts"] = {{"records", corpus.records.size()},
                      {"filter",
                       {{"input", result.filter.input},
                        {"passed", result.filter.passed},
                        {"not_ascension_mode", result.filter.not_ascension_mode},
                        {"trial", result.filter.trial},
                        {"daily", result.filter.daily},
                        {"chose_seed", result.filter.chose_seed},
                        {"beta", result.filter.beta},
                        {"endless", result.filter.endless},
                        {"wrong_character", result.filter.wrong_character}}},
                      {"sampled_out", result.sampled_out},
                      {"rows", result.rows.size()},
                      {"analyzed", result.analyzed},
                      {"discarded_path_mismatch", result.discarded_path_mismatch},
                      {"discarded_missing_map", result.discarded_missing_map},
                      {"duplicate_map_seeds", store.duplicate_seeds()}};
    prov["skipped_comparisons"] = skipped;
    ordered_json outputs = ordered_json::array();
    for (const std::string& path : files.all())
        outputs.push_back({{"file", std::filesystem::path(path).filename().string()},
                           {"fnv1a64", file_checksum(path)}});
    prov["outputs"] = std::move(outputs);

    const std::string prov_path =
        (std::filesystem::path(opt.out_dir) / "provenance.json").string();
    std::ofstream prov_out(prov_path, std::ios::binary);
    if (!prov_out) {
        std::cerr << "error: cannot write " << prov_path << "\n";
        return kExitConfig;
    }
    prov_out << prov.dump(2) << "\n";
    prov_out.flush();

    std::cout << "corpus: " << result.filter.input << " records, " << result.filter.passed
              << " passed filters";
    if (corpus.malformed_lines) std::cout << ", " << corpus.malformed_lines << " malformed";
    if (result.sampled_out) std::cout << ", " << result.sampled_out << " sampled out";
    std::cout << "\n";
    std::cout << "analyzed: " << result.analyzed << " runs ("
              << result.discarded_path_mismatch << " path mismatches, "
              << result.discarded_missing_map << " missing maps)\n";
    for (const spire::GroupComparison& cmp : comparisons) {
        std::cout << spire::split_name(cmp.split) << "/" << spire::scope_name(cmp.scope)
                  << "/" << spire::metric_name(cmp.metric) << ": t="
                  << spire::format_double(cmp.result.t)
                  << " p=" << spire::format_double(cmp.result.p)
                  << (cmp.result.significant ? " significant" : " not significant") << "\n";
    }
    for (const std::string& s : skipped) std::cout << "skipped " << s << "\n";
    std::cout << "reports in " << opt.out_dir << "\n";

    return result.analyzed == 0 ? kExitEmpty : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Path-risk entropy analytics for procedurally generated act maps"};
    app.require_subcommand(1);

    GenMapOptions gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-map", "Generate a synthetic map document");
    gen_cmd->add_option("--seed", gen.seed, "64-bit map seed")->required();
    gen_cmd->add_option("--out,-o", gen.out, "Output file (default: stdout)");
    gen_cmd->add_option("--floors", gen.params.floors_per_act,
                        "Regular floors per act (boss adds one)");
    gen_cmd->add_option("--columns", gen.params.columns, "Map width in columns");
    gen_cmd->add_option("--starts", gen.params.start_node_count,
                        "Floor-1 entry nodes (clamped to columns)");
    gen_cmd->add_option("--density", gen.params.edge_density,
                        "Chance of keeping each optional edge, (0,1]");

    PathsOptions paths;
    CLI::App* paths_cmd = app.add_subcommand("paths", "Count or list choice-set paths");
    paths_cmd->add_option("--map", paths.map_file, "Map document")
        ->required()
        ->check(CLI::ExistingFile);
    paths_cmd->add_option("--act", paths.act, "Act to query (default: every act)");
    paths_cmd->add_option("--death-floor", paths.death_floor,
                          "End the choice set at this floor instead of the boss");
    paths_cmd->add_option("--start", paths.starts, "Start node as floor:column (repeatable)");
    paths_cmd->add_option("--end", paths.ends, "End node as floor:column (repeatable)");
    paths_cmd->add_flag("--list", paths.list, "Print every path, not just the count");

    EntropyOptions entropy;
    CLI::App* entropy_cmd =
        app.add_subcommand("entropy", "Score a played symbol sequence");
    entropy_cmd->add_option("--symbols", entropy.symbols,
                            "Room symbols, e.g. M,M,?,E,T,R,B or MM?ETRB")
        ->required();
    entropy_cmd->add_option("--map", entropy.map_file,
                            "Map document (enables bounds and normalization)")
        ->check(CLI::ExistingFile);
    entropy_cmd->add_option("--act", entropy.act, "Act the sequence belongs to (default 1)");
    entropy_cmd->add_option("--tables", entropy.tables_file, "Probability tables JSON")
        ->check(CLI::ExistingFile);
    entropy_cmd->add_option("--defeat-end-set", entropy.defeat_end_set,
                            "Choice set for incomplete sequences: wide|narrow")
        ->check(CLI::IsMember({"wide", "narrow"}));

    AnalyzeOptions analyze;
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "Run the full corpus pipeline");
    analyze_cmd->add_option("--runs", analyze.runs_file, "Run corpus (one JSON record per line)")
        ->required()
        ->check(CLI::ExistingFile);
    analyze_cmd->add_option("--maps", analyze.maps_dir, "Directory of map documents")
        ->required()
        ->check(CLI::ExistingDirectory);
    analyze_cmd->add_option("--out", analyze.out_dir, "Report output directory")->required();
    analyze_cmd->add_option("--tables", analyze.tables_file, "Probability tables JSON")
        ->check(CLI::ExistingFile);
    analyze_cmd->add_option("--defeat-end-set", analyze.defeat_end_set,
                            "Defeat choice set: wide (any death-floor node) or narrow")
        ->check(CLI::IsMember({"wide", "narrow"}));
    analyze_cmd->add_option("--metric", analyze.metric,
                            "Comparison metric: normalized|per-step|both")
        ->check(CLI::IsMember({"normalized", "per-step", "both"}));
    analyze_cmd->add_option("--alpha", analyze.alpha, "Significance level")
        ->check(CLI::Range(1e-9, 0.999999999));
    std::uint64_t sample_value = 0;
    CLI::Option* sample_opt =
        analyze_cmd->add_option("--sample", sample_value, "Subsample size after filtering");
    analyze_cmd->add_option("--sample-seed", analyze.sample_seed,
                            "Seed for the reproducible subsample");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message
        return kExitConfig;
    }

    if (sample_opt->count() > 0) analyze.sample_size = sample_value;

    try {
        if (gen_cmd->parsed()) return run_gen_map(gen);
        if (paths_cmd->parsed()) return run_paths(paths);
        if (entropy_cmd->parsed()) return run_entropy(entropy);
        if (analyze_cmd->parsed()) return run_analyze(analyze);
    } catch (const spire::InfeasibleParams& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const spire::MalformedDocument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const spire::InvalidTopology& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const spire::InvalidTable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const spire::UnknownSymbol& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const spire::PathMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const spire::SeedMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitConfig;
}
