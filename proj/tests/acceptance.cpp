// Acceptance gate: one PASS/FAIL line per criterion, details on failure.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

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
#include "support/oracles.hpp"

namespace {

using namespace spire;
namespace st = spire::testing;
namespace fs = std::filesystem;
using nlohmann::json;

struct Criterion {
    int failures = 0;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures;
        if (notes.size() < 12) notes.push_back(what);
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

SynthParams small_params() {
    SynthParams params = SynthParams::defaults();
    params.floors_per_act = 8;
    params.columns = 4;
    params.edge_density = 0.75;
    return params;
}

// ---- criterion 1: frozen per-room entropy constants ------------------------

void criterion_constants(Criterion& c) {
    const EncounterTables tables = EncounterTables::bundled();
    struct Expectation {
        const char* label;
        RoomType room;
        int act;
        VisitCounters counters;
        double expected;
    };
    const Expectation expectations[] = {
        {"act1 monster first", RoomType::Monster, 1, {0, 0, 0}, 2.0},
        {"act1 monster later", RoomType::Monster, 1, {3, 0, 0}, 3.265319531114783},
        {"act2 monster first", RoomType::Monster, 2, {0, 0, 0}, 2.321928094887362},
        {"act2 monster later", RoomType::Monster, 2, {2, 0, 0}, 2.8764450655653073},
        {"act3 monster first", RoomType::Monster, 3, {0, 0, 0}, 1.584962500721156},
        {"act3 monster later", RoomType::Monster, 3, {2, 0, 0}, 3.0},
        {"elite first", RoomType::Elite, 1, {0, 0, 0}, 1.584962500721156},
        {"elite later", RoomType::Elite, 1, {0, 1, 0}, 1.0},
        {"boss", RoomType::Boss, 1, {0, 0, 0}, 1.584962500721156},
        {"treasure", RoomType::Treasure, 1, {0, 0, 0}, 1.462409352486515},
        {"shop", RoomType::Shop, 1, {0, 0, 0}, 0.0},
        {"rest", RoomType::Rest, 1, {0, 0, 0}, 0.0},
    };
    for (const Expectation& e : expectations) {
        VisitCounters counters = e.counters;
        const double got = location_entropy(tables, e.room, e.act, counters);
        c.expect(std::fabs(got - e.expected) <= 0.01,
                 std::string(e.label) + ": got " + fmt(got) + ", want " + fmt(e.expected));
    }
}

// ---- criterion 2: chain rule equals joint enumeration -----------------------

void criterion_chain_rule(Criterion& c) {
    const EncounterTables tables = EncounterTables::bundled();
    UnknownChain chain(tables.unknown);
    double running = 0.0;
    for (int k = 1; k <= 3; ++k) {
        auto [bits, next] = unknown_step_entropy(chain, k);
        chain = next;
        running += bits;
        const double joint = st::joint_unknown_entropy(tables.unknown, k);
        c.expect(std::fabs(running - joint) <= 1e-9,
                 "joint entropy mismatch at k=" + std::to_string(k) + ": chain rule " +
                     fmt(running) + " vs enumeration " + fmt(joint));
        double mass = 0.0;
        for (double p : chain.marginal()) mass += p;
        c.expect(std::fabs(mass - 1.0) <= 1e-9,
                 "marginal after step " + std::to_string(k) + " sums to " + fmt(mass));
    }
}

// ---- criterion 3: path enumeration vs independent oracles -------------------

void criterion_enumeration(Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    std::uint64_t acts_checked = 0, sets_compared = 0;
    for (int i = 0; i < 200 && c.failures < 12; ++i) {
        SynthParams params = SynthParams::defaults();
        params.floors_per_act = 6 + i % 10;
        params.columns = 3 + i % 5;
        params.start_node_count = 1 + i % 3;
        params.edge_density = 0.55 + 0.05 * (i % 10);
        const MapSet set = generate_map(20000 + static_cast<std::uint64_t>(i), params);
        for (const ActMap& map : set.acts) {
            const std::vector<NodeId> ends{map.boss_node};
            const std::uint64_t counted = enumerate_path_count(map, map.start_nodes, ends);
            const std::uint64_t oracle = st::dp_path_count(map, map.start_nodes, ends);
            c.expect(counted == oracle, "map " + std::to_string(i) + " act " +
                                            std::to_string(map.act) + ": counted " +
                                            std::to_string(counted) + ", oracle " +
                                            std::to_string(oracle));
            ++acts_checked;
            if (counted > 10000) continue;
            PathSet materialized = all_paths(map, map.start_nodes, ends);
            auto brute = st::brute_force_paths(map, map.start_nodes, ends);
            c.expect(materialized.size() == counted,
                     "map " + std::to_string(i) + ": materialized " +
                         std::to_string(materialized.size()) + " of " +
                         std::to_string(counted));
            std::sort(brute.begin(), brute.end());
            std::sort(materialized.paths.begin(), materialized.paths.end());
            c.expect(materialized.paths == brute,
                     "map " + std::to_string(i) + " act " + std::to_string(map.act) +
                         ": path sets differ");
            ++sets_compared;
        }
    }
    c.expect(sets_compared >= 200, "only " + std::to_string(sets_compared) +
                                       " choice sets were small enough to cross-check");
    const double elapsed = seconds_since(start);
    c.expect(elapsed < 60.0, "enumeration sweep took " + fmt(elapsed) + "s (limit 60s)");
    (void)acts_checked;
}

// ---- criterion 4: scored runs stay inside their bounds ----------------------

void criterion_bounds(Criterion& c) {
    const EncounterTables tables = EncounterTables::bundled();
    std::mt19937_64 rng(0xACCE97ULL);
    std::vector<RunAnalysis> rows;
    std::uint64_t degenerate_seen = 0;
    for (int i = 0; i < 1000 && c.failures < 12; ++i) {
        const MapSet set =
            generate_map(40000 + static_cast<std::uint64_t>(i / 4), small_params());
        const ActMap& map = set.act(1 + static_cast<int>(rng() % 3));
        std::vector<NodeId> path = st::random_full_path(map, rng);
        const bool defeat = rng() % 2 == 0;
        if (defeat) path.resize(2 + rng() % (path.size() - 2));

        const MapNode& last = map.node(path.back());
        const std::vector<NodeId> ends =
            defeat ? map.nodes_on_floor(last.floor) : std::vector<NodeId>{map.boss_node};
        const EntropyBounds bounds = entropy_bounds(tables, map, map.start_nodes, ends);
        const EntropyReport report = make_report(tables, map, path, bounds);

        const std::string tag = "pair " + std::to_string(i);
        c.expect(report.total >= bounds.min_bits - 1e-9 &&
                     report.total <= bounds.max_bits + 1e-9,
                 tag + ": played " + fmt(report.total) + " outside [" +
                     fmt(bounds.min_bits) + ", " + fmt(bounds.max_bits) + "]");
        c.expect(report.normalized >= 0.0 && report.normalized <= 1.0,
                 tag + ": normalized " + fmt(report.normalized));
        c.expect(std::isfinite(report.normalized) && std::isfinite(report.per_step),
                 tag + ": non-finite score");
        if (report.degenerate) {
            ++degenerate_seen;
            c.expect(report.normalized == 0.0 && report.per_step == 0.0,
                     tag + ": degenerate act still scored");
        }

        RunAnalysis row;
        row.run_index = static_cast<std::uint64_t>(i);
        row.seed = set.seed;
        row.victory = !defeat;
        row.ascension = static_cast<int>(rng() % 21);
        row.per_act = {report};
        row.acts_entered = 1;
        row.degenerate_acts = report.degenerate ? 1 : 0;
        row.avg_normalized = report.normalized;
        row.avg_per_step = report.per_step;
        rows.push_back(std::move(row));
    }
    // Degenerate rows are flagged and excluded from statistics, never divided by.
    const GroupComparison cmp =
        compare_groups(rows, GroupSplit::Victory, Scope::Act1, Metric::Normalized);
    c.expect(cmp.excluded_degenerate == degenerate_seen,
             "stats layer excluded " + std::to_string(cmp.excluded_degenerate) + " of " +
                 std::to_string(degenerate_seen) + " degenerate rows");
    c.expect(cmp.result.n_a + cmp.result.n_b + cmp.excluded_degenerate == rows.size(),
             "row accounting mismatch");
    c.expect(std::isfinite(cmp.result.t) && std::isfinite(cmp.result.p),
             "comparison produced non-finite statistics");
}

// ---- criterion 5: Welch implementation vs reference fixtures ----------------

void criterion_welch(Criterion& c) {
    const json doc = json::parse(read_file(fs::path(SPIRE_TEST_DIR) / "fixtures" /
                                           "welch_cases.json"));
    const json& cases = doc.at("cases");
    c.expect(cases.size() >= 20,
             "only " + std::to_string(cases.size()) + " reference fixtures");
    for (const json& entry : cases) {
        const std::vector<double> a = entry.at("a").get<std::vector<double>>();
        const std::vector<double> b = entry.at("b").get<std::vector<double>>();
        const std::string name = entry.at("name").get<std::string>();
        const TestResult got = welch_t(a, b);
        c.expect(std::fabs(got.t - entry.at("t").get<double>()) <= 1e-9,
                 name + ": t " + fmt(got.t) + " vs " + fmt(entry.at("t").get<double>()));
        c.expect(std::fabs(got.p - entry.at("p").get<double>()) <= 1e-6,
                 name + ": p " + fmt(got.p) + " vs " + fmt(entry.at("p").get<double>()));
        const TestResult flipped = welch_t(b, a);
        c.expect(flipped.t == -got.t && flipped.p == got.p,
                 name + ": swapping the groups is not antisymmetric");
    }
    // Exact invariances on integer-valued data and power-of-two scaling.
    const std::vector<double> a{1, 2, 5, 7}, b{0, 3, 4, 10};
    std::vector<double> shifted_a, shifted_b, scaled_a, scaled_b;
    for (double v : a) shifted_a.push_back(v + 1024.0), scaled_a.push_back(v * 4.0);
    for (double v : b) shifted_b.push_back(v + 1024.0), scaled_b.push_back(v * 4.0);
    const TestResult base = welch_t(a, b);
    const TestResult shifted = welch_t(shifted_a, shifted_b);
    const TestResult scaled = welch_t(scaled_a, scaled_b);
    c.expect(shifted.t == base.t && shifted.p == base.p, "translation changed the test");
    c.expect(scaled.t == base.t && scaled.p == base.p, "scaling changed the test");
}

// ---- criterion 6: engineered signal and behaved null ------------------------

void criterion_statistics(Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    const EncounterTables tables = EncounterTables::bundled();

    // Engineered corpus: victories ride high-entropy routes, defeats ride the
    // lowest-entropy route and die late in act 3.
    MapStore store;
    std::vector<MapSet> sets;
    for (int s = 0; s < 25; ++s) {
        sets.push_back(generate_map(60000 + static_cast<std::uint64_t>(s), small_params()));
        store.add(sets.back());
    }
    std::mt19937_64 rng(0xE5717ULL);
    std::vector<RunRecord> records;
    for (int s = 0; s < 25; ++s) {
        const MapSet& set = sets[static_cast<std::size_t>(s)];
        std::vector<std::vector<NodeId>> max_paths, min_paths;
        for (int act = 1; act <= 3; ++act) {
            max_paths.push_back(st::extreme_path(tables, set.act(act), true));
            min_paths.push_back(st::extreme_path(tables, set.act(act), false));
        }
        for (int i = 0; i < 40; ++i) {
            std::vector<std::vector<NodeId>> played = max_paths;
            if (i % 2 == 1)  // half the victories wander instead of maxing out
                for (int act = 1; act <= 3; ++act)
                    played[static_cast<std::size_t>(act - 1)] =
                        st::random_full_path(set.act(act), rng);
            records.push_back(st::run_from_traces(set, played, true, 12 + i % 8));
        }
        for (int i = 0; i < 40; ++i) {
            std::vector<std::vector<NodeId>> played = min_paths;
            if (i % 2 == 1) played.back().resize(4 + i % 4);  // die on an act-3 floor
            records.push_back(st::run_from_traces(set, played, false, 1 + i % 8));
        }
    }
    const CorpusResult result = analyze_corpus(tables, records, store);
    c.expect(result.analyzed == 2000,
             "engineered corpus analyzed " + std::to_string(result.analyzed) + " of 2000");
    for (Scope scope : {Scope::Act2, Scope::Act3, Scope::AllActs}) {
        const GroupComparison cmp = compare_groups(result.rows, GroupSplit::Victory, scope,
                                                   Metric::Normalized);
        const std::string label = scope_name(cmp.scope);
        c.expect(cmp.result.p < 0.001,
                 label + ": p = " + fmt(cmp.result.p) + " (needs < 0.001)");
        c.expect(cmp.result.mean_b > cmp.result.mean_a,
                 label + ": victory mean " + fmt(cmp.result.mean_b) +
                     " not above defeat mean " + fmt(cmp.result.mean_a));
    }

    // Null corpus: random routes with random labels must not manufacture
    // significance; the p-values should look uniform.
    std::vector<MapSet> null_sets;
    MapStore null_store;
    for (int s = 0; s < 8; ++s) {
        null_sets.push_back(
            generate_map(70000 + static_cast<std::uint64_t>(s), small_params()));
        null_store.add(null_sets.back());
    }
    BoundsCache cache(tables);
    std::vector<double> p_values;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<RunAnalysis> rows;
        for (int i = 0; i < 240; ++i) {
            const MapSet& set = null_sets[rng() % null_sets.size()];
            std::vector<std::vector<NodeId>> played;
            for (int act = 1; act <= 3; ++act)
                played.push_back(st::random_full_path(set.act(act), rng));
            const RunRecord record =
                st::run_from_traces(set, played, rng() % 2 == 0, static_cast<int>(rng() % 21));
            RunAnalysis row = analyze_run(tables, set, record, DefeatEndSet::Wide, &cache);
            row.run_index = static_cast<std::uint64_t>(i);
            rows.push_back(std::move(row));
        }
        const GroupComparison cmp = compare_groups(rows, GroupSplit::Victory, Scope::AllActs,
                                                   Metric::Normalized);
        p_values.push_back(cmp.result.p);
    }
    const double uniformity = st::ks_uniform_p(p_values);
    c.expect(uniformity > 0.01,
             "null p-values look non-uniform (KS p = " + fmt(uniformity) + ")");

    const double elapsed = seconds_since(start);
    c.expect(elapsed < 300.0, "corpus study took " + fmt(elapsed) + "s (limit 300s)");
}

// ---- criterion 7: pipeline speed and byte stability --------------------------

void criterion_pipeline(Criterion& c) {
    const EncounterTables tables = EncounterTables::bundled();
    const fs::path base = fs::temp_directory_path() / "spire_acceptance_pipeline";
    fs::remove_all(base);
    const fs::path maps_dir = base / "maps";
    fs::create_directories(maps_dir);

    // 250 seeds x 80 runs = 20,000 records, written out like a real corpus.
    std::mt19937_64 rng(0x20000ULL);
    const fs::path runs_path = base / "runs.jsonl";
    {
        std::ofstream runs_out(runs_path, std::ios::binary);
        for (int s = 0; s < 250; ++s) {
            const std::uint64_t seed = 80000 + static_cast<std::uint64_t>(s);
            const MapSet set = generate_map(seed, small_params());
            std::ofstream map_out(maps_dir / ("map_" + std::to_string(seed) + ".json"),
                                  std::ios::binary);
            map_out << write_map_document(set);
            for (int i = 0; i < 80; ++i) {
                std::vector<std::vector<NodeId>> played;
                const int acts = i % 5 == 4 ? 1 + static_cast<int>(rng() % 3) : 3;
                for (int act = 1; act <= acts; ++act)
                    played.push_back(st::random_full_path(set.act(act), rng));
                const bool victory = acts == 3 && rng() % 3 != 0;
                if (!victory)  // cut the last act short: a mid-act death
                    played.back().resize(2 + rng() % (played.back().size() - 2));
                RunRecord record = st::run_from_traces(set, played, victory,
                                                       static_cast<int>(rng() % 21));
                if (i % 20 == 19) record.is_trial = true;  // filter fodder
                runs_out << write_run_line(record) << "\n";
            }
        }
    }

    auto run_pipeline = [&](const fs::path& out_dir) {
        const CorpusReadResult corpus = load_run_corpus(runs_path.string());
        const MapStore store = MapStore::load_directory(maps_dir.string());
        const CorpusResult result = analyze_corpus(tables, corpus.records, store);
        std::vector<GroupComparison> comparisons;
        const StatsConfig config;
        for (GroupSplit split : {GroupSplit::Victory, GroupSplit::Ascension})
            for (Scope scope : {Scope::AllActs, Scope::Act1, Scope::Act2, Scope::Act3})
                for (Metric metric : {Metric::Normalized, Metric::PerStep}) {
                    try {
                        comparisons.push_back(
                            compare_groups(result.rows, split, scope, metric, config));
                    } catch (const EmptyGroup&) {
                    } catch (const InsufficientSample&) {
                    }
                }
        emit_report(result.rows, comparisons, config, out_dir.string());
        return result;
    };

    const auto start = std::chrono::steady_clock::now();
    const CorpusResult first = run_pipeline(base / "out1");
    const double elapsed = seconds_since(start);
    c.expect(elapsed < 60.0, "pipeline took " + fmt(elapsed) + "s (limit 60s)");

    c.expect(first.filter.input == 20000,
             "corpus carried " + std::to_string(first.filter.input) + " records");
    c.expect(first.analyzed > 18000,
             "only " + std::to_string(first.analyzed) + " runs analyzed");

    const CorpusResult second = run_pipeline(base / "out2");
    c.expect(second.analyzed == first.analyzed, "rerun analyzed a different corpus");
    for (const char* name :
         {"runs.csv", "comparisons.csv", "histograms.csv", "ascension_levels.csv"}) {
        const std::string a = read_file(base / "out1" / name);
        const std::string b = read_file(base / "out2" / name);
        c.expect(!a.empty() && a == b, std::string(name) + " differs between reruns");
    }
    fs::remove_all(base);
}

}  // namespace

int main() {
    struct Entry {
        int index;
        const char* title;
        std::function<void(Criterion&)> body;
    };
    const std::vector<Entry> entries = {
        {1, "room-entropy constants match their frozen values", criterion_constants},
        {2, "unknown-room chain rule matches joint enumeration", criterion_chain_rule},
        {3, "choice-set enumeration agrees with independent oracles", criterion_enumeration},
        {4, "played paths stay inside bounds and normalize safely", criterion_bounds},
        {5, "Welch statistics match reference fixtures exactly enough", criterion_welch},
        {6, "engineered corpora show the effect, null corpora do not", criterion_statistics},
        {7, "20k-run pipeline is fast and byte-stable", criterion_pipeline},
    };

    int failed = 0;
    for (const Entry& entry : entries) {
        Criterion criterion;
        const auto start = std::chrono::steady_clock::now();
        try {
            entry.body(criterion);
        } catch (const std::exception& e) {
            criterion.expect(false, std::string("unexpected exception: ") + e.what());
        }
        const double elapsed = seconds_since(start);
        const bool ok = criterion.failures == 0;
        std::printf("%s criterion %d: %s (%.2fs)\n", ok ? "PASS" : "FAIL", entry.index,
                    entry.title, elapsed);
        for (const std::string& note : criterion.notes)
            std::printf("       - %s\n", note.c_str());
        if (!ok) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(entries.size()) - failed,
                entries.size());
    return failed;
}
