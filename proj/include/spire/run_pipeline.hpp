#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "spire/entropy.hpp"
#include "spire/model.hpp"
#include "spire/tables.hpp"

namespace spire {

struct SeedMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The seven corpus predicates, applied conjunctively. Defaults match the
// fixed study settings: ascension-mode Ironclad runs with every special
// mode off.
struct CorpusFilter {
    bool is_ascension_mode = true;
    bool is_trial = false;
    bool is_daily = false;
    bool chose_seed = false;
    bool is_beta = false;
    bool is_endless = false;
    std::string character = "IRONCLAD";
};

// Per-predicate rejection tallies. Predicates are tested in a fixed order
// (ascension mode, trial, daily, chose-seed, beta, endless, character) and a
// record counts against the FIRST one it fails, so the counters are disjoint
// and input == passed + rejected() always holds.
struct FilterCounters {
    std::uint64_t input = 0;
    std::uint64_t passed = 0;
    std::uint64_t not_ascension_mode = 0;
    std::uint64_t trial = 0;
    std::uint64_t daily = 0;
    std::uint64_t chose_seed = 0;
    std::uint64_t beta = 0;
    std::uint64_t endless = 0;
    std::uint64_t wrong_character = 0;

    std::uint64_t rejected() const {
        return not_ascension_mode + trial + daily + chose_seed + beta + endless +
               wrong_character;
    }
};

// Checks one record; when `counters` is given, tallies it there too.
bool passes_filter(const CorpusFilter& filter, const RunRecord& run,
                   FilterCounters* counters = nullptr);

std::vector<RunRecord> filter_runs(std::span<const RunRecord> records,
                                   const CorpusFilter& filter, FilterCounters& counters);

// Choice set used for the unfinished act of a defeated run. Wide compares
// against every same-length route (any node on the death floor); Narrow
// only against routes ending at the exact node where the run ended.
enum class DefeatEndSet { Wide, Narrow };

enum class DiscardReason { None, PathMismatch, MissingMap };
const char* discard_reason_name(DiscardReason reason);

// One corpus row: the per-act entropy reports plus their across-act means.
// Averages run over the acts the run entered, skipping degenerate acts
// (min == max leaves nothing to normalize against); a row whose entered
// acts are all degenerate is kept in the table but unusable for statistics.
struct RunAnalysis {
    std::uint64_t run_index = 0;  // position in the input corpus; output key
    std::string seed;
    bool victory = false;
    int ascension = 0;
    std::vector<EntropyReport> per_act;  // one per act entered; empty when discarded
    bool ambiguous = false;              // some act matched several column routes
    int acts_entered = 0;
    int degenerate_acts = 0;
    double avg_normalized = 0.0;
    double avg_per_step = 0.0;
    DiscardReason discarded = DiscardReason::None;

    bool usable() const {
        return discarded == DiscardReason::None && degenerate_acts < acts_entered;
    }
};

// Memoizes min/max bound sweeps. Corpora repeat seeds heavily, and the
// bound walk is the expensive step, so analyze_corpus keys finished sweeps
// by (seed, act, end-set kind, end key) and never redoes one.
class BoundsCache {
  public:
    explicit BoundsCache(const EncounterTables& tables) : tables_(&tables) {}

    const EntropyBounds& full_act(const std::string& seed, const ActMap& map);
    const EntropyBounds& to_floor(const std::string& seed, const ActMap& map, int floor);
    const EntropyBounds& to_node(const std::string& seed, const ActMap& map, NodeId node);

    std::size_t size() const { return cache_.size(); }

  private:
    enum Kind : int { kFull = 0, kFloor = 1, kNode = 2 };
    const EntropyBounds& lookup(const std::string& seed, const ActMap& map, Kind kind,
                                int key);

    const EncounterTables* tables_;
    std::map<std::tuple<std::string, int, int, int>, EntropyBounds> cache_;
};

// Scores one run against its map set: resolves the logged symbols onto
// nodes, builds the per-act choice-set bounds (full act when the boss was
// reached, death-floor prefix otherwise), and normalizes. A PathMismatch
// becomes a discarded row, not an error; a wrong map set is a hard
// SeedMismatch because the caller looked it up by seed.
RunAnalysis analyze_run(const EncounterTables& tables, const MapSet& maps,
                        const RunRecord& run, DefeatEndSet mode = DefeatEndSet::Wide,
                        BoundsCache* cache = nullptr);

// Map documents keyed by seed.
class MapStore {
  public:
    void add(MapSet set);
    const MapSet* find(const std::string& seed) const;
    std::size_t size() const { return maps_.size(); }
    std::uint64_t duplicate_seeds() const { return duplicates_; }

    // Loads every *.json map document under `dir` (either layout, sorted by
    // filename). The first document for a seed wins.
    static MapStore load_directory(const std::string& dir);

  private:
    std::map<std::string, MapSet> maps_;
    std::uint64_t duplicates_ = 0;
};

struct CorpusOptions {
    CorpusFilter filter;
    DefeatEndSet defeat_end_set = DefeatEndSet::Wide;
    // Reproducible subsample applied after filtering, before analysis.
    std::optional<std::uint64_t> sample_size;
    std::uint64_t sample_seed = 0;
};

struct CorpusResult {
    std::vector<RunAnalysis> rows;  // ascending run_index (input order)
    FilterCounters filter;
    std::uint64_t sampled_out = 0;  // filtered runs dropped by subsampling
    std::uint64_t analyzed = 0;     // rows not discarded
    std::uint64_t discarded_path_mismatch = 0;
    std::uint64_t discarded_missing_map = 0;
};

// Filters, optionally subsamples, then scores every surviving run. Output
// order and content are a pure function of the inputs, so reruns are
// byte-identical.
CorpusResult analyze_corpus(const EncounterTables& tables, std::span<const RunRecord> runs,
                            const MapStore& store, const CorpusOptions& options = {});

// Line-delimited run-corpus reader. Each line carries the public dataset's
// field names (victory, ascension_level, seed_played, path_per_floor,
// is_ascension_mode, is_trial, is_daily, chose_seed, is_beta, is_endless,
// character_chosen). Unparseable lines are counted and skipped — one bad
// line must not sink a corpus.
struct CorpusReadResult {
    std::vector<RunRecord> records;
    std::uint64_t total_lines = 0;  // non-blank lines seen
    std::uint64_t malformed_lines = 0;
};

CorpusReadResult read_run_corpus(std::istream& in);
CorpusReadResult load_run_corpus(const std::string& path);

// One corpus line in the exact field layout read_run_corpus consumes.
std::string write_run_line(const RunRecord& run);

}  // namespace spire
