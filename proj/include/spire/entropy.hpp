#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spire/model.hpp"
#include "spire/path_enum.hpp"
#include "spire/tables.hpp"

namespace spire {

struct InvalidPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyChoiceSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroLength : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shannon entropy in bits of a probability vector; 0 * log 0 counts as 0.
// The span form does not validate; table_entropy checks the table first.
double entropy_bits(std::span<const double> probabilities);
double table_entropy(const EncounterTable& table);

// How many rooms of each kind a path has visited so far within one act.
// Fresh counters are used for every act; they never carry across acts.
struct VisitCounters {
    int monsters = 0;
    int elites = 0;
    int unknowns = 0;
};

// Markov-chain state for the Unknown rooms of one act. The chain starts at
// the initial distribution and its marginal advances through the transition
// matrix one visited Unknown room at a time. Values are immutable; stepping
// returns a new chain.
class UnknownChain {
  public:
    explicit UnknownChain(const UnknownTables& tables);

    int steps_completed() const { return steps_; }
    const std::array<double, 5>& marginal() const { return marginal_; }
    const UnknownTables& tables() const { return *tables_; }

  private:
    friend std::pair<double, UnknownChain> unknown_step_entropy(const UnknownChain&, int);
    const UnknownTables* tables_;
    std::array<double, 5> marginal_;
    int steps_ = 0;
};

// Entropy contributed by the k-th Unknown room of an act, plus the advanced
// chain. k = 1 yields H of the initial distribution; k >= 2 yields the
// conditional entropy of the next visit given the previous one, weighted by
// the current marginal, after which the marginal moves one transition step.
// k must be exactly chain.steps_completed() + 1.
std::pair<double, UnknownChain> unknown_step_entropy(const UnknownChain& chain, int k);

// Entropy in bits of entering `room` in `act`, given how many rooms of each
// kind the path has already visited there. Monster and Elite rooms switch
// tables after the act's familiar first encounters; Shop and Rest carry no
// uncertainty; Unknown rooms follow the Markov chain.
double location_entropy(const EncounterTables& tables, RoomType room, int act,
                        const VisitCounters& counters);

// Incremental scorer for one act. Precomputes every per-visit constant so a
// room's contribution is a couple of comparisons and an add; used by the
// path walkers below and reusable by callers scoring many paths on one map.
class PathScorer {
  public:
    PathScorer(const EncounterTables& tables, int act, int max_path_length);

    // Contribution of entering `room` next; advances the counters.
    double contribution(RoomType room, VisitCounters& counters) const;

  private:
    double monster_first_ = 0, monster_rest_ = 0;
    int monster_first_visits_ = 0;
    double elite_first_ = 0, elite_rest_ = 0;
    double boss_ = 0, treasure_ = 0, shop_ = 0, rest_ = 0;
    std::vector<double> unknown_step_;  // unknown_step_[k-1] = H of k-th Unknown room
};

struct NodeContribution {
    NodeId node = -1;
    RoomType room = RoomType::Monster;
    double bits = 0.0;
};

struct PathEntropy {
    double total = 0.0;
    std::vector<NodeContribution> per_node;
};

// Total entropy of an edge-consistent node sequence on `map`, with the
// per-node breakdown. Throws InvalidPath when consecutive nodes are not
// joined by a map edge.
PathEntropy path_entropy(const EncounterTables& tables, const ActMap& map,
                         std::span<const NodeId> path);

// Same accumulation for a bare room sequence (no map needed); the act
// supplies the monster tables.
PathEntropy sequence_entropy(const EncounterTables& tables, int act,
                             std::span<const RoomType> rooms);

struct EntropyBounds {
    double min_bits = 0.0;
    double max_bits = 0.0;
    std::uint64_t path_count = 0;
};

// Minimum and maximum path entropy over a materialized choice set.
EntropyBounds entropy_bounds(const EncounterTables& tables, const ActMap& map,
                             const PathSet& choice_set);

// Streaming variant: walks every start->end route keeping only incremental
// scoring state, so the choice set is never materialized.
EntropyBounds entropy_bounds(const EncounterTables& tables, const ActMap& map,
                             std::span<const NodeId> starts, std::span<const NodeId> ends);

// True when the available range is too narrow to carry any signal; such
// reports are flagged degenerate and skipped by the statistics layer.
bool degenerate_range(double min_bits, double max_bits);

// (played - min) / (max - min), in [0,1]. Returns 0 for a degenerate range.
// Throws OutOfRange when played falls outside [min, max] by more than 1e-9.
double normalize(double played, double min_bits, double max_bits);

// Normalized entropy averaged over the path's steps. Throws ZeroLength.
double per_step(double normalized, int path_length);

// Everything the pipeline reports about one act of one run.
struct EntropyReport {
    std::vector<NodeContribution> per_node;
    double total = 0.0;
    double min_possible = 0.0;
    double max_possible = 0.0;
    double normalized = 0.0;
    double per_step = 0.0;
    int path_length = 0;
    bool degenerate = false;
};

EntropyReport make_report(const EncounterTables& tables, const ActMap& map,
                          std::span<const NodeId> played, const EntropyBounds& bounds);

}  // namespace spire
