#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include "spire/run_pipeline.hpp"

namespace spire {

struct InsufficientSample : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyGroup : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two-sample comparison outcome. Variances are the unbiased (n-1) kind.
struct TestResult {
    double t = 0.0;
    double p = 1.0;
    std::size_t n_a = 0, n_b = 0;
    double mean_a = 0.0, mean_b = 0.0;
    double var_a = 0.0, var_b = 0.0;
    double df = 0.0;  // Welch-Satterthwaite degrees of freedom
    bool significant = false;
    // Both variances zero: no distribution to test against. Convention:
    // equal means give t = 0, p = 1; differing means give t = +-inf, p = 0.
    bool degenerate_variances = false;
};

// Welch's unequal-variance t-test, two-sided. Throws InsufficientSample
// below 2 observations per side.
TestResult welch_t(std::span<const double> a, std::span<const double> b,
                   double alpha = 0.05);

// Regularized incomplete beta I_x(a, b), evaluated with the standard
// continued-fraction expansion (modified Lentz iteration) and the symmetry
// flip at x = (a+1)/(a+b+2) for convergence.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided Student-t tail probability via I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

// Which attribute splits the corpus into the two compared groups.
enum class GroupSplit {
    Victory,    // defeat vs victory
    Ascension,  // low skill (level <= threshold) vs high skill
};

enum class Scope { Act1 = 1, Act2 = 2, Act3 = 3, AllActs = 0 };
enum class Metric { Normalized, PerStep };

struct StatsConfig {
    double alpha = 0.05;
    int ascension_threshold = 10;  // "low" is <= this level
};

// A finished comparison with its bookkeeping. Group A is always defeat /
// low-skill and group B victory / high-skill, so t's sign is reproducible:
// positive t means group A scored higher.
struct GroupComparison {
    GroupSplit split = GroupSplit::Victory;
    Scope scope = Scope::AllActs;
    Metric metric = Metric::Normalized;
    std::string group_a, group_b;
    TestResult result;
    std::size_t excluded_discarded = 0;   // rows that never produced reports
    std::size_t excluded_degenerate = 0;  // rows whose scoped value was degenerate
    std::size_t excluded_no_scope = 0;    // rows that never entered the scoped act
};

const char* split_name(GroupSplit split);
const char* scope_name(Scope scope);
const char* metric_name(Metric metric);

// Splits the rows, extracts the scoped metric (per-act or across-act value,
// normalized or per-step), and runs welch_t. Discarded rows, rows outside
// the scope, and degenerate values are excluded and counted. Throws
// EmptyGroup when a side has no rows at all, InsufficientSample when a side
// has only one.
GroupComparison compare_groups(std::span<const RunAnalysis> rows, GroupSplit split,
                               Scope scope, Metric metric, const StatsConfig& config = {});

}  // namespace spire
