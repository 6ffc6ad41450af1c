#include "spire/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace spire {
namespace {

constexpr int kBetaMaxIterations = 300;
constexpr double kBetaEpsilon = 1e-15;
constexpr double kTinyDivisor = 1e-300;  // Lentz guard against zero divisors

double mean_of(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double unbiased_variance(std::span<const double> xs, double mean) {
    double sum = 0.0;
    for (double x : xs) sum += (x - mean) * (x - mean);
    return sum / static_cast<double>(xs.size() - 1);
}

// Continued fraction for the incomplete beta (Numerical Recipes' betacf
// layout, modified Lentz evaluation).
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTinyDivisor) d = kTinyDivisor;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kBetaMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTinyDivisor) d = kTinyDivisor;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTinyDivisor) c = kTinyDivisor;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTinyDivisor) d = kTinyDivisor;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTinyDivisor) c = kTinyDivisor;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kBetaEpsilon) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (df <= 0.0) throw std::domain_error("degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    const double p = regularized_incomplete_beta(df / 2.0, 0.5, x);
    return std::clamp(p, 0.0, 1.0);
}

TestResult welch_t(std::span<const double> a, std::span<const double> b, double alpha) {
    if (a.size() < 2 || b.size() < 2) {
        throw InsufficientSample("welch_t needs at least 2 observations per group (got " +
                                 std::to_string(a.size()) + " and " +
                                 std::to_string(b.size()) + ")");
    }
    TestResult r;
    r.n_a = a.size();
    r.n_b = b.size();
    r.mean_a = mean_of(a);
    r.mean_b = mean_of(b);
    r.var_a = unbiased_variance(a, r.mean_a);
    r.var_b = unbiased_variance(b, r.mean_b);

    const double sa = r.var_a / static_cast<double>(r.n_a);
    const double sb = r.var_b / static_cast<double>(r.n_b);
    if (sa + sb == 0.0) {
        // Two constant samples: nothing to test. Equal means are a perfect
        // null (p = 1); different means are an exact separation (p = 0).
        r.degenerate_variances = true;
        r.df = static_cast<double>(r.n_a + r.n_b - 2);
        if (r.mean_a == r.mean_b) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = std::copysign(std::numeric_limits<double>::infinity(),
                                r.mean_a - r.mean_b);
            r.p = 0.0;
        }
        r.significant = r.p < alpha;
        return r;
    }

    r.t = (r.mean_a - r.mean_b) / std::sqrt(sa + sb);
    // Welch-Satterthwaite effective degrees of freedom.
    r.df = (sa + sb) * (sa + sb) /
           (sa * sa / static_cast<double>(r.n_a - 1) +
            sb * sb / static_cast<double>(r.n_b - 1));
    r.p = student_t_two_sided_p(r.t, r.df);
    r.significant = r.p < alpha;
    return r;
}

const char* split_name(GroupSplit split) {
    switch (split) {
        case GroupSplit::Victory: return "victory";
        case GroupSplit::Ascension: return "ascension";
    }
    return "";
}

const char* scope_name(Scope scope) {
    switch (scope) {
        case Scope::Act1: return "act1";
        case Scope::Act2: return "act2";
        case Scope::Act3: return "act3";
        case Scope::AllActs: return "all_acts";
    }
    return "";
}

const char* metric_name(Metric metric) {
    switch (metric) {
        case Metric::Normalized: return "normalized";
        case Metric::PerStep: return "per_step";
    }
    return "";
}

GroupComparison compare_groups(std::span<const RunAnalysis> rows, GroupSplit split,
                               Scope scope, Metric metric, const StatsConfig& config) {
    if (!(config.alpha > 0.0 && config.alpha < 1.0))
        throw std::domain_error("alpha must be in (0, 1)");
    GroupComparison cmp;
    cmp.split = split;
    cmp.scope = scope;
    cmp.metric = metric;
    if (split == GroupSplit::Victory) {
        cmp.group_a = "defeat";
        cmp.group_b = "victory";
    } else {
        cmp.group_a = "ascension<=" + std::to_string(config.ascension_threshold);
        cmp.group_b = "ascension>" + std::to_string(config.ascension_threshold);
    }

    std::vector<double> sample_a, sample_b;
    for (const RunAnalysis& row : rows) {
        if (row.discarded != DiscardReason::None) {
            ++cmp.excluded_discarded;
            continue;
        }
        double value = 0.0;
        if (scope == Scope::AllActs) {
            if (row.degenerate_acts >= row.acts_entered) {
                ++cmp.excluded_degenerate;
                continue;
            }
            value = metric == Metric::Normalized ? row.avg_normalized : row.avg_per_step;
        } else {
            const int act = static_cast<int>(scope);
            if (row.acts_entered < act) {
                ++cmp.excluded_no_scope;
                continue;
            }
            const EntropyReport& report = row.per_act[static_cast<std::size_t>(act - 1)];
            if (report.degenerate) {
                ++cmp.excluded_degenerate;
                continue;
            }
            value = metric == Metric::Normalized ? report.normalized : report.per_step;
        }
        const bool in_group_b = split == GroupSplit::Victory
                                    ? row.victory
                                    : row.ascension > config.ascension_threshold;
        (in_group_b ? sample_b : sample_a).push_back(value);
    }

    if (sample_a.empty() || sample_b.empty()) {
        throw EmptyGroup("no usable rows for group " +
                         (sample_a.empty() ? cmp.group_a : cmp.group_b) + " (" +
                         std::string(split_name(split)) + "/" + scope_name(scope) + ")");
    }
    cmp.result = welch_t(sample_a, sample_b, config.alpha);
    return cmp;
}

}  // namespace spire
