#include "spire/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

namespace spire {
namespace {

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report file: " + path);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed for report file: " + path);
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) row += ',';
        row += csv_escape(fields[i]);
    }
    row += '\n';
    return row;
}

const char* bool_str(bool b) {
    return b ? "true" : "false";
}

void write_runs_csv(std::span<const RunAnalysis> rows, const std::string& path) {
    std::ofstream out = open_for_write(path);
    std::vector<std::string> header = {"run_index",  "seed",          "victory",
                                       "ascension",  "discarded",     "ambiguous",
                                       "acts_entered", "degenerate_acts", "avg_normalized",
                                       "avg_per_step"};
    for (int act = 1; act <= 3; ++act) {
        const std::string prefix = "act" + std::to_string(act) + "_";
        for (const char* col : {"total", "min", "max", "normalized", "per_step", "length",
                                "degenerate"})
            header.push_back(prefix + col);
    }
    out << join_row(header);

    for (const RunAnalysis& row : rows) {
        std::vector<std::string> fields = {
            std::to_string(row.run_index),
            row.seed,
            bool_str(row.victory),
            std::to_string(row.ascension),
            discard_reason_name(row.discarded),
            bool_str(row.ambiguous),
            std::to_string(row.acts_entered),
            std::to_string(row.degenerate_acts),
        };
        if (row.acts_entered > 0) {
            fields.push_back(format_double(row.avg_normalized));
            fields.push_back(format_double(row.avg_per_step));
        } else {
            fields.emplace_back();
            fields.emplace_back();
        }
        for (int act = 1; act <= 3; ++act) {
            if (act <= row.acts_entered) {
                const EntropyReport& r = row.per_act[static_cast<std::size_t>(act - 1)];
                fields.push_back(format_double(r.total));
                fields.push_back(format_double(r.min_possible));
                fields.push_back(format_double(r.max_possible));
                fields.push_back(format_double(r.normalized));
                fields.push_back(format_double(r.per_step));
                fields.push_back(std::to_string(r.path_length));
                fields.push_back(bool_str(r.degenerate));
            } else {
                for (int i = 0; i < 7; ++i) fields.emplace_back();
            }
        }
        out << join_row(fields);
    }
    finish(out, path);
}

void write_comparisons_csv(std::span<const GroupComparison> comparisons, double alpha,
                           const std::string& path) {
    std::ofstream out = open_for_write(path);
    out << join_row({"split", "scope", "metric", "group_a", "group_b", "n_a", "n_b",
                     "mean_a", "mean_b", "var_a", "var_b", "t", "df", "p", "significant",
                     "alpha", "degenerate_variances", "excluded_discarded",
                     "excluded_degenerate", "excluded_no_scope"});
    for (const GroupComparison& cmp : comparisons) {
        const TestResult& r = cmp.result;
        out << join_row({split_name(cmp.split), scope_name(cmp.scope),
                         metric_name(cmp.metric), cmp.group_a, cmp.group_b,
                         std::to_string(r.n_a), std::to_string(r.n_b),
                         format_double(r.mean_a), format_double(r.mean_b),
                         format_double(r.var_a), format_double(r.var_b),
                         format_double(r.t), format_double(r.df), format_double(r.p),
                         bool_str(r.significant), format_double(alpha),
                         bool_str(r.degenerate_variances),
                         std::to_string(cmp.excluded_discarded),
                         std::to_string(cmp.excluded_degenerate),
                         std::to_string(cmp.excluded_no_scope)});
    }
    finish(out, path);
}

// Normalized value of `row` under `scope`, or no value when the row does not
// land there (not entered / degenerate / discarded).
bool scoped_normalized(const RunAnalysis& row, Scope scope, double* value) {
    if (row.discarded != DiscardReason::None) return false;
    if (scope == Scope::AllActs) {
        if (row.degenerate_acts >= row.acts_entered) return false;
        *value = row.avg_normalized;
        return true;
    }
    const int act = static_cast<int>(scope);
    if (row.acts_entered < act) return false;
    const EntropyReport& r = row.per_act[static_cast<std::size_t>(act - 1)];
    if (r.degenerate) return false;
    *value = r.normalized;
    return true;
}

void write_histograms_csv(std::span<const RunAnalysis> rows, const StatsConfig& config,
                          const std::string& path) {
    std::ofstream out = open_for_write(path);
    out << join_row({"split", "scope", "group", "bin", "bin_lo", "bin_hi", "count"});

    constexpr std::array<Scope, 4> scopes = {Scope::Act1, Scope::Act2, Scope::Act3,
                                             Scope::AllActs};
    for (GroupSplit split : {GroupSplit::Victory, GroupSplit::Ascension}) {
        const std::string low_label =
            split == GroupSplit::Victory
                ? "defeat"
                : "ascension<=" + std::to_string(config.ascension_threshold);
        const std::string high_label =
            split == GroupSplit::Victory
                ? "victory"
                : "ascension>" + std::to_string(config.ascension_threshold);
        for (Scope scope : scopes) {
            std::array<std::array<std::uint64_t, kHistogramBins>, 2> counts{};
            for (const RunAnalysis& row : rows) {
                double value = 0.0;
                if (!scoped_normalized(row, scope, &value)) continue;
                const bool high = split == GroupSplit::Victory
                                      ? row.victory
                                      : row.ascension > config.ascension_threshold;
                int bin = static_cast<int>(value * kHistogramBins);
                bin = std::clamp(bin, 0, kHistogramBins - 1);  // value 1.0 → last bin
                ++counts[high ? 1 : 0][static_cast<std::size_t>(bin)];
            }
            for (int g = 0; g < 2; ++g) {
                for (int bin = 0; bin < kHistogramBins; ++bin) {
                    out << join_row(
                        {split_name(split), scope_name(scope),
                         g == 0 ? low_label : high_label, std::to_string(bin),
                         format_double(static_cast<double>(bin) / kHistogramBins),
                         format_double(static_cast<double>(bin + 1) / kHistogramBins),
                         std::to_string(counts[static_cast<std::size_t>(g)]
                                              [static_cast<std::size_t>(bin)])});
                }
            }
        }
    }
    finish(out, path);
}

void write_ascension_csv(std::span<const RunAnalysis> rows, const std::string& path) {
    std::ofstream out = open_for_write(path);
    out << join_row(
        {"ascension_level", "runs", "mean_avg_normalized", "mean_avg_per_step"});
    struct Accumulator {
        std::uint64_t n = 0;
        double normalized = 0.0;
        double per_step = 0.0;
    };
    std::map<int, Accumulator> by_level;
    for (const RunAnalysis& row : rows) {
        if (!row.usable()) continue;
        Accumulator& acc = by_level[row.ascension];
        ++acc.n;
        acc.normalized += row.avg_normalized;
        acc.per_step += row.avg_per_step;
    }
    for (const auto& [level, acc] : by_level) {
        out << join_row({std::to_string(level), std::to_string(acc.n),
                         format_double(acc.normalized / static_cast<double>(acc.n)),
                         format_double(acc.per_step / static_cast<double>(acc.n))});
    }
    finish(out, path);
}

}  // namespace

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        quoted += c;
        if (c == '"') quoted += '"';
    }
    quoted += '"';
    return quoted;
}

ReportFiles emit_report(std::span<const RunAnalysis> rows,
                        std::span<const GroupComparison> comparisons,
                        const StatsConfig& config, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    ReportFiles files;
    const std::filesystem::path dir(out_dir);
    files.runs_csv = (dir / "runs.csv").string();
    files.comparisons_csv = (dir / "comparisons.csv").string();
    files.histograms_csv = (dir / "histograms.csv").string();
    files.ascension_csv = (dir / "ascension_levels.csv").string();

    write_runs_csv(rows, files.runs_csv);
    write_comparisons_csv(comparisons, config.alpha, files.comparisons_csv);
    write_histograms_csv(rows, config, files.histograms_csv);
    write_ascension_csv(rows, files.ascension_csv);
    return files;
}

}  // namespace spire
