#pragma once

#include <span>
#include <string>
#include <vector>

#include "spire/run_pipeline.hpp"
#include "spire/stats.hpp"

namespace spire {

// Bin count for the normalized-entropy histograms (fixed-width over [0,1]).
inline constexpr int kHistogramBins = 20;

// Doubles are printed with "%.12g" everywhere so reruns byte-match.
std::string format_double(double value);

// RFC-4180-style quoting: fields containing comma, quote, or newline are
// wrapped in quotes with inner quotes doubled.
std::string csv_escape(const std::string& field);

struct ReportFiles {
    std::string runs_csv;
    std::string comparisons_csv;
    std::string histograms_csv;
    std::string ascension_csv;

    std::vector<std::string> all() const {
        return {runs_csv, comparisons_csv, histograms_csv, ascension_csv};
    }
};

// Writes the four report CSVs into `out_dir` (creating it if needed):
//   runs.csv              one row per analyzed run, per-act values inline
//   comparisons.csv       one row per group comparison
//   histograms.csv        normalized-entropy bin counts per split/scope/group
//   ascension_levels.csv  mean across-act metrics per ascension level
// All content is a pure function of the inputs. IO failures throw with the
// offending path in the message.
ReportFiles emit_report(std::span<const RunAnalysis> rows,
                        std::span<const GroupComparison> comparisons,
                        const StatsConfig& config, const std::string& out_dir);

}  // namespace spire
