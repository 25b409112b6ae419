#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordreg/classify.hpp"
#include "ordreg/encoding.hpp"
#include "ordreg/metrics.hpp"

namespace ordreg {

struct CellValue {
    double mean = 0.0;
    double sd = 0.0;
    int rank = 0;
    bool failed = false;
};

// One (target function, classification function) row of the results table.
// classifier is empty for the merged one-hot "All" row.
struct MethodResult {
    Encoding encoding;
    std::optional<ClassifierKind> classifier;
    std::array<CellValue, kWeightingCount> cells; // indexed by Weighting
    int folds_used = 0;

    std::string method_name() const; // e.g. "Gauss-L1", "One-Hot-All"
};

struct ResultTable {
    std::vector<MethodResult> rows;
    std::string config_hash;
    std::uint64_t split_seed = 0;
    std::uint64_t run_seed = 0;
    std::uint64_t init_seed = 0;
};

// Competition ranking of means, descending: rank = 1 + number of strictly
// greater values; exact ties share a rank and the next distinct value skips.
std::vector<int> competition_ranks(std::span<const double> means);

// Ranks for one weighting; failed rows are excluded from the ranking and all
// share the position after the last ranked row.
std::vector<int> rank(const ResultTable& table, Weighting weighting);

// Stores rank() of every weighting into the table cells.
void apply_ranks(ResultTable& table);

// "0.420±1.09e-3"; the SD keeps two decimals and a trimmed exponent.
std::string format_kappa_cell(double mean, double sd);
std::string format_sd(double sd);

// Table documents. Both carry one row per method with value±SD and rank ("#")
// columns per weighting; failed cells render as an em dash.
std::string render_csv(const ResultTable& table);
std::string render_markdown(const ResultTable& table);

ResultTable parse_table_csv(const std::string& text);

// Methods listed per weighting in rank order, annotated with the rank change
// relative to the previous weighting.
std::string rank_change_text(const ResultTable& table);
std::string rank_change_csv(const ResultTable& table);

} // namespace ordreg
