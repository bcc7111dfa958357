#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "rgbc/archive.hpp"
#include "rgbc/matrix.hpp"

namespace rgbc {

/// 13-character hierarchical label "TTTT-DDD-AAA-BBB": technical,
/// directional, anatomical, biological axes. Positions hold [0-9a-z];
/// '*' marks an unspecified position and is only meaningful in
/// predictions.
struct IrmaCode {
    static constexpr std::array<std::size_t, 4> kAxisLengths{4, 3, 3, 3};
    static constexpr std::array<char, 4> kAxisNames{'T', 'D', 'A', 'B'};

    std::array<std::string, 4> axes;

    std::string to_string() const;
    bool has_wildcard() const;
    bool operator==(const IrmaCode&) const = default;
};

/// Parses and validates "TTTT-DDD-AAA-BBB" (case-insensitive; stored
/// lowercase). Throws FormatError on structural violations.
IrmaCode parse_irma(const std::string& text);

/// Branch counts of one axis: code prefix -> number of distinct labels
/// observed at the next position.
struct AxisStats {
    std::unordered_map<std::string, std::uint32_t> branch_counts;

    /// b for a prefix; unknown prefixes fall back to 1 (the most
    /// conservative penalty weight). `known` reports whether the prefix
    /// was observed.
    std::size_t b(const std::string& prefix, bool* known = nullptr) const;
};

struct HierarchyStats {
    std::array<AxisStats, 4> axes;
};

/// Derives branch counts from a ground-truth corpus (no wildcards).
/// Throws ConfigError on empty input.
HierarchyStats build_hierarchy(const std::vector<IrmaCode>& codes);

/// Reads an externally supplied branch-count table: one record per
/// line, "<axis> <prefix> <b>" with axis in {T,D,A,B} and "-" standing
/// for the empty prefix. '#' starts a comment.
HierarchyStats load_hierarchy(const std::string& path);

/// Hierarchical error of one axis, in [0, 0.25]:
/// 0.25 * sum_i (1/b_i)(1/i) delta_i / max-sum, where delta_i is 0 for
/// agreement, 0.5 for an unspecified prediction and 1 for disagreement.
/// Past the first disagreement every position counts as disagreement;
/// past the first wildcard, as unspecified. b_i is looked up for the
/// truth prefix of length i-1. Positions after the first unspecified
/// truth position are skipped entirely.
double axis_error(const std::string& truth, const std::string& pred, const AxisStats& stats,
                  std::size_t* unknown_prefix_count = nullptr);

/// Sum of the four axis errors, in [0, 1].
double total_error(const IrmaCode& truth, const IrmaCode& pred, const HierarchyStats& stats,
                   std::size_t* unknown_prefix_count = nullptr);

struct QueryItem {
    std::string id;
    Raster image;
    IrmaCode truth;
};

struct EvaluationReport {
    std::string method;
    std::size_t l_code = 0;
    std::size_t n_queries = 0;
    double e_total = 0.0;      // sum of first-hit errors
    double accuracy = 0.0;     // 1 - e_total / n_queries
    double e_total_top3 = 0.0; // best error among the top 3 hits
    double e_total_top5 = 0.0;
    double mean_query_seconds = 0.0;
    std::size_t unknown_prefix_lookups = 0;

    struct PerQuery {
        std::string id;
        std::string hit_id;
        double similarity = 0.0;
        double error = 0.0;
    };
    std::vector<PerQuery> queries;
};

/// Encodes every query with the archive's configuration, retrieves the
/// nearest entries (self-matches excluded by id), and scores the first
/// hit's code against the truth. Entries retrieved as first hits must
/// carry a code. Parallel over queries; aggregation order is fixed by
/// query index.
EvaluationReport evaluate(const BarcodeArchive& archive, const std::vector<QueryItem>& queries,
                          const HierarchyStats& stats, std::size_t n_threads = 1);

/// Suitability eta_k = (max_i E_i * max_i L_i) / (E_k * L_k) for rows of
/// (E_total, L_code). All inputs must be positive.
std::vector<double> suitability(const std::vector<std::pair<double, double>>& rows);

} // namespace rgbc
