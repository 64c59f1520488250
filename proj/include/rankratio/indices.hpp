#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rankratio/corpus.hpp"
#include "rankratio/errors.hpp"

namespace rankratio {

// Rn(10), Rn(5), Rk and the geometric-mean variant for one series. rk and gm
// need 10 papers; on shorter series they stay empty rather than being padded,
// since a geometric mean over a different count is a different statistic.
struct IndexReport {
    std::string group;
    double rn10 = 0.0;
    double rn5 = 0.0;
    std::optional<double> rk;
    std::optional<double> gm;
    int papers_used = 0;  // papers contributing to rn10, at most 10
    bool short_series = false;
};

// Running sums C_k = sum_{i<=k} r_i/g_i; Rn(10) is 10 * C_10.
struct CumulativeCurve {
    std::string group;
    std::vector<std::pair<rank_t, double>> points;  // (k, C_k)
};

// How far a set of disjoint groups deviates from index(parts summed) ==
// index(union). Exact additivity would give ratios of 1.
struct AdditivityAudit {
    std::vector<std::string> parts;
    double rn_sum = 0.0;
    double rn_all = 0.0;
    double rn_ratio = 0.0;
    std::optional<double> rk_sum;  // empty when any involved series has < 10 papers
    std::optional<double> rk_all;
    std::optional<double> rk_ratio;
};

// Country rank over global rank, in (0,1]; 1 means the group's i-th paper is
// also the world's i-th.
inline double rank_ratio(rank_t country_rank, rank_t global_rank) {
    if (country_rank < 1) throw domain_error("country rank must be positive");
    if (country_rank > global_rank)
        throw domain_error("country rank " + std::to_string(country_rank) +
                           " exceeds global rank " + std::to_string(global_rank));
    return static_cast<double>(country_rank) / static_cast<double>(global_rank);
}

// (100/k) * sum of the top-k rank ratios. k=10 gives the x10 scale, k=5 the
// x20 scale of the five-paper variant; one formula keeps the two on a common
// 0..100 range. Series shorter than k contribute only their available ratios.
inline double rn_index(const GroupSeries& series, rank_t k = 10) {
    if (series.empty()) throw empty_input_error("rn_index of an empty series");
    if (k < 1) throw domain_error("k must be at least 1");
    std::size_t used = std::min<std::size_t>(k, series.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < used; ++i)
        sum += rank_ratio(series.points[i].country_rank, series.points[i].global_rank);
    return (100.0 / k) * sum;
}

// 1000 * geometric mean of 1/(20 + g_i) over the 10 most cited papers.
// Ceiling 39.5, reached by the identity series g_i = i.
inline double rk_index(const GroupSeries& series) {
    if (series.size() < 10)
        throw insufficient_data_error("rk_index needs 10 papers, series '" + series.group +
                                      "' has " + std::to_string(series.size()));
    double log_sum = 0.0;
    for (std::size_t i = 0; i < 10; ++i)
        log_sum += std::log(20.0 + series.points[i].global_rank);
    return 1000.0 * std::exp(-log_sum / 10.0);
}

// 100 * geometric mean of the top-k rank ratios.
inline double gm_index(const GroupSeries& series, rank_t k = 10) {
    if (k < 1) throw domain_error("k must be at least 1");
    if (series.size() < k)
        throw insufficient_data_error("gm_index needs " + std::to_string(k) + " papers, series '" +
                                      series.group + "' has " + std::to_string(series.size()));
    double log_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        log_sum += std::log(rank_ratio(series.points[i].country_rank, series.points[i].global_rank));
    return 100.0 * std::exp(log_sum / k);
}

inline IndexReport make_index_report(const GroupSeries& series) {
    IndexReport report;
    report.group = series.group;
    report.rn10 = rn_index(series, 10);
    report.rn5 = rn_index(series, 5);
    report.papers_used = static_cast<int>(std::min<std::size_t>(series.size(), 10));
    report.short_series = series.size() < 10;
    if (!report.short_series) {
        report.rk = rk_index(series);
        report.gm = gm_index(series, 10);
    }
    return report;
}

inline CumulativeCurve cumulative_curve(const GroupSeries& series, rank_t k_max) {
    if (series.empty()) throw empty_input_error("cumulative_curve of an empty series");
    if (k_max < 1) throw domain_error("k_max must be at least 1");
    CumulativeCurve curve;
    curve.group = series.group;
    double sum = 0.0;
    std::size_t top = std::min<std::size_t>(k_max, series.size());
    for (std::size_t i = 0; i < top; ++i) {
        sum += rank_ratio(series.points[i].country_rank, series.points[i].global_rank);
        curve.points.emplace_back(static_cast<rank_t>(i + 1), sum);
    }
    return curve;
}

// Computes Rn and Rk for every part and for the merged union, and reports the
// ratios sum(parts)/union per index. Percentile counts make these ratios
// exactly 1; rank-based indices deviate, which is what the audit measures.
inline AdditivityAudit additivity_audit(const GlobalRanking& ranking,
                                        const std::vector<std::string>& parts) {
    if (parts.empty()) throw empty_input_error("additivity_audit needs at least one group");
    {
        std::unordered_set<std::string> labels;
        for (const std::string& g : parts)
            if (!labels.insert(g).second)
                throw overlap_error("group '" + g + "' listed twice; parts must be disjoint");
    }

    AdditivityAudit audit;
    audit.parts = parts;
    std::vector<GroupSeries> part_series;
    part_series.reserve(parts.size());
    for (const std::string& g : parts) part_series.push_back(extract_group_series(ranking, g));
    GroupSeries all = parts.size() == 1 ? part_series.front() : merge_groups(ranking, parts);

    for (const GroupSeries& s : part_series) audit.rn_sum += rn_index(s, 10);
    audit.rn_all = rn_index(all, 10);
    audit.rn_ratio = audit.rn_sum / audit.rn_all;

    bool rk_defined = all.size() >= 10 &&
                      std::all_of(part_series.begin(), part_series.end(),
                                  [](const GroupSeries& s) { return s.size() >= 10; });
    if (rk_defined) {
        double sum = 0.0;
        for (const GroupSeries& s : part_series) sum += rk_index(s);
        audit.rk_sum = sum;
        audit.rk_all = rk_index(all);
        audit.rk_ratio = *audit.rk_sum / *audit.rk_all;
    }
    return audit;
}

// Replaces the global rank of the paper at the given country-rank position,
// re-sorts, reassigns country ranks 1..n, and recomputes the indices. Models
// the "what if this outlier ranked where its siblings predict" experiment.
inline std::pair<GroupSeries, IndexReport> outlier_replacement(const GroupSeries& series,
                                                               rank_t position,
                                                               rank_t replacement_g) {
    if (series.empty()) throw empty_input_error("outlier_replacement of an empty series");
    if (position < 1 || position > series.size())
        throw domain_error("position " + std::to_string(position) + " outside series of " +
                           std::to_string(series.size()) + " papers");

    GroupSeries modified = series;
    modified.points[position - 1].global_rank = replacement_g;
    modified.world_size = std::max(modified.world_size, replacement_g);

    {
        std::unordered_set<rank_t> ranks;
        for (const SeriesPoint& p : modified.points)
            if (!ranks.insert(p.global_rank).second)
                throw conflict_error("replacement creates duplicate global rank " +
                                     std::to_string(p.global_rank));
    }

    std::stable_sort(modified.points.begin(), modified.points.end(),
                     [](const SeriesPoint& a, const SeriesPoint& b) {
                         return a.global_rank < b.global_rank;
                     });
    for (std::size_t i = 0; i < modified.points.size(); ++i) {
        modified.points[i].country_rank = static_cast<rank_t>(i + 1);
        if (modified.points[i].global_rank < modified.points[i].country_rank)
            throw domain_error("replacement rank " + std::to_string(replacement_g) +
                               " breaks r <= g at position " + std::to_string(i + 1));
    }
    return {modified, make_index_report(modified)};
}

}  // namespace rankratio
