#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rankratio/corpus.hpp"
#include "rankratio/errors.hpp"

namespace rankratio {

// Descending percentile levels, each in (0,100].
struct PercentileSpec {
    std::vector<double> levels;

    static PercentileSpec standard() { return make({100, 50, 30, 10, 5, 3, 1}); }

    static PercentileSpec make(std::vector<double> levels) {
        if (levels.empty()) throw domain_error("percentile spec needs at least one level");
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (!(levels[i] > 0.0 && levels[i] <= 100.0))
                throw domain_error("percentile level " + std::to_string(levels[i]) +
                                   " outside (0,100]");
            if (i > 0 && levels[i] >= levels[i - 1])
                throw domain_error("percentile levels must be strictly descending");
        }
        return PercentileSpec{std::move(levels)};
    }
};

struct PercentileLevelCount {
    double level = 0.0;
    rank_t threshold = 0;  // largest global rank inside the top level%
    rank_t count = 0;      // group papers at or above that rank
};

struct PercentileReport {
    std::string group;
    rank_t world_size = 0;
    std::vector<PercentileLevelCount> per_level;
};

// Double-rank plot data: the group's (global rank, country rank) pairs inside
// the widest requested percentile, plus one marker per level at (threshold
// rank, count at that level).
struct DoubleRankData {
    struct Marker {
        double level = 0.0;
        rank_t threshold = 0;
        rank_t count = 0;
    };
    std::string group;
    std::vector<std::pair<rank_t, rank_t>> points;  // (global_rank, country_rank)
    std::vector<Marker> markers;
};

// Boundary rule for "top x%": a paper qualifies iff its global rank is at most
// floor(x*N/100). Makes the top 100% cover the whole corpus and never rounds a
// fractional slot in.
inline rank_t percentile_threshold(rank_t world_size, double x) {
    if (world_size < 1) throw domain_error("world size must be positive");
    if (!(x > 0.0 && x <= 100.0))
        throw domain_error("percentile level " + std::to_string(x) + " outside (0,100]");
    return static_cast<rank_t>(std::floor(x * static_cast<double>(world_size) / 100.0));
}

inline rank_t top_percentile_count(const GlobalRanking& ranking, const std::string& group,
                                   double x) {
    rank_t t = percentile_threshold(ranking.world_size(), x);
    rank_t count = 0;
    bool group_exists = false;
    for (const RankedEntry& e : ranking.entries) {
        if (e.record.group != group) continue;
        group_exists = true;
        if (e.rank <= t) ++count;
    }
    if (!group_exists) throw lookup_error("unknown group '" + group + "'");
    return count;
}

inline PercentileReport percentile_report(const GlobalRanking& ranking, const std::string& group,
                                          const PercentileSpec& spec) {
    PercentileReport report;
    report.group = group;
    report.world_size = ranking.world_size();
    for (double level : spec.levels) {
        PercentileLevelCount row;
        row.level = level;
        row.threshold = percentile_threshold(report.world_size, level);
        row.count = top_percentile_count(ranking, group, level);
        report.per_level.push_back(row);
    }
    return report;
}

// P_top1% / P_top10%, a size-free gauge of upper-tail strength.
inline double efficiency_ratio(const GlobalRanking& ranking, const std::string& group) {
    rank_t p10 = top_percentile_count(ranking, group, 10.0);
    rank_t p1 = top_percentile_count(ranking, group, 1.0);
    if (p10 == 0) throw undefined_ratio_error("group '" + group + "' has no papers in the top 10%");
    return static_cast<double>(p1) / static_cast<double>(p10);
}

inline DoubleRankData double_rank_points(const GlobalRanking& ranking, const std::string& group,
                                         const PercentileSpec& spec) {
    GroupSeries series = extract_group_series(ranking, group);
    DoubleRankData data;
    data.group = group;
    rank_t widest = percentile_threshold(ranking.world_size(), spec.levels.front());
    for (const SeriesPoint& p : series.points)
        if (p.global_rank <= widest) data.points.emplace_back(p.global_rank, p.country_rank);
    for (double level : spec.levels) {
        DoubleRankData::Marker m;
        m.level = level;
        m.threshold = percentile_threshold(ranking.world_size(), level);
        m.count = 0;
        for (const SeriesPoint& p : series.points)
            if (p.global_rank <= m.threshold) ++m.count;
        data.markers.push_back(m);
    }
    return data;
}

// Diagnostic: the (min, max) the top-x% count could take if the tie class
// straddling the threshold were ordered adversarially instead of by id.
// Deterministic ranks hide this spread; here it is made visible.
inline std::pair<rank_t, rank_t> percentile_count_range(const GlobalRanking& ranking,
                                                        const std::string& group, double x) {
    rank_t t = percentile_threshold(ranking.world_size(), x);
    rank_t fixed = 0;     // group papers in tie classes entirely inside the threshold
    rank_t in_class = 0;  // group papers in the straddling class
    bool group_exists = false;
    const TieClass* straddle = nullptr;
    if (t >= 1) {
        const TieClass& tc = ranking.tie_class_of(t);
        if (tc.rank_max > t) straddle = &tc;
    }
    for (const RankedEntry& e : ranking.entries) {
        if (e.record.group != group) continue;
        group_exists = true;
        if (straddle && e.rank >= straddle->rank_min && e.rank <= straddle->rank_max)
            ++in_class;
        else if (e.rank <= t)
            ++fixed;
    }
    if (!group_exists) throw lookup_error("unknown group '" + group + "'");
    if (!straddle) return {fixed, fixed};
    rank_t slots_inside = t - straddle->rank_min + 1;
    rank_t slots_outside = straddle->count - slots_inside;
    rank_t lo = fixed + (in_class > slots_outside ? in_class - slots_outside : 0);
    rank_t hi = fixed + std::min(in_class, slots_inside);
    return {lo, hi};
}

}  // namespace rankratio
