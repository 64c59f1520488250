#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rankratio/corpus.hpp"
#include "rankratio/errors.hpp"

namespace rankratio {

// Two-anchor percentile power law n(x) = p10 * (x/10)^a with a = log10(p10/p1),
// so n(10) = p10 and n(1) = p1 by construction. Used to extrapolate how many
// papers a group "should" place inside narrower percentiles, and where its
// most cited papers "should" rank globally.
struct PowerLawModel {
    std::string group;
    double p10 = 0.0;
    double p1 = 0.0;
    double exponent = 0.0;
    rank_t world_size = 0;
};

inline PowerLawModel fit_from_percentiles(double p10, double p1, rank_t world_size,
                                          std::string group = {}) {
    if (!(p10 > 0.0)) throw domain_error("p10 must be positive");
    if (p1 <= 0.0)
        throw degenerate_fit_error("p1 = " + std::to_string(p1) +
                                   " does not define a power law (both anchors must be positive)");
    if (p1 > p10)
        throw domain_error("p1 = " + std::to_string(p1) + " exceeds p10 = " + std::to_string(p10));
    PowerLawModel model;
    model.group = std::move(group);
    model.p10 = p10;
    model.p1 = p1;
    model.exponent = std::log10(p10 / p1);
    model.world_size = world_size;
    return model;
}

// Expected number of the group's papers inside the top x%.
inline double expected_count(const PowerLawModel& model, double x) {
    if (!(x > 0.0 && x <= 100.0))
        throw domain_error("percentile level " + std::to_string(x) + " outside (0,100]");
    return model.p10 * std::pow(x / 10.0, model.exponent);
}

// Inverts n(x) = r: the global rank at which the group's r-th paper is
// expected to sit. Fractional; rounding is the display's business.
inline double expected_global_rank(const PowerLawModel& model, rank_t country_rank) {
    if (country_rank < 1) throw domain_error("country rank must be positive");
    if (!(model.exponent > 0.0))
        throw domain_error("flat power law (exponent 0) cannot be inverted");
    double x = 10.0 * std::pow(static_cast<double>(country_rank) / model.p10, 1.0 / model.exponent);
    return x / 100.0 * static_cast<double>(model.world_size);
}

struct ExtrapolationRow {
    rank_t country_rank = 0;
    double expected_global_rank = 0.0;
    rank_t actual_global_rank = 0;
    double gap = 0.0;  // actual - expected; positive when the paper sits lower than the law predicts
};

// Side-by-side of where each of the group's papers actually ranks versus
// where the power law puts it. The gap is reported, never judged: elite
// groups routinely beat the extrapolation at the very top.
inline std::vector<ExtrapolationRow> extrapolation_table(const PowerLawModel& model,
                                                         const GroupSeries& series) {
    std::vector<ExtrapolationRow> rows;
    rows.reserve(series.size());
    for (const SeriesPoint& p : series.points) {
        ExtrapolationRow row;
        row.country_rank = p.country_rank;
        row.expected_global_rank = expected_global_rank(model, p.country_rank);
        row.actual_global_rank = p.global_rank;
        row.gap = static_cast<double>(p.global_rank) - row.expected_global_rank;
        rows.push_back(row);
    }
    return rows;
}

// Solves n_a(x) = factor * n_b(x): the percentile at which model a's expected
// count is `factor` times model b's.
inline double crossover_percentile(const PowerLawModel& a, const PowerLawModel& b, double factor) {
    if (!(factor > 1.0)) throw domain_error("factor must exceed 1");
    if (a.exponent == b.exponent)
        throw no_crossover_error("equal exponents: the count ratio is constant in x");
    double x = 10.0 * std::pow(factor * b.p10 / a.p10, 1.0 / (a.exponent - b.exponent));
    if (!(x > 0.0 && x <= 100.0))
        throw no_crossover_error("crossover at x = " + std::to_string(x) +
                                 " falls outside (0,100]");
    return x;
}

}  // namespace rankratio
