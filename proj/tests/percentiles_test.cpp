#include "rankratio/percentiles.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <iterator>
#include <random>

#include "test_util.hpp"

using namespace rankratio;
using namespace testutil;

namespace {

// Fixture shaped like the solar-cell comparison: world of 20,000 papers, the
// top-10% cut at rank 2000 and the top-1% cut at rank 200. USA holds 113
// papers inside the 1% cut and 799 inside the 10% cut; South Korea 29 and
// 285.
GlobalRanking solar_ranking() {
    std::map<rank_t, std::string> placed;
    for (rank_t g = 1; g <= 113; ++g) placed[g] = "USA";
    for (rank_t g = 201; g <= 886; ++g) placed[g] = "USA";
    for (rank_t g = 114; g <= 142; ++g) placed[g] = "KR";
    for (rank_t g = 887; g <= 1142; ++g) placed[g] = "KR";
    return build_global_ranking(corpus_placing(20000, placed));
}

}  // namespace

TEST(PercentileSpec, ValidatesLevels) {
    EXPECT_EQ(PercentileSpec::standard().levels,
              (std::vector<double>{100, 50, 30, 10, 5, 3, 1}));
    EXPECT_NO_THROW(PercentileSpec::make({10, 1, 0.25, 0.1}));
    EXPECT_THROW(PercentileSpec::make({}), domain_error);
    EXPECT_THROW(PercentileSpec::make({10, 10}), domain_error);
    EXPECT_THROW(PercentileSpec::make({1, 10}), domain_error);
    EXPECT_THROW(PercentileSpec::make({101}), domain_error);
    EXPECT_THROW(PercentileSpec::make({10, 0}), domain_error);
}

TEST(PercentileThreshold, FloorsTheCut) {
    EXPECT_EQ(percentile_threshold(1000, 10), 100u);
    EXPECT_EQ(percentile_threshold(1000, 0.05), 0u);
    EXPECT_EQ(percentile_threshold(280000, 1), 2800u);
    EXPECT_EQ(percentile_threshold(280000, 0.1), 280u);
    EXPECT_EQ(percentile_threshold(999, 10), 99u);  // 99.9 floors down
    EXPECT_EQ(percentile_threshold(57, 100), 57u);  // top 100% is everyone
    EXPECT_THROW(percentile_threshold(0, 10), domain_error);
    EXPECT_THROW(percentile_threshold(100, 0), domain_error);
    EXPECT_THROW(percentile_threshold(100, 101), domain_error);
}

TEST(TopPercentileCount, CountsInsideTheCut) {
    auto ranking = build_global_ranking(corpus_placing(100, place({1, 2, 3, 4, 5}, "G")));
    EXPECT_EQ(top_percentile_count(ranking, "G", 3), 3u);
    EXPECT_EQ(top_percentile_count(ranking, "G", 100), 5u);
    EXPECT_EQ(top_percentile_count(ranking, "G", 1), 1u);
    EXPECT_EQ(top_percentile_count(ranking, "W", 1), 0u);
    EXPECT_THROW(top_percentile_count(ranking, "missing", 10), lookup_error);
}

TEST(TopPercentileCount, SolarFixtureMatchesPublishedCounts) {
    auto ranking = solar_ranking();
    EXPECT_EQ(top_percentile_count(ranking, "USA", 10), 799u);
    EXPECT_EQ(top_percentile_count(ranking, "USA", 1), 113u);
    EXPECT_EQ(top_percentile_count(ranking, "KR", 10), 285u);
    EXPECT_EQ(top_percentile_count(ranking, "KR", 1), 29u);
}

TEST(EfficiencyRatio, SizeFreeUpperTailGauge) {
    auto ranking = solar_ranking();
    EXPECT_NEAR(efficiency_ratio(ranking, "USA"), 113.0 / 799.0, 1e-12);  // ~0.14
    EXPECT_NEAR(efficiency_ratio(ranking, "KR"), 29.0 / 285.0, 1e-12);    // ~0.10
}

TEST(EfficiencyRatio, EntirelyEliteGroupScoresOne) {
    auto ranking = build_global_ranking(corpus_placing(1000, place({1, 2, 3}, "E")));
    EXPECT_DOUBLE_EQ(efficiency_ratio(ranking, "E"), 1.0);
}

TEST(EfficiencyRatio, UndefinedWithoutTopTenPercentPapers) {
    auto ranking = build_global_ranking(corpus_placing(100, place({95, 96, 97}, "L")));
    EXPECT_THROW(efficiency_ratio(ranking, "L"), undefined_ratio_error);
}

TEST(PercentileReport, RowsCarryThresholdAndCount) {
    auto ranking = build_global_ranking(corpus_placing(100, place({1, 2, 3, 40}, "G")));
    PercentileReport report = percentile_report(ranking, "G", PercentileSpec::standard());
    ASSERT_EQ(report.per_level.size(), 7u);
    EXPECT_EQ(report.world_size, 100u);
    EXPECT_DOUBLE_EQ(report.per_level[0].level, 100.0);
    EXPECT_EQ(report.per_level[0].threshold, 100u);
    EXPECT_EQ(report.per_level[0].count, 4u);  // top 100% holds the whole group
    EXPECT_EQ(report.per_level[3].level, 10.0);
    EXPECT_EQ(report.per_level[3].count, 3u);
    EXPECT_EQ(report.per_level[6].level, 1.0);
    EXPECT_EQ(report.per_level[6].count, 1u);
}

TEST(DoubleRankPoints, DiagonalForAnUnbeatenGroup) {
    auto ranking = build_global_ranking(corpus_placing(50, place({1, 2, 3, 4}, "G")));
    DoubleRankData data = double_rank_points(ranking, "G", PercentileSpec::standard());
    ASSERT_EQ(data.points.size(), 4u);
    for (const auto& [g, r] : data.points) EXPECT_EQ(g, r);
}

TEST(DoubleRankPoints, LithiumPairsAndMarkerConsistency) {
    std::vector<rank_t> dom = {2, 3, 7, 8, 10, 14, 15, 17, 20, 21};
    auto ranking = build_global_ranking(corpus_placing(100, place(dom, "USA:D")));
    DoubleRankData data = double_rank_points(ranking, "USA:D", PercentileSpec::standard());
    ASSERT_EQ(data.points.size(), 10u);
    for (std::size_t i = 0; i < dom.size(); ++i) {
        EXPECT_EQ(data.points[i].first, dom[i]);
        EXPECT_EQ(data.points[i].second, i + 1);
    }
    ASSERT_EQ(data.markers.size(), 7u);
    for (const auto& m : data.markers) {
        EXPECT_EQ(m.threshold, percentile_threshold(100, m.level));
        EXPECT_EQ(m.count, top_percentile_count(ranking, "USA:D", m.level));
    }
}

TEST(DoubleRankPoints, WidestLevelLimitsThePoints) {
    auto ranking = build_global_ranking(corpus_placing(100, place({1, 5, 50}, "G")));
    DoubleRankData data = double_rank_points(ranking, "G", PercentileSpec::make({10, 1}));
    ASSERT_EQ(data.points.size(), 2u);  // rank 50 is outside the top 10%
    EXPECT_EQ(data.points[1].first, 5u);
}

TEST(DoubleRankPoints, MarkersSeparateTailHeavyFromTopHeavyGroups) {
    // Both groups place ~160 papers in the top 10%, but one keeps 33 in the
    // top 1% and the other only 3 — the marker pair makes that visible.
    std::map<rank_t, std::string> placed;
    for (rank_t g = 1; g <= 33; ++g) placed[g] = "UK";
    for (rank_t g = 34; g <= 36; ++g) placed[g] = "IN";
    for (rank_t g = 300; g <= 428; ++g) placed[g] = "UK";
    for (rank_t g = 429; g <= 588; ++g) placed[g] = "IN";
    auto ranking = build_global_ranking(corpus_placing(20000, placed));
    auto marker_at = [&](const std::string& group, double level) {
        DoubleRankData data = double_rank_points(ranking, group, PercentileSpec::make({10, 1}));
        for (const auto& m : data.markers)
            if (m.level == level) return m;
        throw std::runtime_error("marker not found");
    };
    EXPECT_EQ(marker_at("UK", 1).count, 33u);
    EXPECT_EQ(marker_at("IN", 1).count, 3u);
    EXPECT_EQ(marker_at("UK", 1).threshold, 200u);
    EXPECT_EQ(marker_at("UK", 10).count, 162u);
    EXPECT_EQ(marker_at("IN", 10).count, 163u);
}

TEST(PercentileCountRange, TieStraddlingTheCutWidensTheRange) {
    // World of 100: ranks 8..13 share one citation value, so the top-10% cut
    // (rank 10) slices through the class. G holds three of the tied papers
    // plus a safe one at rank 2.
    std::vector<PaperRecord> records;
    for (rank_t rank = 1; rank <= 100; ++rank) {
        double citations = rank <= 7    ? 1000.0 - rank
                           : rank <= 13 ? 900.0
                                        : 900.0 - (rank - 13);
        std::string group = (rank == 2 || rank == 8 || rank == 9 || rank == 10) ? "G" : "W";
        char id[8];
        std::snprintf(id, sizeof(id), "p%03u", rank);  // zero-padded: id order == rank order
        records.push_back({id, citations, group});
    }
    auto ranking = build_global_ranking(records);
    // Deterministic count: id order puts G's tied papers at ranks 8..10.
    EXPECT_EQ(top_percentile_count(ranking, "G", 10), 4u);
    auto [lo, hi] = percentile_count_range(ranking, "G", 10);
    EXPECT_EQ(lo, 1u);  // adversarial order pushes all three past the cut
    EXPECT_EQ(hi, 4u);  // or keeps all three inside
}

TEST(PercentileCountRange, CollapsesWithoutAStraddle) {
    auto ranking = build_global_ranking(corpus_placing(100, place({1, 2, 30}, "G")));
    auto [lo, hi] = percentile_count_range(ranking, "G", 10);
    EXPECT_EQ(lo, 2u);
    EXPECT_EQ(hi, 2u);
    auto [lo0, hi0] = percentile_count_range(ranking, "G", 0.5);  // threshold 0
    EXPECT_EQ(lo0, 0u);
    EXPECT_EQ(hi0, 0u);
    EXPECT_THROW(percentile_count_range(ranking, "missing", 10), lookup_error);
}

// Counting identities that must hold on any corpus: counts shrink with the
// level, disjoint groups partition every cut exactly, and the adversarial
// range always brackets the deterministic count.
TEST(PercentileProperties, HoldOnRandomCorpora) {
    std::mt19937_64 gen(20240814);
    const double levels[] = {100, 37.5, 10, 1, 0.1};
    for (int round = 0; round < 150; ++round) {
        auto records = random_corpus(gen);
        auto ranking = build_global_ranking(records);
        auto groups = extract_all_group_series(ranking);

        for (double x : levels) {
            rank_t sum = 0;
            for (const auto& [label, series] : groups)
                sum += top_percentile_count(ranking, label, x);
            ASSERT_EQ(sum, percentile_threshold(ranking.world_size(), x));
        }

        for (const auto& [label, series] : groups) {
            rank_t previous = 0;
            for (auto it = std::rbegin(levels); it != std::rend(levels); ++it) {
                rank_t count = top_percentile_count(ranking, label, *it);
                ASSERT_GE(count, previous);
                previous = count;
            }
            auto [lo, hi] = percentile_count_range(ranking, label, 10);
            rank_t count = top_percentile_count(ranking, label, 10);
            ASSERT_LE(lo, count);
            ASSERT_GE(hi, count);
        }
    }
}
