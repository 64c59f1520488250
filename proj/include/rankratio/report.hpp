#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <locale>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rankratio/corpus.hpp"
#include "rankratio/errors.hpp"
#include "rankratio/indices.hpp"
#include "rankratio/percentiles.hpp"
#include "rankratio/powerlaw.hpp"
#include "rankratio/synth.hpp"

namespace rankratio {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Formatting. CSV output rounds to display precision (indices to 1 decimal,
// ratios to 2, plot data to 6); JSON always carries full precision. Streams
// are imbued with the classic locale so the decimal point is '.' no matter
// what the host environment says.
// ---------------------------------------------------------------------------

inline double round_half_up(double value, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

namespace detail {

inline std::ostringstream make_stream() {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    return out;
}

}  // namespace detail

inline std::string format_fixed(double value, int decimals) {
    auto out = detail::make_stream();
    out.setf(std::ios::fixed);
    out.precision(decimals);
    out << round_half_up(value, decimals);
    return out.str();
}

// Shortest natural rendering, for percentile levels: 0.1 -> "0.1", 10 -> "10".
inline std::string format_compact(double value) {
    auto out = detail::make_stream();
    out << value;
    return out.str();
}

// 17 significant digits: parses back to the identical double, for corpus
// exports that must survive a write/read round trip.
inline std::string format_roundtrip(double value) {
    auto out = detail::make_stream();
    out.precision(17);
    out << value;
    return out.str();
}

inline constexpr const char* undefined_marker = "-";

inline std::string format_optional(const std::optional<double>& value, int decimals) {
    return value ? format_fixed(*value, decimals) : std::string(undefined_marker);
}

// ---------------------------------------------------------------------------
// Comparison table: one row per group with size, percentile counts and
// Rn(10), plus optional ratio columns between two designated groups.
// ---------------------------------------------------------------------------

struct ComparisonRow {
    std::string group;
    rank_t n_all = 0;
    rank_t p_top10 = 0;
    rank_t p_top1 = 0;
    double rn10 = 0.0;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    std::optional<std::pair<std::string, std::string>> ratio_pair;
    // numerator = first of the pair; each empty when its denominator is 0
    std::optional<double> ratio_n;
    std::optional<double> ratio_p10;
    std::optional<double> ratio_p1;
    std::optional<double> ratio_rn10;
};

inline ComparisonTable build_comparison(
    const GlobalRanking& ranking, const std::vector<std::string>& groups,
    std::optional<std::pair<std::string, std::string>> ratio_pair = std::nullopt) {
    if (groups.empty()) throw empty_input_error("comparison needs at least one group");
    ComparisonTable table;
    for (const std::string& g : groups) {
        GroupSeries series = extract_group_series(ranking, g);
        ComparisonRow row;
        row.group = g;
        row.n_all = static_cast<rank_t>(series.size());
        row.p_top10 = top_percentile_count(ranking, g, 10.0);
        row.p_top1 = top_percentile_count(ranking, g, 1.0);
        row.rn10 = rn_index(series, 10);
        table.rows.push_back(row);
    }
    if (ratio_pair) {
        auto find = [&](const std::string& g) -> const ComparisonRow& {
            for (const ComparisonRow& row : table.rows)
                if (row.group == g) return row;
            throw lookup_error("ratio group '" + g + "' is not among the compared groups");
        };
        const ComparisonRow& a = find(ratio_pair->first);
        const ComparisonRow& b = find(ratio_pair->second);
        table.ratio_pair = std::move(ratio_pair);
        auto ratio = [](double num, double den) -> std::optional<double> {
            if (den == 0.0) return std::nullopt;
            return num / den;
        };
        table.ratio_n = ratio(a.n_all, b.n_all);
        table.ratio_p10 = ratio(a.p_top10, b.p_top10);
        table.ratio_p1 = ratio(a.p_top1, b.p_top1);
        table.ratio_rn10 = ratio(a.rn10, b.rn10);
    }
    return table;
}

// ---------------------------------------------------------------------------
// CSV emitters. Every document has a mandatory header row; rows end in '\n'.
// ---------------------------------------------------------------------------

inline std::string ranking_csv(const GlobalRanking& ranking) {
    auto out = detail::make_stream();
    out << "global_rank,id,citations,group\n";
    for (const RankedEntry& e : ranking.entries)
        out << e.rank << ',' << e.record.id << ',' << format_roundtrip(e.record.citations) << ','
            << e.record.group << '\n';
    return out.str();
}

inline std::string corpus_csv(const std::vector<PaperRecord>& records) {
    auto out = detail::make_stream();
    out << "id,citations,group\n";
    for (const PaperRecord& r : records)
        out << r.id << ',' << format_roundtrip(r.citations) << ',' << r.group << '\n';
    return out.str();
}

inline std::string tie_sensitivity_csv(const std::vector<TieSensitivityRow>& rows) {
    auto out = detail::make_stream();
    out << "country_rank,global_rank,rank_min,rank_max,variation\n";
    for (const TieSensitivityRow& r : rows)
        out << r.country_rank << ',' << r.global_rank << ',' << r.rank_min << ',' << r.rank_max
            << ',' << format_fixed(r.variation, 6) << '\n';
    return out.str();
}

inline std::string index_reports_csv(const std::vector<IndexReport>& reports) {
    auto out = detail::make_stream();
    out << "group,rn10,rn5,rk,gm,papers_used,flags\n";
    for (const IndexReport& r : reports) {
        out << r.group << ',' << format_fixed(r.rn10, 1) << ',' << format_fixed(r.rn5, 1) << ','
            << format_optional(r.rk, 1) << ',' << format_optional(r.gm, 1) << ',' << r.papers_used
            << ',' << (r.short_series ? "short_series" : undefined_marker) << '\n';
    }
    return out.str();
}

inline std::string cumulative_csv(const CumulativeCurve& curve) {
    auto out = detail::make_stream();
    out << "k,C_k\n";
    for (const auto& [k, ck] : curve.points) out << k << ',' << format_fixed(ck, 6) << '\n';
    return out.str();
}

inline std::string audit_csv(const AdditivityAudit& audit) {
    auto out = detail::make_stream();
    std::string parts;
    for (const std::string& p : audit.parts) {
        if (!parts.empty()) parts += '+';
        parts += p;
    }
    out << "parts,rn_sum,rn_all,rn_ratio,rk_sum,rk_all,rk_ratio\n";
    out << parts << ',' << format_fixed(audit.rn_sum, 1) << ',' << format_fixed(audit.rn_all, 1)
        << ',' << format_fixed(audit.rn_ratio, 2) << ',' << format_optional(audit.rk_sum, 1) << ','
        << format_optional(audit.rk_all, 1) << ',' << format_optional(audit.rk_ratio, 2) << '\n';
    return out.str();
}

inline std::string percentile_csv(const PercentileReport& report) {
    auto out = detail::make_stream();
    out << "level,threshold,count\n";
    for (const PercentileLevelCount& row : report.per_level)
        out << format_compact(row.level) << ',' << row.threshold << ',' << row.count << '\n';
    return out.str();
}

// Points carry marker_flag 0; at each percentile level one marker row carries
// (threshold rank, count, 1). Rows are globally sorted by the first column so
// the file plots directly.
inline std::string double_rank_csv(const DoubleRankData& data) {
    struct Row {
        rank_t g, c;
        int flag;
    };
    std::vector<Row> rows;
    rows.reserve(data.points.size() + data.markers.size());
    for (const auto& [g, c] : data.points) rows.push_back({g, c, 0});
    for (const DoubleRankData::Marker& m : data.markers) rows.push_back({m.threshold, m.count, 1});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.g != b.g) return a.g < b.g;
        return a.flag < b.flag;
    });
    auto out = detail::make_stream();
    out << "global_rank,country_rank,marker_flag\n";
    for (const Row& r : rows) out << r.g << ',' << r.c << ',' << r.flag << '\n';
    return out.str();
}

inline std::string extrapolation_csv(const std::vector<ExtrapolationRow>& rows) {
    auto out = detail::make_stream();
    out << "country_rank,expected_global_rank,actual_global_rank,gap\n";
    for (const ExtrapolationRow& r : rows)
        out << r.country_rank << ',' << format_fixed(r.expected_global_rank, 6) << ','
            << r.actual_global_rank << ',' << format_fixed(r.gap, 6) << '\n';
    return out.str();
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    auto out = detail::make_stream();
    out << "group,mu,size,rn10,rk\n";
    for (const SweepRow& r : rows)
        out << r.group << ',' << format_fixed(r.mu, 6) << ',' << r.size << ','
            << format_fixed(r.rn10, 6) << ',' << format_fixed(r.rk, 6) << '\n';
    return out.str();
}

inline std::string comparison_csv(const ComparisonTable& table) {
    auto out = detail::make_stream();
    out << "group,n_all,p_top10,p_top1,rn10\n";
    for (const ComparisonRow& r : table.rows)
        out << r.group << ',' << r.n_all << ',' << r.p_top10 << ',' << r.p_top1 << ','
            << format_fixed(r.rn10, 1) << '\n';
    if (table.ratio_pair) {
        out << "ratio " << table.ratio_pair->first << '/' << table.ratio_pair->second << ','
            << format_optional(table.ratio_n, 2) << ',' << format_optional(table.ratio_p10, 2)
            << ',' << format_optional(table.ratio_p1, 2) << ','
            << format_optional(table.ratio_rn10, 2) << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// JSON emitters. Numbers at full precision; undefined values as null.
// ---------------------------------------------------------------------------

namespace detail {

inline json opt(const std::optional<double>& value) {
    return value ? json(*value) : json(nullptr);
}

}  // namespace detail

inline json ranking_json(const GlobalRanking& ranking) {
    json entries = json::array();
    for (const RankedEntry& e : ranking.entries)
        entries.push_back({{"global_rank", e.rank},
                           {"id", e.record.id},
                           {"citations", e.record.citations},
                           {"group", e.record.group}});
    json ties = json::array();
    for (const TieClass& tc : ranking.tie_classes)
        if (tc.count > 1)
            ties.push_back({{"citation_value", tc.citation_value},
                            {"rank_min", tc.rank_min},
                            {"rank_max", tc.rank_max},
                            {"count", tc.count}});
    return {{"world_size", ranking.world_size()}, {"entries", entries}, {"tie_classes", ties}};
}

inline json tie_sensitivity_json(const std::string& group,
                                 const std::vector<TieSensitivityRow>& rows) {
    json out_rows = json::array();
    for (const TieSensitivityRow& r : rows)
        out_rows.push_back({{"country_rank", r.country_rank},
                            {"global_rank", r.global_rank},
                            {"rank_min", r.rank_min},
                            {"rank_max", r.rank_max},
                            {"variation", r.variation}});
    return {{"group", group}, {"rows", out_rows}};
}

inline json index_report_json(const IndexReport& report) {
    json flags = json::array();
    if (report.short_series) flags.push_back("short_series");
    return {{"group", report.group}, {"rn10", report.rn10},
            {"rn5", report.rn5},     {"rk", detail::opt(report.rk)},
            {"gm", detail::opt(report.gm)},  {"papers_used", report.papers_used},
            {"flags", flags}};
}

inline json cumulative_json(const CumulativeCurve& curve) {
    json points = json::array();
    for (const auto& [k, ck] : curve.points) points.push_back({{"k", k}, {"C_k", ck}});
    return {{"group", curve.group}, {"points", points}};
}

inline json audit_json(const AdditivityAudit& audit) {
    return {{"parts", audit.parts},
            {"rn_sum", audit.rn_sum},
            {"rn_all", audit.rn_all},
            {"rn_ratio", audit.rn_ratio},
            {"rk_sum", detail::opt(audit.rk_sum)},
            {"rk_all", detail::opt(audit.rk_all)},
            {"rk_ratio", detail::opt(audit.rk_ratio)}};
}

inline json percentile_report_json(const PercentileReport& report) {
    json levels = json::array();
    for (const PercentileLevelCount& row : report.per_level)
        levels.push_back(
            {{"level", row.level}, {"threshold", row.threshold}, {"count", row.count}});
    return {{"group", report.group}, {"world_size", report.world_size}, {"levels", levels}};
}

inline json double_rank_json(const DoubleRankData& data) {
    json points = json::array();
    for (const auto& [g, c] : data.points)
        points.push_back({{"global_rank", g}, {"country_rank", c}});
    json markers = json::array();
    for (const DoubleRankData::Marker& m : data.markers)
        markers.push_back({{"level", m.level}, {"threshold", m.threshold}, {"count", m.count}});
    return {{"group", data.group}, {"points", points}, {"markers", markers}};
}

inline json powerlaw_model_json(const PowerLawModel& model) {
    return {{"group", model.group},
            {"p10", model.p10},
            {"p1", model.p1},
            {"exponent", model.exponent},
            {"world_size", model.world_size}};
}

inline json extrapolation_json(const std::vector<ExtrapolationRow>& rows) {
    json out = json::array();
    for (const ExtrapolationRow& r : rows)
        out.push_back({{"country_rank", r.country_rank},
                       {"expected_global_rank", r.expected_global_rank},
                       {"actual_global_rank", r.actual_global_rank},
                       {"gap", r.gap}});
    return out;
}

inline json sweep_json(const std::vector<SweepRow>& rows) {
    json out = json::array();
    for (const SweepRow& r : rows)
        out.push_back({{"group", r.group},
                       {"mu", r.mu},
                       {"size", r.size},
                       {"rn10", r.rn10},
                       {"rk", r.rk}});
    return out;
}

inline json comparison_json(const ComparisonTable& table) {
    json rows = json::array();
    for (const ComparisonRow& r : table.rows)
        rows.push_back({{"group", r.group},
                        {"n_all", r.n_all},
                        {"p_top10", r.p_top10},
                        {"p_top1", r.p_top1},
                        {"rn10", r.rn10}});
    json out = {{"rows", rows}};
    if (table.ratio_pair) {
        out["ratio"] = {{"numerator", table.ratio_pair->first},
                        {"denominator", table.ratio_pair->second},
                        {"n_all", detail::opt(table.ratio_n)},
                        {"p_top10", detail::opt(table.ratio_p10)},
                        {"p_top1", detail::opt(table.ratio_p1)},
                        {"rn10", detail::opt(table.ratio_rn10)}};
    } else {
        out["ratio"] = nullptr;
    }
    return out;
}

// ---------------------------------------------------------------------------
// File output. Writes go to "<path>.tmp" and are renamed into place, so a
// failed run never leaves a truncated file behind.
// ---------------------------------------------------------------------------

inline void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out) throw io_error("write failed for '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw io_error("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

// ---------------------------------------------------------------------------
// Plot-data bundles: per group, the double-rank scatter, the cumulative
// rank-ratio curve, and the power-law expected-rank overlay, each as its own
// CSV named <group>_<kind>.csv inside out_dir.
// ---------------------------------------------------------------------------

struct PlotBundleSpec {
    PercentileSpec percentiles = PercentileSpec::standard();
    rank_t cumulative_k = 10;
    bool expected_rank_overlay = true;
    std::string out_dir = ".";
};

inline std::vector<std::string> bundle_plot_data(const GlobalRanking& ranking,
                                                 const std::vector<std::string>& groups,
                                                 const PlotBundleSpec& spec) {
    if (groups.empty()) throw empty_input_error("plot bundle needs at least one group");
    std::filesystem::path dir(spec.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw io_error("cannot create directory '" + spec.out_dir + "': " + ec.message());

    std::vector<std::string> written;
    auto emit = [&](const std::string& group, const std::string& kind, const std::string& body) {
        std::string path = (dir / (group + "_" + kind + ".csv")).string();
        write_file_atomic(path, body);
        written.push_back(path);
    };

    for (const std::string& group : groups) {
        GroupSeries series = extract_group_series(ranking, group);
        emit(group, "double_rank", double_rank_csv(double_rank_points(ranking, group, spec.percentiles)));
        emit(group, "cumulative", cumulative_csv(cumulative_curve(series, spec.cumulative_k)));
        if (spec.expected_rank_overlay) {
            // The overlay needs a non-degenerate fit; a group with no top-1%
            // papers gets a header-only file so the bundle shape stays stable.
            rank_t p10 = top_percentile_count(ranking, group, 10.0);
            rank_t p1 = top_percentile_count(ranking, group, 1.0);
            std::string body = "country_rank,expected_global_rank,actual_global_rank,gap\n";
            if (p10 > 0 && p1 > 0 && p10 > p1) {
                PowerLawModel model =
                    fit_from_percentiles(p10, p1, ranking.world_size(), group);
                body = extrapolation_csv(extrapolation_table(model, series));
            }
            emit(group, "expected_rank", body);
        }
    }
    return written;
}

}  // namespace rankratio
