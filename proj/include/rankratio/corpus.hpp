#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rankratio/errors.hpp"

namespace rankratio {

using rank_t = std::uint32_t;

// One publication: opaque id, citation count (real-valued so synthetic draws
// rank without rounding), and a free-form group label such as "USA:D".
struct PaperRecord {
    std::string id;
    double citations = 0.0;
    std::string group;
};

// A maximal run of records sharing one citation value, occupying the
// consecutive global ranks [rank_min, rank_max].
struct TieClass {
    double citation_value = 0.0;
    rank_t rank_min = 0;
    rank_t rank_max = 0;
    rank_t count = 0;  // rank_max - rank_min + 1
};

struct RankedEntry {
    rank_t rank = 0;  // 1..N, unique
    PaperRecord record;
};

// All records ordered by descending citations with deterministic unique ranks.
// Ties are broken by ascending id so identical record multisets always produce
// the identical ranking; tie_classes record the spans where the order between
// equal values carries no information.
struct GlobalRanking {
    std::vector<RankedEntry> entries;  // entries[i].rank == i + 1
    std::vector<TieClass> tie_classes;

    rank_t world_size() const { return static_cast<rank_t>(entries.size()); }

    const TieClass& tie_class_of(rank_t rank) const {
        auto it = std::upper_bound(tie_classes.begin(), tie_classes.end(), rank,
                                   [](rank_t r, const TieClass& tc) { return r < tc.rank_min; });
        return *std::prev(it);
    }
};

struct SeriesPoint {
    rank_t country_rank = 0;  // r_i, always 1..n without gaps
    rank_t global_rank = 0;   // g_i, strictly increasing, g_i >= r_i
    double citations = 0.0;
};

// One group's papers as (country rank, global rank) pairs, the substrate of
// every index. world_size is the N of the ranking the series came from.
struct GroupSeries {
    std::string group;
    std::vector<SeriesPoint> points;
    rank_t world_size = 0;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

struct TieSensitivityRow {
    rank_t country_rank = 0;
    rank_t global_rank = 0;
    rank_t rank_min = 0;  // span of global ranks the paper's tie class admits
    rank_t rank_max = 0;
    double variation = 0.0;  // (rank_max - rank_min) / rank_max
};

namespace detail {

inline std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

inline double parse_number(const std::string& text, std::size_t line_no) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw parse_error("line " + std::to_string(line_no) + ": not a number: '" + text + "'");
    return value;
}

inline rank_t parse_rank(const std::string& text, std::size_t line_no) {
    const char* begin = text.c_str();
    char* end = nullptr;
    unsigned long long value = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0' || text[0] == '-')
        throw parse_error("line " + std::to_string(line_no) + ": not a positive integer: '" + text + "'");
    if (value == 0)
        throw domain_error("line " + std::to_string(line_no) + ": ranks start at 1");
    return static_cast<rank_t>(value);
}

}  // namespace detail

// Reads the `id,citations,group` CSV. Row order is preserved so ingest
// output can be audited against the source file.
inline std::vector<PaperRecord> ingest_records(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw parse_error("line 1: missing header 'id,citations,group'");
    if (detail::strip_cr(line) != "id,citations,group")
        throw parse_error("line 1: expected header 'id,citations,group', got '" + detail::strip_cr(line) + "'");

    std::vector<PaperRecord> records;
    std::unordered_set<std::string> seen_ids;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != 3)
            throw parse_error("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                              std::to_string(fields.size()));
        if (fields[0].empty())
            throw parse_error("line " + std::to_string(line_no) + ": empty id");
        double citations = detail::parse_number(fields[1], line_no);
        if (!(citations >= 0.0))
            throw domain_error("line " + std::to_string(line_no) + ": negative citations: " + fields[1]);
        if (!seen_ids.insert(fields[0]).second)
            throw uniqueness_error("line " + std::to_string(line_no) + ": duplicate id '" + fields[0] + "'");
        records.push_back(PaperRecord{fields[0], citations, fields[2]});
    }
    return records;
}

inline std::vector<PaperRecord> load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");
    return ingest_records(in);
}

// Reads a `country_rank,global_rank` CSV into a GroupSeries directly, for
// published rank tables where the underlying corpus is unavailable.
// world_size is taken as the largest global rank seen; citations are unknown
// and stored as 0.
inline GroupSeries ingest_rank_series(std::istream& in, const std::string& group) {
    std::string line;
    if (!std::getline(in, line))
        throw parse_error("line 1: missing header 'country_rank,global_rank'");
    if (detail::strip_cr(line) != "country_rank,global_rank")
        throw parse_error("line 1: expected header 'country_rank,global_rank', got '" +
                          detail::strip_cr(line) + "'");

    std::vector<SeriesPoint> points;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != 2)
            throw parse_error("line " + std::to_string(line_no) + ": expected 2 fields, got " +
                              std::to_string(fields.size()));
        SeriesPoint p;
        p.country_rank = detail::parse_rank(fields[0], line_no);
        p.global_rank = detail::parse_rank(fields[1], line_no);
        points.push_back(p);
    }

    std::sort(points.begin(), points.end(),
              [](const SeriesPoint& a, const SeriesPoint& b) { return a.country_rank < b.country_rank; });
    GroupSeries series;
    series.group = group;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const SeriesPoint& p = points[i];
        if (p.country_rank != i + 1)
            throw domain_error("country ranks must be exactly 1..n; missing or duplicate rank " +
                               std::to_string(i + 1));
        if (p.global_rank < p.country_rank)
            throw domain_error("global rank " + std::to_string(p.global_rank) +
                               " below country rank " + std::to_string(p.country_rank));
        if (i > 0 && p.global_rank <= points[i - 1].global_rank)
            throw domain_error("global ranks must be strictly increasing (rank " +
                               std::to_string(p.global_rank) + " follows " +
                               std::to_string(points[i - 1].global_rank) + ")");
        series.world_size = std::max(series.world_size, p.global_rank);
        series.points.push_back(p);
    }
    return series;
}

inline GroupSeries load_rank_series(const std::string& path, const std::string& group) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");
    return ingest_rank_series(in, group);
}

// Assigns unique global ranks 1..N by descending citations, id ascending
// within ties, and enumerates every tie class.
inline GlobalRanking build_global_ranking(std::vector<PaperRecord> records) {
    if (records.empty()) throw empty_input_error("cannot rank an empty corpus");

    {
        std::unordered_set<std::string> ids;
        ids.reserve(records.size());
        for (const PaperRecord& r : records)
            if (!ids.insert(r.id).second) throw uniqueness_error("duplicate id '" + r.id + "'");
    }

    std::sort(records.begin(), records.end(), [](const PaperRecord& a, const PaperRecord& b) {
        if (a.citations != b.citations) return a.citations > b.citations;
        return a.id < b.id;
    });

    GlobalRanking ranking;
    ranking.entries.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
        ranking.entries.push_back(RankedEntry{static_cast<rank_t>(i + 1), std::move(records[i])});

    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= ranking.entries.size(); ++i) {
        if (i == ranking.entries.size() ||
            ranking.entries[i].record.citations != ranking.entries[run_start].record.citations) {
            TieClass tc;
            tc.citation_value = ranking.entries[run_start].record.citations;
            tc.rank_min = static_cast<rank_t>(run_start + 1);
            tc.rank_max = static_cast<rank_t>(i);
            tc.count = tc.rank_max - tc.rank_min + 1;
            ranking.tie_classes.push_back(tc);
            run_start = i;
        }
    }
    return ranking;
}

namespace detail {

template <typename Predicate>
GroupSeries series_matching(const GlobalRanking& ranking, Predicate pred, std::string name) {
    GroupSeries series;
    series.group = std::move(name);
    series.world_size = ranking.world_size();
    for (const RankedEntry& e : ranking.entries) {
        if (!pred(e.record.group)) continue;
        SeriesPoint p;
        p.country_rank = static_cast<rank_t>(series.points.size() + 1);
        p.global_rank = e.rank;
        p.citations = e.record.citations;
        series.points.push_back(p);
    }
    return series;
}

}  // namespace detail

inline GroupSeries extract_group_series(const GlobalRanking& ranking, const std::string& group) {
    GroupSeries series = detail::series_matching(
        ranking, [&](const std::string& g) { return g == group; }, group);
    if (series.empty()) throw lookup_error("unknown group '" + group + "'");
    return series;
}

// All series in one pass; keyed by label so iteration order is deterministic.
inline std::map<std::string, GroupSeries> extract_all_group_series(const GlobalRanking& ranking) {
    std::map<std::string, GroupSeries> out;
    for (const RankedEntry& e : ranking.entries) {
        GroupSeries& series = out[e.record.group];
        if (series.points.empty()) {
            series.group = e.record.group;
            series.world_size = ranking.world_size();
        }
        SeriesPoint p;
        p.country_rank = static_cast<rank_t>(series.points.size() + 1);
        p.global_rank = e.rank;
        p.citations = e.record.citations;
        series.points.push_back(p);
    }
    return out;
}

// Re-ranks the union of disjoint groups as one series; global ranks are
// untouched, country ranks run 1..sum(n). Groups are record labels, so two
// distinct labels never share a paper; a repeated label is the overlap case.
inline GroupSeries merge_groups(const GlobalRanking& ranking, const std::vector<std::string>& groups) {
    if (groups.size() < 2) throw domain_error("merge_groups needs at least 2 groups");
    std::unordered_set<std::string> labels;
    for (const std::string& g : groups)
        if (!labels.insert(g).second)
            throw overlap_error("group '" + g + "' listed twice; merged groups must be disjoint");

    std::string name;
    for (const std::string& g : groups) {
        if (!name.empty()) name += '+';
        name += g;
    }
    GroupSeries series = detail::series_matching(
        ranking, [&](const std::string& g) { return labels.count(g) != 0; }, name);

    for (const std::string& g : groups) {
        bool found = false;
        for (const RankedEntry& e : ranking.entries)
            if (e.record.group == g) {
                found = true;
                break;
            }
        if (!found) throw lookup_error("unknown group '" + g + "'");
    }
    return series;
}

// For each of the group's top-k papers, the span of global ranks its tie
// class admits and the relative rank-ratio variation that span causes. A
// paper with no citation twins has variation 0.
inline std::vector<TieSensitivityRow> tie_sensitivity(const GlobalRanking& ranking,
                                                      const std::string& group, rank_t k) {
    if (k < 1) throw domain_error("k must be at least 1");
    GroupSeries series = extract_group_series(ranking, group);
    std::vector<TieSensitivityRow> rows;
    std::size_t top = std::min<std::size_t>(k, series.size());
    for (std::size_t i = 0; i < top; ++i) {
        const SeriesPoint& p = series.points[i];
        const TieClass& tc = ranking.tie_class_of(p.global_rank);
        TieSensitivityRow row;
        row.country_rank = p.country_rank;
        row.global_rank = p.global_rank;
        row.rank_min = tc.rank_min;
        row.rank_max = tc.rank_max;
        row.variation = static_cast<double>(tc.rank_max - tc.rank_min) / tc.rank_max;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace rankratio
