#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rankratio/corpus.hpp"
#include "rankratio/errors.hpp"
#include "rankratio/indices.hpp"

namespace rankratio {

inline constexpr std::uint64_t default_seed = 42;

// Lognormal benchmark corpus: |mu_values| * |sizes| series, one group per
// series. The defaults give 200 mu values evenly spaced 4.0 down to 2.0,
// three series of 800/400/200 numbers per mu: 600 series, 280,000 numbers.
struct SynthSpec {
    double sigma = 1.1;
    std::vector<double> mu_values;
    std::vector<rank_t> sizes;
    std::uint64_t seed = default_seed;
    bool round_to_integers = false;  // manufactures ties, for tie-stress testing

    static SynthSpec defaults(std::uint64_t seed = default_seed) {
        SynthSpec spec;
        spec.seed = seed;
        spec.mu_values.reserve(200);
        for (int j = 0; j < 200; ++j) spec.mu_values.push_back(4.0 - (2.0 * j) / 199.0);
        spec.sizes = {800, 400, 200};
        return spec;
    }

    std::size_t series_count() const { return mu_values.size() * sizes.size(); }

    std::size_t record_count() const {
        std::size_t per_mu = 0;
        for (rank_t s : sizes) per_mu += s;
        return per_mu * mu_values.size();
    }
};

namespace detail {

// splitmix64 finalizer; stream i gets an independent sub-seed so series can
// be generated in any order (or in parallel) with identical results.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// 53-bit draw in (0,1].
inline double uniform_open01(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
}

// Box-Muller, consuming exactly two generator words per draw. Spelled out
// rather than using std::normal_distribution, whose word consumption is
// implementation-defined and would break seed-for-seed reproducibility
// across standard libraries.
inline double standard_normal(std::mt19937_64& gen) {
    double u1 = uniform_open01(gen);
    double u2 = uniform_open01(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace detail

// n independent draws whose logs are normal(mu, sigma); fixed seed, fixed
// sequence.
inline std::vector<double> lognormal_series(double mu, double sigma, std::size_t n,
                                            std::uint64_t seed) {
    if (n < 1) throw domain_error("series length must be at least 1");
    if (!(sigma > 0.0)) throw domain_error("sigma must be positive");
    std::mt19937_64 gen(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::exp(mu + sigma * detail::standard_normal(gen)));
    return out;
}

// Labels encode the series parameters and parse back, e.g. "mu3.989950_n400".
inline std::string make_group_label(double mu, rank_t size) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "mu%.6f_n%u", mu, static_cast<unsigned>(size));
    return buf;
}

inline std::optional<std::pair<double, rank_t>> parse_group_label(const std::string& label) {
    if (label.rfind("mu", 0) != 0) return std::nullopt;
    std::size_t sep = label.find("_n");
    if (sep == std::string::npos) return std::nullopt;
    try {
        std::size_t used = 0;
        double mu = std::stod(label.substr(2, sep - 2), &used);
        if (used != sep - 2) return std::nullopt;
        unsigned long size = std::stoul(label.substr(sep + 2), &used);
        if (used != label.size() - sep - 2 || size == 0) return std::nullopt;
        return std::make_pair(mu, static_cast<rank_t>(size));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline std::vector<PaperRecord> build_benchmark_corpus(const SynthSpec& spec) {
    if (spec.mu_values.empty()) throw domain_error("spec has no mu values");
    if (spec.sizes.empty()) throw domain_error("spec has no series sizes");
    if (!(spec.sigma > 0.0)) throw domain_error("sigma must be positive");
    for (rank_t s : spec.sizes)
        if (s < 1) throw domain_error("series sizes must be positive");

    std::vector<PaperRecord> records;
    records.reserve(spec.record_count());
    std::uint64_t cell = 0;
    for (double mu : spec.mu_values) {
        for (rank_t size : spec.sizes) {
            std::string label = make_group_label(mu, size);
            std::vector<double> draws =
                lognormal_series(mu, spec.sigma, size, detail::mix_seed(spec.seed, cell));
            for (std::size_t i = 0; i < draws.size(); ++i) {
                double value = spec.round_to_integers ? std::round(draws[i]) : draws[i];
                records.push_back(
                    PaperRecord{label + ":" + std::to_string(i + 1), value, label});
            }
            ++cell;
        }
    }
    return records;
}

struct SweepRow {
    std::string group;
    double mu = 0.0;
    rank_t size = 0;
    double rn10 = 0.0;
    double rk = 0.0;
};

// Ranks the whole corpus, extracts every series, and computes both indices
// per series. Rows ordered by descending mu, then descending size.
inline std::vector<SweepRow> benchmark_index_sweep(const std::vector<PaperRecord>& corpus) {
    GlobalRanking ranking = build_global_ranking(corpus);
    std::map<std::string, GroupSeries> all = extract_all_group_series(ranking);
    std::vector<SweepRow> rows;
    rows.reserve(all.size());
    for (const auto& [label, series] : all) {
        auto parsed = parse_group_label(label);
        if (!parsed) throw parse_error("group label '" + label + "' does not encode (mu, size)");
        SweepRow row;
        row.group = label;
        row.mu = parsed->first;
        row.size = parsed->second;
        row.rn10 = rn_index(series, 10);
        row.rk = rk_index(series);
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.mu != b.mu) return a.mu > b.mu;
        if (a.size != b.size) return a.size > b.size;
        return a.group < b.group;
    });
    return rows;
}

}  // namespace rankratio
