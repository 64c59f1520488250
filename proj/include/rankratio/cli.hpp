#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "rankratio/corpus.hpp"
#include "rankratio/errors.hpp"
#include "rankratio/indices.hpp"
#include "rankratio/percentiles.hpp"
#include "rankratio/powerlaw.hpp"
#include "rankratio/report.hpp"
#include "rankratio/synth.hpp"

namespace rankratio {

enum class Command { rank, index, percentiles, powerlaw, cumulative, synth, audit, compare };

// Everything a single invocation needs, filled by parse into run. One command
// per invocation; defaults are part of the interface and must stay stable.
struct RunConfig {
    Command command = Command::index;
    std::string input;
    std::string format = "csv";  // csv | json
    std::string out;             // empty = stdout

    // rank
    std::string ties_group;
    // index / cumulative
    std::vector<std::string> groups;
    bool ranks_only = false;
    rank_t k = 10;
    bool both_k = false;
    // percentiles
    std::string group;
    std::vector<double> levels;
    bool double_rank = false;
    double range_level = 0.0;  // 0 = no adversarial-range diagnostic
    // powerlaw
    double p10 = 0.0, p1 = 0.0;
    double p10_b = 0.0, p1_b = 0.0;
    std::string group_b;
    double factor = 0.0;
    std::vector<double> eval_counts;
    std::vector<rank_t> eval_ranks;
    rank_t world = 0;
    std::string series_path;
    // synth
    std::uint64_t seed = default_seed;
    double sigma = 1.1;
    double mu_from = 4.0, mu_to = 2.0;
    unsigned mu_count = 200;
    std::vector<rank_t> sizes = {800, 400, 200};
    bool round_citations = false;
    std::string sweep_out;
    // audit
    std::vector<std::string> parts;
    // compare
    std::vector<std::string> ratio;
    std::string plot_dir;
    rank_t cumulative_k = 10;
};

namespace cli_detail {

inline std::string default_group_name(const std::string& input_path) {
    return std::filesystem::path(input_path).stem().string();
}

inline PercentileSpec levels_or_standard(const std::vector<double>& levels) {
    return levels.empty() ? PercentileSpec::standard() : PercentileSpec::make(levels);
}

inline void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
    if (config.out.empty())
        out << text;
    else
        write_file_atomic(config.out, text);
}

inline void emit_json(const RunConfig& config, const json& doc, std::ostream& out) {
    emit(config, doc.dump(2) + "\n", out);
}

// Tailors the canonical report to the requested k: the ten-paper column by
// default, the five-paper column under --k 5, both under --both-k, and an
// explicit (k, rn_k) pair for any other k.
inline json index_json_for(const GroupSeries& series, rank_t k, bool both_k) {
    json doc = index_report_json(make_index_report(series));
    if (both_k) return doc;
    if (k == 10) {
        doc.erase("rn5");
    } else if (k == 5) {
        doc.erase("rn10");
    } else {
        doc.erase("rn10");
        doc.erase("rn5");
        doc["k"] = k;
        doc["rn_k"] = rn_index(series, k);
        doc["flags"].push_back("nonstandard_k");
    }
    return doc;
}

inline std::string index_csv_for(const std::vector<GroupSeries>& series_list, rank_t k,
                                 bool both_k) {
    if (both_k) {
        std::vector<IndexReport> reports;
        reports.reserve(series_list.size());
        for (const GroupSeries& s : series_list) reports.push_back(make_index_report(s));
        return index_reports_csv(reports);
    }
    auto out = detail::make_stream();
    std::string rn_col = k == 10 ? "rn10" : (k == 5 ? "rn5" : "rn_k");
    if (k != 10 && k != 5)
        out << "group,k," << rn_col << ",rk,gm,papers_used,flags\n";
    else
        out << "group," << rn_col << ",rk,gm,papers_used,flags\n";
    for (const GroupSeries& s : series_list) {
        IndexReport r = make_index_report(s);
        std::string flags = r.short_series ? "short_series" : "";
        if (k != 10 && k != 5) flags += flags.empty() ? "nonstandard_k" : ";nonstandard_k";
        out << r.group << ',';
        if (k != 10 && k != 5) out << k << ',';
        out << format_fixed(rn_index(s, k), 1) << ',' << format_optional(r.rk, 1) << ','
            << format_optional(r.gm, 1) << ',' << r.papers_used << ','
            << (flags.empty() ? undefined_marker : flags.c_str()) << '\n';
    }
    return out.str();
}

inline int run_rank(const RunConfig& config, std::ostream& out) {
    GlobalRanking ranking = build_global_ranking(load_records(config.input));
    if (!config.ties_group.empty()) {
        auto rows = tie_sensitivity(ranking, config.ties_group, config.k);
        if (config.format == "json")
            emit_json(config, tie_sensitivity_json(config.ties_group, rows), out);
        else
            emit(config, tie_sensitivity_csv(rows), out);
        return 0;
    }
    if (config.format == "json")
        emit_json(config, ranking_json(ranking), out);
    else
        emit(config, ranking_csv(ranking), out);
    return 0;
}

inline int run_index(const RunConfig& config, std::ostream& out) {
    std::vector<GroupSeries> series_list;
    if (config.ranks_only) {
        std::string name = config.groups.empty() ? default_group_name(config.input)
                                                 : config.groups.front();
        series_list.push_back(load_rank_series(config.input, name));
    } else {
        GlobalRanking ranking = build_global_ranking(load_records(config.input));
        if (config.groups.empty()) {
            for (auto& [label, series] : extract_all_group_series(ranking))
                series_list.push_back(std::move(series));
        } else {
            for (const std::string& g : config.groups)
                series_list.push_back(extract_group_series(ranking, g));
        }
    }
    if (config.format == "json") {
        if (series_list.size() == 1) {
            emit_json(config, index_json_for(series_list.front(), config.k, config.both_k), out);
        } else {
            json docs = json::array();
            for (const GroupSeries& s : series_list)
                docs.push_back(index_json_for(s, config.k, config.both_k));
            emit_json(config, docs, out);
        }
    } else {
        emit(config, index_csv_for(series_list, config.k, config.both_k), out);
    }
    return 0;
}

inline int run_percentiles(const RunConfig& config, std::ostream& out) {
    GlobalRanking ranking = build_global_ranking(load_records(config.input));
    PercentileSpec spec = levels_or_standard(config.levels);
    if (config.range_level > 0.0) {
        auto [lo, hi] = percentile_count_range(ranking, config.group, config.range_level);
        rank_t t = percentile_threshold(ranking.world_size(), config.range_level);
        if (config.format == "json") {
            emit_json(config,
                      json{{"group", config.group},
                           {"level", config.range_level},
                           {"threshold", t},
                           {"count_min", lo},
                           {"count_max", hi}},
                      out);
        } else {
            auto text = detail::make_stream();
            text << "group,level,threshold,count_min,count_max\n"
                 << config.group << ',' << format_compact(config.range_level) << ',' << t << ','
                 << lo << ',' << hi << '\n';
            emit(config, text.str(), out);
        }
        return 0;
    }
    if (config.double_rank) {
        DoubleRankData data = double_rank_points(ranking, config.group, spec);
        if (config.format == "json")
            emit_json(config, double_rank_json(data), out);
        else
            emit(config, double_rank_csv(data), out);
        return 0;
    }
    PercentileReport report = percentile_report(ranking, config.group, spec);
    if (config.format == "json") {
        json doc = percentile_report_json(report);
        rank_t p10 = top_percentile_count(ranking, config.group, 10.0);
        rank_t p1 = top_percentile_count(ranking, config.group, 1.0);
        doc["efficiency_ratio"] =
            p10 > 0 ? json(static_cast<double>(p1) / p10) : json(nullptr);
        emit_json(config, doc, out);
    } else {
        emit(config, percentile_csv(report), out);
    }
    return 0;
}

inline int run_powerlaw(const RunConfig& config, std::ostream& out) {
    std::optional<GroupSeries> series;
    if (!config.series_path.empty())
        series = load_rank_series(config.series_path,
                                  config.group.empty() ? default_group_name(config.series_path)
                                                       : config.group);
    rank_t world = config.world;
    if (world == 0 && series) world = series->world_size;

    PowerLawModel model = fit_from_percentiles(config.p10, config.p1, world, config.group);
    std::optional<PowerLawModel> model_b;
    if (config.p10_b > 0.0)
        model_b = fit_from_percentiles(config.p10_b, config.p1_b, world, config.group_b);

    std::vector<std::pair<double, double>> counts;
    for (double x : config.eval_counts) counts.emplace_back(x, expected_count(model, x));
    std::vector<std::pair<rank_t, double>> ranks;
    for (rank_t r : config.eval_ranks) ranks.emplace_back(r, expected_global_rank(model, r));
    std::optional<double> crossover;
    if (model_b && config.factor > 0.0)
        crossover = crossover_percentile(model, *model_b, config.factor);
    std::vector<ExtrapolationRow> table;
    if (series) table = extrapolation_table(model, *series);

    if (config.format == "json") {
        json doc = {{"model", powerlaw_model_json(model)},
                    {"model_b", model_b ? powerlaw_model_json(*model_b) : json(nullptr)},
                    {"counts", json::array()},
                    {"ranks", json::array()},
                    {"crossover", json(nullptr)},
                    {"table", series ? extrapolation_json(table) : json(nullptr)}};
        for (const auto& [x, n] : counts)
            doc["counts"].push_back({{"level", x}, {"expected_count", n}});
        for (const auto& [r, g] : ranks)
            doc["ranks"].push_back({{"country_rank", r}, {"expected_global_rank", g}});
        if (crossover)
            doc["crossover"] = {{"factor", config.factor}, {"percentile", *crossover}};
        emit_json(config, doc, out);
        return 0;
    }
    if (series) {
        emit(config, extrapolation_csv(table), out);
        return 0;
    }
    auto text = detail::make_stream();
    text << "quantity,input,value\n";
    text << "exponent," << undefined_marker << ',' << format_fixed(model.exponent, 6) << '\n';
    for (const auto& [x, n] : counts)
        text << "expected_count," << format_compact(x) << ',' << format_fixed(n, 6) << '\n';
    for (const auto& [r, g] : ranks)
        text << "expected_global_rank," << r << ',' << format_fixed(g, 6) << '\n';
    if (crossover)
        text << "crossover_percentile," << format_compact(config.factor) << ','
             << format_fixed(*crossover, 6) << '\n';
    emit(config, text.str(), out);
    return 0;
}

inline int run_cumulative(const RunConfig& config, std::ostream& out) {
    GroupSeries series;
    if (config.ranks_only) {
        std::string name = config.group.empty() ? default_group_name(config.input) : config.group;
        series = load_rank_series(config.input, name);
    } else {
        if (config.group.empty()) throw domain_error("--group is required with a corpus input");
        GlobalRanking ranking = build_global_ranking(load_records(config.input));
        series = extract_group_series(ranking, config.group);
    }
    CumulativeCurve curve = cumulative_curve(series, config.k);
    if (config.format == "json")
        emit_json(config, cumulative_json(curve), out);
    else
        emit(config, cumulative_csv(curve), out);
    return 0;
}

inline int run_synth(const RunConfig& config, std::ostream& out) {
    SynthSpec spec;
    spec.sigma = config.sigma;
    spec.seed = config.seed;
    spec.sizes = config.sizes;
    spec.round_to_integers = config.round_citations;
    if (config.mu_count < 1) throw domain_error("mu grid needs at least one value");
    for (unsigned j = 0; j < config.mu_count; ++j) {
        double t = config.mu_count == 1
                       ? 0.0
                       : static_cast<double>(j) / (config.mu_count - 1);
        spec.mu_values.push_back(config.mu_from + (config.mu_to - config.mu_from) * t);
    }

    std::vector<PaperRecord> corpus = build_benchmark_corpus(spec);
    std::string corpus_path = config.out.empty() ? "synthetic_corpus.csv" : config.out;
    write_file_atomic(corpus_path, corpus_csv(corpus));
    if (!config.sweep_out.empty())
        write_file_atomic(config.sweep_out, sweep_csv(benchmark_index_sweep(corpus)));

    if (config.format == "json") {
        json doc = {{"seed", spec.seed},
                    {"sigma", spec.sigma},
                    {"series", spec.series_count()},
                    {"records", spec.record_count()},
                    {"corpus_path", corpus_path},
                    {"sweep_path", config.sweep_out.empty() ? json(nullptr) : json(config.sweep_out)},
                    {"rounded", spec.round_to_integers}};
        out << doc.dump(2) << "\n";
    } else {
        auto text = detail::make_stream();
        text << "seed,sigma,series,records,corpus_path,sweep_path\n"
             << spec.seed << ',' << format_compact(spec.sigma) << ',' << spec.series_count() << ','
             << spec.record_count() << ',' << corpus_path << ','
             << (config.sweep_out.empty() ? undefined_marker : config.sweep_out.c_str()) << '\n';
        out << text.str();
    }
    return 0;
}

inline int run_audit(const RunConfig& config, std::ostream& out) {
    GlobalRanking ranking = build_global_ranking(load_records(config.input));
    AdditivityAudit audit = additivity_audit(ranking, config.parts);
    if (config.format == "json")
        emit_json(config, audit_json(audit), out);
    else
        emit(config, audit_csv(audit), out);
    return 0;
}

inline int run_compare(const RunConfig& config, std::ostream& out) {
    GlobalRanking ranking = build_global_ranking(load_records(config.input));
    std::optional<std::pair<std::string, std::string>> ratio_pair;
    if (!config.ratio.empty()) ratio_pair = std::make_pair(config.ratio[0], config.ratio[1]);
    ComparisonTable table = build_comparison(ranking, config.groups, ratio_pair);

    std::vector<std::string> plot_files;
    if (!config.plot_dir.empty()) {
        PlotBundleSpec bundle;
        bundle.percentiles = levels_or_standard(config.levels);
        bundle.cumulative_k = config.cumulative_k;
        bundle.out_dir = config.plot_dir;
        plot_files = bundle_plot_data(ranking, config.groups, bundle);
    }

    if (config.format == "json") {
        json doc = comparison_json(table);
        if (!config.plot_dir.empty()) doc["plot_files"] = plot_files;
        emit_json(config, doc, out);
    } else {
        emit(config, comparison_csv(table), out);
    }
    return 0;
}

}  // namespace cli_detail

// Builds the CLI11 command tree over a RunConfig. Kept separate from run()
// so tests can drive parsing and dispatch independently.
inline void attach_cli(CLI::App& app, RunConfig& config) {
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", config.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        cmd->add_option("--out", config.out, "Write output to this file (atomically) instead of stdout");
    };

    CLI::App* rank = app.add_subcommand("rank", "Rank a corpus globally and list tie classes");
    rank->add_option("input", config.input, "Corpus CSV (id,citations,group)")->required();
    rank->add_option("--ties", config.ties_group,
                     "Report tie-class spans and rank-ratio variation for this group's top papers");
    rank->add_option("--k", config.k, "How many top papers --ties inspects")->capture_default_str();
    add_common(rank);
    rank->callback([&config] { config.command = Command::rank; });

    CLI::App* index = app.add_subcommand("index", "Compute rank-ratio and rank-based indices");
    index->add_option("input", config.input, "Corpus CSV, or rank-pairs CSV with --ranks-only")
        ->required();
    index->add_flag("--ranks-only", config.ranks_only,
                    "Input holds country_rank,global_rank pairs for a single group");
    index->add_option("--group", config.groups,
                      "Group(s) to report on; default: the single --ranks-only series, or every group");
    index->add_option("--k", config.k, "Papers in the rank-ratio sum (10 or 5 are the published scales)")
        ->capture_default_str();
    index->add_flag("--both-k", config.both_k, "Report the 10-paper and 5-paper sums side by side");
    add_common(index);
    index->callback([&config] { config.command = Command::index; });

    CLI::App* percentiles =
        app.add_subcommand("percentiles", "Top-x% counts, thresholds and double-rank plot data");
    percentiles->add_option("input", config.input, "Corpus CSV")->required();
    percentiles->add_option("--group", config.group, "Group to report on")->required();
    percentiles->add_option("--levels", config.levels, "Descending percentile levels in (0,100]")
        ->delimiter(',');
    percentiles->add_flag("--double-rank", config.double_rank,
                          "Emit (global_rank,country_rank,marker_flag) plot points instead");
    percentiles->add_option("--range", config.range_level,
                            "Report the adversarial (min,max) count range at this level");
    add_common(percentiles);
    percentiles->callback([&config] { config.command = Command::percentiles; });

    CLI::App* powerlaw =
        app.add_subcommand("powerlaw", "Two-anchor power-law fits, extrapolations and crossovers");
    powerlaw->add_option("--p10", config.p10, "Count of papers in the top 10%")->required();
    powerlaw->add_option("--p1", config.p1, "Count of papers in the top 1%")->required();
    powerlaw->add_option("--world", config.world, "World corpus size N");
    powerlaw->add_option("--group", config.group, "Label for the fitted group");
    powerlaw->add_option("--count", config.eval_counts, "Evaluate expected count at this level")
        ->delimiter(',');
    powerlaw->add_option("--rank", config.eval_ranks,
                         "Evaluate expected global rank of this country rank")
        ->delimiter(',');
    auto* p10b = powerlaw->add_option("--p10-b", config.p10_b, "Second group: top-10% count");
    auto* p1b = powerlaw->add_option("--p1-b", config.p1_b, "Second group: top-1% count");
    powerlaw->add_option("--group-b", config.group_b, "Label for the second group");
    auto* factor =
        powerlaw->add_option("--factor", config.factor, "Crossover factor between the two groups");
    p10b->needs(p1b);
    p1b->needs(p10b);
    factor->needs(p10b);
    powerlaw->add_option("--series", config.series_path,
                         "Rank-pairs CSV to tabulate actual vs expected global ranks");
    add_common(powerlaw);
    powerlaw->callback([&config] { config.command = Command::powerlaw; });

    CLI::App* cumulative =
        app.add_subcommand("cumulative", "Running sum of rank ratios C_k for one group");
    cumulative->add_option("input", config.input, "Corpus CSV, or rank-pairs CSV with --ranks-only")
        ->required();
    cumulative->add_flag("--ranks-only", config.ranks_only,
                         "Input holds country_rank,global_rank pairs");
    cumulative->add_option("--group", config.group, "Group to report on");
    cumulative->add_option("--k", config.k, "Largest k in the curve")->capture_default_str();
    add_common(cumulative);
    cumulative->callback([&config] { config.command = Command::cumulative; });

    CLI::App* synth = app.add_subcommand("synth", "Generate the lognormal benchmark corpus");
    synth->add_flag("--default", "Use the published defaults (also the default)");
    auto* seed_opt = synth->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
    synth->add_option("--sigma", config.sigma, "Lognormal sigma")->capture_default_str();
    synth->add_option("--mu-from", config.mu_from, "First mu of the grid")->capture_default_str();
    synth->add_option("--mu-to", config.mu_to, "Last mu of the grid")->capture_default_str();
    synth->add_option("--mu-count", config.mu_count, "Grid points between mu-from and mu-to")
        ->capture_default_str();
    synth->add_option("--sizes", config.sizes, "Series sizes generated per mu")->delimiter(',');
    synth->add_flag("--round-citations", config.round_citations,
                    "Round draws to integers (manufactures ties)");
    synth->add_option("--sweep", config.sweep_out,
                      "Also rank the corpus and write the per-series index sweep here");
    add_common(synth);
    // seed_opt must be captured by value: the callback outlives this scope.
    synth->callback([&config, seed_opt] {
        config.command = Command::synth;
        if (seed_opt->count() == 0) {
            if (const char* env = std::getenv("RANKRATIO_SEED")) {
                char* end = nullptr;
                unsigned long long v = std::strtoull(env, &end, 10);
                if (end == env || *end != '\0')
                    throw CLI::ValidationError("RANKRATIO_SEED",
                                               "not an unsigned integer: '" + std::string(env) + "'");
                config.seed = v;
            }
        }
    });

    CLI::App* audit =
        app.add_subcommand("audit", "Check how far Rn/Rk are from adding up across disjoint groups");
    audit->add_option("input", config.input, "Corpus CSV")->required();
    audit->add_option("--parts", config.parts, "Disjoint groups to combine")
        ->delimiter(',')
        ->required();
    audit->add_flag("--all-from-merge",
                    "Compute the union by merging the parts (the only supported source of the union)");
    add_common(audit);
    audit->callback([&config] { config.command = Command::audit; });

    CLI::App* compare =
        app.add_subcommand("compare", "Side-by-side group table: size, P_top10%, P_top1%, Rn");
    compare->add_option("input", config.input, "Corpus CSV")->required();
    compare->add_option("--groups", config.groups, "Groups to tabulate")->delimiter(',')->required();
    compare->add_option("--ratio", config.ratio, "Two groups whose indicator ratios to append")
        ->delimiter(',')
        ->expected(2);
    compare->add_option("--plot-data", config.plot_dir,
                        "Also write per-group plot CSVs into this directory");
    compare->add_option("--levels", config.levels, "Percentile levels for the plot bundle")
        ->delimiter(',');
    compare->add_option("--cumulative-k", config.cumulative_k, "Curve length in the plot bundle")
        ->capture_default_str();
    add_common(compare);
    compare->callback([&config] { config.command = Command::compare; });
}

inline int run(const RunConfig& config, std::ostream& out) {
    switch (config.command) {
        case Command::rank: return cli_detail::run_rank(config, out);
        case Command::index: return cli_detail::run_index(config, out);
        case Command::percentiles: return cli_detail::run_percentiles(config, out);
        case Command::powerlaw: return cli_detail::run_powerlaw(config, out);
        case Command::cumulative: return cli_detail::run_cumulative(config, out);
        case Command::synth: return cli_detail::run_synth(config, out);
        case Command::audit: return cli_detail::run_audit(config, out);
        case Command::compare: return cli_detail::run_compare(config, out);
    }
    return 2;
}

// Full parse-and-dispatch with injected streams. Usage problems exit 2, data
// problems exit 1 with the module's one-line message, success exits 0.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    CLI::App app{"Rank-ratio research assessment toolkit"};
    app.name("rankratio");
    attach_cli(app, config);

    std::vector<const char*> argv;
    argv.push_back("rankratio");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        return run(config, out);
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rankratio
