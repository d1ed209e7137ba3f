#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpfrm/artifacts.hpp"

namespace fs = std::filesystem;
using namespace gpfrm;

namespace {

struct CommonOpts {
    std::string data_path;
    std::string label_col;
    double match_threshold = 0.95;
    double missing_drop_fraction = 0.1;
};

struct RunOpts {
    GpConfig config;
    std::vector<double> alphas;
    int runs = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir = "out";
    std::string format = "json";
    bool ascii = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--data", opts.data_path, "Input CSV (header row required)")->required();
    cmd->add_option("--label-col", opts.label_col,
                    "Class/label column to drop (name or index)");
    cmd->add_option("--match-threshold", opts.match_threshold,
                    "Absolute correlation above which features are treated as matching")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--missing-drop-fraction", opts.missing_drop_fraction,
                    "Drop a feature when its missing fraction exceeds this")
        ->check(CLI::Range(0.0, 1.0));
}

void add_run_flags(CLI::App* cmd, RunOpts& opts) {
    cmd->add_option("--alpha", opts.alphas, "Parsimony weight (repeatable for batch)");
    cmd->add_option("--pop", opts.config.population_size, "Population size");
    cmd->add_option("--generations", opts.config.generations, "Number of generations");
    cmd->add_option("--species", opts.config.n_species, "Number of species");
    cmd->add_option("--max-depth", opts.config.max_depth, "Maximum tree depth");
    cmd->add_option("--tournament", opts.config.tournament_size, "Tournament size");
    cmd->add_option("--jobs", opts.config.jobs, "Parallel runs for batch");
    cmd->add_option("--seed", opts.seed, "Base RNG seed (entropy-derived if omitted)");
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_option("--format", opts.format, "Artifact format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_flag("--ascii", opts.ascii, "Render expressions with * and / instead of UTF-8");
}

std::string dataset_name(const std::string& path) {
    return fs::path(path).stem().string();
}

FeatureMatrix load_dataset(const CommonOpts& opts, CleanSummary* summary = nullptr) {
    std::optional<std::string> label;
    if (!opts.label_col.empty()) label = opts.label_col;
    return clean_missing(load_csv(opts.data_path, label), opts.missing_drop_fraction, summary);
}

std::uint64_t resolve_seed(RunOpts& opts) {
    if (opts.seed_given) return opts.seed;
    std::random_device entropy;
    const std::uint64_t seed =
        (static_cast<std::uint64_t>(entropy()) << 32) | entropy();
    std::cerr << "no --seed given; using seed " << seed << " (recorded in meta.json)\n";
    return seed;
}

void print_relationships(const RunResult& result, const FeatureMatrix& matrix, bool ascii) {
    if (result.relationships.empty()) {
        std::cout << "no valid feature relationships found\n";
    } else {
        std::cout << "feature relationships (" << result.relationships.size() << "):\n";
        for (const auto& fr : result.relationships) {
            std::cout << "  " << fr.target_name << " ~ "
                      << render(fr.tree, matrix.names, RenderFormat::Infix, ascii)
                      << "   [cost " << format_double(fr.cost) << ", |r| "
                      << format_double(std::abs(fr.raw_r)) << ", size " << fr.size << "]\n";
        }
    }
    if (!result.degenerate.empty())
        std::cout << "degenerate (self-referential) seeds: " << result.degenerate.size()
                  << "\n";
}

int cmd_mine(const CommonOpts& common, RunOpts& opts) {
    CleanSummary summary;
    const auto matrix = load_dataset(common, &summary);
    std::cout << summary.report();

    GpConfig config = opts.config;
    config.alpha = opts.alphas.empty() ? 0.01 : opts.alphas.front();
    config.rng_seed = resolve_seed(opts);

    const auto match_sets = matching_sets(correlation_matrix(matrix), common.match_threshold);
    const auto result = run(config, matrix, match_sets);

    const std::string dataset = dataset_name(common.data_path);
    const auto dir = run_directory(opts.out_dir, dataset, config.alpha, 0);
    write_run_artifacts(dir, result, dataset, common.data_path, matrix.names);
    std::cout << "artifacts written to " << dir.string() << "\n";
    print_relationships(result, matrix, opts.ascii);
    return 0;
}

int cmd_batch(const CommonOpts& common, RunOpts& opts) {
    const auto matrix = load_dataset(common);
    GpConfig config = opts.config;
    config.rng_seed = resolve_seed(opts);

    BatchOptions batch;
    batch.out_dir = opts.out_dir;
    batch.dataset = dataset_name(common.data_path);
    batch.data_path = common.data_path;
    batch.alphas = opts.alphas.empty() ? std::vector<double>{0.01} : opts.alphas;
    batch.runs = opts.runs;
    batch.jobs = config.jobs;

    const auto match_sets = matching_sets(correlation_matrix(matrix), common.match_threshold);
    const auto rows = run_batch_to_dir(config, matrix, match_sets, batch);

    std::cout << aggregate_to_csv(rows);
    std::cout << "artifacts written to " << (batch.out_dir / batch.dataset).string() << "\n";
    return 0;
}

int cmd_aggregate(const std::string& in_dir, const std::string& dataset_label) {
    // Re-aggregate from previously written run directories.
    const fs::path root(in_dir);
    if (!fs::is_directory(root)) throw DataError("not a directory: " + in_dir);

    std::vector<AggregateRow> rows;
    std::vector<fs::path> alpha_dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) alpha_dirs.push_back(entry.path());
    std::sort(alpha_dirs.begin(), alpha_dirs.end());

    for (const auto& alpha_dir : alpha_dirs) {
        std::vector<fs::path> run_dirs;
        for (const auto& entry : fs::directory_iterator(alpha_dir))
            if (entry.is_directory() && entry.path().filename().string().rfind("run_", 0) == 0)
                run_dirs.push_back(entry.path());
        if (run_dirs.empty()) continue;
        std::sort(run_dirs.begin(), run_dirs.end());

        std::vector<RunResult> results;
        double alpha = std::strtod(alpha_dir.filename().string().c_str(), nullptr);
        for (const auto& run_dir : run_dirs) {
            std::ifstream in(run_dir / "relationships.json");
            if (!in) throw DataError("missing relationships.json in " + run_dir.string());
            std::stringstream buffer;
            buffer << in.rdbuf();
            // Names are only needed to rebuild trees; collect them from the file itself.
            const auto j = nlohmann::json::parse(buffer.str());
            std::vector<std::string> names;
            for (const auto& item : j.at("relationships")) {
                for (const auto& name : item.at("feature_names_used"))
                    names.push_back(name.get<std::string>());
                names.push_back(item.at("target_name").get<std::string>());
            }
            std::sort(names.begin(), names.end());
            names.erase(std::unique(names.begin(), names.end()), names.end());
            auto parsed = relationships_from_json(buffer.str(), names);
            RunResult result;
            result.config.alpha = parsed.alpha;
            result.relationships = std::move(parsed.relationships);
            results.push_back(std::move(result));
        }
        rows.push_back(aggregate(results, dataset_label.empty()
                                              ? root.filename().string()
                                              : dataset_label,
                                 alpha));
    }
    if (rows.empty()) throw DataError("no run artifacts found under " + in_dir);

    const auto csv = aggregate_to_csv(rows);
    std::ofstream out(root / "aggregate.csv", std::ios::binary);
    out << csv;
    std::cout << csv;
    return 0;
}

int cmd_inspect(const CommonOpts& common) {
    CleanSummary summary;
    const auto matrix = load_dataset(common, &summary);
    std::cout << summary.report();

    const auto corr = correlation_matrix(matrix);
    const auto sets = matching_sets(corr, common.match_threshold);

    std::cout << "\ncolumn statistics\n";
    for (std::size_t j = 0; j < matrix.m; ++j) {
        const auto& col = matrix.columns[j];
        double lo = col[0], hi = col[0], sum = 0.0;
        for (double v : col) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        std::cout << "  " << matrix.names[j] << ": min " << format_double(lo) << ", max "
                  << format_double(hi) << ", mean "
                  << format_double(sum / static_cast<double>(matrix.n)) << "\n";
    }

    std::cout << "\nmatching groups (|r| > " << format_double(common.match_threshold)
              << ")\n";
    bool any = false;
    std::vector<bool> reported(matrix.m, false);
    for (std::size_t i = 0; i < matrix.m; ++i) {
        if (reported[i] || sets.sets[i].size() < 2) continue;
        std::cout << "  {";
        for (std::size_t k = 0; k < sets.sets[i].size(); ++k) {
            const int f = sets.sets[i][k];
            reported[f] = true;
            if (k) std::cout << ", ";
            std::cout << matrix.names[f];
        }
        std::cout << "} -- suppressed as mutual fitness targets\n";
        any = true;
    }
    if (!any) std::cout << "  none\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gpfrm: mine symbolic feature relationships from tabular data"};
    app.require_subcommand(1);

    CommonOpts mine_common, batch_common, inspect_common;
    RunOpts mine_opts, batch_opts;
    std::string agg_in, agg_dataset;

    auto* mine = app.add_subcommand("mine", "Single run; emit relationships + convergence");
    add_common_flags(mine, mine_common);
    add_run_flags(mine, mine_opts);

    auto* batch = app.add_subcommand("batch", "Multiple seeded runs per alpha + aggregates");
    add_common_flags(batch, batch_common);
    add_run_flags(batch, batch_opts);
    batch->add_option("--runs", batch_opts.runs, "Runs per alpha")->check(CLI::PositiveNumber);

    auto* aggregate_cmd =
        app.add_subcommand("aggregate", "Re-aggregate existing run artifacts");
    aggregate_cmd->add_option("--in", agg_in, "out/<dataset> directory to scan")->required();
    aggregate_cmd->add_option("--dataset", agg_dataset, "Dataset label for the rows");

    auto* inspect = app.add_subcommand("inspect", "Column statistics and matching groups");
    add_common_flags(inspect, inspect_common);

    try {
        app.parse(argc, argv);
        mine_opts.seed_given = mine->count("--seed") > 0;
        batch_opts.seed_given = batch->count("--seed") > 0;
        if (mine->parsed()) return cmd_mine(mine_common, mine_opts);
        if (batch->parsed()) return cmd_batch(batch_common, batch_opts);
        if (aggregate_cmd->parsed()) return cmd_aggregate(agg_in, agg_dataset);
        if (inspect->parsed()) return cmd_inspect(inspect_common);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
