#include "gpfrm/artifacts.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gpfrm {

namespace {

using Json = nlohmann::ordered_json;

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << contents;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

double parse_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

Json relationship_to_json(const FeatureRelationship& fr,
                          const std::vector<std::string>& names) {
    Json j;
    j["target"] = fr.target;
    j["target_name"] = fr.target_name;
    j["infix"] = fr.infix;
    j["sexpr"] = render(fr.tree, names, RenderFormat::Sexpr);
    j["cost"] = fr.cost;
    j["raw_r"] = fr.raw_r;
    j["fitness"] = fr.fitness;
    j["size"] = fr.size;
    j["features_used"] = fr.features_used;
    j["feature_names_used"] = fr.feature_names_used;
    return j;
}

FeatureRelationship relationship_from_json(const Json& j,
                                           const std::vector<std::string>& names) {
    FeatureRelationship fr;
    fr.target = j.at("target").get<int>();
    fr.target_name = j.at("target_name").get<std::string>();
    fr.infix = j.at("infix").get<std::string>();
    fr.tree = parse_sexpr(j.at("sexpr").get<std::string>(), names);
    fr.cost = j.at("cost").get<double>();
    fr.raw_r = j.at("raw_r").get<double>();
    fr.fitness = j.at("fitness").get<double>();
    fr.size = j.at("size").get<int>();
    fr.features_used = j.at("features_used").get<std::vector<int>>();
    fr.feature_names_used = j.at("feature_names_used").get<std::vector<std::string>>();
    return fr;
}

std::string alpha_dir_name(double alpha) { return format_double(alpha); }

}  // namespace

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    std::string s(buf, ptr);
    const auto e = s.find('e');
    if (e == std::string::npos) return s;
    // Expand modest exponents to positional form; the digit string is
    // unchanged, so the value still round-trips exactly.
    const int exp = std::atoi(s.c_str() + e + 1);
    if (exp < -12 || exp > 17) return s;
    std::string mant = s.substr(0, e);
    const bool neg = !mant.empty() && mant[0] == '-';
    if (neg) mant.erase(0, 1);
    const auto dot = mant.find('.');
    std::string digits = mant;
    int int_len = static_cast<int>(mant.size());
    if (dot != std::string::npos) {
        digits.erase(dot, 1);
        int_len = static_cast<int>(dot);
    }
    const int point = int_len + exp;
    std::string out;
    if (point <= 0) {
        out = "0." + std::string(-point, '0') + digits;
    } else if (point >= static_cast<int>(digits.size())) {
        out = digits + std::string(point - digits.size(), '0');
    } else {
        out = digits.substr(0, point) + "." + digits.substr(point);
    }
    return neg ? "-" + out : out;
}

std::string relationships_to_json(const RunResult& result, const std::string& dataset,
                                  const std::vector<std::string>& names) {
    Json j;
    j["dataset"] = dataset;
    j["alpha"] = result.config.alpha;
    j["seed"] = result.rng_seed;
    j["relationships"] = Json::array();
    for (const auto& fr : result.relationships)
        j["relationships"].push_back(relationship_to_json(fr, names));
    j["degenerate"] = Json::array();
    for (const auto& fr : result.degenerate)
        j["degenerate"].push_back(relationship_to_json(fr, names));
    return j.dump(2) + "\n";
}

ParsedRelationships relationships_from_json(const std::string& text,
                                            const std::vector<std::string>& names) {
    const Json j = Json::parse(text);
    ParsedRelationships parsed;
    parsed.dataset = j.at("dataset").get<std::string>();
    parsed.alpha = j.at("alpha").get<double>();
    parsed.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& item : j.at("relationships"))
        parsed.relationships.push_back(relationship_from_json(item, names));
    for (const auto& item : j.at("degenerate"))
        parsed.degenerate.push_back(relationship_from_json(item, names));
    return parsed;
}

std::string convergence_to_csv(const std::vector<ConvergenceRecord>& records) {
    std::string out = "generation,median_fitness,median_size,best_fitness,species_count\n";
    for (const auto& r : records) {
        out += std::to_string(r.generation);
        out += ',';
        out += format_double(r.median_fitness);
        out += ',';
        out += format_double(r.median_size);
        out += ',';
        out += format_double(r.best_fitness);
        out += ',';
        out += std::to_string(r.species_count);
        out += '\n';
    }
    return out;
}

std::vector<ConvergenceRecord> convergence_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::vector<ConvergenceRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != 5) throw DataError("convergence csv: bad row: " + line);
        ConvergenceRecord r;
        r.generation = std::atoi(fields[0].c_str());
        r.median_fitness = parse_double(fields[1]);
        r.median_size = parse_double(fields[2]);
        r.best_fitness = parse_double(fields[3]);
        r.species_count = std::atoi(fields[4].c_str());
        records.push_back(r);
    }
    return records;
}

std::string meta_to_json(const RunResult& result, const std::string& dataset,
                         const std::string& data_path) {
    const GpConfig& c = result.config;
    Json j;
    j["dataset"] = dataset;
    j["data_path"] = data_path;
    j["seed"] = result.rng_seed;
    j["wall_seconds"] = result.wall_seconds;
    Json cfg;
    cfg["population_size"] = c.population_size;
    cfg["generations"] = c.generations;
    cfg["crossover_rate"] = c.crossover_rate;
    cfg["mutation_rate"] = c.mutation_rate;
    cfg["max_depth"] = c.max_depth;
    cfg["tournament_size"] = c.tournament_size;
    cfg["n_species"] = c.n_species;
    cfg["alpha"] = c.alpha;
    cfg["feature_terminal_prob"] = c.feature_terminal_prob;
    j["config"] = cfg;
    return j.dump(2) + "\n";
}

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows) {
    std::string out =
        "dataset,alpha,n_runs,mean_fitness,mean_cost,mean_nodes,"
        "rsd_fitness_pct,rsd_cost_pct,rsd_nodes_pct\n";
    for (const auto& r : rows) {
        out += r.dataset;
        out += ',';
        out += format_double(r.alpha);
        out += ',';
        out += std::to_string(r.n_runs);
        out += ',';
        out += format_double(r.mean_fitness);
        out += ',';
        out += format_double(r.mean_cost);
        out += ',';
        out += format_double(r.mean_nodes);
        out += ',';
        out += format_double(r.rsd_fitness);
        out += ',';
        out += format_double(r.rsd_cost);
        out += ',';
        out += format_double(r.rsd_nodes);
        out += '\n';
    }
    return out;
}

std::vector<AggregateRow> aggregate_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::vector<AggregateRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != 9) throw DataError("aggregate csv: bad row: " + line);
        AggregateRow r;
        r.dataset = fields[0];
        r.alpha = parse_double(fields[1]);
        r.n_runs = std::atoi(fields[2].c_str());
        r.mean_fitness = parse_double(fields[3]);
        r.mean_cost = parse_double(fields[4]);
        r.mean_nodes = parse_double(fields[5]);
        r.rsd_fitness = parse_double(fields[6]);
        r.rsd_cost = parse_double(fields[7]);
        r.rsd_nodes = parse_double(fields[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::filesystem::path run_directory(const std::filesystem::path& out_dir,
                                    const std::string& dataset, double alpha, int run_index) {
    return out_dir / dataset / alpha_dir_name(alpha) / ("run_" + std::to_string(run_index));
}

void write_run_artifacts(const std::filesystem::path& run_dir, const RunResult& result,
                         const std::string& dataset, const std::string& data_path,
                         const std::vector<std::string>& names) {
    std::filesystem::create_directories(run_dir);
    write_file(run_dir / "relationships.json", relationships_to_json(result, dataset, names));
    write_file(run_dir / "convergence.csv", convergence_to_csv(result.convergence));
    write_file(run_dir / "meta.json", meta_to_json(result, dataset, data_path));
}

std::vector<AggregateRow> run_batch_to_dir(const GpConfig& config, const FeatureMatrix& matrix,
                                           const MatchSets& match_sets,
                                           const BatchOptions& options) {
    std::vector<AggregateRow> rows;
    for (double alpha : options.alphas) {
        GpConfig cfg = config;
        cfg.alpha = alpha;
        auto results = run_batch(cfg, matrix, match_sets, options.runs, options.jobs);
        for (int k = 0; k < options.runs; ++k) {
            const auto dir = run_directory(options.out_dir, options.dataset, alpha, k);
            write_run_artifacts(dir, results[k], options.dataset, options.data_path,
                                matrix.names);
        }
        rows.push_back(aggregate(results, options.dataset, alpha));
    }
    std::filesystem::create_directories(options.out_dir / options.dataset);
    write_file(options.out_dir / options.dataset / "aggregate.csv", aggregate_to_csv(rows));
    return rows;
}

}  // namespace gpfrm
