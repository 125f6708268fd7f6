// larp: command-line front end for the prefiltering simulation library.
//
// Subcommands: mean-exp, hetero-exp, filter, lowerbound, game.
// Exit codes: 0 success, 2 config/usage error, 3 numerical infeasibility
// (game), 4 I/O error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "larp/config.hpp"
#include "larp/experiments.hpp"
#include "larp/game.hpp"
#include "larp/lowerbound.hpp"
#include "larp/report.hpp"

namespace {

constexpr const char* kArtifactVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

using nlohmann::json;

json read_json_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) {
        throw std::system_error(errno, std::generic_category(), "cannot open " + path);
    }
    try {
        return json::parse(stream);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::optional<std::uint64_t> seed_from_env() {
    const char* raw = std::getenv("LARP_SEED");
    if (raw == nullptr || *raw == '\0') {
        return std::nullopt;
    }
    try {
        std::size_t pos = 0;
        const unsigned long long value = std::stoull(raw, &pos);
        if (raw[pos] != '\0') {
            throw std::invalid_argument("trailing characters");
        }
        return static_cast<std::uint64_t>(value);
    } catch (const std::exception&) {
        throw std::invalid_argument("LARP_SEED must be an unsigned 64-bit integer, got '" +
                                    std::string(raw) + "'");
    }
}

std::vector<double> parse_real_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw std::invalid_argument(flag + ": '" + item + "' is not a decimal scalar");
        }
    }
    if (out.empty()) {
        throw std::invalid_argument(flag + ": empty list");
    }
    return out;
}

struct SweepFlags {
    std::string config_path;
    std::string out_dir = ".";
    std::string epsilons;
    std::string kinds;
    std::uint64_t n = 0;
    std::uint64_t reps = 0;
    std::int64_t seed = -1;  // -1: unset (seed flag accepts 0..2^63-1)
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--out-dir", flags.out_dir, "output directory (created if missing)");
    cmd->add_option("--epsilons", flags.epsilons, "override: comma-separated epsilon grid");
    cmd->add_option("--kinds", flags.kinds,
                    "override: comma-separated prefilter kinds (quantile,zscore,sdo)");
    cmd->add_option("--n", flags.n, "override: sample size");
    cmd->add_option("--reps", flags.reps, "override: replication count");
    cmd->add_option("--seed", flags.seed, "override: base seed");
    cmd->add_option("--threads", flags.threads,
                    "worker threads (never affects output bytes)");
}

// Flag > config > LARP_SEED env > built-in default.
template <typename Config>
void apply_seed(Config& config, const SweepFlags& flags, bool config_had_seed) {
    if (flags.seed >= 0) {
        config.seed.base = static_cast<std::uint64_t>(flags.seed);
        return;
    }
    if (config_had_seed) {
        return;
    }
    if (const auto env = seed_from_env()) {
        config.seed.base = *env;
    }
}

void restrict_kinds(std::map<larp::PrefilterKind, std::vector<double>>& grid,
                    const std::string& kinds) {
    std::map<larp::PrefilterKind, std::vector<double>> restricted;
    std::stringstream stream(kinds);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const larp::PrefilterKind kind = larp::prefilter_kind_from_string(item);
        const auto it = grid.find(kind);
        if (it == grid.end()) {
            throw std::invalid_argument("--kinds: '" + item +
                                        "' has no hyperparameter grid in the config");
        }
        restricted.insert(*it);
    }
    if (restricted.empty()) {
        throw std::invalid_argument("--kinds: empty list");
    }
    grid = std::move(restricted);
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& subcommand,
                    const json& config_echo, std::uint64_t seed, unsigned threads,
                    double wall_clock_seconds, const json& outputs) {
    const json manifest{{"artifact_version", kArtifactVersion},
                        {"subcommand", subcommand},
                        {"seed", seed},
                        {"threads", threads},
                        {"wall_clock_seconds", wall_clock_seconds},
                        {"config", config_echo},
                        {"outputs", outputs}};
    larp::write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

int run_mean_exp(const SweepFlags& flags) {
    json raw = json::object();
    if (!flags.config_path.empty()) {
        raw = read_json_file(flags.config_path);
    }
    const bool config_had_seed = raw.contains("seed");
    larp::ExperimentConfig config = larp::experiment_config_from_json(raw);
    if (!flags.epsilons.empty()) {
        config.epsilons = parse_real_list(flags.epsilons, "--epsilons");
    }
    if (!flags.kinds.empty()) {
        restrict_kinds(config.param_grid, flags.kinds);
    }
    if (flags.n > 0) {
        config.n = flags.n;
    }
    if (flags.reps > 0) {
        config.replications = flags.reps;
    }
    apply_seed(config, flags, config_had_seed);
    larp::validate(config);

    const auto started = std::chrono::steady_clock::now();
    const larp::SweepResult result = larp::run_experiment(config, flags.threads);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const std::filesystem::path out_dir(flags.out_dir);
    std::filesystem::create_directories(out_dir);
    larp::write_file_atomic(out_dir / "cells.csv", larp::cells_csv(result.per_cell));
    larp::write_file_atomic(out_dir / "aggregate.csv", larp::aggregate_csv(result.aggregated));
    write_manifest(out_dir, "mean-exp", larp::to_json(config), config.seed.base, flags.threads,
                   elapsed, json{{"cells", "cells.csv"}, {"aggregate", "aggregate.csv"}});
    return kExitOk;
}

int run_hetero_exp(const SweepFlags& flags, const std::string& delta2_list) {
    json raw = json::object();
    if (!flags.config_path.empty()) {
        raw = read_json_file(flags.config_path);
    }
    const bool config_had_seed = raw.contains("seed");
    larp::HeteroConfig config = larp::hetero_config_from_json(raw);
    if (!delta2_list.empty()) {
        config.delta2_grid = parse_real_list(delta2_list, "--delta2-grid");
    }
    if (!flags.kinds.empty()) {
        restrict_kinds(config.param_grid, flags.kinds);
    }
    if (flags.n > 0) {
        config.n = flags.n;
    }
    if (flags.reps > 0) {
        config.replications = flags.reps;
    }
    apply_seed(config, flags, config_had_seed);
    larp::validate(config);

    const auto started = std::chrono::steady_clock::now();
    const larp::HeteroResult result = larp::run_heterogeneity(config, flags.threads);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const std::filesystem::path out_dir(flags.out_dir);
    std::filesystem::create_directories(out_dir);
    larp::write_file_atomic(out_dir / "cells.csv", larp::cells_csv(result.per_cell));
    larp::write_file_atomic(out_dir / "aggregate.csv",
                            larp::hetero_aggregate_csv(result.aggregated));
    write_manifest(out_dir, "hetero-exp", larp::to_json(config), config.seed.base, flags.threads,
                   elapsed, json{{"cells", "cells.csv"}, {"aggregate", "aggregate.csv"}});
    return kExitOk;
}

int run_filter(const std::string& input_path, const std::string& kind_name, double param) {
    const larp::PrefilterSpec spec{larp::prefilter_kind_from_string(kind_name), param};
    larp::validate(spec);

    std::ifstream file;
    std::istream* input = &std::cin;
    if (!input_path.empty() && input_path != "-") {
        file.open(input_path, std::ios::binary);
        if (!file) {
            throw std::system_error(errno, std::generic_category(), "cannot open " + input_path);
        }
        input = &file;
    }

    std::vector<double> values;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(*input, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        try {
            std::size_t pos = 0;
            values.push_back(std::stod(line, &pos));
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' ||
                                         line[pos] == '\r')) {
                ++pos;
            }
            if (pos != line.size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("line " + std::to_string(line_number) +
                                        ": not a decimal scalar: '" + line + "'");
        }
    }
    if (values.empty()) {
        throw std::invalid_argument("input contains no values");
    }

    const larp::Sample filtered = larp::apply(spec, larp::Sample(std::move(values)));
    for (double x : filtered.values()) {
        std::cout << larp::format_real(x) << '\n';
    }
    return kExitOk;
}

int run_lowerbound(double epsilon, std::size_t grid_size, const std::string& theta_choice,
                   const std::string& out_path) {
    if (grid_size < 2) {
        throw std::invalid_argument("--grid-size must be at least 2");
    }
    larp::BernoulliInstance instance;
    instance.epsilon = epsilon;
    if (theta_choice == "low") {
        instance.theta_high = false;
    } else if (theta_choice == "high") {
        instance.theta_high = true;
    } else {
        throw std::invalid_argument("--theta-choice must be 'low' or 'high'");
    }
    larp::validate(instance);

    const std::vector<double> grid = larp::linspace(0.0, 1.0, grid_size);
    std::vector<std::array<double, 5>> rows;
    rows.reserve(grid.size());
    for (double p1 : grid) {
        const larp::ClosedFormEstimates est = larp::closed_form_estimates(p1);
        const double theta = instance.theta();
        const double r_agn = std::max({larp::squared_risk(est.theta0, theta),
                                       larp::squared_risk(est.theta_quarter, theta),
                                       larp::squared_risk(est.theta2, theta)});
        rows.push_back({p1, est.theta0, est.theta_quarter, est.theta2, r_agn});
    }
    const std::string csv = larp::lowerbound_csv(rows);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        larp::write_file_atomic(out_path, csv);
    }
    return kExitOk;
}

int run_game_shared(double c, double alpha, std::uint64_t n, const std::string& reductions_list) {
    larp::GameConfig config;
    config.cost_scale = c;
    config.cost_exponent = alpha;
    config.n = n;
    config.u_reductions = parse_real_list(reductions_list, "--reductions");

    const double price =
        std::accumulate(config.u_reductions.begin(), config.u_reductions.end(), 0.0) /
        static_cast<double>(config.u_reductions.size());
    const double threshold = larp::participation_threshold(
        config.cost_scale, config.cost_exponent, config.u_reductions.size(), price);

    json out{{"mode", "no-defection"},
             {"price", price},
             {"participation_threshold", threshold},
             {"n", config.n}};
    try {
        const larp::PaymentScheme scheme = larp::no_defection_payments(config);
        out["feasible"] = true;
        out["total_cost"] = scheme.total;
        out["payments"] = scheme.payments;
        out["no_defection"] = larp::verify_no_defection(config, scheme);
        json margins = json::array();
        for (std::size_t i = 0; i < scheme.payments.size(); ++i) {
            margins.push_back(scheme.total - config.u_reductions[i] - scheme.payments[i]);
        }
        out["defection_margins"] = margins;
    } catch (const larp::infeasible_error& e) {
        out["feasible"] = false;
        out["reason"] = e.what();
        std::cout << out.dump(2) << '\n';
        return kExitInfeasible;
    }
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int run_game_lipschitz(double c, double alpha, std::uint64_t n, double lipschitz,
                       const std::string& deltas_list, double epsilon, double sigma,
                       double delta0) {
    larp::LipschitzGameConfig config;
    config.cost_scale = c;
    config.cost_exponent = alpha;
    config.n = n;
    config.lipschitz = lipschitz;
    config.deltas = larp::LearnerSet(parse_real_list(deltas_list, "--deltas"));
    config.epsilon = epsilon;
    config.sigma = sigma;
    config.delta0 = delta0;

    const double threshold = larp::lipschitz_participation_threshold(config);
    json bounds = json::array();
    for (double d : config.deltas.deltas()) {
        bounds.push_back(larp::surrogate_risk_bound(config, d));
    }
    const auto linear = [](double x, double y) { return x - y; };
    json out{{"mode", "lipschitz"},
             {"participation_threshold", threshold},
             {"n", config.n},
             {"surrogate_bounds", bounds},
             {"price_literal", larp::mean_estimation_price(config, linear, false)},
             {"price_normalized", larp::mean_estimation_price(config, linear, true)}};
    try {
        const larp::PaymentScheme scheme = larp::lipschitz_payments(config);
        out["feasible"] = true;
        out["total_cost"] = scheme.total;
        out["payments"] = scheme.payments;
        json margins = json::array();
        const auto deltas = config.deltas.deltas();
        const double worst_sq = deltas.back() * deltas.back();
        for (std::size_t i = 0; i < scheme.payments.size(); ++i) {
            const double cap =
                scheme.total - config.lipschitz * (worst_sq - deltas[i] * deltas[i]);
            margins.push_back(cap - scheme.payments[i]);
        }
        out["defection_margins"] = margins;
    } catch (const larp::infeasible_error& e) {
        out["feasible"] = false;
        out["reason"] = e.what();
        std::cout << out.dump(2) << '\n';
        return kExitInfeasible;
    }
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LARP: simulations of learner-agnostic robust prefiltering for scalar mean "
                 "estimation"};
    app.set_version_flag("--version", kArtifactVersion);
    app.require_subcommand(1);

    SweepFlags mean_flags;
    CLI::App* mean_cmd =
        app.add_subcommand("mean-exp", "epsilon sweep of the min-max learner-agnostic risk");
    add_sweep_flags(mean_cmd, mean_flags);

    SweepFlags hetero_flags;
    std::string delta2_list;
    CLI::App* hetero_cmd =
        app.add_subcommand("hetero-exp", "heterogeneity-gap sweep over the second learner delta");
    add_sweep_flags(hetero_cmd, hetero_flags);
    hetero_cmd->add_option("--delta2-grid", delta2_list,
                           "override: comma-separated delta2 values");

    std::string filter_input, filter_kind;
    double filter_param = 0.0;
    CLI::App* filter_cmd =
        app.add_subcommand("filter", "apply a prefilter to newline-delimited scalars");
    filter_cmd->add_option("input", filter_input, "input file ('-' or absent: stdin)");
    filter_cmd->add_option("--kind", filter_kind, "quantile, zscore or sdo")->required();
    filter_cmd->add_option("--param", filter_param, "filter hyperparameter")->required();

    double lb_epsilon = 0.2;
    std::uint64_t lb_grid = 1001;
    std::string lb_theta = "low", lb_out;
    CLI::App* lb_cmd =
        app.add_subcommand("lowerbound", "closed-form Bernoulli instance curve as CSV");
    lb_cmd->add_option("--epsilon", lb_epsilon, "contamination ratio in (0, 1/2)");
    lb_cmd->add_option("--grid-size", lb_grid, "number of p1 grid points");
    lb_cmd->add_option("--theta-choice", lb_theta, "'low' for (1-eps)/2, 'high' for (1+eps)/2");
    lb_cmd->add_option("--out", lb_out, "output file (default stdout)");

    double game_c = 1.0, game_alpha = 1.0;
    std::uint64_t game_n = 1;
    std::string game_reductions, game_deltas;
    bool game_lipschitz = false;
    double game_l = 1.0, game_eps = 0.2, game_sigma = 1.0, game_delta0 = 0.05;
    CLI::App* game_cmd =
        app.add_subcommand("game", "cost-sharing payments and participation thresholds");
    game_cmd->add_option("--c", game_c, "cost scale C > 0");
    game_cmd->add_option("--alpha", game_alpha, "cost exponent alpha >= 1");
    game_cmd->add_option("--n", game_n, "dataset size")->required();
    game_cmd->add_option("--reductions", game_reductions,
                         "comma-separated utility reductions (absolute units)");
    game_cmd->add_flag("--lipschitz", game_lipschitz, "use the Lipschitz-utility scheme");
    game_cmd->add_option("--big-l", game_l, "Lipschitz constant L");
    game_cmd->add_option("--deltas", game_deltas, "comma-separated Huber deltas (Lipschitz mode)");
    game_cmd->add_option("--epsilon", game_eps, "contamination ratio for the surrogate bounds");
    game_cmd->add_option("--sigma", game_sigma, "target std dev for the surrogate bounds");
    game_cmd->add_option("--delta0", game_delta0, "confidence level for the surrogate bounds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(mean_cmd)) {
            return run_mean_exp(mean_flags);
        }
        if (app.got_subcommand(hetero_cmd)) {
            return run_hetero_exp(hetero_flags, delta2_list);
        }
        if (app.got_subcommand(filter_cmd)) {
            return run_filter(filter_input, filter_kind, filter_param);
        }
        if (app.got_subcommand(lb_cmd)) {
            return run_lowerbound(lb_epsilon, lb_grid, lb_theta, lb_out);
        }
        if (app.got_subcommand(game_cmd)) {
            if (game_lipschitz) {
                if (game_deltas.empty()) {
                    throw std::invalid_argument("--lipschitz mode requires --deltas");
                }
                return run_game_lipschitz(game_c, game_alpha, game_n, game_l, game_deltas,
                                          game_eps, game_sigma, game_delta0);
            }
            if (game_reductions.empty()) {
                throw std::invalid_argument("game requires --reductions (or --lipschitz with "
                                            "--deltas)");
            }
            return run_game_shared(game_c, game_alpha, game_n, game_reductions);
        }
        return kExitUsage;
    } catch (const larp::infeasible_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::system_error& e) {
        // also covers std::filesystem::filesystem_error
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
