#include "larp/config.hpp"

#include <set>
#include <stdexcept>

namespace larp {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw std::invalid_argument("config field '" + field + "': " + what);
}

void check_known_keys(const json& j, const std::set<std::string>& known,
                      const std::string& scope) {
    if (!j.is_object()) {
        field_error(scope, "expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            field_error(scope.empty() ? key : scope + "." + key, "unknown key");
        }
    }
}

template <typename T>
T get_field(const json& j, const std::string& field, const T& fallback) {
    if (!j.contains(field)) {
        return fallback;
    }
    try {
        return j.at(field).get<T>();
    } catch (const json::exception& e) {
        field_error(field, e.what());
    }
}

GaussianTarget target_from_json(const json& j, const GaussianTarget& fallback) {
    if (!j.contains("target")) {
        return fallback;
    }
    const json& t = j.at("target");
    check_known_keys(t, {"theta", "sigma"}, "target");
    GaussianTarget target;
    target.theta = get_field<double>(t, "theta", fallback.theta);
    target.sigma = get_field<double>(t, "sigma", fallback.sigma);
    return target;
}

std::map<PrefilterKind, std::vector<double>> param_grid_from_json(
    const json& j, const std::map<PrefilterKind, std::vector<double>>& fallback) {
    if (!j.contains("param_grid")) {
        return fallback;
    }
    const json& g = j.at("param_grid");
    check_known_keys(g, {"quantile", "zscore", "sdo"}, "param_grid");
    std::map<PrefilterKind, std::vector<double>> grid;
    for (const auto& [key, value] : g.items()) {
        try {
            grid[prefilter_kind_from_string(key)] = value.get<std::vector<double>>();
        } catch (const json::exception& e) {
            field_error("param_grid." + key, e.what());
        }
    }
    if (grid.empty()) {
        field_error("param_grid", "at least one kind required");
    }
    return grid;
}

json target_to_json(const GaussianTarget& target) {
    return json{{"theta", target.theta}, {"sigma", target.sigma}};
}

json param_grid_to_json(const std::map<PrefilterKind, std::vector<double>>& grid) {
    json out = json::object();
    for (const auto& [kind, params] : grid) {
        out[to_string(kind)] = params;
    }
    return out;
}

}  // namespace

json to_json(const ExperimentConfig& config) {
    return json{{"target", target_to_json(config.target)},
                {"n", config.n},
                {"epsilons", config.epsilons},
                {"noise_grid", config.noise_grid},
                {"param_grid", param_grid_to_json(config.param_grid)},
                {"learners", std::vector<double>(config.learners.deltas().begin(),
                                                 config.learners.deltas().end())},
                {"replications", config.replications},
                {"delta0", config.delta0},
                {"seed", config.seed.base}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
    check_known_keys(j,
                     {"target", "n", "epsilons", "noise_grid", "param_grid", "learners",
                      "replications", "delta0", "seed"},
                     "");
    ExperimentConfig defaults;
    ExperimentConfig config;
    config.target = target_from_json(j, defaults.target);
    config.n = get_field<std::size_t>(j, "n", defaults.n);
    config.epsilons = get_field<std::vector<double>>(j, "epsilons", defaults.epsilons);
    config.noise_grid = get_field<std::vector<double>>(j, "noise_grid", defaults.noise_grid);
    config.param_grid = param_grid_from_json(j, defaults.param_grid);
    if (j.contains("learners")) {
        config.learners = LearnerSet(get_field<std::vector<double>>(j, "learners", {}));
    }
    config.replications = get_field<std::size_t>(j, "replications", defaults.replications);
    config.delta0 = get_field<double>(j, "delta0", defaults.delta0);
    config.seed = Seed{get_field<std::uint64_t>(j, "seed", defaults.seed.base)};
    validate(config);
    return config;
}

json to_json(const HeteroConfig& config) {
    return json{{"target", target_to_json(config.target)},
                {"n", config.n},
                {"epsilon", config.epsilon},
                {"delta1", config.delta1},
                {"delta2_grid", config.delta2_grid},
                {"noise_grid", config.noise_grid},
                {"param_grid", param_grid_to_json(config.param_grid)},
                {"replications", config.replications},
                {"delta0", config.delta0},
                {"seed", config.seed.base}};
}

HeteroConfig hetero_config_from_json(const json& j) {
    check_known_keys(j,
                     {"target", "n", "epsilon", "delta1", "delta2_grid", "noise_grid",
                      "param_grid", "replications", "delta0", "seed"},
                     "");
    HeteroConfig defaults;
    HeteroConfig config;
    config.target = target_from_json(j, defaults.target);
    config.n = get_field<std::size_t>(j, "n", defaults.n);
    config.epsilon = get_field<double>(j, "epsilon", defaults.epsilon);
    config.delta1 = get_field<double>(j, "delta1", defaults.delta1);
    config.delta2_grid = get_field<std::vector<double>>(j, "delta2_grid", defaults.delta2_grid);
    config.noise_grid = get_field<std::vector<double>>(j, "noise_grid", defaults.noise_grid);
    config.param_grid = param_grid_from_json(j, defaults.param_grid);
    config.replications = get_field<std::size_t>(j, "replications", defaults.replications);
    config.delta0 = get_field<double>(j, "delta0", defaults.delta0);
    config.seed = Seed{get_field<std::uint64_t>(j, "seed", defaults.seed.base)};
    validate(config);
    return config;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.target == b.target && a.n == b.n && a.epsilons == b.epsilons &&
           a.noise_grid == b.noise_grid && a.param_grid == b.param_grid &&
           a.learners == b.learners && a.replications == b.replications &&
           a.delta0 == b.delta0 && a.seed == b.seed;
}

bool operator==(const HeteroConfig& a, const HeteroConfig& b) {
    return a.target == b.target && a.n == b.n && a.epsilon == b.epsilon &&
           a.delta1 == b.delta1 && a.delta2_grid == b.delta2_grid &&
           a.noise_grid == b.noise_grid && a.param_grid == b.param_grid &&
           a.replications == b.replications && a.delta0 == b.delta0 && a.seed == b.seed;
}

}  // namespace larp
