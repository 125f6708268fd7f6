#include "larp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "larp/estimators.hpp"
#include "larp/rng.hpp"

namespace larp {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) {
        throw std::invalid_argument("linspace: count must be positive");
    }
    if (count == 1) {
        return {lo};
    }
    std::vector<double> out(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo + step * static_cast<double>(i);
    }
    out.back() = hi;
    return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0 && hi > 0.0)) {
        throw std::invalid_argument("logspace: endpoints must be positive");
    }
    std::vector<double> out = linspace(std::log10(lo), std::log10(hi), count);
    for (double& v : out) {
        v = std::pow(10.0, v);
    }
    if (count > 1) {
        out.front() = lo;
        out.back() = hi;
    }
    return out;
}

std::vector<double> default_noise_grid() { return linspace(0.0, 10.0, 50); }

std::map<PrefilterKind, std::vector<double>> default_param_grid() {
    return {
        {PrefilterKind::Quantile, linspace(0.005, 0.495, 50)},
        {PrefilterKind::ZScore, logspace(0.1, 10.0, 50)},
        {PrefilterKind::Sdo, logspace(0.1, 10.0, 50)},
    };
}

namespace {

void validate_common(const GaussianTarget& target, std::size_t n,
                     const std::vector<double>& noise_grid,
                     const std::map<PrefilterKind, std::vector<double>>& param_grid,
                     std::size_t replications, double delta0) {
    validate(target);
    if (n == 0) {
        throw std::invalid_argument("config: n must be at least 1");
    }
    if (replications == 0) {
        throw std::invalid_argument("config: at least one replication required");
    }
    if (!(delta0 > 0.0 && delta0 < 1.0)) {
        throw std::invalid_argument("config: delta0 must lie in (0, 1)");
    }
    if (noise_grid.empty()) {
        throw std::invalid_argument("config: noise grid must be nonempty");
    }
    for (double m : noise_grid) {
        if (!(m >= 0.0) || !std::isfinite(m)) {
            throw std::invalid_argument(
                "config: noise means must be finite and nonnegative (the noise family is "
                "symmetry-reduced to m >= 0)");
        }
    }
    // Strictly ascending grids: the argmin/argmax tie-breaking rules
    // ("toward the smaller value") are only meaningful on an ordered grid.
    if (std::adjacent_find(noise_grid.begin(), noise_grid.end(), std::greater_equal<double>()) !=
        noise_grid.end()) {
        throw std::invalid_argument("config: noise grid must be strictly ascending");
    }
    if (param_grid.empty()) {
        throw std::invalid_argument("config: at least one prefilter kind required");
    }
    for (const auto& [kind, params] : param_grid) {
        if (params.empty()) {
            throw std::invalid_argument("config: empty hyperparameter grid for kind " +
                                        to_string(kind));
        }
        for (double p : params) {
            validate(PrefilterSpec{kind, p});
        }
        if (std::adjacent_find(params.begin(), params.end(), std::greater_equal<double>()) !=
            params.end()) {
            throw std::invalid_argument("config: hyperparameter grid for kind " + to_string(kind) +
                                        " must be strictly ascending");
        }
    }
}

}  // namespace

void validate(const ExperimentConfig& config) {
    validate_common(config.target, config.n, config.noise_grid, config.param_grid,
                    config.replications, config.delta0);
    if (config.epsilons.empty()) {
        throw std::invalid_argument("config: epsilon grid must be nonempty");
    }
    for (double e : config.epsilons) {
        validate(ContaminationSpec{e, 0.0});
    }
}

void validate(const HeteroConfig& config) {
    validate_common(config.target, config.n, config.noise_grid, config.param_grid,
                    config.replications, config.delta0);
    validate(ContaminationSpec{config.epsilon, 0.0});
    if (!(config.delta1 >= 0.0)) {
        throw std::invalid_argument("config: delta1 must be nonnegative");
    }
    if (config.delta2_grid.empty()) {
        throw std::invalid_argument("config: delta2 grid must be nonempty");
    }
    for (double d : config.delta2_grid) {
        if (!(d >= 0.0) || !std::isfinite(d)) {
            throw std::invalid_argument("config: delta2 values must be finite and nonnegative");
        }
    }
}

const RiskReport& CellGrid::at(std::size_t param_index, std::size_t noise_index) const {
    return reports[param_index * noise_means.size() + noise_index];
}

namespace {

void validate_complete(const CellGrid& grid) {
    if (grid.params.empty() || grid.noise_means.empty() ||
        grid.reports.size() != grid.params.size() * grid.noise_means.size()) {
        throw std::invalid_argument("CellGrid: incomplete (param x noise) grid");
    }
}

// Risks of one drawn sample for every (kind, param, learner):
// by_kind[k][param_index * n_deltas + delta_index].
struct CellEval {
    std::vector<std::vector<double>> by_kind;
};

CellEval evaluate_cell(const ExperimentConfig& config, const SortedCache& cache) {
    const auto xs = cache.values();
    const double theta = config.target.theta;
    const auto deltas = config.learners.deltas();

    // Filter thresholds depend on the full sample's statistics only.
    const double sample_mean = mean_sorted(xs);
    const double sample_sd = std_dev_sorted(xs);
    const double sample_median = median_sorted(xs);
    const double sample_mad = mad_sorted(xs);

    CellEval eval;
    eval.by_kind.reserve(config.param_grid.size());
    for (const auto& [kind, params] : config.param_grid) {
        std::vector<double>& risks = eval.by_kind.emplace_back();
        risks.resize(params.size() * deltas.size());
        for (std::size_t pi = 0; pi < params.size(); ++pi) {
            const IndexWindow w = filter_window(PrefilterSpec{kind, params[pi]}, xs, sample_mean,
                                                sample_sd, sample_median, sample_mad);
            for (std::size_t di = 0; di < deltas.size(); ++di) {
                risks[pi * deltas.size() + di] =
                    w.empty() ? std::numeric_limits<double>::infinity()
                              : squared_risk(cache.huber_root(w.lo, w.hi, deltas[di]), theta);
            }
        }
    }
    return eval;
}

SortedCache draw_cell_sample(const ExperimentConfig& config, std::size_t eps_index,
                             std::size_t noise_index, std::size_t replication) {
    const std::uint64_t grid_index =
        static_cast<std::uint64_t>(eps_index) * config.noise_grid.size() + noise_index;
    const Seed cell_seed =
        derive_seed(config.seed, static_cast<std::uint64_t>(replication), grid_index);
    Sample sample = draw_contaminated(
        config.target, ContaminationSpec{config.epsilons[eps_index], config.noise_grid[noise_index]},
        config.n, cell_seed);
    return SortedCache(std::vector<double>(sample.values().begin(), sample.values().end()));
}

// All cells of a sweep, evaluated by a worker pool into preassigned slots.
// cell slot = (eps_index * replications + replication) * n_noise + noise_index.
std::vector<CellEval> evaluate_all_cells(const ExperimentConfig& config, unsigned threads) {
    const std::size_t n_eps = config.epsilons.size();
    const std::size_t n_noise = config.noise_grid.size();
    const std::size_t n_cells = n_eps * config.replications * n_noise;

    std::vector<CellEval> cells(n_cells);
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const auto worker = [&]() {
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= n_cells) {
                return;
            }
            try {
                const std::size_t noise_index = task % n_noise;
                const std::size_t replication = (task / n_noise) % config.replications;
                const std::size_t eps_index = task / (n_noise * config.replications);
                const SortedCache cache =
                    draw_cell_sample(config, eps_index, noise_index, replication);
                cells[task] = evaluate_cell(config, cache);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
                next.store(n_cells);
                return;
            }
        }
    };

    const unsigned pool_size = std::max(1u, threads);
    if (pool_size == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(pool_size);
        for (unsigned i = 0; i < pool_size; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
    return cells;
}

// Reassembles one (epsilon, kind, replication) grid of RiskReports from the
// evaluated cells.
CellGrid grid_for(const ExperimentConfig& config, const std::vector<CellEval>& cells,
                  std::size_t eps_index, std::size_t kind_index, std::size_t replication) {
    const std::size_t n_noise = config.noise_grid.size();
    const auto deltas = config.learners.deltas();
    const auto& params = std::next(config.param_grid.begin(),
                                   static_cast<std::ptrdiff_t>(kind_index))
                             ->second;

    CellGrid grid;
    grid.params = params;
    grid.noise_means = config.noise_grid;
    grid.reports.reserve(params.size() * n_noise);
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        for (std::size_t mi = 0; mi < n_noise; ++mi) {
            const std::size_t cell = (eps_index * config.replications + replication) * n_noise + mi;
            const std::vector<double>& risks = cells[cell].by_kind[kind_index];
            std::vector<std::pair<double, double>> per_learner;
            per_learner.reserve(deltas.size());
            for (std::size_t di = 0; di < deltas.size(); ++di) {
                per_learner.emplace_back(deltas[di], risks[pi * deltas.size() + di]);
            }
            grid.reports.push_back(RiskReport::from_risks(std::move(per_learner)));
        }
    }
    return grid;
}

}  // namespace

std::map<PrefilterKind, std::vector<RiskReport>> run_cell(const ExperimentConfig& config,
                                                          double epsilon,
                                                          double noise_mean,
                                                          std::size_t replication) {
    validate(config);
    const auto eps_it = std::find(config.epsilons.begin(), config.epsilons.end(), epsilon);
    if (eps_it == config.epsilons.end()) {
        throw std::invalid_argument("run_cell: epsilon is not a grid member");
    }
    const auto m_it = std::find(config.noise_grid.begin(), config.noise_grid.end(), noise_mean);
    if (m_it == config.noise_grid.end()) {
        throw std::invalid_argument("run_cell: noise mean is not a grid member");
    }
    if (replication >= config.replications) {
        throw std::invalid_argument("run_cell: replication out of range");
    }
    const std::size_t eps_index =
        static_cast<std::size_t>(eps_it - config.epsilons.begin());
    const std::size_t noise_index =
        static_cast<std::size_t>(m_it - config.noise_grid.begin());

    const SortedCache cache = draw_cell_sample(config, eps_index, noise_index, replication);
    const CellEval eval = evaluate_cell(config, cache);
    const auto deltas = config.learners.deltas();

    std::map<PrefilterKind, std::vector<RiskReport>> out;
    std::size_t kind_index = 0;
    for (const auto& [kind, params] : config.param_grid) {
        std::vector<RiskReport>& reports = out[kind];
        reports.reserve(params.size());
        for (std::size_t pi = 0; pi < params.size(); ++pi) {
            std::vector<std::pair<double, double>> per_learner;
            per_learner.reserve(deltas.size());
            for (std::size_t di = 0; di < deltas.size(); ++di) {
                per_learner.emplace_back(deltas[di],
                                         eval.by_kind[kind_index][pi * deltas.size() + di]);
            }
            reports.push_back(RiskReport::from_risks(std::move(per_learner)));
        }
        ++kind_index;
    }
    return out;
}

MinmaxSelection select_minmax(const CellGrid& grid) {
    validate_complete(grid);
    MinmaxSelection best;
    double best_value = std::numeric_limits<double>::infinity();
    bool have_best = false;
    for (std::size_t pi = 0; pi < grid.params.size(); ++pi) {
        std::size_t worst_mi = 0;
        double worst = grid.at(pi, 0).agnostic;
        for (std::size_t mi = 1; mi < grid.noise_means.size(); ++mi) {
            const double a = grid.at(pi, mi).agnostic;
            if (a > worst) {
                worst = a;
                worst_mi = mi;
            }
        }
        if (!have_best || worst < best_value) {
            have_best = true;
            best_value = worst;
            best = MinmaxSelection{pi, worst_mi};
        }
    }
    return best;
}

double minmax_risk(const CellGrid& grid) {
    const MinmaxSelection sel = select_minmax(grid);
    return grid.at(sel.param_index, sel.noise_index).agnostic;
}

double heterogeneity_gap(const CellGrid& grid) {
    const MinmaxSelection sel = select_minmax(grid);
    return grid.at(sel.param_index, sel.noise_index).gap;
}

std::pair<double, double> aggregate(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("aggregate: empty input");
    }
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    if (values.size() == 1) {
        return {mean, 0.0};
    }
    double var = 0.0;
    for (double v : values) {
        var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(values.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

double relative_utility_reduction(double r1, double r2) {
    if (r2 == 0.0) {
        return r1 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return (r1 - r2) / r2;
}

PriceReport price_of_larp(const CellGrid& grid,
                          const std::function<double(double, double)>& u_red) {
    validate_complete(grid);
    const std::size_t n_learners = grid.reports.front().per_learner.size();
    const std::size_t n_noise = grid.noise_means.size();

    // Learner l's worst-noise risk per param.
    const auto worst_risk = [&](std::size_t li, std::size_t pi) {
        double worst = grid.at(pi, 0).per_learner[li].second;
        for (std::size_t mi = 1; mi < n_noise; ++mi) {
            worst = std::max(worst, grid.at(pi, mi).per_learner[li].second);
        }
        return worst;
    };

    const MinmaxSelection agn = select_minmax(grid);

    PriceReport report;
    report.agnostic_param = grid.params[agn.param_index];
    report.agnostic_risk = grid.at(agn.param_index, agn.noise_index).agnostic;

    double price_sum = 0.0;
    for (std::size_t li = 0; li < n_learners; ++li) {
        std::size_t best_pi = 0;
        double best = worst_risk(li, 0);
        for (std::size_t pi = 1; pi < grid.params.size(); ++pi) {
            const double w = worst_risk(li, pi);
            if (w < best) {
                best = w;
                best_pi = pi;
            }
        }
        report.per_learner_optimum.push_back(PriceReport::LearnerOptimum{
            grid.reports.front().per_learner[li].first, grid.params[best_pi], best});

        const double at_agnostic = worst_risk(li, agn.param_index);
        const double reduction = u_red(at_agnostic, best);
        if (!std::isfinite(reduction)) {
            report.degenerate = true;
        }
        price_sum += reduction;
    }
    report.price = price_sum / static_cast<double>(n_learners);
    return report;
}

SweepResult run_experiment(const ExperimentConfig& config, unsigned threads) {
    validate(config);
    const std::vector<CellEval> cells = evaluate_all_cells(config, threads);

    const std::size_t n_noise = config.noise_grid.size();
    const auto deltas = config.learners.deltas();

    SweepResult result;
    for (std::size_t ei = 0; ei < config.epsilons.size(); ++ei) {
        std::size_t kind_index = 0;
        for (const auto& [kind, params] : config.param_grid) {
            for (std::size_t rep = 0; rep < config.replications; ++rep) {
                for (std::size_t mi = 0; mi < n_noise; ++mi) {
                    const std::size_t cell = (ei * config.replications + rep) * n_noise + mi;
                    const std::vector<double>& risks = cells[cell].by_kind[kind_index];
                    for (std::size_t pi = 0; pi < params.size(); ++pi) {
                        for (std::size_t di = 0; di < deltas.size(); ++di) {
                            result.per_cell.push_back(CellRecord{
                                config.epsilons[ei], kind, rep, config.noise_grid[mi], params[pi],
                                deltas[di], risks[pi * deltas.size() + di]});
                        }
                    }
                }
            }
            ++kind_index;
        }
    }

    for (std::size_t ei = 0; ei < config.epsilons.size(); ++ei) {
        std::size_t kind_index = 0;
        for (const auto& [kind, params] : config.param_grid) {
            std::vector<double> minmax_per_rep(config.replications);
            std::vector<double> gap_per_rep(config.replications);
            for (std::size_t rep = 0; rep < config.replications; ++rep) {
                const CellGrid grid = grid_for(config, cells, ei, kind_index, rep);
                const MinmaxSelection sel = select_minmax(grid);
                const RiskReport& selected = grid.at(sel.param_index, sel.noise_index);
                minmax_per_rep[rep] = selected.agnostic;
                gap_per_rep[rep] = selected.gap;
                result.per_replication.push_back(ReplicationRecord{
                    config.epsilons[ei], kind, rep, selected.agnostic, selected.gap});
            }
            const auto [r_mean, r_stderr] = aggregate(minmax_per_rep);
            const auto [g_mean, g_stderr] = aggregate(gap_per_rep);
            result.aggregated.push_back(AggregateRecord{config.epsilons[ei], kind, r_mean,
                                                        r_stderr, g_mean, g_stderr});
            ++kind_index;
        }
    }
    return result;
}

HeteroResult run_heterogeneity(const HeteroConfig& config, unsigned threads) {
    validate(config);

    // One union learner set evaluates every pair's risks from shared cells.
    std::vector<double> union_deltas = config.delta2_grid;
    union_deltas.push_back(config.delta1);
    std::sort(union_deltas.begin(), union_deltas.end());
    union_deltas.erase(std::unique(union_deltas.begin(), union_deltas.end()),
                       union_deltas.end());

    ExperimentConfig sweep;
    sweep.target = config.target;
    sweep.n = config.n;
    sweep.epsilons = {config.epsilon};
    sweep.noise_grid = config.noise_grid;
    sweep.param_grid = config.param_grid;
    sweep.learners = LearnerSet(std::move(union_deltas));
    sweep.replications = config.replications;
    sweep.delta0 = config.delta0;
    sweep.seed = config.seed;
    validate(sweep);

    const std::vector<CellEval> cells = evaluate_all_cells(sweep, threads);
    const auto deltas = sweep.learners.deltas();
    const std::size_t n_noise = sweep.noise_grid.size();

    const auto delta_index = [&](double d) {
        const auto it = std::find(deltas.begin(), deltas.end(), d);
        return static_cast<std::size_t>(it - deltas.begin());
    };
    const std::size_t d1 = delta_index(config.delta1);

    HeteroResult result;
    {
        std::size_t kind_index = 0;
        for (const auto& [kind, params] : sweep.param_grid) {
            for (std::size_t rep = 0; rep < sweep.replications; ++rep) {
                for (std::size_t mi = 0; mi < n_noise; ++mi) {
                    const std::size_t cell = rep * n_noise + mi;
                    const std::vector<double>& risks = cells[cell].by_kind[kind_index];
                    for (std::size_t pi = 0; pi < params.size(); ++pi) {
                        for (std::size_t di = 0; di < deltas.size(); ++di) {
                            result.per_cell.push_back(CellRecord{
                                config.epsilon, kind, rep, sweep.noise_grid[mi], params[pi],
                                deltas[di], risks[pi * deltas.size() + di]});
                        }
                    }
                }
            }
            ++kind_index;
        }
    }

    for (double delta2 : config.delta2_grid) {
        const std::size_t d2 = delta_index(delta2);
        std::size_t kind_index = 0;
        for (const auto& [kind, params] : sweep.param_grid) {
            std::vector<double> gap_per_rep(sweep.replications);
            for (std::size_t rep = 0; rep < sweep.replications; ++rep) {
                CellGrid grid;
                grid.params = params;
                grid.noise_means = sweep.noise_grid;
                grid.reports.reserve(params.size() * n_noise);
                for (std::size_t pi = 0; pi < params.size(); ++pi) {
                    for (std::size_t mi = 0; mi < n_noise; ++mi) {
                        const std::size_t cell = rep * n_noise + mi;
                        const std::vector<double>& risks = cells[cell].by_kind[kind_index];
                        std::vector<std::pair<double, double>> pair_risks;
                        pair_risks.emplace_back(config.delta1,
                                                risks[pi * deltas.size() + d1]);
                        if (d2 != d1) {
                            pair_risks.emplace_back(delta2, risks[pi * deltas.size() + d2]);
                        }
                        grid.reports.push_back(RiskReport::from_risks(std::move(pair_risks)));
                    }
                }
                gap_per_rep[rep] = heterogeneity_gap(grid);
                result.per_replication.push_back(
                    HeteroReplicationRecord{delta2, kind, rep, gap_per_rep[rep]});
            }
            const auto [g_mean, g_stderr] = aggregate(gap_per_rep);
            result.aggregated.push_back(HeteroAggregateRecord{delta2, kind, g_mean, g_stderr});
            ++kind_index;
        }
    }
    return result;
}

}  // namespace larp
