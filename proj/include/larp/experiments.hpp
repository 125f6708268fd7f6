#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "larp/model.hpp"
#include "larp/prefilters.hpp"
#include "larp/risk.hpp"

namespace larp {

/// count equidistant values on [lo, hi] inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// count log-spaced values on [lo, hi] inclusive (lo, hi > 0).
std::vector<double> logspace(double lo, double hi, std::size_t count);

std::vector<double> default_noise_grid();                              // 50 values in [0, 10]
std::map<PrefilterKind, std::vector<double>> default_param_grid();     // see below

/// Full description of a min-max sweep over the (epsilon x noise x param)
/// grid.
///
/// Defaults follow the Gaussian mean-estimation protocol: n = 10001,
/// 8 replications, noise means on 50 equidistant values in [0, 10]
/// (unit-variance noise, symmetry-reduced to m >= 0), learners
/// Delta = {0.01, 1.0}. The hyperparameter grids span "barely filtering"
/// to "aggressive filtering": quantile p on 50 equidistant values in
/// [0.005, 0.495], z-score and SDO thresholds on 50 log-spaced values in
/// [0.1, 10].
struct ExperimentConfig {
    GaussianTarget target{0.0, 1.0};
    std::size_t n = 10001;
    std::vector<double> epsilons{0.0, 0.05, 0.1, 0.15, 0.2, 0.25};
    std::vector<double> noise_grid = default_noise_grid();
    std::map<PrefilterKind, std::vector<double>> param_grid = default_param_grid();
    LearnerSet learners{std::vector<double>{0.01, 1.0}};
    std::size_t replications = 8;
    double delta0 = 0.05;  // confidence level of the theoretical bound
    Seed seed{};
};

void validate(const ExperimentConfig& config);

/// All (param, noise_mean) reports of one (epsilon, kind, replication).
/// Row-major: reports[pi * noise_means.size() + mi].
struct CellGrid {
    std::vector<double> params;
    std::vector<double> noise_means;
    std::vector<RiskReport> reports;

    const RiskReport& at(std::size_t param_index, std::size_t noise_index) const;
};

/// Evaluates one experiment cell: draws the cell's sample with
/// derive_seed(config.seed, replication, grid_index) -- where grid_index
/// flattens (epsilon, noise_mean) as eps_index * noise_grid.size() +
/// noise_index, so every (epsilon, m, replication) triple gets a fresh
/// stream -- and reuses that one sample across every kind, hyperparameter
/// and learner of the cell. Shared randomness across the param grid is
/// what makes the later min over p well defined on coherent risks.
///
/// epsilon and noise_mean must be grid members (exact match).
std::map<PrefilterKind, std::vector<RiskReport>> run_cell(const ExperimentConfig& config,
                                                          double epsilon,
                                                          double noise_mean,
                                                          std::size_t replication);

/// Index of the min-max cell: for each param take the worst noise mean by
/// agnostic risk (ties toward the smaller m), then the param minimizing
/// that worst case (ties toward the smaller param).
struct MinmaxSelection {
    std::size_t param_index = 0;
    std::size_t noise_index = 0;
};

MinmaxSelection select_minmax(const CellGrid& grid);

/// min over param of max over noise mean of the agnostic risk.
/// Throws std::invalid_argument on an incomplete grid.
double minmax_risk(const CellGrid& grid);

/// The heterogeneity term max_l R_l - min_l R_l, read from the cell
/// selected by the same min-max pipeline on the agnostic risk.
double heterogeneity_gap(const CellGrid& grid);

/// Mean and standard error (sample std, divisor count-1, over sqrt(count);
/// 0 for a single value) of per-replication statistics.
std::pair<double, double> aggregate(std::span<const double> values);

/// (R1 - R2) / R2, the relative utility reduction. By convention 0 when
/// both risks are 0, +inf when only the reference R2 is 0.
double relative_utility_reduction(double r1, double r2);

/// Price of learner-agnostic prefiltering on one (epsilon, kind,
/// replication) grid. Per-learner risks R_l(p) are worst-case over the
/// noise grid; F*_l minimizes R_l(p) over p, the agnostic choice minimizes
/// the worst-case agnostic risk, and the price is the mean utility
/// reduction across learners. All argmin ties break toward the smaller
/// param. `degenerate` flags an infinite reduction (some R_l(F*_l) == 0
/// with a worse agnostic risk).
struct PriceReport {
    struct LearnerOptimum {
        double delta = 0.0;
        double param = 0.0;  // best param for this learner
        double risk = 0.0;   // the learner's worst-noise risk at that param
    };
    std::vector<LearnerOptimum> per_learner_optimum;
    double agnostic_param = 0.0;
    double agnostic_risk = 0.0;
    double price = 0.0;
    bool degenerate = false;
};

PriceReport price_of_larp(const CellGrid& grid,
                          const std::function<double(double, double)>& u_red);

struct CellRecord {
    double epsilon;
    PrefilterKind kind;
    std::size_t replication;
    double noise_mean;
    double param;
    double delta;
    double risk;
};

struct ReplicationRecord {
    double epsilon;
    PrefilterKind kind;
    std::size_t replication;
    double minmax_agnostic;
    double gap;
};

struct AggregateRecord {
    double epsilon;
    PrefilterKind kind;
    double r_agn_mean;
    double r_agn_stderr;
    double gap_mean;
    double gap_stderr;
};

struct SweepResult {
    std::vector<CellRecord> per_cell;
    std::vector<ReplicationRecord> per_replication;
    std::vector<AggregateRecord> aggregated;
};

/// Full factorial sweep (epsilon x kind x replication x noise x param x
/// delta). Cells are evaluated by a pool of `threads` workers writing to
/// preassigned slots; every output is byte-identical for any thread count.
SweepResult run_experiment(const ExperimentConfig& config, unsigned threads = 1);

/// The heterogeneity sweep: epsilon fixed, learner pair {delta1, delta2}
/// with delta2 running over a grid. Cells are shared across delta2 values
/// (same seeds, same samples); for each pair the gap is read from the
/// pair's own min-max selection.
struct HeteroConfig {
    GaussianTarget target{0.0, 1.0};
    std::size_t n = 10001;
    double epsilon = 0.2;
    double delta1 = 0.01;
    std::vector<double> delta2_grid{0.01, 0.25, 0.5, 1.0, 2.0};
    std::vector<double> noise_grid = default_noise_grid();
    std::map<PrefilterKind, std::vector<double>> param_grid = default_param_grid();
    std::size_t replications = 8;
    double delta0 = 0.05;
    Seed seed{};
};

void validate(const HeteroConfig& config);

struct HeteroReplicationRecord {
    double delta2;
    PrefilterKind kind;
    std::size_t replication;
    double gap;
};

struct HeteroAggregateRecord {
    double delta2;
    PrefilterKind kind;
    double gap_mean;
    double gap_stderr;
};

struct HeteroResult {
    std::vector<CellRecord> per_cell;  // one row per delta in {delta1} u delta2_grid
    std::vector<HeteroReplicationRecord> per_replication;
    std::vector<HeteroAggregateRecord> aggregated;
};

HeteroResult run_heterogeneity(const HeteroConfig& config, unsigned threads = 1);

}  // namespace larp
