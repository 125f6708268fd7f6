#include "larp/experiments.hpp"

#include <stdexcept>

#include <cmath>
#include <limits>

#include "doctest.h"
#include "test_support.hpp"

using namespace larp;

namespace {

// grid with one learner whose risks are given row-major [param][noise]
CellGrid singleton_grid(std::vector<double> params, std::vector<double> ms,
                        std::vector<double> risks) {
    CellGrid grid;
    grid.params = std::move(params);
    grid.noise_means = std::move(ms);
    for (double r : risks) {
        grid.reports.push_back(RiskReport::from_risks({{0.5, r}}));
    }
    return grid;
}

ExperimentConfig tiny_config() {
    ExperimentConfig config;
    config.n = 501;
    config.epsilons = {0.0, 0.2};
    config.noise_grid = linspace(0.0, 10.0, 4);
    config.param_grid = {
        {PrefilterKind::Quantile, linspace(0.05, 0.45, 4)},
        {PrefilterKind::ZScore, logspace(0.5, 5.0, 4)},
        {PrefilterKind::Sdo, logspace(0.5, 5.0, 4)},
    };
    config.replications = 3;
    config.seed = Seed{99};
    return config;
}

}  // namespace

TEST_CASE("grid helpers") {
    const auto lin = linspace(0.0, 10.0, 50);
    REQUIRE(lin.size() == 50);
    CHECK(lin.front() == 0.0);
    CHECK(lin.back() == 10.0);
    CHECK(lin[1] == doctest::Approx(10.0 / 49.0));

    const auto lg = logspace(0.1, 10.0, 50);
    REQUIRE(lg.size() == 50);
    CHECK(lg.front() == 0.1);
    CHECK(lg.back() == 10.0);
    CHECK(lg[25] > lg[24]);

    const auto grid = default_param_grid();
    CHECK(grid.at(PrefilterKind::Quantile).front() == 0.005);
    CHECK(grid.at(PrefilterKind::Quantile).back() == 0.495);
    CHECK(grid.at(PrefilterKind::ZScore).size() == 50);
    CHECK(grid.at(PrefilterKind::Sdo).size() == 50);
}

TEST_CASE("minmax on a 2x2 worked grid") {
    // risks {(m1,p1):4, (m2,p1):1, (m1,p2):2, (m2,p2):3} -> min(4, 3) = 3
    const CellGrid grid = singleton_grid({0.1, 0.2}, {0.0, 1.0}, {4, 1, 2, 3});
    CHECK(minmax_risk(grid) == 3.0);
    const MinmaxSelection sel = select_minmax(grid);
    CHECK(sel.param_index == 1);
    CHECK(sel.noise_index == 1);
}

TEST_CASE("minmax special cases") {
    CHECK(minmax_risk(singleton_grid({0.1}, {0.0}, {7.5})) == 7.5);

    // one param dominates every noise mean
    const CellGrid dom = singleton_grid({0.1, 0.2}, {0.0, 1.0}, {9, 8, 2, 3});
    CHECK(minmax_risk(dom) == 3.0);

    // ties break toward the smaller param / smaller noise mean
    const CellGrid tie = singleton_grid({0.1, 0.2}, {0.0, 1.0}, {5, 5, 5, 5});
    const MinmaxSelection sel = select_minmax(tie);
    CHECK(sel.param_index == 0);
    CHECK(sel.noise_index == 0);
}

TEST_CASE("incomplete grids are rejected") {
    CellGrid grid = singleton_grid({0.1, 0.2}, {0.0, 1.0}, {4, 1, 2, 3});
    grid.reports.pop_back();
    CHECK_THROWS_AS(minmax_risk(grid), std::invalid_argument);
    CHECK_THROWS_AS(heterogeneity_gap(grid), std::invalid_argument);
}

TEST_CASE("weak duality: minmax dominates maxmin") {
    SplitMix64 rng(0xD0A11ull);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t np = 1 + rng.next_u64() % 6;
        const std::size_t nm = 1 + rng.next_u64() % 6;
        std::vector<double> risks(np * nm);
        for (double& r : risks) {
            r = rng.next_unit();
        }
        std::vector<double> params(np), ms(nm);
        for (std::size_t i = 0; i < np; ++i) params[i] = 0.1 + static_cast<double>(i);
        for (std::size_t i = 0; i < nm; ++i) ms[i] = static_cast<double>(i);
        const CellGrid grid = singleton_grid(params, ms, risks);

        double maxmin = -std::numeric_limits<double>::infinity();
        for (std::size_t mi = 0; mi < nm; ++mi) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t pi = 0; pi < np; ++pi) {
                best = std::min(best, grid.at(pi, mi).agnostic);
            }
            maxmin = std::max(maxmin, best);
        }
        CHECK(minmax_risk(grid) >= maxmin);
    }
}

TEST_CASE("heterogeneity gap reads the selected cell") {
    CellGrid grid;
    grid.params = {0.1, 0.2};
    grid.noise_means = {0.0};
    grid.reports.push_back(RiskReport::from_risks({{0.01, 0.6}, {1.0, 0.9}}));  // agn .9 gap .3
    grid.reports.push_back(RiskReport::from_risks({{0.01, 0.5}, {1.0, 0.7}}));  // agn .7 gap .2
    CHECK(minmax_risk(grid) == 0.7);
    CHECK(heterogeneity_gap(grid) == doctest::Approx(0.2));

    // singleton and duplicated learner sets have zero gap
    CHECK(heterogeneity_gap(singleton_grid({0.1}, {0.0}, {0.42})) == 0.0);
    CellGrid dup;
    dup.params = {0.1};
    dup.noise_means = {0.0};
    dup.reports.push_back(RiskReport::from_risks({{0.01, 0.33}, {0.01, 0.33}}));
    CHECK(heterogeneity_gap(dup) == 0.0);
}

TEST_CASE("aggregate mean and standard error") {
    const std::vector<double> threes{3, 3, 3};
    CHECK(aggregate(threes) == std::pair<double, double>{3.0, 0.0});
    const std::vector<double> pair{1, 3};
    const auto [m, se] = aggregate(pair);
    CHECK(m == 2.0);
    CHECK(se == doctest::Approx(1.0));
    const std::vector<double> one{5.0};
    CHECK(aggregate(one).second == 0.0);
    CHECK_THROWS_AS(aggregate(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("relative utility reduction conventions") {
    CHECK(relative_utility_reduction(0.02, 0.01) == doctest::Approx(1.0));
    CHECK(relative_utility_reduction(0.0, 0.0) == 0.0);
    CHECK(std::isinf(relative_utility_reduction(0.5, 0.0)));
}

TEST_CASE("price of larp on a worked grid") {
    // learner A (delta .01): risk .02 under the agnostic choice, .01 at its
    // own optimum; learner B (delta 1): optimal under the agnostic choice.
    CellGrid grid;
    grid.params = {0.1, 0.2};
    grid.noise_means = {0.0};
    // param .1: A=.02 B=.05  -> agn .05 ; param .2: A=.01 B=.20 -> agn .20
    grid.reports.push_back(RiskReport::from_risks({{0.01, 0.02}, {1.0, 0.05}}));
    grid.reports.push_back(RiskReport::from_risks({{0.01, 0.01}, {1.0, 0.20}}));
    const PriceReport price = price_of_larp(grid, relative_utility_reduction);
    CHECK(price.agnostic_param == 0.1);
    CHECK(price.price == doctest::Approx(0.5));  // (1.0 + 0.0) / 2
    CHECK_FALSE(price.degenerate);
    REQUIRE(price.per_learner_optimum.size() == 2);
    CHECK(price.per_learner_optimum[0].param == 0.2);
    CHECK(price.per_learner_optimum[0].risk == doctest::Approx(0.01));
    CHECK(price.per_learner_optimum[1].param == 0.1);
}

TEST_CASE("price of a single learner is zero") {
    const CellGrid grid = singleton_grid({0.1, 0.2}, {0.0}, {0.3, 0.7});
    const PriceReport price = price_of_larp(grid, relative_utility_reduction);
    CHECK(price.price == 0.0);
}

TEST_CASE("price is nonnegative on shared risk tables") {
    SplitMix64 rng(0xF00Dull);
    for (int trial = 0; trial < 100; ++trial) {
        CellGrid grid;
        const std::size_t np = 2 + rng.next_u64() % 4;
        const std::size_t nm = 1 + rng.next_u64() % 4;
        for (std::size_t i = 0; i < np; ++i) grid.params.push_back(0.1 * (1.0 + i));
        for (std::size_t i = 0; i < nm; ++i) grid.noise_means.push_back(1.0 * i);
        for (std::size_t i = 0; i < np * nm; ++i) {
            grid.reports.push_back(RiskReport::from_risks(
                {{0.01, 0.01 + rng.next_unit()}, {1.0, 0.01 + rng.next_unit()}}));
        }
        const PriceReport price = price_of_larp(grid, relative_utility_reduction);
        CHECK(price.price >= 0.0);
    }
}

TEST_CASE("degenerate price is flagged") {
    CellGrid grid;
    grid.params = {0.1, 0.2};
    grid.noise_means = {0.0};
    grid.reports.push_back(RiskReport::from_risks({{0.01, 0.3}, {1.0, 0.1}}));
    grid.reports.push_back(RiskReport::from_risks({{0.01, 0.0}, {1.0, 0.4}}));
    const PriceReport price = price_of_larp(grid, relative_utility_reduction);
    CHECK(price.degenerate);
}

TEST_CASE("run_cell returns one report per hyperparameter") {
    ExperimentConfig config = tiny_config();
    const auto reports = run_cell(config, 0.2, config.noise_grid[1], 1);
    REQUIRE(reports.size() == 3);
    CHECK(reports.at(PrefilterKind::Quantile).size() == 4);
    CHECK(reports.at(PrefilterKind::ZScore).size() == 4);
    for (const auto& r : reports.at(PrefilterKind::Quantile)) {
        CHECK(r.per_learner.size() == config.learners.size());
        CHECK(r.gap >= 0.0);
    }
    // determinism
    const auto again = run_cell(config, 0.2, config.noise_grid[1], 1);
    CHECK(again.at(PrefilterKind::Sdo)[2].agnostic ==
          reports.at(PrefilterKind::Sdo)[2].agnostic);

    CHECK_THROWS_AS(run_cell(config, 0.17, config.noise_grid[1], 1), std::invalid_argument);
    CHECK_THROWS_AS(run_cell(config, 0.2, -3.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_cell(config, 0.2, config.noise_grid[1], 99), std::invalid_argument);
}

TEST_CASE("clean cells stay near the sampling error for small delta") {
    // eps = 0: every learner with delta <= 0.01 lands within the
    // theoretical clean-sample allowance 10 sigma^2 log(1/delta0) / n.
    ExperimentConfig config;
    config.n = 10001;
    config.epsilons = {0.0};
    config.noise_grid = {0.0};
    config.param_grid = {{PrefilterKind::Quantile, linspace(0.05, 0.45, 5)}};
    config.learners = LearnerSet(std::vector<double>{0.001, 0.01});
    config.replications = 100;
    config.seed = Seed{2024};
    const double allowance = 10.0 * std::log(1.0 / config.delta0) / static_cast<double>(config.n);

    const SweepResult result = run_experiment(config, 4);
    for (const CellRecord& record : result.per_cell) {
        CHECK(record.risk <= allowance);
    }
    for (const AggregateRecord& agg : result.aggregated) {
        CHECK(agg.r_agn_mean <= allowance);
    }
}

TEST_CASE("run_experiment shapes and determinism across thread counts") {
    const ExperimentConfig config = tiny_config();
    const SweepResult serial = run_experiment(config, 1);
    const SweepResult threaded = run_experiment(config, 8);

    const std::size_t cells = config.epsilons.size() * config.replications *
                              config.noise_grid.size() * 3 * 4 * config.learners.size();
    REQUIRE(serial.per_cell.size() == cells);
    REQUIRE(serial.per_replication.size() ==
            config.epsilons.size() * 3 * config.replications);
    REQUIRE(serial.aggregated.size() == config.epsilons.size() * 3);

    REQUIRE(threaded.per_cell.size() == serial.per_cell.size());
    for (std::size_t i = 0; i < serial.per_cell.size(); ++i) {
        CHECK(serial.per_cell[i].risk == threaded.per_cell[i].risk);
        CHECK(serial.per_cell[i].param == threaded.per_cell[i].param);
    }
    for (std::size_t i = 0; i < serial.aggregated.size(); ++i) {
        CHECK(serial.aggregated[i].r_agn_mean == threaded.aggregated[i].r_agn_mean);
        CHECK(serial.aggregated[i].gap_stderr == threaded.aggregated[i].gap_stderr);
    }

    // run_cell agrees with the sweep's own records
    const auto cell = run_cell(config, config.epsilons[1], config.noise_grid[2], 1);
    for (const CellRecord& record : serial.per_cell) {
        if (record.epsilon == config.epsilons[1] && record.replication == 1 &&
            record.noise_mean == config.noise_grid[2] && record.kind == PrefilterKind::ZScore &&
            record.param == config.param_grid.at(PrefilterKind::ZScore)[3] &&
            record.delta == 1.0) {
            CHECK(record.risk == cell.at(PrefilterKind::ZScore)[3].risk_for(1.0));
        }
    }
}

TEST_CASE("heterogeneity sweep: duplicated learner pair has zero gap") {
    HeteroConfig config;
    config.n = 501;
    config.epsilon = 0.2;
    config.delta1 = 0.01;
    config.delta2_grid = {0.01, 1.0};
    config.noise_grid = linspace(0.0, 10.0, 3);
    config.param_grid = {{PrefilterKind::Quantile, linspace(0.05, 0.45, 3)}};
    config.replications = 2;
    config.seed = Seed{7};

    const HeteroResult result = run_heterogeneity(config, 2);
    REQUIRE(result.aggregated.size() == 2);
    CHECK(result.aggregated[0].delta2 == 0.01);
    CHECK(result.aggregated[0].gap_mean == 0.0);
    CHECK(result.aggregated[0].gap_stderr == 0.0);
    CHECK(result.aggregated[1].gap_mean >= 0.0);

    // per-cell rows cover the union learner set {0.01, 1.0} once each
    const std::size_t rows =
        config.replications * config.noise_grid.size() * 3 /*params*/ * 2 /*deltas*/;
    CHECK(result.per_cell.size() == rows);

    const HeteroResult again = run_heterogeneity(config, 1);
    for (std::size_t i = 0; i < result.per_replication.size(); ++i) {
        CHECK(result.per_replication[i].gap == again.per_replication[i].gap);
    }
}

TEST_CASE("config validation rejects malformed grids") {
    ExperimentConfig config = tiny_config();
    config.epsilons = {};
    CHECK_THROWS_AS(validate(config), std::invalid_argument);

    config = tiny_config();
    config.epsilons = {0.6};
    CHECK_THROWS_AS(validate(config), std::invalid_argument);

    config = tiny_config();
    config.noise_grid = {3.0, 1.0};
    CHECK_THROWS_AS(validate(config), std::invalid_argument);

    config = tiny_config();
    config.noise_grid = {-1.0, 1.0};
    CHECK_THROWS_AS(validate(config), std::invalid_argument);

    config = tiny_config();
    config.param_grid[PrefilterKind::Quantile] = {0.1, 0.6};
    CHECK_THROWS_AS(validate(config), std::invalid_argument);

    config = tiny_config();
    config.delta0 = 1.0;
    CHECK_THROWS_AS(validate(config), std::invalid_argument);

    CHECK_NOTHROW(validate(tiny_config()));
}
