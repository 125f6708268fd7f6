#include "larp/risk.hpp"

#include <stdexcept>

#include <cmath>
#include <limits>

#include "doctest.h"
#include "larp/model.hpp"
#include "test_support.hpp"

using namespace larp;

TEST_CASE("squared risk") {
    CHECK(squared_risk(0.5, 0.5) == 0.0);
    CHECK(squared_risk(1.0, 0.0) == 1.0);
    CHECK(squared_risk(-0.2, 0.1) == doctest::Approx(0.09));
}

TEST_CASE("report fields from fixed estimates") {
    // estimates {0.1, -0.2} against theta = 0
    const RiskReport r = RiskReport::from_risks(
        {{0.01, squared_risk(0.1, 0.0)}, {1.0, squared_risk(-0.2, 0.0)}});
    CHECK(r.agnostic == doctest::Approx(0.04));
    CHECK(r.best == doctest::Approx(0.01));
    CHECK(r.gap == doctest::Approx(0.03));
    CHECK(r.risk_for(0.01) == doctest::Approx(0.01));
    CHECK_THROWS_AS(r.risk_for(0.5), std::invalid_argument);
}

TEST_CASE("singleton learner set has zero gap") {
    const RiskReport r = RiskReport::from_risks({{0.25, 0.7}});
    CHECK(r.agnostic == 0.7);
    CHECK(r.best == 0.7);
    CHECK(r.gap == 0.0);
}

TEST_CASE("all-infinite risks have zero gap") {
    const double inf = std::numeric_limits<double>::infinity();
    const RiskReport r = RiskReport::from_risks({{0.01, inf}, {1.0, inf}});
    CHECK(std::isinf(r.agnostic));
    CHECK(r.gap == 0.0);
}

TEST_CASE("evaluate runs every learner on the filtered sample") {
    const Sample s = draw_contaminated(GaussianTarget{0.0, 1.0}, ContaminationSpec{0.2, 10.0},
                                       10001, Seed{5});
    const LearnerSet learners(std::vector<double>{0.01, 1.0});
    const RiskReport r =
        evaluate(s, PrefilterSpec{PrefilterKind::Quantile, 0.25}, learners, 0.0);
    REQUIRE(r.per_learner.size() == 2);
    CHECK(r.per_learner[0].first == 0.01);
    CHECK(r.per_learner[1].first == 1.0);
    CHECK(r.agnostic == std::max(r.per_learner[0].second, r.per_learner[1].second));
    CHECK(r.best == std::min(r.per_learner[0].second, r.per_learner[1].second));
    CHECK(r.gap == doctest::Approx(r.agnostic - r.best));
    CHECK(r.gap >= 0.0);

    // evaluate == filter then estimate, learner by learner
    const Sample filtered = apply_quantile(s, 0.25);
    CHECK(r.per_learner[1].second ==
          doctest::Approx(squared_risk(huber_estimate(filtered, 1.0).value, 0.0)));
}

TEST_CASE("a singleton learner's agnostic risk is its own squared risk") {
    SplitMix64 rng(0x51E6ull);
    const Sample s = test::random_sample(rng, 51, -1.0, 1.0);
    const PrefilterSpec spec{PrefilterKind::ZScore, 2.0};
    const RiskReport r = evaluate(s, spec, LearnerSet(std::vector<double>{0.2}), 0.05);
    const Sample filtered = apply(spec, s);
    CHECK(r.agnostic == squared_risk(huber_estimate(filtered, 0.2).value, 0.05));
    CHECK(r.gap == 0.0);
}

TEST_CASE("agnostic risk ignores learner duplication") {
    SplitMix64 rng(0xD0Dull);
    const Sample s = test::random_sample(rng, 101, -1.0, 1.0);
    const PrefilterSpec spec{PrefilterKind::Sdo, 2.5};
    const RiskReport a = evaluate(s, spec, LearnerSet(std::vector<double>{0.3, 0.7}), 0.1);
    const RiskReport b =
        evaluate(s, spec, LearnerSet(std::vector<double>{0.7, 0.3, 0.3, 0.7}), 0.1);
    CHECK(a.agnostic == b.agnostic);
    CHECK(a.best == b.best);
}
