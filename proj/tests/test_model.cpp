#include "larp/model.hpp"

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"

using namespace larp;

TEST_CASE("validation of domain types") {
    CHECK_THROWS_AS(validate(GaussianTarget{0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(GaussianTarget{0.0, -1.0}), std::invalid_argument);
    CHECK_NOTHROW(validate(GaussianTarget{3.0, 0.5}));
    CHECK_THROWS_AS(validate(BernoulliTarget{1.5}), std::invalid_argument);
    CHECK_NOTHROW(validate(BernoulliTarget{0.5}));
    CHECK_THROWS_AS(validate(ContaminationSpec{0.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ContaminationSpec{-0.1, 0.0}), std::invalid_argument);
    CHECK_NOTHROW(validate(ContaminationSpec{0.49, -2.0}));
}

TEST_CASE("derive_seed is deterministic and collision-free on the grid") {
    const Seed base{12345};
    CHECK(derive_seed(base, 0, 0) == derive_seed(base, 0, 0));
    CHECK(derive_seed(base, 0, 0) != derive_seed(base, 0, 1));
    CHECK(derive_seed(base, 0, 0) != derive_seed(base, 1, 0));

    // 8 replications x 50 grid cells: all 400 derived seeds distinct
    std::set<std::uint64_t> seen;
    for (std::uint64_t rep = 0; rep < 8; ++rep) {
        for (std::uint64_t cell = 0; cell < 50; ++cell) {
            seen.insert(derive_seed(base, rep, cell).base);
        }
    }
    CHECK(seen.size() == 400);
}

TEST_CASE("draw_contaminated is sorted and reproducible") {
    const GaussianTarget target{0.0, 1.0};
    const ContaminationSpec contamination{0.2, 10.0};
    const Sample a = draw_contaminated(target, contamination, 1000, Seed{7});
    const Sample b = draw_contaminated(target, contamination, 1000, Seed{7});
    CHECK(a == b);
    CHECK(std::is_sorted(a.values().begin(), a.values().end()));
    CHECK(draw_contaminated(target, contamination, 1000, Seed{8}) != a);
    CHECK_THROWS_AS(draw_contaminated(target, contamination, 0, Seed{7}), std::invalid_argument);
}

TEST_CASE("clean samples concentrate around theta") {
    const Sample s = draw_contaminated(GaussianTarget{0.0, 1.0}, ContaminationSpec{0.0, 10.0},
                                       10001, Seed{11});
    double sum = 0.0;
    for (double x : s.values()) {
        sum += x;
    }
    const double sample_mean = sum / static_cast<double>(s.size());
    CHECK(std::abs(sample_mean) <= 5.0 / std::sqrt(10001.0));
    // with eps = 0 the noise location is irrelevant: no point goes near 10
    CHECK(s.max() < 6.0);
}

TEST_CASE("mixture weight matches epsilon") {
    // eps just below 1/2, noise at 10: the fraction above 5 estimates eps
    const double eps = 0.5 - 1e-9;
    const Sample s = draw_contaminated(GaussianTarget{0.0, 1.0}, ContaminationSpec{eps, 10.0},
                                       100000, Seed{21});
    const auto above = std::count_if(s.values().begin(), s.values().end(),
                                     [](double x) { return x > 5.0; });
    CHECK(std::abs(static_cast<double>(above) / 100000.0 - eps) <= 0.01);

    // eps = 0.3: fraction closer to the noise within 3 standard errors
    const Sample t = draw_contaminated(GaussianTarget{0.0, 1.0}, ContaminationSpec{0.3, 10.0},
                                       10000, Seed{22});
    const auto closer = std::count_if(t.values().begin(), t.values().end(),
                                      [](double x) { return x > 5.0; });
    const double se = std::sqrt(0.3 * 0.7 / 10000.0);
    CHECK(std::abs(static_cast<double>(closer) / 10000.0 - 0.3) <= 3.0 * se);
}

TEST_CASE("non-contaminated vs contaminated split") {
    // the harness input shape: n = 10001, eps = 0.2, noise mean from the grid
    const Sample s = draw_contaminated(GaussianTarget{0.0, 1.0}, ContaminationSpec{0.2, 10.0},
                                       10001, Seed{33});
    CHECK(s.size() == 10001);
}
