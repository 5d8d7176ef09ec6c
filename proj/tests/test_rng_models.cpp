#include <doctest.h>

#include <cmath>
#include <map>

#include "ppgof/models.hpp"
#include "ppgof/parallel.hpp"
#include "support.hpp"

using namespace ppgof;

namespace {
const Window unit_square(0.0, 1.0, 0.0, 1.0);

double min_pairwise_distance(const PointPattern& p) {
    double best = 1e300;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            best = std::min(best, distance(p[i], p[j]));
    return best;
}
} // namespace

TEST_CASE("streams are deterministic and independent of nesting") {
    const RngSeed key{42, 7};
    Rng a(key), b(key);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(key.sub(1).stream != key.sub(2).stream);
    CHECK(key.sub(1).sub(3).stream != key.sub(3).sub(1).stream);
}

TEST_CASE("simulate is bit-identical across calls") {
    const ModelSpec spec = MaternClusterModel{30.0, 0.08, 4.0};
    const PointPattern a = simulate(spec, unit_square, {9, 4});
    const PointPattern b = simulate(spec, unit_square, {9, 4});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
    }
    const PointPattern c = simulate(spec, unit_square, {9, 5});
    CHECK(a.size() != c.size()); // different stream, different draw (a.s.)
}

TEST_CASE("binomial draws exactly n points") {
    CHECK(simulate(BinomialModel{10}, unit_square, {1, 0}).size() == 10);
    CHECK(simulate(BinomialModel{0}, unit_square, {1, 0}).size() == 0);
}

TEST_CASE("poisson counts pass a chi-square fit at the 1% level") {
    const double lambda = 25.0;
    std::map<long, long> histogram;
    const long reps = 1000;
    for (long i = 0; i < reps; ++i)
        ++histogram[long(simulate(PoissonModel{lambda}, unit_square, {77, std::uint64_t(i)}).size())];

    // keep bins with healthy expected counts, lump the rest into one tail
    std::vector<double> observed, expected;
    double kept_obs = 0.0, kept_exp = 0.0;
    double prob = std::exp(-lambda);
    for (long k = 0; k <= 80; ++k) {
        const double e = double(reps) * prob;
        if (e >= 8.0) {
            const double o = histogram.count(k) ? double(histogram[k]) : 0.0;
            observed.push_back(o);
            expected.push_back(e);
            kept_obs += o;
            kept_exp += e;
        }
        prob *= lambda / double(k + 1);
    }
    observed.push_back(double(reps) - kept_obs);
    expected.push_back(double(reps) - kept_exp);

    double x = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i)
        x += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    const double p = support::chi2_sf(x, double(observed.size() - 1));
    CHECK(p > 0.01);
}

TEST_CASE("matern cluster campaign mean matches kappa mu |W|") {
    // mean count should be kappa * mu * |W| = 250
    const ModelSpec spec = MaternClusterModel{50.0, 0.1, 5.0};
    const long sims = 500;
    std::vector<double> counts(sims);
    parallel_for(std::size_t(sims), resolve_threads(), [&](std::size_t i) {
        counts[i] = double(simulate(spec, unit_square, {101, i}).size());
    });
    double mean = 0.0, var = 0.0;
    for (double c : counts) mean += c;
    mean /= double(sims);
    for (double c : counts) var += (c - mean) * (c - mean);
    var /= double(sims - 1);
    const double se = std::sqrt(var / double(sims));
    CHECK(std::abs(mean - 250.0) <= 3.0 * se);
}

TEST_CASE("matern cluster with mu zero is empty") {
    CHECK(simulate(MaternClusterModel{50.0, 0.1, 0.0}, unit_square, {5, 0}).empty());
}

TEST_CASE("strauss with gamma one degenerates to poisson counts") {
    const ModelSpec spec = StraussModel{100.0, 1.0, 0.05};
    const long sims = 500;
    std::vector<double> counts(sims);
    parallel_for(std::size_t(sims), resolve_threads(), [&](std::size_t i) {
        counts[i] = double(simulate(spec, unit_square, {303, i}).size());
    });
    double mean = 0.0;
    for (double c : counts) mean += c;
    mean /= double(sims);
    CHECK(std::abs(mean - 100.0) <= 3.0 * std::sqrt(100.0 / double(sims)));
}

TEST_CASE("strauss hard core never places close pairs") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const PointPattern p = simulate(StraussModel{150.0, 0.0, 0.06}, unit_square, {21, s});
        REQUIRE(p.size() >= 2);
        CHECK(min_pairwise_distance(p) >= 0.06);
    }
}

TEST_CASE("ssi respects the inhibition distance") {
    const PointPattern p = simulate(SSIModel{60, 0.05}, unit_square, {31, 0});
    CHECK(p.size() == 60);
    CHECK(min_pairwise_distance(p) >= 0.05);
}

TEST_CASE("ssi throws when the packing is impossible") {
    CHECK_THROWS_AS(simulate(SSIModel{100000, 0.05}, unit_square, {32, 0}), SSIFailure);
}

TEST_CASE("constant-intensity thinning reproduces poisson counts") {
    // two-sample comparison of count means at desk scale
    const double c = 80.0;
    InhomPoissonModel inhom{c, [c](Point) { return c; }};
    const long sims = 400;
    double mean_inhom = 0.0, mean_pois = 0.0;
    for (long i = 0; i < sims; ++i) {
        mean_inhom += double(simulate(inhom, unit_square, {41, std::uint64_t(i)}).size());
        mean_pois += double(simulate(PoissonModel{c}, unit_square, {42, std::uint64_t(i)}).size());
    }
    mean_inhom /= double(sims);
    mean_pois /= double(sims);
    const double se = std::sqrt(2.0 * c / double(sims));
    CHECK(std::abs(mean_inhom - mean_pois) <= 3.0 * se);
}

TEST_CASE("inhomogeneous thinning respects a one-sided gradient") {
    InhomPoissonModel inhom{200.0, [](Point p) { return 200.0 * p.x; }};
    double left = 0.0, right = 0.0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const PointPattern p = simulate(inhom, unit_square, {43, i});
        for (const Point& q : p.points()) (q.x < 0.5 ? left : right) += 1.0;
    }
    CHECK(right > 2.0 * left);
}

TEST_CASE("conditioning on the count") {
    const ConditionedModel cond = condition_on_count(PoissonModel{37.0}, 50);
    CHECK(cond.conditioned);
    REQUIRE(std::holds_alternative<BinomialModel>(cond.spec));
    CHECK(std::get<BinomialModel>(cond.spec).n == 50);

    const ConditionedModel zero = condition_on_count(PoissonModel{5.0}, 0);
    CHECK(std::get<BinomialModel>(zero.spec).n == 0);

    const ConditionedModel noop = condition_on_count(StraussModel{100.0, 0.5, 0.05}, 50);
    CHECK_FALSE(noop.conditioned);
    CHECK(std::holds_alternative<StraussModel>(noop.spec));
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(validate(ModelSpec{StraussModel{100.0, 1.5, 0.05}}), InvalidSpec);
    CHECK_THROWS_AS(validate(ModelSpec{StraussModel{100.0, -0.1, 0.05}}), InvalidSpec);
    CHECK_THROWS_AS(validate(ModelSpec{MaternClusterModel{50.0, 0.0, 5.0}}), InvalidSpec);
    CHECK_THROWS_AS(validate(ModelSpec{PoissonModel{-1.0}}), InvalidSpec);
    CHECK_THROWS_AS(validate(ModelSpec{SSIModel{10, 0.0}}), InvalidSpec);
}

TEST_CASE("thomas cluster campaign mean matches kappa mu |W|") {
    const ModelSpec spec = ThomasModel{30.0, 0.02, 4.0};
    const long sims = 500;
    std::vector<double> counts(static_cast<std::size_t>(sims));
    parallel_for(std::size_t(sims), resolve_threads(), [&](std::size_t i) {
        counts[i] = double(simulate(spec, unit_square, {505, i}).size());
    });
    double mean = 0.0, var = 0.0;
    for (double c : counts) mean += c;
    mean /= double(sims);
    for (double c : counts) var += (c - mean) * (c - mean);
    var /= double(sims - 1);
    CHECK(std::abs(mean - 120.0) <= 3.0 * std::sqrt(var / double(sims)));
}
