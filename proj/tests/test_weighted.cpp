#include <cmath>
#include <random>

#include <doctest.h>

#include "entlab/errors.hpp"
#include "entlab/weighted.hpp"

using namespace entlab;

namespace {

EntireFunction random_poly(std::uint64_t seed, std::size_t degree)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<std::complex<double>> a(degree + 1);
    for (auto& x : a) {
        const double re = unif(rng);
        x = {re, unif(rng)};
    }
    return EntireFunction::polynomial(a);
}

const GapSchedule& schedule2()
{
    static const GapSchedule s = compute_schedule(2);
    return s;
}

} // namespace

TEST_CASE("power-exponential weights")
{
    CHECK(weight_eval(WeightSpec::power_exp(0.0), 3.0) == doctest::Approx(std::exp(-3.0)));
    CHECK(weight_eval(WeightSpec::power_exp(1.0), 2.0) == doctest::Approx(2.0 * std::exp(-2.0)));
    CHECK(weight_eval(WeightSpec::power_exp(1.0), 0.5) == doctest::Approx(std::exp(-1.0)));
    CHECK(weight_eval(WeightSpec::power_exp(2.5), 0.0) == doctest::Approx(std::pow(2.5, 2.5) * std::exp(-2.5)));
    CHECK(weight_eval(WeightSpec::power_exp(-1.0), 0.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(WeightSpec::power_exp(0.1).describe() == "powerexp:0.1");
    CHECK_THROWS_AS(weight_eval(WeightSpec::power_exp(1.0), -1.0), Error);
}

TEST_CASE("tabulated weights interpolate log-linearly")
{
    const WeightSpec v = WeightSpec::table({1.0, 3.0}, {1.0, std::exp(-2.0)});
    CHECK(v.eval(0.5) == doctest::Approx(1.0));
    CHECK(v.eval(2.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(v.eval(5.0) == doctest::Approx(std::exp(-4.0)));
    CHECK_THROWS_AS(WeightSpec::table({1.0, 2.0}, {1.0}), Error);
    CHECK_THROWS_AS(WeightSpec::table({2.0, 1.0}, {1.0, 0.5}), Error);
    CHECK_THROWS_AS(WeightSpec::table({1.0, 2.0}, {1.0, 0.0}), Error);
}

TEST_CASE("weight axioms")
{
    const auto grid = geometric_grid(0.0625, 128.0, 256);
    for (const double b : {-1.0, 0.0, 0.1, 1.0, 5.0}) {
        CHECK(check_weight_axioms(WeightSpec::power_exp(b), grid).ok());
    }
    const WeightAxioms flat = check_weight_axioms(WeightSpec::table({0.0, 1.0}, {1.0, 1.0}), grid);
    CHECK(flat.positive);
    CHECK(flat.non_increasing);
    CHECK_FALSE(flat.polynomial_decay);
    CHECK_FALSE(check_weight_axioms(WeightSpec::table({0.0, 1.0}, {1.0, 2.0}), grid).non_increasing);
}

TEST_CASE("tail verdicts")
{
    const auto grid = geometric_grid(1.0, 1000.0, 100);
    std::vector<double> up;
    std::vector<double> down;
    std::vector<double> flat;
    for (const double r : grid) {
        up.push_back(2.0 * std::log(r));
        down.push_back(-r);
        flat.push_back(std::sin(r) * 0.1);
    }
    CHECK(tail_verdict(grid, up) == TailVerdict::Diverging);
    CHECK(tail_verdict(grid, down) == TailVerdict::Vanishing);
    CHECK(tail_verdict(grid, flat) == TailVerdict::Bounded);
}

TEST_CASE("weighted norms of reference functions")
{
    const auto grid = geometric_grid(0.0625, 128.0, 64);
    const MeanParams two = MeanParams::make(2.0);

    const WeightedNormReport z = weighted_norm(EntireFunction::zero(), WeightSpec::power_exp(0.5), two, grid);
    CHECK(z.sup.upper_value() == 0.0);
    CHECK(z.verdict == TailVerdict::Vanishing);

    const EntireFunction one = EntireFunction::polynomial({{1.0, 0.0}});
    const WeightedNormReport c = weighted_norm(one, WeightSpec::power_exp(0.0), two, grid);
    CHECK(c.sup.midpoint() == doctest::Approx(std::exp(-0.0625)));
    CHECK(c.argsup == 0);
    CHECK(c.verdict == TailVerdict::Vanishing);

    // v(r) M_inf(e^z, r) = r^b for r >= b.
    const WeightedNormReport e =
        weighted_norm(EntireFunction::exponential(), WeightSpec::power_exp(2.0), MeanParams::make(kInfP), grid);
    CHECK(e.verdict == TailVerdict::Diverging);
    CHECK(e.values.back().midpoint() == doctest::Approx(128.0 * 128.0).epsilon(1e-8));
    CHECK(e.to_csv().rfind("r,value_lower,value_upper\n", 0) == 0);
}

TEST_CASE("weighted norms are homogeneous and subadditive")
{
    const auto grid = geometric_grid(0.0625, 64.0, 32);
    const WeightSpec v = WeightSpec::power_exp(0.5);
    const MeanParams p = MeanParams::make(3.0);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const EntireFunction f = random_poly(seed, 8);
        const EntireFunction g = random_poly(seed + 100, 12);
        const double nf = weighted_norm(f, v, p, grid, 1e-8).sup.midpoint();
        const double ng = weighted_norm(g, v, p, grid, 1e-8).sup.midpoint();
        const double scaled = weighted_norm(combine({{-2.5, 0.0}}, {f}), v, p, grid, 1e-8).sup.midpoint();
        CHECK(scaled == doctest::Approx(2.5 * nf).epsilon(1e-7));
        const double sum = weighted_norm(combine({{1.0, 0.0}, {1.0, 0.0}}, {f, g}), v, p, grid, 1e-8).sup.lower_value();
        CHECK(sum <= nf * (1.0 + 1e-7) + ng * (1.0 + 1e-7));
    }
}

TEST_CASE("membership")
{
    const MeanParams two = MeanParams::make(2.0);
    for (const double b : {0.1, 1.0}) {
        CHECK(membership_probe(random_poly(1, 10), WeightSpec::power_exp(b), two).verdict == Membership::InBp0);
    }
    CHECK(membership_probe(EntireFunction::zero(), WeightSpec::power_exp(1.0), two).verdict == Membership::InBp0);
    CHECK(membership_probe(EntireFunction::exponential(), WeightSpec::power_exp(0.5), MeanParams::make(kInfP)).verdict ==
          Membership::Outside);
    CHECK(membership_probe(EntireFunction::exponential(), WeightSpec::power_exp(0.0), MeanParams::make(kInfP)).verdict ==
          Membership::InBpInfOnly);
    CHECK(membership_probe(EntireFunction::exponential(), WeightSpec::power_exp(0.1), two).verdict ==
          Membership::InBp0);

    const EntireFunction f = build_irregular(OmegaSpec::power(0.1), schedule2());
    const MembershipResult in = membership_probe(f, WeightSpec::power_exp(0.1), two);
    CHECK(in.verdict == Membership::InBp0);
    CHECK_FALSE(in.basis.empty());
    CHECK(membership_probe(f, WeightSpec::power_exp(0.3), two).verdict != Membership::InBp0);
}

TEST_CASE("weighted orbit probe")
{
    const GapSchedule& s = schedule2();
    const EntireFunction f = build_irregular(OmegaSpec::power(0.1), s);
    const auto grid = geometric_grid(0.0625, 128.0, 32);
    const ProbeReport r = weighted_orbit_probe(f, WeightSpec::power_exp(0.1), MeanParams::make(2.0), s, 1, 8, grid);
    REQUIRE(r.decay_records.size() == 8);
    REQUIRE(r.growth_records.size() == 8);
    for (std::size_t i = 1; i < r.growth_records.size(); ++i) {
        CHECK(r.growth_records[i].value.lower_value() > r.growth_records[i - 1].value.upper_value());
    }
    const ProbeReport z =
        weighted_orbit_probe(EntireFunction::zero(), WeightSpec::power_exp(0.1), MeanParams::make(2.0), s, 1, 4, grid);
    for (const auto& rec : z.decay_records) {
        CHECK(rec.value.upper_value() == 0.0);
    }
    CHECK_THROWS_AS(weighted_orbit_probe(f, WeightSpec::power_exp(0.1), MeanParams::make(2.0), s, 3), Error);
}
