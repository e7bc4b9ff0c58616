#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/bessel.hpp>
#include <doctest.h>

#include "entlab/entire.hpp"
#include "entlab/errors.hpp"

using namespace entlab;

namespace {

std::complex<double> horner(const std::vector<std::complex<double>>& a, std::complex<double> z)
{
    std::complex<double> acc = 0.0;
    for (std::size_t k = a.size(); k-- > 0;) {
        acc = acc * z + a[k];
    }
    return acc;
}

std::vector<std::complex<double>> random_poly(std::uint64_t seed, std::size_t degree)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<std::complex<double>> a(degree + 1);
    for (auto& x : a) {
        const double re = unif(rng);
        x = {re, unif(rng)};
    }
    return a;
}

// (D^j f)(x) for the level-1 gap function with omega_n = n^eps, summed
// directly over B_1 = [201, 40401]; later blocks add less than 1e-300.
long double gap_derivative_at(std::uint64_t j, long double x, double eps)
{
    long double sum = 0.0L;
    for (std::uint64_t n = 201; n <= 40401; ++n) {
        const long double k = static_cast<long double>(n - j);
        const long double t = std::exp(eps * std::log(static_cast<long double>(n)) + k * std::log(x) - std::lgamma(k + 1.0L));
        sum += t;
        if (t < 1e-40L * sum) {
            break;
        }
    }
    return sum;
}

const GapSchedule& schedule2()
{
    static const GapSchedule s = compute_schedule(2);
    return s;
}

} // namespace

TEST_CASE("omega specifications")
{
    CHECK(OmegaSpec::power(0.1).log_value(1000) == doctest::Approx(0.1 * std::log(1000.0)));
    CHECK(OmegaSpec::log_power(2.0).log_value(9) == doctest::Approx(2.0 * std::log(std::log(10.0))));
    CHECK(OmegaSpec::power(0.3).growth_exponent() == doctest::Approx(0.3));
    CHECK(OmegaSpec::log_power(2.0).growth_exponent() == 0.0);
    const OmegaSpec t = OmegaSpec::table({0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0});
    CHECK(t.log_value(3) == doctest::Approx(std::log(2.0)));
    CHECK(t.log_value(100) == std::numeric_limits<double>::infinity());
    CHECK(std::isnan(t.growth_exponent()));
    CHECK_THROWS_AS(OmegaSpec::table({5.0, 4.0, 3.0, 2.0, 1.0}), Error);
    CHECK_THROWS_AS(OmegaSpec::table({1.0, -1.0}), Error);
}

TEST_CASE("gap function coefficients are min(omega_n, n) on B only")
{
    const GapSchedule& s = schedule2();
    const EntireFunction f = build_irregular(OmegaSpec::power(0.1), s);
    CHECK(f.kind() == EntireFunction::Kind::Gap);
    CHECK(f.coeff(200).is_zero());
    CHECK(f.coeff(50).is_zero());
    for (const std::uint64_t n : {201ULL, 5000ULL, 40401ULL, 3264643209ULL}) {
        CHECK(f.coeff(n).to_complex().real() == doctest::Approx(std::pow(static_cast<double>(n), 0.1)));
    }
    CHECK(f.coeff(40402).is_zero());
    CHECK(*f.next_support(0) == 201);
    CHECK(*f.next_support(40402) == 3264643209ULL);
    CHECK(f.nonnegative_coefficients());
    CHECK(f.schedule() == &*f.schedule());

    // A table with small entries: c_n = min(omega_n, n) and omega_n = inf past the table.
    std::vector<double> values(300, 0.5);
    values[256] = 1.0;
    for (std::size_t i = 257; i < values.size(); ++i) {
        values[i] = 1.0;
    }
    const EntireFunction g = build_irregular(OmegaSpec::table(values), s);
    CHECK(g.coeff(201).to_complex().real() == doctest::Approx(0.5));
    CHECK(g.coeff(299).to_complex().real() == doctest::Approx(1.0));
    CHECK(g.coeff(300).to_complex().real() == doctest::Approx(300.0));
}

TEST_CASE("logarithmic family")
{
    const EntireFunction f = build_log_family(2.0, schedule2());
    CHECK(f.kind() == EntireFunction::Kind::LogFamily);
    const double l = std::log(1001.0);
    CHECK(f.coeff(1000).to_complex().real() == doctest::Approx(l * l));
    CHECK(f.coeff(100).is_zero());
    CHECK_THROWS_AS(build_log_family(0.0, schedule2()), Error);
}

TEST_CASE("polynomials store f^(n)(0) = n! a_n")
{
    const EntireFunction p = EntireFunction::polynomial({{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}, {0.0, 0.0}});
    CHECK(p.kind() == EntireFunction::Kind::Polynomial);
    CHECK(*p.degree() == 2);
    CHECK(p.coeff(2).to_complex().real() == doctest::Approx(6.0));
    CHECK(p.coeff(3).is_zero());
    CHECK(p.is_polynomial());
    CHECK(EntireFunction::monomial(4).coeff(4).to_complex().real() == doctest::Approx(24.0));
    CHECK(EntireFunction::zero().is_polynomial());
    CHECK_FALSE(EntireFunction::exponential().is_polynomial());
}

TEST_CASE("derivatives shift coefficients")
{
    const EntireFunction f = build_irregular(OmegaSpec::power(0.1), schedule2());
    const EntireFunction d = derivative(f, 50);
    CHECK(d.coeff(151).to_complex().real() == doctest::Approx(f.coeff(201).to_complex().real()));
    CHECK(d.coeff(150).is_zero());
    const EntireFunction dd = derivative(d, 7);
    CHECK(dd.coeff(144).to_complex().real() == doctest::Approx(f.coeff(201).to_complex().real()));
    CHECK(derivative(f, 0).same_as(f));

    const EntireFunction e = EntireFunction::exponential();
    CHECK(derivative(e, 1000).kind() == EntireFunction::Kind::Exponential);

    const EntireFunction p = EntireFunction::polynomial({{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}});
    CHECK(derivative(p, 3).is_polynomial());
    CHECK(derivative(p, 3).coeff(0).is_zero());
    CHECK(derivative(p, 1).coeff(1).to_complex().real() == doctest::Approx(2.0));
}

TEST_CASE("linear combinations")
{
    const EntireFunction f1 = build_log_family(1.0, schedule2());
    const EntireFunction f2 = build_log_family(2.0, schedule2());
    const EntireFunction F = combine({{2.0, 0.0}, {-3.0, 0.0}}, {f1, f2});
    const double l = std::log(1001.0);
    CHECK(F.coeff(1000).to_complex().real() == doctest::Approx(2.0 * l - 3.0 * l * l));
    CHECK_THROWS_AS(combine({{1.0, 0.0}}, {f1, f2}), Error);
    const EntireFunction P = combine({{1.0, 0.0}, {1.0, 0.0}},
                                     {EntireFunction::monomial(1), EntireFunction::polynomial({{0.0, 0.0}, {1.0, 0.0}})});
    CHECK(P.is_polynomial());
    CHECK(P.coeff(1).to_complex().real() == doctest::Approx(2.0));
}

TEST_CASE("exponential evaluation matches std::exp")
{
    const EntireFunction e = EntireFunction::exponential();
    for (const std::complex<double> z : {std::complex<double>(1.0, 0.0), {-20.0, 0.0}, {3.0, 4.0}, {0.0, 50.0}}) {
        const ComplexBracket v = eval(e, z);
        const std::complex<double> ref = std::exp(z);
        const double scale = std::exp(std::abs(z));
        CHECK(std::fabs(v.re.midpoint() - ref.real()) <= 1e-10 * scale);
        CHECK(std::fabs(v.im.midpoint() - ref.imag()) <= 1e-10 * scale);
        CHECK(v.re.lower_value() <= ref.real() + 1e-15 * scale);
        CHECK(v.re.upper_value() >= ref.real() - 1e-15 * scale);
    }
    EvalOptions capped;
    capped.index_cap = 100;
    try {
        (void)eval(e, {1000.0, 0.0}, 1e-10, capped);
        FAIL("expected InfeasibleLevel");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::InfeasibleLevel);
    }
}

TEST_CASE("polynomial evaluation matches Horner")
{
    const auto a = random_poly(7, 30);
    const EntireFunction p = EntireFunction::polynomial(a);
    for (const std::complex<double> z : {std::complex<double>(0.3, -0.2), {1.0, 1.0}, {-2.0, 0.5}}) {
        const ComplexBracket v = eval(p, z);
        const std::complex<double> ref = horner(a, z);
        double mass = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            mass += std::abs(a[k]) * std::pow(std::abs(z), static_cast<double>(k));
        }
        CHECK(std::fabs(v.re.midpoint() - ref.real()) <= 1e-10 * mass);
        CHECK(std::fabs(v.im.midpoint() - ref.imag()) <= 1e-10 * mass);
    }
}

TEST_CASE("gap function and its derivatives at 1 match direct summation")
{
    const EntireFunction f = build_irregular(OmegaSpec::power(0.1), schedule2());
    for (const std::uint64_t j : {0ULL, 10ULL, 55ULL, 100ULL}) {
        const double ref = static_cast<double>(gap_derivative_at(j, 1.0L, 0.1));
        const ComplexBracket v = eval(derivative(f, j), {1.0, 0.0});
        CHECK(v.re.midpoint() == doctest::Approx(ref).epsilon(1e-9));
        CHECK(std::fabs(v.im.midpoint()) <= 1e-12 * ref);
    }
}

TEST_CASE("coefficient power sums")
{
    // sum r^{2n} / (n!)^2 = I_0(2r)
    for (const double r : {0.5, 3.0, 40.0}) {
        const BoundedValue v = coefficient_power_sum(EntireFunction::exponential(), r, 2.0);
        CHECK(v.midpoint() == doctest::Approx(boost::math::cyl_bessel_i(0, 2.0 * r)).epsilon(1e-9));
    }
    const BoundedValue one = coefficient_power_sum(EntireFunction::exponential(), 2.0, 1.0);
    CHECK(one.midpoint() == doctest::Approx(std::exp(2.0)).epsilon(1e-10));
}

TEST_CASE("circle maxima of polynomials")
{
    const EntireFunction p = EntireFunction::polynomial({{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}});
    for (const double r : {0.5, 1.0, 3.0}) {
        const CircleSup c = circle_sup(p, r, 1e-10);
        CHECK(c.converged);
        CHECK(c.value.lower_value() <= r * r + 1.0);
        CHECK(c.value.upper_value() >= r * r + 1.0);
        CHECK(c.value.upper_value() - c.value.lower_value() <= 1e-9 * (r * r + 1.0));
    }
    const auto a = random_poly(3, 20);
    const EntireFunction q = EntireFunction::polynomial(a);
    double dense = 0.0;
    const std::size_t n = 200'000;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        dense = std::max(dense, std::abs(horner(a, std::polar(1.5, t))));
    }
    const CircleSup c = circle_sup(q, 1.5, 1e-10);
    CHECK(c.converged);
    CHECK(c.value.upper_value() >= dense);
    CHECK(c.value.lower_value() <= dense * (1.0 + 1e-9));
    CHECK(c.value.midpoint() == doctest::Approx(dense).epsilon(1e-6));
}

TEST_CASE("sup norms on disks")
{
    CHECK(sup_norm(EntireFunction::exponential(), 3).contains(std::exp(3.0)));
    CHECK(sup_norm(EntireFunction::monomial(2), 4).midpoint() == doctest::Approx(16.0));
    CHECK_THROWS_AS(sup_norm(EntireFunction::exponential(), 0), Error);
}

TEST_CASE("Frechet distance")
{
    const EntireFunction z = EntireFunction::monomial(1);
    const EntireFunction e = EntireFunction::exponential();
    CHECK(frechet_distance(e, e, 20) == 0.0);
    CHECK(frechet_distance(e, EntireFunction::zero(), 20) <= 1.0);
    // sup_{|w| <= j} |w / k| = j / k
    for (const int k : {1, 3, 10}) {
        double ref = 0.0;
        for (int j = 1; j <= 30; ++j) {
            ref += std::ldexp(std::min(1.0, static_cast<double>(j) / k), -j);
        }
        CHECK(frechet_distance(combine({{1.0 / k, 0.0}}, {z}), EntireFunction::zero(), 30) ==
              doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("block sampling")
{
    CHECK(sample_block(5, 8, 10) == std::vector<std::uint64_t>{5, 6, 7, 8});
    const auto s = sample_block(0, 1000, 11);
    CHECK(s.size() == 11);
    CHECK(s.front() == 0);
    CHECK(s.back() == 1000);
    CHECK(s[5] == 500);
    const auto big = sample_block(UINT64_MAX - 10, UINT64_MAX, 3);
    CHECK(big.back() == UINT64_MAX);
}

TEST_CASE("irregularity probe at level 1")
{
    const GapSchedule& s = schedule2();
    const EntireFunction f = build_irregular(OmegaSpec::power(0.1), s);
    const ProbeReport r = irregularity_probe(f, s, 1, 1);
    CHECK(r.decay_records.size() == 91);
    for (const auto& rec : r.decay_records) {
        CHECK(rec.value.upper_value() < 1.0);
        const double ref = static_cast<double>(gap_derivative_at(rec.index, 1.0L, 0.1));
        CHECK(rec.value.midpoint() == doctest::Approx(ref).epsilon(1e-7));
    }
    CHECK(r.growth_records.size() == 128);
    for (const auto& rec : r.growth_records) {
        CHECK(rec.value.midpoint() == doctest::Approx(std::pow(static_cast<double>(rec.index), 0.1)));
    }
    CHECK(r.to_csv().rfind("index,set,value_lower,value_upper\n", 0) == 0);
    CHECK_THROWS_AS(irregularity_probe(f, s, 2, 1), Error);
    CHECK_THROWS_AS(irregularity_probe(f, s, 1, 3), Error);
}

TEST_CASE("combination growth for 2 f_1 - 3 f_2")
{
    const CombinationGrowth g = combination_growth({{2.0, 0.0}, {-3.0, 0.0}}, {1.0, 2.0}, schedule2());
    CHECK(g.dominant == 1);
    CHECK(g.holds);
    CHECK_FALSE(g.samples.empty());
    // 3 L^2 - 2 L >= 1.5 L^2 iff L >= 4/3, i.e. n >= e^{4/3} - 1 = 2.79
    CHECK(g.threshold <= 201);
    for (const auto n : g.samples) {
        CHECK(n >= g.threshold);
    }
}
