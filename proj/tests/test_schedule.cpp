#include <cmath>

#include <doctest.h>

#include "entlab/errors.hpp"
#include "entlab/schedule.hpp"

using namespace entlab;

namespace {

// Direct summation of sum_{n >= k} n^{1+n/2} N^n / n!: 10^4 terms in long
// double, then a geometric bound on the rest from the last term ratio.
long double log_term(std::uint64_t N, std::uint64_t n)
{
    const long double x = n;
    return (1.0L + x / 2.0L) * std::log(x) + x * std::log(static_cast<long double>(N)) - std::lgamma(x + 1.0L);
}

long double oracle_log_tail(std::uint64_t N, std::uint64_t k)
{
    const long double base = log_term(N, k);
    long double sum = 0.0L;
    const std::uint64_t count = 10'000;
    for (std::uint64_t n = k; n < k + count; ++n) {
        sum += std::exp(log_term(N, n) - base);
    }
    const long double last = std::exp(log_term(N, k + count) - base);
    const long double ratio = std::exp(log_term(N, k + count + 1) - log_term(N, k + count));
    REQUIRE(ratio < 1.0L);
    return base + std::log(sum + last / (1.0L - ratio));
}

std::uint64_t oracle_alpha(std::uint64_t N, std::uint64_t start)
{
    for (std::uint64_t k = start;; ++k) {
        if (oracle_log_tail(N, k) < -std::log(static_cast<long double>(N))) {
            return k;
        }
    }
}

} // namespace

TEST_CASE("tail sums bracket the direct summation")
{
    // 40-digit values of sum_{n >= k} n^{1+n/2} / n!.
    CHECK(tail_sum(1, 1).contains(15.51925072979023734));
    CHECK(tail_sum(1, 10).contains(0.56399579229803689607));
    CHECK(tail_sum(1, 11).contains(0.28842260005817798954));
    CHECK(tail_sum(1, 9).contains(1.0521654351551797532));
    // Logs of the level-2 tails at 40 digits.
    CHECK(tail_sum(2, 40402).upper().log_mag() == doctest::Approx(-145853.6915947844968).epsilon(1e-13));
    CHECK(tail_sum(2, 1000).lower().log_mag() == doctest::Approx(-1758.0854597977070197).epsilon(1e-13));
    for (std::uint64_t k : {1ULL, 5ULL, 30ULL, 200ULL}) {
        const auto t = tail_sum(3, k);
        const double oracle = static_cast<double>(oracle_log_tail(3, k));
        CHECK(t.lower().log_mag() <= oracle + 1e-12 * std::fabs(oracle) + 1e-12);
        CHECK(t.upper().log_mag() >= oracle - 1e-12 * std::fabs(oracle) - 1e-12);
        CHECK(t.upper().log_mag() - t.lower().log_mag() < 1e-9);
    }
}

TEST_CASE("tail sums decrease in k, including past 64-bit indices")
{
    const BigInt huge = BigInt(1) << 80;
    const auto a = tail_sum(2, huge);
    const auto b = tail_sum(2, 2 * huge);
    CHECK(std::isfinite(a.upper().log_mag()));
    CHECK(b.upper() < a.upper());
    CHECK(a.upper().log_mag() < -1e24);
    CHECK_THROWS_AS(tail_sum(0, 5), Error);
}

TEST_CASE("schedule matches a brute-force minimality scan")
{
    const GapSchedule s = compute_schedule(2);
    REQUIRE(s.levels == 2);
    CHECK(s.alphas[0] == oracle_alpha(1, 1));
    CHECK(s.alphas[0] == 10);
    CHECK(s.betas[0] == 201);
    CHECK(s.alphas[1] == oracle_alpha(2, 201 * 201 + 1));
    CHECK(s.alphas[1] == 40402);
    CHECK(s.betas[1] == BigInt(3264643209ULL));
    CHECK(s.tails[0].upper().log_mag() < 0.0);
    CHECK(s.tails[1].upper().log_mag() < -std::log(2.0));
}

TEST_CASE("schedule chain invariants hold to level 4")
{
    const GapSchedule s = compute_schedule(4);
    for (std::size_t i = 0; i < s.levels; ++i) {
        const BigInt& a = s.alphas[i];
        const BigInt& b = s.betas[i];
        CHECK(a < 2 * a * a);
        CHECK(2 * a * a < b);
        CHECK(b < b * b);
        if (i + 1 < s.levels) {
            CHECK(b * b < s.alphas[i + 1]);
        }
        CHECK(s.tails[i].upper().log_mag() < -std::log(static_cast<double>(i + 1)));
    }
    const auto [A, B] = index_sets(s);
    CHECK_FALSE(A.intersects(B));
}

TEST_CASE("scan budget is enforced")
{
    ScheduleOptions tight;
    tight.scan_budget = 5;
    try {
        (void)compute_schedule(1, tight);
        FAIL("expected ScanBudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ScanBudgetExceeded);
    }
}

TEST_CASE("index sets count, search and reject overlaps")
{
    const IndexSet s({{3, 5}, {10, 10}, {20, 29}});
    CHECK(s.contains(3));
    CHECK(s.contains(10));
    CHECK_FALSE(s.contains(6));
    CHECK_FALSE(s.contains(30));
    CHECK(s.count_upto(0) == 0);
    CHECK(s.count_upto(4) == 2);
    CHECK(s.count_upto(100) == 14);
    CHECK(*s.next_member(6) == 10);
    CHECK(*s.next_member(21) == 21);
    CHECK_FALSE(s.next_member(30).has_value());
    CHECK(s.intersects(IndexSet({{29, 40}})));
    CHECK_FALSE(s.intersects(IndexSet({{6, 9}, {11, 19}})));
    CHECK_THROWS_AS(IndexSet({{1, 5}, {5, 8}}), Error);
    CHECK_THROWS_AS(IndexSet({{6, 5}}), Error);
}

TEST_CASE("prefix densities at block ends meet their lower bounds exactly")
{
    const GapSchedule s = compute_schedule(3);
    const auto [A, B] = index_sets(s);
    BigInt count_a = 0;
    BigInt count_b = 0;
    for (std::size_t i = 0; i < s.levels; ++i) {
        const BigInt& a = s.alphas[i];
        const BigInt& b = s.betas[i];
        count_a += a * a - a + 1;
        const Rational da = prefix_density(A, a * a);
        CHECK(da == Rational(count_a, a * a));
        CHECK(da >= 1 - Rational(1, a));
        count_b += b * b - b + 1;
        const Rational db = prefix_density(B, b * b);
        CHECK(db == Rational(count_b, b * b));
        CHECK(db >= 1 - Rational(1, b));
    }
    CHECK(prefix_density(A, 9) == 0);
    CHECK(prefix_density(A, 10) == Rational(1, 10));
    CHECK_THROWS_AS(prefix_density(A, 0), Error);
}

TEST_CASE("density checkpoints")
{
    const GapSchedule s = compute_schedule(2);
    const auto [A, B] = index_sets(s);
    const auto checks = block_checkpoints(s.alphas);
    REQUIRE(checks.size() == 2);
    CHECK(checks[0] == 100);
    const double est = upper_density_estimate(A, checks);
    CHECK(est > 1.0 - 1.0 / 40402.0);
    CHECK(est <= 1.0);
    CHECK_THROWS_AS(upper_density_estimate(A, {}), Error);
}

TEST_CASE("schedule json")
{
    CHECK(to_json(compute_schedule(0)) == R"({"levels":0,"alphas":[],"betas":[]})");
    const std::string one = to_json(compute_schedule(1));
    CHECK(one.rfind(R"({"levels":1,"alphas":[10],"betas":[201],"tails":[{"lower":)", 0) == 0);
}

TEST_CASE("saturating index conversion")
{
    CHECK(saturate_u64(BigInt(-3)) == 0);
    CHECK(saturate_u64(BigInt(77)) == 77);
    CHECK(saturate_u64(BigInt(1) << 70) == UINT64_MAX);
}
