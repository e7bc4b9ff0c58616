#include "entlab/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "entlab/report_io.hpp"

namespace entlab {

namespace {

constexpr long double kLdEps = std::numeric_limits<long double>::epsilon();
const long double kHalfLog2Pi = 0.5L * std::log(2.0L * std::numbers::pi_v<long double>);

// log of n^{1+n/2} N^n / n!, rewritten through Stirling so that the
// n ln n contributions cancel symbolically rather than numerically.
long double log_tail_term(std::uint64_t n, long double log_N)
{
    const auto x = static_cast<long double>(n);
    return (0.5L - 0.5L * x) * std::log(x) + x * (1.0L + log_N) - kHalfLog2Pi -
           static_cast<long double>(stirling_remainder(n));
}

// Absolute error bound on log_tail_term, as a log-domain offset.
long double log_tail_slack(std::uint64_t n, long double log_N)
{
    const auto x = static_cast<long double>(n);
    const long double scale = 0.5L * x * std::log(x) + x * (1.0L + std::fabs(log_N)) + 4.0L;
    return 16.0L * kLdEps * scale + 8.0L * kEps;
}

// log(t_{n+1} / t_n) for the tail terms.
double log_tail_ratio(std::uint64_t n, double log_N)
{
    const auto x = static_cast<double>(n);
    return (1.0 + 0.5 * x) * std::log1p(1.0 / x) - 0.5 * std::log(x + 1.0) + log_N;
}

BoundedValue tail_sum_u64(std::uint64_t N, std::uint64_t k)
{
    const long double log_N = std::log(static_cast<long double>(N));
    const double e = std::numbers::e;
    const double threshold = std::ceil(4.0 * static_cast<double>(N) * static_cast<double>(N) * e * e);

    TermStream s;
    s.start = k;
    s.nonnegative = true;
    s.term = [=](std::uint64_t n) { return LogScalar::from_log(static_cast<double>(log_tail_term(n, log_N))); };
    s.log_majorant = [=](std::uint64_t n) {
        return static_cast<double>(log_tail_term(n, log_N) + log_tail_slack(n, log_N));
    };
    s.log_ratio = [=](std::uint64_t n) { return log_tail_ratio(n, static_cast<double>(log_N)); };
    s.log_error = [=](std::uint64_t n) {
        const long double slack = log_tail_slack(n, log_N);
        return static_cast<double>(log_tail_term(n, log_N) + std::log(std::expm1(slack)));
    };

    RatioCertificate cert;
    cert.scan_start = std::max<std::uint64_t>(k, static_cast<std::uint64_t>(threshold));
    return bounded_sum(s, cert);
}

// Indices beyond 64 bits: one-term bracket from Stirling's inequalities
// 0 < R(n) < 1/(12n) and the ratio bound t_{n+1}/t_n <= e^{1/2 + 1/(2n)} N / sqrt(n).
BoundedValue tail_sum_huge(std::uint64_t N, const BigInt& k)
{
    const long double kd = k.convert_to<long double>();
    const long double lo_n = kd * (1.0L - 4.0L * kLdEps);
    const long double hi_n = kd * (1.0L + 4.0L * kLdEps);
    const long double log_N = std::log(static_cast<long double>(N));
    auto stirling_free = [&](long double x) {
        return (0.5L - 0.5L * x) * std::log(x) + x * (1.0L + log_N) - kHalfLog2Pi;
    };
    auto slack = [&](long double x) {
        return 16.0L * kLdEps * (0.5L * x * std::log(x) + x * (1.0L + log_N) + 4.0L);
    };
    // The terms decrease in n here, so the rounded-down index bounds t_k from above.
    const long double log_upper_term = stirling_free(lo_n) + slack(lo_n);
    const long double log_lower_term = stirling_free(hi_n) - 1.0L / (12.0L * hi_n) - slack(hi_n);
    const long double log_rho = 0.5L + 0.5L / lo_n + log_N - 0.5L * std::log(lo_n);
    if (log_rho >= 0.0L) {
        throw Error(ErrorKind::NoDecay, "tail ratio bound not below 1");
    }
    const long double log_geom = -std::log(-std::expm1(log_rho));
    return {LogScalar::from_log(static_cast<double>(log_lower_term)),
            LogScalar::from_log(static_cast<double>(log_upper_term + log_geom))};
}

} // namespace

std::uint64_t saturate_u64(const BigInt& n)
{
    static const BigInt cap = std::numeric_limits<std::uint64_t>::max();
    if (n <= 0) {
        return 0;
    }
    return n >= cap ? std::numeric_limits<std::uint64_t>::max() : n.convert_to<std::uint64_t>();
}

BoundedValue tail_sum(std::uint64_t N, const BigInt& k)
{
    require(N >= 1, "tail_sum needs N >= 1");
    require(k >= 1, "tail_sum needs k >= 1");
    // Keep a margin below 2^64 for the certification window past k.
    static const BigInt engine_limit = BigInt(1) << 63;
    if (k < engine_limit) {
        return tail_sum_u64(N, k.convert_to<std::uint64_t>());
    }
    return tail_sum_huge(N, k);
}

GapSchedule compute_schedule(std::size_t levels, const ScheduleOptions& options)
{
    GapSchedule s;
    s.levels = levels;
    BigInt floor = 0;  // beta_{N-1}^2, with beta_0^2 := 0
    for (std::size_t level = 1; level <= levels; ++level) {
        const auto N = static_cast<std::uint64_t>(level);
        const double log_target = -std::log(static_cast<double>(N));
        BigInt k = floor + 1;
        std::uint64_t examined = 0;
        BoundedValue tail;
        for (;;) {
            if (examined++ >= options.scan_budget) {
                throw Error(ErrorKind::ScanBudgetExceeded,
                            "no admissible alpha within " + std::to_string(options.scan_budget) +
                                " candidates at level " + std::to_string(level));
            }
            tail = tail_sum(N, k);
            if (tail.upper().log_mag() < log_target) {
                break;
            }
            ++k;
        }
        const BigInt beta = 2 * k * k + 1;
        s.alphas.push_back(k);
        s.betas.push_back(beta);
        s.tails.push_back(tail);
        floor = beta * beta;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Index sets

IndexSet::IndexSet(std::vector<Interval> intervals) : intervals_(std::move(intervals))
{
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        require(intervals_[i].lo <= intervals_[i].hi, "interval with lo > hi");
        if (i > 0) {
            require(intervals_[i - 1].hi < intervals_[i].lo, "intervals must be disjoint and increasing");
        }
    }
}

bool IndexSet::contains(const BigInt& n) const
{
    auto it = std::partition_point(intervals_.begin(), intervals_.end(),
                                   [&](const Interval& iv) { return iv.hi < n; });
    return it != intervals_.end() && it->lo <= n;
}

BigInt IndexSet::count_upto(const BigInt& n) const
{
    BigInt total = 0;
    for (const auto& iv : intervals_) {
        if (iv.lo > n) {
            break;
        }
        const BigInt lo = iv.lo < 1 ? BigInt(1) : iv.lo;
        const BigInt hi = iv.hi < n ? iv.hi : n;
        if (hi >= lo) {
            total += hi - lo + 1;
        }
    }
    return total;
}

std::optional<BigInt> IndexSet::next_member(const BigInt& n) const
{
    auto it = std::partition_point(intervals_.begin(), intervals_.end(),
                                   [&](const Interval& iv) { return iv.hi < n; });
    if (it == intervals_.end()) {
        return std::nullopt;
    }
    return it->lo > n ? it->lo : n;
}

bool IndexSet::intersects(const IndexSet& other) const
{
    std::size_t i = 0;
    std::size_t j = 0;
    const auto& a = intervals_;
    const auto& b = other.intervals_;
    while (i < a.size() && j < b.size()) {
        if (a[i].hi < b[j].lo) {
            ++i;
        } else if (b[j].hi < a[i].lo) {
            ++j;
        } else {
            return true;
        }
    }
    return false;
}

std::pair<IndexSet, IndexSet> index_sets(const GapSchedule& s)
{
    std::vector<Interval> a;
    std::vector<Interval> b;
    for (std::size_t i = 0; i < s.alphas.size(); ++i) {
        a.push_back({s.alphas[i], s.alphas[i] * s.alphas[i]});
        b.push_back({s.betas[i], s.betas[i] * s.betas[i]});
    }
    return {IndexSet(std::move(a)), IndexSet(std::move(b))};
}

Rational prefix_density(const IndexSet& s, const BigInt& n)
{
    require(n >= 1, "prefix_density needs n >= 1");
    return Rational(s.count_upto(n), n);
}

double upper_density_estimate(const IndexSet& s, const std::vector<BigInt>& checkpoints)
{
    require(!checkpoints.empty(), "upper_density_estimate needs checkpoints");
    for (std::size_t i = 1; i < checkpoints.size(); ++i) {
        require(checkpoints[i - 1] < checkpoints[i], "checkpoints must be increasing");
    }
    Rational best = 0;
    for (const auto& c : checkpoints) {
        best = std::max(best, prefix_density(s, c));
    }
    return best.convert_to<double>();
}

std::vector<BigInt> block_checkpoints(const std::vector<BigInt>& starts)
{
    std::vector<BigInt> out;
    out.reserve(starts.size());
    for (const auto& x : starts) {
        out.push_back(x * x);
    }
    return out;
}

std::string to_json(const GapSchedule& s)
{
    auto list = [](const std::vector<BigInt>& xs) {
        std::string out = "[";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            out += (i ? "," : "") + xs[i].str();
        }
        return out + "]";
    };
    std::string out = "{\"levels\":" + std::to_string(s.levels) + ",\"alphas\":" + list(s.alphas) +
                      ",\"betas\":" + list(s.betas);
    if (!s.tails.empty()) {
        out += ",\"tails\":[";
        for (std::size_t i = 0; i < s.tails.size(); ++i) {
            const auto& t = s.tails[i];
            out += (i ? "," : "");
            out += "{\"lower\":" + json_number(t.lower_value()) + ",\"upper\":" + json_number(t.upper_value()) +
                   ",\"log_lower\":" + json_number(t.lower().log_mag()) +
                   ",\"log_upper\":" + json_number(t.upper().log_mag()) + "}";
        }
        out += "]";
    }
    return out + "}";
}

} // namespace entlab
