#include "entlab/numerics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>

namespace entlab {

// ---------------------------------------------------------------------------
// LogScalar

LogScalar LogScalar::from_log(double log_mag, int sign)
{
    if (std::isnan(log_mag)) {
        throw Error(ErrorKind::InvalidArgument, "LogScalar from NaN log magnitude");
    }
    LogScalar r;
    if (sign == 0 || log_mag == kNegInf) {
        return r;
    }
    r.sign_ = sign > 0 ? 1 : -1;
    r.log_mag_ = log_mag;
    return r;
}

LogScalar LogScalar::from_double(double x)
{
    if (std::isnan(x)) {
        throw Error(ErrorKind::InvalidArgument, "LogScalar from NaN");
    }
    if (x == 0.0) {
        return {};
    }
    return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
}

double LogScalar::to_double() const
{
    return sign_ == 0 ? 0.0 : sign_ * std::exp(log_mag_);
}

LogScalar LogScalar::abs() const
{
    LogScalar r = *this;
    if (r.sign_ != 0) {
        r.sign_ = 1;
    }
    return r;
}

LogScalar LogScalar::pow(double exponent) const
{
    if (sign_ < 0) {
        throw Error(ErrorKind::InvalidArgument, "real power of a negative LogScalar");
    }
    if (exponent == 0.0) {
        return one();
    }
    if (sign_ == 0) {
        return {};
    }
    return from_log(log_mag_ * exponent);
}

LogScalar LogScalar::scaled(double delta) const
{
    if (sign_ == 0) {
        return {};
    }
    return from_log(log_mag_ + delta, sign_);
}

LogScalar LogScalar::operator-() const
{
    LogScalar r = *this;
    r.sign_ = -r.sign_;
    return r;
}

LogScalar operator*(const LogScalar& a, const LogScalar& b)
{
    if (a.sign_ == 0 || b.sign_ == 0) {
        return {};
    }
    return LogScalar::from_log(a.log_mag_ + b.log_mag_, a.sign_ * b.sign_);
}

LogScalar operator/(const LogScalar& a, const LogScalar& b)
{
    if (b.sign_ == 0) {
        throw Error(ErrorKind::InvalidArgument, "LogScalar division by zero");
    }
    if (a.sign_ == 0) {
        return {};
    }
    return LogScalar::from_log(a.log_mag_ - b.log_mag_, a.sign_ * b.sign_);
}

LogScalar operator+(const LogScalar& a, const LogScalar& b)
{
    if (a.sign_ == 0) {
        return b;
    }
    if (b.sign_ == 0) {
        return a;
    }
    const LogScalar& big = a.log_mag_ >= b.log_mag_ ? a : b;
    const LogScalar& small = a.log_mag_ >= b.log_mag_ ? b : a;
    const double d = small.log_mag_ - big.log_mag_; // <= 0
    if (big.sign_ == small.sign_) {
        return LogScalar::from_log(big.log_mag_ + std::log1p(std::exp(d)), big.sign_);
    }
    if (d == 0.0) {
        return {};
    }
    return LogScalar::from_log(big.log_mag_ + std::log1p(-std::exp(d)), big.sign_);
}

std::partial_ordering operator<=>(const LogScalar& a, const LogScalar& b)
{
    if (a.sign_ != b.sign_) {
        return a.sign_ <=> b.sign_;
    }
    if (a.sign_ == 0) {
        return std::partial_ordering::equivalent;
    }
    return a.sign_ > 0 ? a.log_mag_ <=> b.log_mag_ : b.log_mag_ <=> a.log_mag_;
}

LogScalar max(const LogScalar& a, const LogScalar& b) { return a < b ? b : a; }
LogScalar min(const LogScalar& a, const LogScalar& b) { return b < a ? b : a; }

// ---------------------------------------------------------------------------
// LogComplex

LogComplex LogComplex::from_complex(std::complex<double> z)
{
    const double m = std::abs(z);
    LogComplex r;
    if (m == 0.0) {
        return r;
    }
    r.log_mag_ = std::log(m);
    r.unit_ = z / m;
    return r;
}

LogComplex LogComplex::from_polar(double log_mag, double phase)
{
    LogComplex r;
    if (log_mag == kNegInf) {
        return r;
    }
    r.log_mag_ = log_mag;
    r.unit_ = phase == 0.0 ? std::complex<double>(1.0, 0.0)
                           : std::complex<double>(std::cos(phase), std::sin(phase));
    return r;
}

LogComplex LogComplex::from_scalar(const LogScalar& x)
{
    LogComplex r;
    if (x.is_zero()) {
        return r;
    }
    r.log_mag_ = x.log_mag();
    r.unit_ = {static_cast<double>(x.sign()), 0.0};
    return r;
}

LogScalar LogComplex::real() const
{
    if (is_zero()) {
        return {};
    }
    return LogScalar::from_double(unit_.real()).scaled(log_mag_);
}

LogScalar LogComplex::imag() const
{
    if (is_zero()) {
        return {};
    }
    return LogScalar::from_double(unit_.imag()).scaled(log_mag_);
}

std::complex<double> LogComplex::to_complex() const
{
    return is_zero() ? std::complex<double>{} : unit_ * std::exp(log_mag_);
}

LogComplex operator*(const LogComplex& a, const LogComplex& b)
{
    if (a.is_zero() || b.is_zero()) {
        return {};
    }
    LogComplex r;
    const std::complex<double> u = a.unit_ * b.unit_;
    const double m = std::abs(u);
    r.log_mag_ = a.log_mag_ + b.log_mag_ + std::log(m);
    r.unit_ = u / m;
    return r;
}

LogComplex operator+(const LogComplex& a, const LogComplex& b)
{
    if (a.is_zero()) {
        return b;
    }
    if (b.is_zero()) {
        return a;
    }
    const double top = std::max(a.log_mag_, b.log_mag_);
    const std::complex<double> u =
        a.unit_ * std::exp(a.log_mag_ - top) + b.unit_ * std::exp(b.log_mag_ - top);
    const double m = std::abs(u);
    LogComplex r;
    if (m == 0.0) {
        return r;
    }
    r.log_mag_ = top + std::log(m);
    r.unit_ = u / m;
    return r;
}

// ---------------------------------------------------------------------------
// BoundedValue

BoundedValue::BoundedValue(LogScalar lower, LogScalar upper) : lower_(lower), upper_(upper)
{
    if (upper_ < lower_) {
        throw Error(ErrorKind::InvalidArgument, "BoundedValue with lower > upper");
    }
}

double BoundedValue::midpoint() const
{
    // Halve before adding so that brackets near the double limit stay finite.
    return (lower_.scaled(-std::numbers::ln2) + upper_.scaled(-std::numbers::ln2)).to_double();
}

bool BoundedValue::contains(double x) const
{
    const LogScalar v = LogScalar::from_double(x);
    return lower_ <= v && v <= upper_;
}

BoundedValue BoundedValue::nonneg_pow(double exponent) const
{
    const LogScalar lo = lower_.sign() < 0 ? LogScalar::zero() : lower_;
    const LogScalar hi = upper_.sign() < 0 ? LogScalar::zero() : upper_;
    return {lo.pow(exponent), hi.pow(exponent)};
}

// ---------------------------------------------------------------------------
// Factorials

namespace {

constexpr std::uint64_t kExactFactorialLimit = 256;

const std::array<long double, kExactFactorialLimit>& ln_factorial_table()
{
    static const auto table = [] {
        std::array<long double, kExactFactorialLimit> t{};
        long double acc = 0.0L;
        t[0] = 0.0L;
        for (std::uint64_t k = 1; k < kExactFactorialLimit; ++k) {
            acc += std::log(static_cast<long double>(k));
            t[k] = acc;
        }
        return t;
    }();
    return table;
}

// Stirling series of ln Gamma(n+1) - (n ln n - n + 0.5 ln 2 pi n). The series
// alternates; the first omitted term 1/(1188 n^9) is below 1e-24 at n = 256.
long double stirling_series(long double n)
{
    const long double inv = 1.0L / n;
    const long double inv2 = inv * inv;
    return inv * (1.0L / 12.0L -
                  inv2 * (1.0L / 360.0L - inv2 * (1.0L / 1260.0L - inv2 * (1.0L / 1680.0L))));
}

long double stirling_leading(long double n)
{
    constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    return n * std::log(n) - n + 0.5L * std::log(two_pi * n);
}

} // namespace

double ln_factorial(std::uint64_t n)
{
    if (n < kExactFactorialLimit) {
        return static_cast<double>(ln_factorial_table()[n]);
    }
    const auto x = static_cast<long double>(n);
    return static_cast<double>(stirling_leading(x) + stirling_series(x));
}

LogScalar log_factorial(std::uint64_t n)
{
    return LogScalar::from_log(ln_factorial(n));
}

double stirling_remainder(std::uint64_t n)
{
    require(n >= 1, "stirling_remainder needs n >= 1");
    const auto x = static_cast<long double>(n);
    if (n < kExactFactorialLimit) {
        return static_cast<double>(ln_factorial_table()[n] - stirling_leading(x));
    }
    return static_cast<double>(stirling_series(x));
}

double log_expm1(double x)
{
    if (x <= 0.0) {
        return kNegInf;
    }
    if (x > 30.0) {
        return x + std::log1p(-std::exp(-x));
    }
    return std::log(std::expm1(x));
}

// ---------------------------------------------------------------------------
// Accumulation

void LogAccumulator::add(const LogScalar& term)
{
    if (term.is_zero()) {
        return;
    }
    ++count_;
    abs_total_ += term.abs();
    max_abs_log_ = std::max(max_abs_log_, std::fabs(term.log_mag()));
    stack_.emplace_back(term, 0);
    while (stack_.size() >= 2 && stack_[stack_.size() - 1].second == stack_[stack_.size() - 2].second) {
        auto [top, level] = stack_.back();
        stack_.pop_back();
        stack_.back().first = stack_.back().first + top;
        stack_.back().second = level + 1;
    }
}

LogScalar LogAccumulator::total() const
{
    LogScalar acc;
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
        acc = it->first + acc;
    }
    return acc;
}

LogScalar LogAccumulator::rounding_bound() const
{
    if (count_ <= 1) {
        return {};
    }
    // Each log-domain merge perturbs the result by a few ulps of its log
    // magnitude; a term passes through at most depth + stack-size merges.
    const int depth = std::bit_width(count_ - 1);
    const double factor = 8.0 * (depth + 2) * kEps * (max_abs_log_ + 1.0);
    return abs_total_ * LogScalar::from_double(factor);
}

// ---------------------------------------------------------------------------
// Tail-bounded series

namespace {

double majorant_at(const TermStream& s, std::uint64_t n)
{
    if (s.log_majorant) {
        return s.log_majorant(n);
    }
    return s.term(n).log_mag();
}

double ratio_at(const TermStream& s, std::uint64_t n)
{
    if (s.log_ratio) {
        return s.log_ratio(n);
    }
    const double a = majorant_at(s, n);
    const double b = majorant_at(s, n + 1);
    if (a == kNegInf) {
        return b == kNegInf ? kNegInf : std::numeric_limits<double>::infinity();
    }
    return b - a;
}

} // namespace

std::uint64_t certify_decay(const TermStream& s, const RatioCertificate& cert)
{
    require(cert.rho > 0.0 && cert.rho < 1.0, "ratio certificate needs 0 < rho < 1");
    require(cert.window >= 1, "ratio certificate window must be positive");
    const double log_rho = std::log(cert.rho);
    std::uint64_t k = cert.scan_start;
    int run = 0;
    double prev = std::numeric_limits<double>::infinity();
    for (std::uint64_t step = 0; step < cert.scan_budget; ++step, ++k) {
        const double r = ratio_at(s, k);
        const bool small = !std::isnan(r) && r <= log_rho;
        // Ratios are asserted non-increasing up to a few ulps of evaluation noise.
        const double slack = std::isfinite(prev) ? 4.0 * kEps * (1.0 + std::fabs(prev)) : 0.0;
        const bool monotone = r == kNegInf || r <= prev + slack;
        if (small && monotone) {
            ++run;
        } else {
            run = small ? 1 : 0;
        }
        if (run >= cert.window) {
            return k + 1 - static_cast<std::uint64_t>(cert.window);
        }
        prev = r;
        if (k == std::numeric_limits<std::uint64_t>::max()) {
            break;
        }
    }
    throw Error(ErrorKind::NoDecay, "term ratios did not settle below rho within the scan budget");
}

DriveResult drive_series(const TermStream& s, const RatioCertificate& cert, const SumTolerance& tol,
                         const std::function<void(std::uint64_t)>& visit,
                         const std::function<bool(double)>& enough)
{
    const std::uint64_t certified = certify_decay(s, cert);
    const double log_geometric = -std::log1p(-cert.rho);
    DriveResult out;
    std::uint64_t n = s.start;
    for (;;) {
        const std::optional<std::uint64_t> next = s.next_support ? s.next_support(n) : n;
        if (!next) {
            out.log_tail = kNegInf;
            return out;
        }
        const std::uint64_t k = *next;
        if (k >= certified) {
            const double lt = majorant_at(s, k) + log_geometric;
            if (enough(lt)) {
                out.log_tail = lt;
                return out;
            }
        }
        if (k > tol.index_cap) {
            throw Error(ErrorKind::InfeasibleLevel,
                        "series needs index " + std::to_string(k) + " beyond the index cap " +
                            std::to_string(tol.index_cap));
        }
        if (out.terms >= tol.max_terms) {
            throw Error(ErrorKind::ToleranceUnreachable, "term budget exhausted before the tail bound shrank");
        }
        visit(k);
        ++out.terms;
        out.last_index = k;
        if (k == std::numeric_limits<std::uint64_t>::max()) {
            out.log_tail = kNegInf;
            return out;
        }
        n = k + 1;
    }
}

namespace {

BoundedValue assemble(const TermStream& s, const LogAccumulator& acc, const LogScalar& err_mass,
                      double log_tail)
{
    const LogScalar sum = acc.total();
    const LogScalar err = err_mass + acc.rounding_bound();
    const LogScalar tail = LogScalar::from_log(log_tail);
    if (s.nonnegative) {
        LogScalar lower = sum - err;
        if (lower.sign() < 0) {
            lower = LogScalar::zero();
        }
        return {lower, sum + tail + err};
    }
    return {sum - tail - err, sum + tail + err};
}

} // namespace

BoundedValue bounded_sum(const TermStream& s, const RatioCertificate& cert, const SumTolerance& tol)
{
    LogAccumulator acc;
    LogScalar err_mass;
    auto visit = [&](std::uint64_t n) {
        acc.add(s.term(n));
        if (s.log_error) {
            err_mass += LogScalar::from_log(s.log_error(n));
        }
    };
    auto enough = [&](double log_tail) {
        if (log_tail == kNegInf) {
            return true;
        }
        const double rel_target = tol.rel > 0.0 ? acc.total().abs().log_mag() + std::log(tol.rel) : kNegInf;
        const double abs_target = tol.abs > 0.0 ? std::log(tol.abs) : kNegInf;
        return log_tail <= std::max(rel_target, abs_target);
    };
    const DriveResult r = drive_series(s, cert, tol, visit, enough);
    return assemble(s, acc, err_mass, r.log_tail);
}

BoundedValue truncated_sum(const TermStream& s, const RatioCertificate& cert, std::uint64_t n_terms)
{
    LogAccumulator acc;
    LogScalar err_mass;
    std::uint64_t done = 0;
    auto visit = [&](std::uint64_t n) {
        acc.add(s.term(n));
        if (s.log_error) {
            err_mass += LogScalar::from_log(s.log_error(n));
        }
        ++done;
    };
    auto enough = [&](double) { return done >= n_terms; };
    const DriveResult r = drive_series(s, cert, {}, visit, enough);
    return assemble(s, acc, err_mass, r.log_tail);
}

} // namespace entlab
