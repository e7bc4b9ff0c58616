#pragma once

// Extended-range scalars and tail-bounded summation.
//
// Every series in the library (Taylor sums, integral means, the gap-schedule
// tails) goes through bounded_sum or the lower-level drive_series: terms are
// accumulated in log domain and the unsummed remainder is bounded by a
// geometric tail once a ratio certificate has been established on a
// majorant stream.

#include <complex>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "entlab/errors.hpp"

namespace entlab {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Signed magnitude stored as the natural log of its absolute value.
class LogScalar {
public:
    constexpr LogScalar() = default;

    static LogScalar from_log(double log_mag, int sign = 1);
    static LogScalar from_double(double x);
    static constexpr LogScalar zero() { return {}; }
    static LogScalar one() { return from_log(0.0); }

    [[nodiscard]] int sign() const noexcept { return sign_; }
    /// ln|x|; -inf for zero.
    [[nodiscard]] double log_mag() const noexcept { return sign_ == 0 ? kNegInf : log_mag_; }
    [[nodiscard]] bool is_zero() const noexcept { return sign_ == 0; }

    /// Overflows to +-inf / underflows to 0 outside the double range.
    [[nodiscard]] double to_double() const;

    [[nodiscard]] LogScalar abs() const;
    [[nodiscard]] LogScalar pow(double exponent) const; // requires sign >= 0
    [[nodiscard]] LogScalar sqrt() const { return pow(0.5); }
    /// Multiplies by e^delta.
    [[nodiscard]] LogScalar scaled(double delta) const;

    LogScalar operator-() const;
    friend LogScalar operator*(const LogScalar& a, const LogScalar& b);
    friend LogScalar operator/(const LogScalar& a, const LogScalar& b);
    friend LogScalar operator+(const LogScalar& a, const LogScalar& b);
    friend LogScalar operator-(const LogScalar& a, const LogScalar& b) { return a + (-b); }
    LogScalar& operator+=(const LogScalar& o) { return *this = *this + o; }
    LogScalar& operator*=(const LogScalar& o) { return *this = *this * o; }

    friend std::partial_ordering operator<=>(const LogScalar& a, const LogScalar& b);
    friend bool operator==(const LogScalar& a, const LogScalar& b)
    {
        return (a <=> b) == std::partial_ordering::equivalent;
    }

private:
    int sign_ = 0;
    double log_mag_ = 0.0;
};

LogScalar max(const LogScalar& a, const LogScalar& b);
LogScalar min(const LogScalar& a, const LogScalar& b);

/// Complex number in polar form with a log modulus: value = e^log_mag * unit.
class LogComplex {
public:
    constexpr LogComplex() = default;

    static LogComplex from_complex(std::complex<double> z);
    static LogComplex from_polar(double log_mag, double phase);
    static LogComplex from_scalar(const LogScalar& x);

    [[nodiscard]] bool is_zero() const noexcept { return log_mag_ == kNegInf; }
    [[nodiscard]] double log_abs() const noexcept { return log_mag_; }
    [[nodiscard]] std::complex<double> unit() const noexcept { return unit_; }
    [[nodiscard]] LogScalar abs() const { return LogScalar::from_log(log_mag_, is_zero() ? 0 : 1); }
    [[nodiscard]] LogScalar real() const;
    [[nodiscard]] LogScalar imag() const;
    [[nodiscard]] std::complex<double> to_complex() const;

    friend LogComplex operator*(const LogComplex& a, const LogComplex& b);
    friend LogComplex operator+(const LogComplex& a, const LogComplex& b);
    friend bool operator==(const LogComplex& a, const LogComplex& b) = default;

private:
    double log_mag_ = kNegInf;
    std::complex<double> unit_{0.0, 0.0};
};

/// Rigorous bracket lower <= S <= upper for a quantity S obtained by truncation.
class BoundedValue {
public:
    BoundedValue() = default;
    BoundedValue(LogScalar lower, LogScalar upper);
    static BoundedValue exact(const LogScalar& v) { return {v, v}; }
    static BoundedValue exact(double v) { return exact(LogScalar::from_double(v)); }

    [[nodiscard]] const LogScalar& lower() const noexcept { return lower_; }
    [[nodiscard]] const LogScalar& upper() const noexcept { return upper_; }
    [[nodiscard]] double lower_value() const { return lower_.to_double(); }
    [[nodiscard]] double upper_value() const { return upper_.to_double(); }
    [[nodiscard]] double midpoint() const;
    [[nodiscard]] LogScalar width() const { return upper_ - lower_; }
    [[nodiscard]] bool contains(double x) const;

    /// Image under a non-decreasing map on [0, inf); the bracket is clamped at 0 first.
    [[nodiscard]] BoundedValue nonneg_pow(double exponent) const;

private:
    LogScalar lower_;
    LogScalar upper_;
};

/// ln(n!) as a double. Exact accumulation below 256, Stirling series above.
double ln_factorial(std::uint64_t n);
/// n! as a LogScalar (log_mag = ln n!).
LogScalar log_factorial(std::uint64_t n);
/// ln(n!) - (n ln n - n + 0.5 ln(2 pi n)), computed without cancellation. n >= 1.
double stirling_remainder(std::uint64_t n);

/// log(e^x - 1) for x >= 0, stable at both ends.
double log_expm1(double x);

/// Pairwise (binary-counter) log-domain summation in stream order.
class LogAccumulator {
public:
    void add(const LogScalar& term);
    [[nodiscard]] LogScalar total() const;
    [[nodiscard]] LogScalar abs_total() const { return abs_total_; }
    [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
    /// Bound on the accumulated rounding of the merges, as a magnitude.
    [[nodiscard]] LogScalar rounding_bound() const;

private:
    std::vector<std::pair<LogScalar, int>> stack_;
    LogScalar abs_total_;
    double max_abs_log_ = 0.0;
    std::uint64_t count_ = 0;
};

struct RatioCertificate {
    std::uint64_t scan_start = 0;
    double rho = 0.5;
    int window = 16;
    std::uint64_t scan_budget = 10'000'000;
};

struct SumTolerance {
    double rel = 1e-10;
    double abs = 0.0;
    std::uint64_t max_terms = 50'000'000;
    /// Largest index whose term may be summed explicitly.
    std::uint64_t index_cap = std::numeric_limits<std::uint64_t>::max();
};

/// A series sum_{n >= start} t_n with the side information needed to bound
/// its remainder. The majorant must dominate |t_n| at every index and is the
/// stream on which the ratio certificate is established.
struct TermStream {
    std::uint64_t start = 0;
    std::function<LogScalar(std::uint64_t)> term;
    /// log m_n with m_n >= |t_n|; defaults to log|t_n|.
    std::function<double(std::uint64_t)> log_majorant;
    /// log(m_{n+1} / m_n); defaults to the difference of log_majorant.
    std::function<double(std::uint64_t)> log_ratio;
    /// Smallest k >= n with t_k possibly nonzero; defaults to n.
    std::function<std::optional<std::uint64_t>(std::uint64_t)> next_support;
    /// log of an absolute error bound on the evaluation of t_n.
    std::function<double(std::uint64_t)> log_error;
    bool nonnegative = false;
};

/// First index from which the majorant ratios are certified <= rho.
/// Throws NoDecay when the scan budget runs out.
std::uint64_t certify_decay(const TermStream& s, const RatioCertificate& cert);

struct DriveResult {
    double log_tail = kNegInf;  // log of the bound on sum_{k >= next} m_k
    std::uint64_t terms = 0;
    std::uint64_t last_index = 0;
};

/// Walks the support of `s` in order, calling visit(n) for every summed index,
/// until enough(log_tail) accepts the current geometric remainder bound.
DriveResult drive_series(const TermStream& s, const RatioCertificate& cert,
                         const SumTolerance& tol,
                         const std::function<void(std::uint64_t)>& visit,
                         const std::function<bool(double)>& enough);

/// Sums until the remainder bound is within tolerance of the partial sum.
/// The bracket is [partial - err, partial + tail + err] (tail on both sides
/// for signed streams). Throws NoDecay, ToleranceUnreachable, InfeasibleLevel.
BoundedValue bounded_sum(const TermStream& s, const RatioCertificate& cert,
                         const SumTolerance& tol = {});

/// Sums `n_terms` support terms (fewer if the support ends, more if the ratio
/// certificate starts later) and reports the bracket without a tolerance check.
BoundedValue truncated_sum(const TermStream& s, const RatioCertificate& cert,
                           std::uint64_t n_terms);

} // namespace entlab
