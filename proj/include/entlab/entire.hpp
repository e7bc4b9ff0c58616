#pragma once

// Entire functions as coefficient streams f(z) = sum_n c_n z^n / n!, where
// c_n = f^{(n)}(0). Values are immutable and share their structure, so
// derivatives and linear combinations are cheap to form.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "entlab/kernels.hpp"
#include "entlab/numerics.hpp"
#include "entlab/schedule.hpp"

namespace entlab {

/// The sequence omega_n bounding |f^{(n)}(0)|.
class OmegaSpec {
public:
    enum class Form { Power, LogPower, Table };

    static OmegaSpec power(double eps);          // n^eps
    static OmegaSpec log_power(double t);        // (ln(n+1))^t
    /// values[n] = omega_n for n < values.size(); omega_n = +inf beyond the table.
    static OmegaSpec table(std::vector<double> values);

    [[nodiscard]] Form form() const noexcept { return form_; }
    [[nodiscard]] double parameter() const noexcept { return param_; }
    /// ln omega_n (-inf for omega_n = 0, +inf past the end of a table).
    [[nodiscard]] double log_value(std::uint64_t n) const;
    /// Exponent e with omega_n = O(n^e) when known in closed form, NaN otherwise.
    [[nodiscard]] double growth_exponent() const;
    [[nodiscard]] std::string describe() const;

private:
    Form form_ = Form::Power;
    double param_ = 0.0;
    std::shared_ptr<const std::vector<double>> table_;
};

class EntireFunction {
public:
    enum class Kind { Zero, Exponential, Polynomial, Gap, LogFamily, Combination, Derivative };

    EntireFunction();  // zero function

    static EntireFunction zero();
    static EntireFunction exponential();
    /// f(z) = sum_k a[k] z^k (ordinary power-series coefficients).
    static EntireFunction polynomial(const std::vector<std::complex<double>>& a);
    static EntireFunction monomial(std::uint64_t k);

    [[nodiscard]] Kind kind() const;
    /// c_n = f^{(n)}(0).
    [[nodiscard]] LogComplex coeff(std::uint64_t n) const;
    /// log of a bound B_n >= |c_n| whose successive ratios B_{n+1}/B_n are
    /// bounded and non-increasing from regular_from() on.
    [[nodiscard]] double log_coeff_bound(std::uint64_t n) const;
    [[nodiscard]] std::uint64_t regular_from() const;
    /// Smallest k >= n where c_k may be nonzero. Indices past 2^64 - 1 are
    /// reported as 2^64 - 1, which is safe for tail bounds since the
    /// coefficient bound is non-decreasing in the index.
    [[nodiscard]] std::optional<std::uint64_t> next_support(std::uint64_t n) const;
    [[nodiscard]] bool nonnegative_coefficients() const;
    /// True for Zero and Polynomial.
    [[nodiscard]] bool is_polynomial() const;
    /// Highest nonzero index of a Polynomial; empty for every other kind.
    [[nodiscard]] std::optional<std::uint64_t> degree() const;
    /// Gap schedule of the first scheduled constituent, if any.
    [[nodiscard]] const GapSchedule* schedule() const;
    /// e with |c_n| = O(n^e) when known, NaN otherwise.
    [[nodiscard]] double growth_exponent() const;
    [[nodiscard]] bool same_as(const EntireFunction& other) const noexcept { return node_ == other.node_; }

    struct Node;

private:
    explicit EntireFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;

    friend EntireFunction build_irregular(const OmegaSpec&, const GapSchedule&);
    friend EntireFunction build_log_family(double, const GapSchedule&);
    friend EntireFunction combine(const std::vector<std::complex<double>>&, const std::vector<EntireFunction>&);
    friend EntireFunction derivative(const EntireFunction&, std::uint64_t);
};

/// c_n = min(omega_n, n) on B and 0 elsewhere.
EntireFunction build_irregular(const OmegaSpec& omega, const GapSchedule& s);
/// c_n = min(n, (ln(n+1))^t) on B and 0 elsewhere. Requires t > 0.
EntireFunction build_log_family(double t, const GapSchedule& s);
/// sum_k weights[k] * parts[k]. Throws LengthMismatch.
EntireFunction combine(const std::vector<std::complex<double>>& weights, const std::vector<EntireFunction>& parts);
EntireFunction derivative(const EntireFunction& f, std::uint64_t j);
inline LogComplex taylor_at_zero(const EntireFunction& f, std::uint64_t n) { return f.coeff(n); }

struct ComplexBracket {
    BoundedValue re;
    BoundedValue im;
};

struct EvalOptions {
    /// Largest coefficient index summed explicitly; remainders past it must be
    /// covered by the tail bound or the call fails with InfeasibleLevel.
    std::uint64_t index_cap = 1'000'000;
    Exec exec = default_exec();
};

/// Brackets on Re f(z), Im f(z), each of width <= tol * max(1, sum |c_n z^n / n!|).
ComplexBracket eval(const EntireFunction& f, std::complex<double> z, double tol = 1e-10,
                    const EvalOptions& options = {});

/// sum_n |c_n|^s (r^n / n!)^s, the l^s mass of the Taylor terms on |z| = r.
BoundedValue coefficient_power_sum(const EntireFunction& f, double r, double s, double tol = 1e-10,
                                   const EvalOptions& options = {});

struct CircleSup {
    BoundedValue value;
    std::size_t points = 0;  // samples used; 0 on the nonnegative-coefficient path
    bool converged = true;
};

/// Bracket on max_{|z| = r} |f(z)|. Exact evaluation at z = r for
/// nonnegative coefficients; otherwise 256 circle samples, then bisection of
/// every arc whose second-order envelope can still exceed the best sample,
/// up to 65536 samples in total.
CircleSup circle_sup(const EntireFunction& f, double r, double tol = 1e-8, const EvalOptions& options = {});

/// Bracket on sup_{|z| <= m} |f(z)|. Throws ToleranceUnreachable.
BoundedValue sup_norm(const EntireFunction& f, std::uint64_t m, double tol = 1e-8, const EvalOptions& options = {});

/// sum_{k=1}^K 2^{-k} min(1, sup_{|z| <= k} |f - g|).
double frechet_distance(const EntireFunction& f, const EntireFunction& g, std::uint64_t K, double tol = 1e-8,
                        const EvalOptions& options = {});

struct ProbeRecord {
    std::uint64_t index = 0;
    BoundedValue value;
};

struct ProbeReport {
    std::uint64_t m = 0;
    std::size_t level = 0;
    std::vector<ProbeRecord> decay_records;   // indices in A
    std::vector<ProbeRecord> growth_records;  // indices in B

    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] std::string to_json() const;
};

/// Up to `budget` indices per block, evenly spaced and including both ends.
std::vector<std::uint64_t> sample_block(std::uint64_t lo, std::uint64_t hi, std::size_t budget);

/// Decay records sup_{|z| <= m} |D^j f| for j in the first `level` A-blocks and
/// growth records |f^{(n)}(0)| for n in the first `level` B-blocks.
/// Requires 1 <= m <= level <= s.levels.
ProbeReport irregularity_probe(const EntireFunction& f, const GapSchedule& s, std::uint64_t m, std::size_t level,
                               std::size_t budget = 128, double tol = 1e-8, const EvalOptions& options = {});
/// Uses the function's own schedule.
ProbeReport irregularity_probe(const EntireFunction& f, std::uint64_t m, std::size_t level, std::size_t budget = 128,
                               double tol = 1e-8, const EvalOptions& options = {});

struct CombinationGrowth {
    std::uint64_t threshold = 0;
    std::size_t dominant = 0;
    std::vector<std::uint64_t> samples;
    bool holds = false;
};
/// For F = sum_k c_k f_{t_k}, with t_dom the largest exponent carrying a
/// nonzero weight: the index past which |c_dom| (ln(n+1))^{t_dom} dominates the
/// other terms and every log branch is active, and whether
/// |c_n(F)| >= ratio |c_dom| (ln(n+1))^{t_dom} at the sampled n in the first B-block above it.
CombinationGrowth combination_growth(const std::vector<std::complex<double>>& weights,
                                     const std::vector<double>& exponents, const GapSchedule& s,
                                     std::size_t budget = 4096, double ratio = 0.5);

} // namespace entlab
