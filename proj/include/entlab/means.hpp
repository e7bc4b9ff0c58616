#pragma once

// Integral means M_p(f, r), coefficient-side majorants and the certificates
// built from them.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "entlab/entire.hpp"

namespace entlab {

inline constexpr double kInfP = std::numeric_limits<double>::infinity();

struct MeanParams {
    double p = 2.0;

    /// Validates 1 <= p <= inf; throws InvalidP.
    static MeanParams make(double p);
    /// Conjugate exponent (q = inf at p = 1, q = 1 at p = inf).
    [[nodiscard]] double q() const;
    /// 1 / (2 max(2, p)); 0 at p = inf.
    [[nodiscard]] double a() const;
};

/// Bracket on M_p(f, r) = ((1/2pi) int |f(r e^{it})|^p dt)^{1/p}, or the
/// circle maximum at p = inf. p = 2 uses the coefficient identity, other
/// finite p use trapezoid quadrature.
BoundedValue mean_p(const EntireFunction& f, double r, const MeanParams& params, double tol = 1e-10,
                    const EvalOptions& options = {});

/// Trapezoid rule with node doubling from 64 to 16384, bracket widened by the
/// last change. Throws ToleranceUnreachable if the change never drops below tol.
BoundedValue mean_p_quadrature(const EntireFunction& f, double r, double p, double tol = 1e-10,
                               const EvalOptions& options = {});

/// (sum_n |c_n|^q (r^n/n!)^q)^{1/q}, which dominates M_p(f, r) for p >= 2.
/// Throws InvalidP for p < 2.
BoundedValue hy_bound(const EntireFunction& f, double r, const MeanParams& params, double tol = 1e-10,
                      const EvalOptions& options = {});

/// sum_{n >= 0} r^{alpha n} / ((n+1)^beta (n!)^alpha), for 0 < alpha <= 2.
BoundedValue lemma_sum(double alpha, double beta, double r, double tol = 1e-13);
/// lemma_sum divided by r^{(1 - alpha - 2 beta)/2} e^{alpha r}.
BoundedValue lemma_ratio(double alpha, double beta, double r, double tol = 1e-13);

/// n! R M1 / (R - m)^{n+1}, the Cauchy estimate for |f^{(n)}| on |z| <= m.
LogScalar cauchy_derivative_bound(std::uint64_t n, double m, double R, double M1);

/// log of C n! e^n / (n^{n+1/2} (1 - m/n)^{n+1}), the Cauchy estimate at R = n
/// for M1(f, R) <= C e^R / sqrt(R). Requires n > m.
long double log_boundedness_term(double C, std::uint64_t m, std::uint64_t n);

struct BoundednessCertificate {
    double sup = 0.0;
    std::uint64_t argsup = 0;
    double tail = 0.0;    // value at n_max
    double limit = 0.0;   // C sqrt(2 pi) e^m
    bool monotone = false;  // over n in [n_max/10, n_max]
    bool certified = false; // monotone and tail within 1% of the limit
};

BoundednessCertificate boundedness_certificate(double C, std::uint64_t m, std::uint64_t n_max);

enum class TrendVerdict { InteriorMax, RightEdgeMax };
std::string to_string(TrendVerdict v);

struct GrowthCertificate {
    double p = 2.0;
    double eps = 0.0;
    double a = 0.0;
    std::vector<double> r_grid;
    std::vector<double> log_values;  // log of r^{a-eps} e^{-r} M_p(f, r), upper bracket
    double sup = 0.0;
    double log_sup = kNegInf;
    double argmax = 0.0;
    std::size_t argmax_index = 0;
    double terminal_slope = 0.0;  // d log(value) / d log(r) over the last decade
    TrendVerdict verdict = TrendVerdict::InteriorMax;

    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] std::string to_json() const;
};

/// Geometric grid 2^-4 .. 2^7 with 512 points.
std::vector<double> default_radius_grid();

/// Least-squares slope of y against log(x) over x >= x.back() / 10.
double terminal_decade_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Requires 0 < eps < a and an increasing grid of positive radii.
GrowthCertificate growth_certificate(const EntireFunction& f, const MeanParams& params, double eps,
                                     const std::vector<double>& r_grid, double tol = 1e-10,
                                     const EvalOptions& options = {});

struct RegionRow {
    double p = 0.0;
    double yes_level = 0.0;  // 1 / (2 max(2, p))
    double no_level = 0.5;
};

std::vector<RegionRow> region_data(const std::vector<double>& p_grid);
std::string region_csv(const std::vector<RegionRow>& rows);
std::string region_json(const std::vector<RegionRow>& rows);

} // namespace entlab
