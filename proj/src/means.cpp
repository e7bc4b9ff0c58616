#include "entlab/means.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "entlab/report_io.hpp"

namespace entlab {

MeanParams MeanParams::make(double p)
{
    if (!(p >= 1.0)) {
        throw Error(ErrorKind::InvalidP, "p must satisfy 1 <= p <= inf, got " + format_double(p));
    }
    return MeanParams{p};
}

double MeanParams::q() const
{
    if (p == 1.0) {
        return kInfP;
    }
    if (std::isinf(p)) {
        return 1.0;
    }
    return p / (p - 1.0);
}

double MeanParams::a() const
{
    return std::isinf(p) ? 0.0 : 1.0 / (2.0 * std::max(2.0, p));
}

// ---------------------------------------------------------------------------
// Means

BoundedValue mean_p_quadrature(const EntireFunction& f, double r, double p, double tol, const EvalOptions& options)
{
    require(r > 0.0, "radius must be positive");
    if (!(p >= 1.0) || std::isinf(p)) {
        throw Error(ErrorKind::InvalidP, "quadrature needs finite p >= 1");
    }
    const BoundedValue l0 = coefficient_power_sum(f, r, 1.0, 1e-12, options);
    if (l0.upper().is_zero()) {
        return BoundedValue::exact(0.0);
    }
    const double log_l0 = l0.upper().log_mag();

    EvalOptions inner = options;
    inner.exec = Exec::serial;
    // Node brackets enter the result directly, so a floor on their width only
    // widens the returned bracket.
    const double eval_tol = std::max(tol / 64.0, 1e-11);
    struct Node {
        double lo = 0.0;  // |f| / L0 bounds
        double hi = 0.0;
    };
    auto node = [&](std::complex<double> unit) {
        const ComplexBracket v = eval(f, r * unit, eval_tol, inner);
        auto lo_abs = [&](const BoundedValue& b) {
            const double lo = b.lower().scaled(-log_l0).to_double();
            const double hi = b.upper().scaled(-log_l0).to_double();
            return lo <= 0.0 && hi >= 0.0 ? 0.0 : std::min(std::fabs(lo), std::fabs(hi));
        };
        auto hi_abs = [&](const BoundedValue& b) {
            return std::max(std::fabs(b.lower().scaled(-log_l0).to_double()),
                            std::fabs(b.upper().scaled(-log_l0).to_double()));
        };
        return Node{std::hypot(lo_abs(v.re), lo_abs(v.im)), std::hypot(hi_abs(v.re), hi_abs(v.im))};
    };

    constexpr std::size_t kFirst = 64;
    constexpr std::size_t kLast = 16384;
    std::vector<Node> nodes;
    double prev = -1.0;
    for (std::size_t n = kFirst; n <= kLast; n *= 2) {
        const auto roots = unit_roots(n);
        if (nodes.empty()) {
            nodes = map_indices<Node>(n, [&](std::size_t i) { return node(roots[i]); }, options.exec);
        } else {
            const auto odd =
                map_indices<Node>(n / 2, [&](std::size_t i) { return node(roots[2 * i + 1]); }, options.exec);
            std::vector<Node> merged(n);
            for (std::size_t i = 0; i < n / 2; ++i) {
                merged[2 * i] = nodes[i];
                merged[2 * i + 1] = odd[i];
            }
            nodes = std::move(merged);
        }
        double sum_lo = 0.0;
        double sum_hi = 0.0;
        for (const auto& v : nodes) {
            sum_lo += std::pow(v.lo, p);
            sum_hi += std::pow(v.hi, p);
        }
        const double inv = 1.0 / static_cast<double>(n);
        const double i_lo = sum_lo * inv;
        const double i_hi = sum_hi * inv;
        const double mid = 0.5 * (i_lo + i_hi);
        if (prev >= 0.0) {
            const double delta = std::fabs(mid - prev);
            if (delta <= tol * mid || mid == 0.0) {
                // Summation of at most 16384 values in [0, 1] adds n * eps relative error.
                const double round = 4.0 * static_cast<double>(n) * kEps * i_hi;
                const double lo = std::max(0.0, i_lo - delta - round);
                const double hi = i_hi + delta + round;
                return BoundedValue(LogScalar::from_double(lo).pow(1.0 / p).scaled(log_l0),
                                    LogScalar::from_double(hi).pow(1.0 / p).scaled(log_l0));
            }
        }
        prev = mid;
    }
    throw Error(ErrorKind::ToleranceUnreachable, "trapezoid rule did not settle within 16384 nodes");
}

BoundedValue mean_p(const EntireFunction& f, double r, const MeanParams& params, double tol,
                    const EvalOptions& options)
{
    require(r > 0.0, "radius must be positive");
    const double p = MeanParams::make(params.p).p;
    if (p == 2.0) {
        return coefficient_power_sum(f, r, 2.0, tol, options).nonneg_pow(0.5);
    }
    if (std::isinf(p)) {
        const CircleSup c = circle_sup(f, r, std::max(tol, 1e-10), options);
        if (!c.converged) {
            throw Error(ErrorKind::ToleranceUnreachable, "circle maximum did not reach the tolerance");
        }
        return c.value;
    }
    return mean_p_quadrature(f, r, p, tol, options);
}

BoundedValue hy_bound(const EntireFunction& f, double r, const MeanParams& params, double tol,
                      const EvalOptions& options)
{
    if (!(params.p >= 2.0)) {
        throw Error(ErrorKind::InvalidP, "Hausdorff-Young majorant needs p >= 2");
    }
    const double q = params.q();
    return coefficient_power_sum(f, r, q, tol, options).nonneg_pow(1.0 / q);
}

// ---------------------------------------------------------------------------
// Lemma sums

namespace {

double log_lemma_term(double alpha, double beta, double log_r, std::uint64_t n)
{
    return alpha * (static_cast<double>(n) * log_r - ln_factorial(n)) - beta * std::log1p(static_cast<double>(n));
}

double log_lemma_comparison(double alpha, double beta, double r)
{
    return 0.5 * (1.0 - alpha - 2.0 * beta) * std::log(r) + alpha * r;
}

} // namespace

BoundedValue lemma_sum(double alpha, double beta, double r, double tol)
{
    require(alpha > 0.0 && alpha <= 2.0, "lemma sum needs 0 < alpha <= 2");
    require(r > 0.0, "radius must be positive");
    const double log_r = std::log(r);
    TermStream s;
    s.nonnegative = true;
    s.term = [=](std::uint64_t n) { return LogScalar::from_log(log_lemma_term(alpha, beta, log_r, n)); };
    s.log_ratio = [=](std::uint64_t n) {
        const auto x = static_cast<double>(n);
        return alpha * (log_r - std::log1p(x)) - beta * std::log1p(1.0 / (x + 1.0));
    };
    s.log_error = [=](std::uint64_t n) {
        const auto x = static_cast<double>(n);
        const double scale =
            alpha * (std::fabs(x * log_r) + ln_factorial(n)) + std::fabs(beta) * std::log1p(x) + 2.0;
        return log_lemma_term(alpha, beta, log_r, n) + std::log(8.0 * kEps * scale);
    };
    SumTolerance t;
    t.rel = tol;
    return bounded_sum(s, RatioCertificate{}, t);
}

BoundedValue lemma_ratio(double alpha, double beta, double r, double tol)
{
    const BoundedValue s = lemma_sum(alpha, beta, r, tol);
    const double shift = -log_lemma_comparison(alpha, beta, r);
    return {s.lower().scaled(shift), s.upper().scaled(shift)};
}

// ---------------------------------------------------------------------------
// Cauchy estimate certificate

LogScalar cauchy_derivative_bound(std::uint64_t n, double m, double R, double M1)
{
    require(m >= 0.0 && R > m, "Cauchy bound needs R > m >= 0");
    require(M1 >= 0.0, "Cauchy bound needs M1 >= 0");
    if (M1 == 0.0) {
        return LogScalar::zero();
    }
    return LogScalar::from_log(ln_factorial(n) + std::log(R) + std::log(M1) -
                               static_cast<double>(n + 1) * std::log(R - m));
}

long double log_boundedness_term(double C, std::uint64_t m, std::uint64_t n)
{
    require(C > 0.0, "C must be positive");
    require(n > m, "the R = n estimate needs n > m");
    // n! e^n / n^{n+1/2} = sqrt(2 pi) e^{R(n)} with R the Stirling remainder.
    const auto x = static_cast<long double>(n);
    const auto mm = static_cast<long double>(m);
    return std::log(static_cast<long double>(C)) + 0.5L * std::log(2.0L * std::numbers::pi_v<long double>) +
           static_cast<long double>(stirling_remainder(n)) - (x + 1.0L) * std::log1p(-mm / x);
}

BoundednessCertificate boundedness_certificate(double C, std::uint64_t m, std::uint64_t n_max)
{
    require(n_max > m, "boundedness certificate needs n_max > m");
    BoundednessCertificate out;
    long double best = -INFINITY;
    const std::uint64_t decade_start = std::max(m + 1, n_max / 10);
    bool non_increasing = true;
    bool non_decreasing = true;
    long double prev = 0.0L;
    for (std::uint64_t n = m + 1; n <= n_max; ++n) {
        const long double v = log_boundedness_term(C, m, n);
        if (v > best) {
            best = v;
            out.argsup = n;
        }
        if (n > decade_start) {
            non_increasing = non_increasing && v <= prev;
            non_decreasing = non_decreasing && v >= prev;
        }
        prev = v;
    }
    out.sup = static_cast<double>(std::exp(best));
    out.tail = static_cast<double>(std::exp(prev));
    out.limit = C * std::sqrt(2.0 * std::numbers::pi) * std::exp(static_cast<double>(m));
    out.monotone = non_increasing || non_decreasing;
    out.certified = out.monotone && std::fabs(out.tail / out.limit - 1.0) <= 0.01;
    return out;
}

// ---------------------------------------------------------------------------
// Growth certificate

std::string to_string(TrendVerdict v)
{
    return v == TrendVerdict::InteriorMax ? "interior-max" : "right-edge-max";
}

std::vector<double> default_radius_grid()
{
    return geometric_grid(0.0625, 128.0, 512);
}

double terminal_decade_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    require(x.size() == y.size() && !x.empty(), "slope needs matching nonempty data");
    const double cut = x.back() / 10.0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < cut || !std::isfinite(y[i])) {
            continue;
        }
        const double lx = std::log(x[i]);
        sx += lx;
        sy += y[i];
        sxx += lx * lx;
        sxy += lx * y[i];
        ++k;
    }
    if (k < 2) {
        return 0.0;
    }
    const double kn = static_cast<double>(k);
    const double den = kn * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (kn * sxy - sx * sy) / den;
}

GrowthCertificate growth_certificate(const EntireFunction& f, const MeanParams& params, double eps,
                                     const std::vector<double>& r_grid, double tol, const EvalOptions& options)
{
    const MeanParams mp = MeanParams::make(params.p);
    require(eps > 0.0 && eps < mp.a(), "growth certificate needs 0 < eps < a");
    require(!r_grid.empty() && r_grid.front() > 0.0, "radius grid must be nonempty and positive");
    for (std::size_t i = 1; i < r_grid.size(); ++i) {
        require(r_grid[i] > r_grid[i - 1], "radius grid must be increasing");
    }
    GrowthCertificate out;
    out.p = mp.p;
    out.eps = eps;
    out.a = mp.a();
    out.r_grid = r_grid;

    EvalOptions inner = options;
    inner.exec = Exec::serial;
    const double expo = out.a - eps;
    out.log_values = map_indices<double>(
        r_grid.size(),
        [&](std::size_t i) {
            const double r = r_grid[i];
            return expo * std::log(r) - r + mean_p(f, r, mp, tol, inner).upper().log_mag();
        },
        options.exec);

    const auto it = std::max_element(out.log_values.begin(), out.log_values.end());
    out.argmax_index = static_cast<std::size_t>(it - out.log_values.begin());
    out.log_sup = *it;
    out.sup = std::exp(out.log_sup);
    out.argmax = r_grid[out.argmax_index];
    if (out.log_sup == kNegInf) {
        out.terminal_slope = 0.0;
        out.verdict = TrendVerdict::InteriorMax;
        return out;
    }
    out.terminal_slope = terminal_decade_slope(r_grid, out.log_values);
    const bool interior = out.argmax_index + 1 < r_grid.size();
    out.verdict = interior && out.terminal_slope <= 0.0 ? TrendVerdict::InteriorMax : TrendVerdict::RightEdgeMax;
    return out;
}

std::string GrowthCertificate::to_csv() const
{
    std::string out = csv_row({"r", "value", "log_value"});
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        out += csv_row({format_double(r_grid[i]), format_double(std::exp(log_values[i])), format_double(log_values[i])});
    }
    return out;
}

std::string GrowthCertificate::to_json() const
{
    std::string rs = "[";
    std::string vs = "[";
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        rs += (i ? "," : "") + json_number(r_grid[i]);
        vs += (i ? "," : "") + json_number(log_values[i]);
    }
    return "{\"p\":" + json_number(p) + ",\"eps\":" + json_number(eps) + ",\"a\":" + json_number(a) +
           ",\"sup\":" + json_number(sup) + ",\"log_sup\":" + json_number(log_sup) +
           ",\"argmax\":" + json_number(argmax) + ",\"terminal_slope\":" + json_number(terminal_slope) +
           ",\"verdict\":" + json_string(to_string(verdict)) + ",\"r\":" + rs + "],\"log_values\":" + vs + "]}";
}

// ---------------------------------------------------------------------------
// Region data

std::vector<RegionRow> region_data(const std::vector<double>& p_grid)
{
    std::vector<RegionRow> rows;
    rows.reserve(p_grid.size());
    for (const double p : p_grid) {
        const MeanParams mp = MeanParams::make(p);
        rows.push_back({p, 1.0 / (2.0 * std::max(2.0, mp.p)), 0.5});
    }
    return rows;
}

std::string region_csv(const std::vector<RegionRow>& rows)
{
    std::string out = csv_row({"p", "yes_level", "no_level"});
    for (const auto& r : rows) {
        out += csv_row({format_double(r.p), format_double(r.yes_level), format_double(r.no_level)});
    }
    return out;
}

std::string region_json(const std::vector<RegionRow>& rows)
{
    std::string out = "{\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out += (i ? "," : "");
        out += "{\"p\":" + json_number(rows[i].p) + ",\"yes_level\":" + json_number(rows[i].yes_level) +
               ",\"no_level\":" + json_number(rows[i].no_level) + "}";
    }
    return out + "]}";
}

} // namespace entlab
