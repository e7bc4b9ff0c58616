#include "entlab/entire.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "entlab/report_io.hpp"

namespace entlab {

namespace {

constexpr std::uint64_t kMaxIndex = std::numeric_limits<std::uint64_t>::max();

double log_index(std::uint64_t n)
{
    return n <= 1 ? 0.0 : std::log(static_cast<double>(n));
}

std::uint64_t add_saturating(std::uint64_t a, std::uint64_t b)
{
    return a > kMaxIndex - b ? kMaxIndex : a + b;
}

bool is_real_positive(const LogComplex& c)
{
    return c.is_zero() || (c.unit().imag() == 0.0 && c.unit().real() > 0.0);
}

} // namespace

// ---------------------------------------------------------------------------
// OmegaSpec

OmegaSpec OmegaSpec::power(double eps)
{
    require(eps > 0.0 && std::isfinite(eps), "omega power exponent must be positive");
    OmegaSpec o;
    o.form_ = Form::Power;
    o.param_ = eps;
    return o;
}

OmegaSpec OmegaSpec::log_power(double t)
{
    require(t > 0.0 && std::isfinite(t), "omega log-power exponent must be positive");
    OmegaSpec o;
    o.form_ = Form::LogPower;
    o.param_ = t;
    return o;
}

OmegaSpec OmegaSpec::table(std::vector<double> values)
{
    for (const double v : values) {
        require(v >= 0.0 && std::isfinite(v), "omega table values must be finite and nonnegative");
    }
    // Unboundedness can only be probed: suffix minima at 1, 2, 4, ... must not
    // decrease and must end above where they started.
    std::vector<double> suffix_min(values.size());
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t i = values.size(); i-- > 0;) {
        running = std::min(running, values[i]);
        suffix_min[i] = running;
    }
    std::vector<double> checkpoints;
    for (std::size_t c = 1; c < values.size(); c *= 2) {
        checkpoints.push_back(suffix_min[c]);
    }
    for (std::size_t i = 1; i < checkpoints.size(); ++i) {
        require(checkpoints[i] >= checkpoints[i - 1], "omega table suffix minima decrease");
    }
    if (checkpoints.size() >= 2) {
        require(checkpoints.back() > checkpoints.front(), "omega table does not grow");
    }
    OmegaSpec o;
    o.form_ = Form::Table;
    o.table_ = std::make_shared<const std::vector<double>>(std::move(values));
    return o;
}

double OmegaSpec::log_value(std::uint64_t n) const
{
    switch (form_) {
    case Form::Power:
        return n == 0 ? kNegInf : param_ * std::log(static_cast<double>(n));
    case Form::LogPower:
        return n == 0 ? kNegInf : param_ * std::log(std::log1p(static_cast<double>(n)));
    case Form::Table:
        if (n >= table_->size()) {
            return std::numeric_limits<double>::infinity();
        }
        return (*table_)[n] == 0.0 ? kNegInf : std::log((*table_)[n]);
    }
    return kNegInf;
}

double OmegaSpec::growth_exponent() const
{
    switch (form_) {
    case Form::Power: return std::min(param_, 1.0);
    case Form::LogPower: return 0.0;
    case Form::Table: return std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::string OmegaSpec::describe() const
{
    switch (form_) {
    case Form::Power: return "power:" + format_double(param_);
    case Form::LogPower: return "logpower:" + format_double(param_);
    case Form::Table: return "table:" + std::to_string(table_->size());
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Nodes

struct EntireFunction::Node {
    Kind kind = Kind::Zero;
    // Polynomial: c_n for n < taylor.size(), trailing zeros trimmed.
    std::vector<LogComplex> taylor;
    // Gap / LogFamily
    OmegaSpec omega;
    std::shared_ptr<const GapSchedule> schedule;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;  // B, saturated to 64 bits
    // Combination
    std::vector<LogComplex> weights;
    std::vector<EntireFunction> parts;
    // Derivative
    std::uint64_t shift = 0;
    std::vector<EntireFunction> base;  // exactly one element

    [[nodiscard]] bool in_blocks(std::uint64_t n) const
    {
        auto it = std::partition_point(blocks.begin(), blocks.end(), [&](const auto& b) { return b.second < n; });
        return it != blocks.end() && it->first <= n;
    }
};

namespace {

using NodePtr = std::shared_ptr<const EntireFunction::Node>;

NodePtr make_kind(EntireFunction::Kind kind)
{
    auto n = std::make_shared<EntireFunction::Node>();
    n->kind = kind;
    return n;
}

const NodePtr& zero_node()
{
    static const NodePtr node = make_kind(EntireFunction::Kind::Zero);
    return node;
}

} // namespace

EntireFunction::EntireFunction() : node_(zero_node()) {}

EntireFunction EntireFunction::zero()
{
    return EntireFunction(zero_node());
}

EntireFunction EntireFunction::exponential()
{
    static const NodePtr node = make_kind(Kind::Exponential);
    return EntireFunction(node);
}

namespace {

EntireFunction::Kind trimmed_kind(std::vector<LogComplex>& taylor)
{
    while (!taylor.empty() && taylor.back().is_zero()) {
        taylor.pop_back();
    }
    return taylor.empty() ? EntireFunction::Kind::Zero : EntireFunction::Kind::Polynomial;
}

} // namespace

EntireFunction EntireFunction::polynomial(const std::vector<std::complex<double>>& a)
{
    std::vector<LogComplex> taylor(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        require(std::isfinite(a[k].real()) && std::isfinite(a[k].imag()), "polynomial coefficients must be finite");
        taylor[k] = LogComplex::from_complex(a[k]) * LogComplex::from_polar(ln_factorial(k), 0.0);
    }
    if (trimmed_kind(taylor) == Kind::Zero) {
        return zero();
    }
    auto node = std::make_shared<Node>();
    node->kind = Kind::Polynomial;
    node->taylor = std::move(taylor);
    return EntireFunction(node);
}

EntireFunction EntireFunction::monomial(std::uint64_t k)
{
    require(k < 100'000'000, "monomial degree too large");
    auto node = std::make_shared<Node>();
    node->kind = Kind::Polynomial;
    node->taylor.resize(k + 1);
    node->taylor[k] = LogComplex::from_polar(ln_factorial(k), 0.0);
    return EntireFunction(node);
}

EntireFunction::Kind EntireFunction::kind() const
{
    return node_->kind;
}

LogComplex EntireFunction::coeff(std::uint64_t n) const
{
    const Node& nd = *node_;
    switch (nd.kind) {
    case Kind::Zero:
        return {};
    case Kind::Exponential:
        return LogComplex::from_polar(0.0, 0.0);
    case Kind::Polynomial:
        return n < nd.taylor.size() ? nd.taylor[n] : LogComplex{};
    case Kind::Gap:
    case Kind::LogFamily:
        if (!nd.in_blocks(n)) {
            return {};
        }
        return LogComplex::from_polar(std::min(nd.omega.log_value(n), log_index(n)), 0.0);
    case Kind::Combination: {
        LogComplex acc;
        for (std::size_t k = 0; k < nd.parts.size(); ++k) {
            acc = acc + nd.weights[k] * nd.parts[k].coeff(n);
        }
        return acc;
    }
    case Kind::Derivative:
        if (n > kMaxIndex - nd.shift) {
            throw Error(ErrorKind::InfeasibleLevel, "coefficient index beyond 64 bits");
        }
        return nd.base.front().coeff(n + nd.shift);
    }
    return {};
}

double EntireFunction::log_coeff_bound(std::uint64_t n) const
{
    const Node& nd = *node_;
    switch (nd.kind) {
    case Kind::Zero:
        return kNegInf;
    case Kind::Exponential:
        return 0.0;
    case Kind::Polynomial:
        return n < nd.taylor.size() ? nd.taylor[n].log_abs() : kNegInf;
    case Kind::Gap:
    case Kind::LogFamily:
        return log_index(n);
    case Kind::Combination: {
        LogScalar acc;
        for (std::size_t k = 0; k < nd.parts.size(); ++k) {
            acc += nd.weights[k].abs() * LogScalar::from_log(nd.parts[k].log_coeff_bound(n));
        }
        return acc.log_mag();
    }
    case Kind::Derivative:
        return nd.base.front().log_coeff_bound(add_saturating(n, nd.shift));
    }
    return kNegInf;
}

std::uint64_t EntireFunction::regular_from() const
{
    const Node& nd = *node_;
    switch (nd.kind) {
    case Kind::Polynomial:
        return nd.taylor.size();
    case Kind::Combination: {
        std::uint64_t r = 0;
        for (const auto& p : nd.parts) {
            r = std::max(r, p.regular_from());
        }
        return r;
    }
    case Kind::Derivative: {
        const std::uint64_t r = nd.base.front().regular_from();
        return r > nd.shift ? r - nd.shift : 0;
    }
    default:
        return 0;
    }
}

std::optional<std::uint64_t> EntireFunction::next_support(std::uint64_t n) const
{
    const Node& nd = *node_;
    switch (nd.kind) {
    case Kind::Zero:
        return std::nullopt;
    case Kind::Exponential:
        return n;
    case Kind::Polynomial:
        for (std::uint64_t k = n; k < nd.taylor.size(); ++k) {
            if (!nd.taylor[k].is_zero()) {
                return k;
            }
        }
        return std::nullopt;
    case Kind::Gap:
    case Kind::LogFamily: {
        auto it = std::partition_point(nd.blocks.begin(), nd.blocks.end(),
                                       [&](const auto& b) { return b.second < n; });
        if (it == nd.blocks.end()) {
            return std::nullopt;
        }
        return std::max(it->first, n);
    }
    case Kind::Combination: {
        std::optional<std::uint64_t> best;
        for (const auto& p : nd.parts) {
            const auto s = p.next_support(n);
            if (s && (!best || *s < *best)) {
                best = s;
            }
        }
        return best;
    }
    case Kind::Derivative: {
        const auto s = nd.base.front().next_support(add_saturating(n, nd.shift));
        if (!s) {
            return std::nullopt;
        }
        return *s == kMaxIndex ? kMaxIndex : *s - nd.shift;
    }
    }
    return std::nullopt;
}

bool EntireFunction::nonnegative_coefficients() const
{
    const Node& nd = *node_;
    switch (nd.kind) {
    case Kind::Polynomial:
        return std::all_of(nd.taylor.begin(), nd.taylor.end(), is_real_positive);
    case Kind::Combination:
        for (std::size_t k = 0; k < nd.parts.size(); ++k) {
            if (!is_real_positive(nd.weights[k]) || !nd.parts[k].nonnegative_coefficients()) {
                return false;
            }
        }
        return true;
    case Kind::Derivative:
        return nd.base.front().nonnegative_coefficients();
    default:
        return true;
    }
}

bool EntireFunction::is_polynomial() const
{
    return node_->kind == Kind::Zero || node_->kind == Kind::Polynomial;
}

std::optional<std::uint64_t> EntireFunction::degree() const
{
    if (node_->kind != Kind::Polynomial) {
        return std::nullopt;
    }
    return node_->taylor.size() - 1;
}

const GapSchedule* EntireFunction::schedule() const
{
    const Node& nd = *node_;
    switch (nd.kind) {
    case Kind::Gap:
    case Kind::LogFamily:
        return nd.schedule.get();
    case Kind::Combination:
        for (const auto& p : nd.parts) {
            if (const auto* s = p.schedule()) {
                return s;
            }
        }
        return nullptr;
    case Kind::Derivative:
        return nd.base.front().schedule();
    default:
        return nullptr;
    }
}

double EntireFunction::growth_exponent() const
{
    const Node& nd = *node_;
    switch (nd.kind) {
    case Kind::Gap:
    case Kind::LogFamily:
        return nd.omega.growth_exponent();
    case Kind::Combination: {
        double e = 0.0;
        for (const auto& p : nd.parts) {
            const double pe = p.growth_exponent();
            if (std::isnan(pe)) {
                return pe;
            }
            e = std::max(e, pe);
        }
        return e;
    }
    case Kind::Derivative:
        return nd.base.front().growth_exponent();
    default:
        return 0.0;
    }
}

// ---------------------------------------------------------------------------
// Constructions

namespace {

EntireFunction::Node gap_node(EntireFunction::Kind kind, const OmegaSpec& omega, const GapSchedule& s)
{
    EntireFunction::Node nd;
    nd.kind = kind;
    nd.omega = omega;
    nd.schedule = std::make_shared<const GapSchedule>(s);
    const auto [a, b] = index_sets(s);
    for (const auto& iv : b.intervals()) {
        nd.blocks.emplace_back(saturate_u64(iv.lo), saturate_u64(iv.hi));
    }
    return nd;
}

} // namespace

EntireFunction build_irregular(const OmegaSpec& omega, const GapSchedule& s)
{
    return EntireFunction(std::make_shared<const EntireFunction::Node>(
        gap_node(EntireFunction::Kind::Gap, omega, s)));
}

EntireFunction build_log_family(double t, const GapSchedule& s)
{
    return EntireFunction(std::make_shared<const EntireFunction::Node>(
        gap_node(EntireFunction::Kind::LogFamily, OmegaSpec::log_power(t), s)));
}

EntireFunction combine(const std::vector<std::complex<double>>& weights, const std::vector<EntireFunction>& parts)
{
    if (weights.size() != parts.size()) {
        throw Error(ErrorKind::LengthMismatch, "combine: " + std::to_string(weights.size()) + " weights for " +
                                                   std::to_string(parts.size()) + " parts");
    }
    using Kind = EntireFunction::Kind;
    const bool all_poly = std::all_of(parts.begin(), parts.end(), [](const auto& p) { return p.is_polynomial(); });
    if (all_poly) {
        std::size_t len = 0;
        for (const auto& p : parts) {
            len = std::max(len, p.node_->taylor.size());
        }
        std::vector<LogComplex> taylor(len);
        for (std::size_t k = 0; k < parts.size(); ++k) {
            const LogComplex w = LogComplex::from_complex(weights[k]);
            const auto& src = parts[k].node_->taylor;
            for (std::size_t n = 0; n < src.size(); ++n) {
                taylor[n] = taylor[n] + w * src[n];
            }
        }
        if (trimmed_kind(taylor) == Kind::Zero) {
            return EntireFunction::zero();
        }
        auto node = std::make_shared<EntireFunction::Node>();
        node->kind = Kind::Polynomial;
        node->taylor = std::move(taylor);
        return EntireFunction(node);
    }
    auto node = std::make_shared<EntireFunction::Node>();
    node->kind = Kind::Combination;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (weights[k] == std::complex<double>{} || parts[k].kind() == Kind::Zero) {
            continue;
        }
        node->weights.push_back(LogComplex::from_complex(weights[k]));
        node->parts.push_back(parts[k]);
    }
    if (node->parts.empty()) {
        return EntireFunction::zero();
    }
    return EntireFunction(node);
}

EntireFunction derivative(const EntireFunction& f, std::uint64_t j)
{
    using Kind = EntireFunction::Kind;
    if (j == 0) {
        return f;
    }
    const auto& nd = *f.node_;
    switch (nd.kind) {
    case Kind::Zero:
    case Kind::Exponential:
        return f;
    case Kind::Polynomial: {
        if (j >= nd.taylor.size()) {
            return EntireFunction::zero();
        }
        auto node = std::make_shared<EntireFunction::Node>();
        node->kind = Kind::Polynomial;
        node->taylor.assign(nd.taylor.begin() + static_cast<std::ptrdiff_t>(j), nd.taylor.end());
        return EntireFunction(node);
    }
    case Kind::Combination: {
        std::vector<EntireFunction> parts;
        for (const auto& p : nd.parts) {
            parts.push_back(derivative(p, j));
        }
        auto node = std::make_shared<EntireFunction::Node>();
        node->kind = Kind::Combination;
        node->weights = nd.weights;
        node->parts = std::move(parts);
        return EntireFunction(node);
    }
    case Kind::Derivative:
        return derivative(nd.base.front(), add_saturating(nd.shift, j));
    default: {
        auto node = std::make_shared<EntireFunction::Node>();
        node->kind = Kind::Derivative;
        node->shift = j;
        node->base.push_back(f);
        return EntireFunction(node);
    }
    }
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

// Relative error of one Taylor term c_n z^n / n! assembled in log-polar form.
double log_term_error(std::uint64_t n, double log_c, double log_r, double arg)
{
    const auto x = static_cast<double>(n);
    const double scale = std::fabs(x * log_r) + ln_factorial(n) + std::fabs(log_c) + x * std::fabs(arg) + 4.0;
    return std::log(8.0 * kEps * scale);
}

TermStream weighted_stream(const EntireFunction& f, double log_r, double power)
{
    TermStream s;
    s.start = 0;
    s.log_majorant = [&f, log_r, power](std::uint64_t n) {
        const double b = f.log_coeff_bound(n);
        return b == kNegInf ? kNegInf : power * (b + static_cast<double>(n) * log_r - ln_factorial(n));
    };
    s.next_support = [&f](std::uint64_t n) { return f.next_support(n); };
    return s;
}

} // namespace

ComplexBracket eval(const EntireFunction& f, std::complex<double> z, double tol, const EvalOptions& options)
{
    require(tol > 0.0, "eval tolerance must be positive");
    if (z == std::complex<double>{}) {
        const LogComplex c = f.coeff(0);
        return {BoundedValue::exact(c.real()), BoundedValue::exact(c.imag())};
    }
    const double log_r = std::log(std::abs(z));
    const double arg = std::arg(z);

    TermStream s = weighted_stream(f, log_r, 1.0);
    RatioCertificate cert;
    cert.scan_start = f.regular_from();
    SumTolerance budget;
    budget.index_cap = options.index_cap;

    LogAccumulator re;
    LogAccumulator im;
    LogAccumulator mag;
    LogScalar err;
    auto visit = [&](std::uint64_t n) {
        const LogComplex c = f.coeff(n);
        if (c.is_zero()) {
            return;
        }
        const double log_w = static_cast<double>(n) * log_r - ln_factorial(n);
        const LogComplex t = c * LogComplex::from_polar(log_w, static_cast<double>(n) * arg);
        re.add(t.real());
        im.add(t.imag());
        mag.add(t.abs());
        err += t.abs().scaled(log_term_error(n, c.log_abs(), log_r, arg));
    };
    const double log_quarter_tol = std::log(tol / 4.0);
    auto enough = [&](double log_tail) {
        return log_tail <= log_quarter_tol + std::max(0.0, mag.total().log_mag());
    };
    const DriveResult r = drive_series(s, cert, budget, visit, enough);

    const LogScalar tail = LogScalar::from_log(r.log_tail);
    const LogScalar e_re = err + re.rounding_bound();
    const LogScalar e_im = err + im.rounding_bound();
    const LogScalar s_re = re.total();
    const LogScalar s_im = im.total();

    ComplexBracket out;
    if (arg == 0.0 && f.nonnegative_coefficients()) {
        LogScalar lo = s_re - e_re;
        if (lo.sign() < 0) {
            lo = LogScalar::zero();
        }
        out.re = {lo, s_re + tail + e_re};
    } else {
        out.re = {s_re - tail - e_re, s_re + tail + e_re};
    }
    out.im = {s_im - tail - e_im, s_im + tail + e_im};

    const LogScalar limit = LogScalar::from_double(tol) * max(LogScalar::one(), mag.total());
    if (limit < out.re.width() || limit < out.im.width()) {
        throw Error(ErrorKind::ToleranceUnreachable, "evaluation bracket wider than the tolerance");
    }
    return out;
}

BoundedValue coefficient_power_sum(const EntireFunction& f, double r, double s, double tol,
                                   const EvalOptions& options)
{
    require(r > 0.0, "radius must be positive");
    require(s > 0.0, "power must be positive");
    const double log_r = std::log(r);
    TermStream st = weighted_stream(f, log_r, s);
    st.nonnegative = true;
    st.term = [&f, log_r, s](std::uint64_t n) {
        const LogComplex c = f.coeff(n);
        if (c.is_zero()) {
            return LogScalar::zero();
        }
        return LogScalar::from_log(s * (c.log_abs() + static_cast<double>(n) * log_r - ln_factorial(n)));
    };
    st.log_error = [&f, log_r, s](std::uint64_t n) {
        const LogComplex c = f.coeff(n);
        if (c.is_zero()) {
            return kNegInf;
        }
        const double lt = s * (c.log_abs() + static_cast<double>(n) * log_r - ln_factorial(n));
        return lt + log_term_error(n, c.log_abs(), log_r, 0.0) + std::log(std::max(1.0, s));
    };
    RatioCertificate cert;
    cert.scan_start = f.regular_from();
    SumTolerance t;
    t.rel = tol;
    t.index_cap = options.index_cap;
    return bounded_sum(st, cert, t);
}

namespace {

struct CircleSample {
    double theta = 0.0;
    double f_lo = 0.0;     // bounds on |f| / L0
    double f_hi = 0.0;
    double slope_mid = 0.0; // d/dtheta |f|^2 / L0^2 = slope_mid +- slope_rad
    double slope_rad = 0.0;
};

// Midpoint and radius of a bracket, in units of e^{log_scale}.
std::pair<double, double> mid_rad(const BoundedValue& b, double log_scale)
{
    const double lo = b.lower().scaled(-log_scale).to_double();
    const double hi = b.upper().scaled(-log_scale).to_double();
    return {0.5 * (lo + hi), 0.5 * (hi - lo)};
}

struct Arc {
    CircleSample left;
    CircleSample right;
    double bound = 0.0;  // upper bound on |f| / L0 over the arc
};

double abs_lower(const BoundedValue& b, double log_scale)
{
    const double lo = b.lower().scaled(-log_scale).to_double();
    const double hi = b.upper().scaled(-log_scale).to_double();
    if (lo <= 0.0 && hi >= 0.0) {
        return 0.0;
    }
    return std::min(std::fabs(lo), std::fabs(hi));
}

double abs_upper(const BoundedValue& b, double log_scale)
{
    const double lo = b.lower().scaled(-log_scale).to_double();
    const double hi = b.upper().scaled(-log_scale).to_double();
    return std::max(std::fabs(lo), std::fabs(hi));
}

} // namespace

CircleSup circle_sup(const EntireFunction& f, double r, double tol, const EvalOptions& options)
{
    require(r >= 0.0, "radius must be nonnegative");
    require(tol > 0.0, "tolerance must be positive");
    if (r == 0.0) {
        return {BoundedValue::exact(f.coeff(0).abs()), 0, true};
    }
    if (f.nonnegative_coefficients()) {
        return {eval(f, {r, 0.0}, tol, options).re, 0, true};
    }

    const BoundedValue l0 = coefficient_power_sum(f, r, 1.0, tol, options);
    if (l0.upper().is_zero()) {
        return {BoundedValue::exact(0.0), 0, true};
    }
    const double log_l0 = l0.upper().log_mag();
    const EntireFunction df = derivative(f, 1);
    const double l1 = coefficient_power_sum(df, r, 1.0, tol, options).upper().scaled(-log_l0).to_double();
    const double l2 =
        coefficient_power_sum(derivative(f, 2), r, 1.0, tol, options).upper().scaled(-log_l0).to_double();
    // Bound on |d^2/dtheta^2 |f(r e^{i theta})|^2| in units of L0^2.
    const double h2 = 2.0 * (r * l1 + r * r * l2 + r * r * l1 * l1);

    EvalOptions inner = options;
    inner.exec = Exec::serial;
    const double eval_tol = std::max(tol / 8.0, 1e-11);
    auto sample = [&](double theta, std::complex<double> unit) {
        const std::complex<double> z = r * unit;
        const ComplexBracket v = eval(f, z, eval_tol, inner);
        const ComplexBracket d = eval(df, z, eval_tol, inner);
        CircleSample cs;
        cs.theta = theta;
        cs.f_lo = std::hypot(abs_lower(v.re, log_l0), abs_lower(v.im, log_l0));
        cs.f_hi = std::hypot(abs_upper(v.re, log_l0), abs_upper(v.im, log_l0));
        // d/dtheta |F|^2 = 2 Re(conj(F) G) with G = i z f'(z).
        const auto [fr, fr_rad] = mid_rad(v.re, log_l0);
        const auto [fi, fi_rad] = mid_rad(v.im, log_l0);
        const auto [dr, dr_rad] = mid_rad(d.re, log_l0);
        const auto [di, di_rad] = mid_rad(d.im, log_l0);
        const std::complex<double> F{fr, fi};
        const std::complex<double> G = std::complex<double>{0.0, 1.0} * z * std::complex<double>{dr, di};
        const double F_rad = std::hypot(fr_rad, fi_rad);
        const double G_rad = r * std::hypot(dr_rad, di_rad) + 4.0 * kEps * std::abs(G);
        cs.slope_mid = 2.0 * (std::conj(F) * G).real();
        cs.slope_rad = 2.0 * (std::abs(F) * G_rad + F_rad * std::abs(G) + F_rad * G_rad) +
                       8.0 * kEps * std::abs(F) * std::abs(G);
        return cs;
    };
    // Every point of the arc lies within half its width of an endpoint; from
    // there |f|^2 follows a parabola with the endpoint slope and curvature h2.
    auto arc_bound = [&](const CircleSample& a, const CircleSample& b) {
        const double half = 0.5 * (b.theta - a.theta);
        const double curve = 0.5 * h2 * half * half;
        const double ha = a.f_hi * a.f_hi;
        const double hb = b.f_hi * b.f_hi;
        const double from_a = std::max(ha, ha + (a.slope_mid + a.slope_rad) * half + curve);
        const double from_b = std::max(hb, hb + (-b.slope_mid + b.slope_rad) * half + curve);
        return std::min(1.0, std::sqrt(std::max(from_a, from_b)));
    };

    constexpr std::size_t kFirst = 256;
    constexpr std::size_t kMaxSamples = 65536;
    const auto roots = unit_roots(kFirst);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(kFirst);
    auto first = map_indices<CircleSample>(
        kFirst, [&](std::size_t i) { return sample(step * static_cast<double>(i), roots[i]); }, options.exec);

    std::vector<Arc> arcs;
    arcs.reserve(kFirst);
    for (std::size_t i = 0; i < kFirst; ++i) {
        CircleSample right = first[(i + 1) % kFirst];
        if (i + 1 == kFirst) {
            right.theta = 2.0 * std::numbers::pi;
        }
        arcs.push_back({first[i], right, arc_bound(first[i], right)});
    }
    double lower = 0.0;
    for (const auto& s : first) {
        lower = std::max(lower, s.f_lo);
    }

    CircleSup out;
    out.points = kFirst;
    for (;;) {
        double upper = 0.0;
        for (const auto& a : arcs) {
            upper = std::max(upper, a.bound);
        }
        upper = std::max(upper, lower);
        out.value = {LogScalar::from_double(lower).scaled(log_l0), LogScalar::from_double(upper).scaled(log_l0)};
        const double slack = tol * std::max(std::exp(-log_l0), upper);
        if (upper - lower <= slack) {
            out.converged = true;
            return out;
        }
        // Bisect only the arcs that could still hold the maximum.
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            if (arcs[i].bound > lower + slack) {
                active.push_back(i);
            }
        }
        if (out.points + active.size() > kMaxSamples) {
            out.converged = false;
            return out;
        }
        const auto mids = map_indices<CircleSample>(
            active.size(),
            [&](std::size_t k) {
                const Arc& a = arcs[active[k]];
                const double t = 0.5 * (a.left.theta + a.right.theta);
                return sample(t, {std::cos(t), std::sin(t)});
            },
            options.exec);
        out.points += active.size();
        std::vector<Arc> next;
        next.reserve(arcs.size() + active.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            if (k < active.size() && active[k] == i) {
                const CircleSample& m = mids[k++];
                lower = std::max(lower, m.f_lo);
                next.push_back({arcs[i].left, m, arc_bound(arcs[i].left, m)});
                next.push_back({m, arcs[i].right, arc_bound(m, arcs[i].right)});
            } else if (arcs[i].bound > lower) {
                next.push_back(arcs[i]);
            }
        }
        arcs = std::move(next);
    }
}

BoundedValue sup_norm(const EntireFunction& f, std::uint64_t m, double tol, const EvalOptions& options)
{
    require(m >= 1, "sup_norm needs m >= 1");
    const CircleSup c = circle_sup(f, static_cast<double>(m), tol, options);
    if (!c.converged) {
        throw Error(ErrorKind::ToleranceUnreachable,
                    "circle sampling did not reach the tolerance with " + std::to_string(c.points) + " points");
    }
    return c.value;
}

double frechet_distance(const EntireFunction& f, const EntireFunction& g, std::uint64_t K, double tol,
                        const EvalOptions& options)
{
    require(K >= 1, "frechet_distance needs K >= 1");
    if (f.same_as(g)) {
        return 0.0;
    }
    const EntireFunction h = combine({1.0, -1.0}, {f, g});
    if (h.kind() == EntireFunction::Kind::Zero) {
        return 0.0;
    }
    double total = 0.0;
    double weight = 1.0;
    bool saturated = false;
    for (std::uint64_t k = 1; k <= K; ++k) {
        weight *= 0.5;
        if (!saturated) {
            // The sup over nested disks only grows, so once it reaches 1 it stays there.
            const BoundedValue v = circle_sup(h, static_cast<double>(k), tol, options).value;
            if (v.lower_value() >= 1.0) {
                saturated = true;
            } else {
                total += weight * std::min(1.0, v.midpoint());
                continue;
            }
        }
        total += weight;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Probes

std::vector<std::uint64_t> sample_block(std::uint64_t lo, std::uint64_t hi, std::size_t budget)
{
    require(lo <= hi, "sample_block needs lo <= hi");
    require(budget >= 2, "sample budget must be at least 2");
    const unsigned __int128 span = static_cast<unsigned __int128>(hi) - lo;
    std::vector<std::uint64_t> out;
    if (span + 1 <= budget) {
        for (unsigned __int128 k = 0; k <= span; ++k) {
            out.push_back(lo + static_cast<std::uint64_t>(k));
        }
        return out;
    }
    out.reserve(budget);
    for (std::size_t i = 0; i < budget; ++i) {
        const unsigned __int128 off = span * i / (budget - 1);
        out.push_back(lo + static_cast<std::uint64_t>(off));
    }
    return out;
}

ProbeReport irregularity_probe(const EntireFunction& f, const GapSchedule& s, std::uint64_t m, std::size_t level,
                               std::size_t budget, double tol, const EvalOptions& options)
{
    require(level >= 1, "probe level must be at least 1");
    require(level <= s.levels, "probe level exceeds the schedule");
    require(m >= 1 && m <= level, "probe needs 1 <= m <= level");
    static const BigInt cap = std::numeric_limits<std::uint64_t>::max();

    ProbeReport rep;
    rep.m = m;
    rep.level = level;
    EvalOptions inner = options;
    inner.exec = Exec::serial;
    for (std::size_t N = 0; N < level; ++N) {
        const BigInt a_hi = s.alphas[N] * s.alphas[N];
        const BigInt b_hi = s.betas[N] * s.betas[N];
        if (b_hi > cap) {
            throw Error(ErrorKind::InfeasibleLevel,
                        "level " + std::to_string(N + 1) + " blocks exceed 64-bit indices");
        }
        const auto js = sample_block(s.alphas[N].convert_to<std::uint64_t>(), a_hi.convert_to<std::uint64_t>(), budget);
        const auto decay = map_indices<BoundedValue>(
            js.size(), [&](std::size_t i) { return sup_norm(derivative(f, js[i]), m, tol, inner); }, options.exec);
        for (std::size_t i = 0; i < js.size(); ++i) {
            rep.decay_records.push_back({js[i], decay[i]});
        }
        const auto ns = sample_block(s.betas[N].convert_to<std::uint64_t>(), b_hi.convert_to<std::uint64_t>(), budget);
        for (const auto n : ns) {
            rep.growth_records.push_back({n, BoundedValue::exact(f.coeff(n).abs())});
        }
    }
    return rep;
}

ProbeReport irregularity_probe(const EntireFunction& f, std::uint64_t m, std::size_t level, std::size_t budget,
                               double tol, const EvalOptions& options)
{
    if (const GapSchedule* s = f.schedule()) {
        return irregularity_probe(f, *s, m, level, budget, tol, options);
    }
    return irregularity_probe(f, compute_schedule(level), m, level, budget, tol, options);
}

std::string ProbeReport::to_csv() const
{
    std::string out = csv_row({"index", "set", "value_lower", "value_upper"});
    for (const auto& r : decay_records) {
        out += csv_row({std::to_string(r.index), "A", format_double(r.value.lower_value()),
                        format_double(r.value.upper_value())});
    }
    for (const auto& r : growth_records) {
        out += csv_row({std::to_string(r.index), "B", format_double(r.value.lower_value()),
                        format_double(r.value.upper_value())});
    }
    return out;
}

std::string ProbeReport::to_json() const
{
    auto records = [](const std::vector<ProbeRecord>& rs) {
        std::string out = "[";
        for (std::size_t i = 0; i < rs.size(); ++i) {
            out += (i ? "," : "");
            out += "{\"index\":" + std::to_string(rs[i].index) +
                   ",\"value_lower\":" + json_number(rs[i].value.lower_value()) +
                   ",\"value_upper\":" + json_number(rs[i].value.upper_value()) + "}";
        }
        return out + "]";
    };
    return "{\"m\":" + std::to_string(m) + ",\"level\":" + std::to_string(level) +
           ",\"decay_records\":" + records(decay_records) + ",\"growth_records\":" + records(growth_records) + "}";
}

// ---------------------------------------------------------------------------
// Linear combinations of the logarithmic family

namespace {

// Smallest n >= 1 such that pred holds on [n, 2^62]; pred must be monotone
// (false then true) on the searched range.
std::uint64_t first_true(std::uint64_t lo, const std::function<bool(std::uint64_t)>& pred)
{
    std::uint64_t hi = std::uint64_t{1} << 62;
    if (!pred(hi)) {
        return hi;
    }
    if (pred(lo)) {
        return lo;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

} // namespace

CombinationGrowth combination_growth(const std::vector<std::complex<double>>& weights,
                                     const std::vector<double>& exponents, const GapSchedule& s, std::size_t budget,
                                     double ratio)
{
    if (weights.size() != exponents.size()) {
        throw Error(ErrorKind::LengthMismatch, "combination_growth: weights and exponents differ in length");
    }
    require(s.levels >= 1, "combination_growth needs a schedule with at least one level");
    require(ratio > 0.0 && ratio < 1.0, "ratio must lie in (0, 1)");
    CombinationGrowth out;
    bool found = false;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        require(exponents[k] > 0.0, "exponents must be positive");
        if (std::abs(weights[k]) != 0.0 && (!found || exponents[k] > exponents[out.dominant])) {
            out.dominant = k;
            found = true;
        }
    }
    require(found, "combination_growth needs a nonzero weight");
    const std::size_t d = out.dominant;
    const double t_dom = exponents[d];
    const double c_dom = std::abs(weights[d]);
    double t_max = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (std::abs(weights[k]) != 0.0) {
            t_max = std::max(t_max, exponents[k]);
        }
    }

    // Lower exponents lose to the dominant one once sum_k |c_k| L^{t_k - t_dom} <= (1 - ratio) |c_dom|,
    // and the left side decreases in L = ln(n+1).
    auto dominates = [&](std::uint64_t n) {
        const double L = std::log1p(static_cast<double>(n));
        double rest = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            if (k != d && std::abs(weights[k]) != 0.0) {
                rest += std::abs(weights[k]) * std::pow(L, exponents[k] - t_dom);
            }
        }
        return rest <= (1.0 - ratio) * c_dom;
    };
    // (ln(n+1))^t <= n, monotone for n >= e^t.
    auto log_branch = [&](std::uint64_t n) {
        return t_max * std::log(std::log1p(static_cast<double>(n))) <= std::log(static_cast<double>(n));
    };
    const auto branch_floor = static_cast<std::uint64_t>(std::ceil(std::exp(t_max)));
    std::uint64_t branch = first_true(std::max<std::uint64_t>(branch_floor, 1), log_branch);
    while (branch > 1 && log_branch(branch - 1)) {
        --branch;
    }
    out.threshold = std::max(first_true(1, dominates), branch);

    std::vector<EntireFunction> parts;
    for (const double t : exponents) {
        parts.push_back(build_log_family(t, s));
    }
    const EntireFunction F = combine(weights, parts);
    const BigInt b_hi = s.betas[0] * s.betas[0];
    out.holds = true;
    for (const auto n : sample_block(s.betas[0].convert_to<std::uint64_t>(), saturate_u64(b_hi), budget)) {
        if (n < out.threshold) {
            continue;
        }
        out.samples.push_back(n);
        const double need = std::log(ratio * c_dom) + t_dom * std::log(std::log1p(static_cast<double>(n)));
        if (F.coeff(n).log_abs() < need) {
            out.holds = false;
        }
    }
    return out;
}

} // namespace entlab
