#include "entlab/weighted.hpp"

#include <algorithm>
#include <cmath>

#include "entlab/report_io.hpp"

namespace entlab {

WeightSpec WeightSpec::power_exp(double b)
{
    require(std::isfinite(b), "weight exponent must be finite");
    WeightSpec v;
    v.form_ = Form::PowerExp;
    v.b_ = b;
    return v;
}

WeightSpec WeightSpec::table(std::vector<double> radii, std::vector<double> values)
{
    if (radii.size() != values.size()) {
        throw Error(ErrorKind::LengthMismatch, "weight table radii and values differ in length");
    }
    require(radii.size() >= 2, "weight table needs at least two points");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        require(radii[i] >= 0.0 && std::isfinite(radii[i]), "weight radii must be finite and nonnegative");
        require(values[i] > 0.0 && std::isfinite(values[i]), "weight values must be positive");
        if (i > 0) {
            require(radii[i] > radii[i - 1], "weight radii must be increasing");
        }
    }
    WeightSpec v;
    v.form_ = Form::Table;
    v.radii_ = std::move(radii);
    v.log_values_.reserve(values.size());
    for (const double x : values) {
        v.log_values_.push_back(std::log(x));
    }
    return v;
}

double WeightSpec::log_eval(double r) const
{
    require(r >= 0.0, "weight needs r >= 0");
    if (form_ == Form::PowerExp) {
        if (b_ == 0.0) {
            return -r;
        }
        const double r0 = b_ > 0.0 ? b_ : 1.0;
        const double x = std::max(r, r0);
        return b_ * std::log(x) - x;
    }
    if (r <= radii_.front()) {
        return log_values_.front();
    }
    auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
    const std::size_t hi = it == radii_.end() ? radii_.size() - 1 : static_cast<std::size_t>(it - radii_.begin());
    const std::size_t lo = hi - 1;
    const double t = (r - radii_[lo]) / (radii_[hi] - radii_[lo]);
    return log_values_[lo] + t * (log_values_[hi] - log_values_[lo]);
}

double WeightSpec::eval(double r) const
{
    return std::exp(log_eval(r));
}

std::string WeightSpec::describe() const
{
    return form_ == Form::PowerExp ? "powerexp:" + format_double(b_) : "table:" + std::to_string(radii_.size());
}

namespace {

bool last_decade_decreasing(const std::vector<double>& grid, const std::vector<double>& logs)
{
    const double cut = grid.back() / 10.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i - 1] >= cut && logs[i] > logs[i - 1]) {
            return false;
        }
    }
    return true;
}

} // namespace

WeightAxioms check_weight_axioms(const WeightSpec& v, const std::vector<double>& grid)
{
    require(!grid.empty(), "axiom check needs a grid");
    WeightAxioms ax;
    std::vector<double> logs;
    logs.reserve(grid.size());
    for (const double r : grid) {
        logs.push_back(v.log_eval(r));
    }
    ax.positive = std::all_of(logs.begin(), logs.end(), [](double l) { return std::isfinite(l); });
    ax.non_increasing = true;
    for (std::size_t i = 1; i < logs.size(); ++i) {
        ax.non_increasing = ax.non_increasing && logs[i] <= logs[i - 1];
    }
    ax.polynomial_decay = true;
    for (int m = 1; m <= 3; ++m) {
        std::vector<double> moment(grid.size());
        double top = kNegInf;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            moment[i] = m * std::log(grid[i]) + logs[i];
            top = std::max(top, moment[i]);
        }
        const bool small_end = moment.back() <= top + std::log(1e-6);
        ax.polynomial_decay = ax.polynomial_decay && small_end && last_decade_decreasing(grid, moment);
    }
    return ax;
}

std::string to_string(TailVerdict v)
{
    switch (v) {
    case TailVerdict::Vanishing: return "vanishing";
    case TailVerdict::Bounded: return "bounded";
    case TailVerdict::Diverging: return "diverging";
    }
    return "unknown";
}

std::string to_string(Membership m)
{
    switch (m) {
    case Membership::InBp0: return "in_Bp0";
    case Membership::InBpInfOnly: return "in_Bpinf_only";
    case Membership::Outside: return "outside";
    case Membership::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

TailVerdict tail_verdict(const std::vector<double>& grid, const std::vector<double>& log_values, const TailRule& rule)
{
    require(grid.size() == log_values.size() && !grid.empty(), "verdict needs matching nonempty data");
    const double top = *std::max_element(log_values.begin(), log_values.end());
    if (top == kNegInf) {
        return TailVerdict::Vanishing;
    }
    const double cut = grid.back() / 10.0;
    std::size_t start = grid.size() - 1;
    while (start > 0 && grid[start - 1] >= cut) {
        --start;
    }
    if (log_values.back() - log_values[start] >= std::log(rule.diverging_growth)) {
        return TailVerdict::Diverging;
    }
    if (last_decade_decreasing(grid, log_values) && log_values.back() <= top + std::log(rule.vanishing_fraction)) {
        return TailVerdict::Vanishing;
    }
    return TailVerdict::Bounded;
}

WeightedNormReport weighted_norm(const EntireFunction& f, const WeightSpec& v, const MeanParams& params,
                                 const std::vector<double>& grid, double tol, const EvalOptions& options,
                                 const TailRule& rule)
{
    require(!grid.empty() && grid.front() > 0.0, "grid must be nonempty and positive");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        require(grid[i] > grid[i - 1], "grid must be increasing");
    }
    const MeanParams mp = MeanParams::make(params.p);
    WeightedNormReport rep;
    rep.p = mp.p;
    rep.grid = grid;
    EvalOptions inner = options;
    inner.exec = Exec::serial;
    rep.values = map_indices<BoundedValue>(
        grid.size(),
        [&](std::size_t i) {
            const double lv = v.log_eval(grid[i]);
            const BoundedValue m = mean_p(f, grid[i], mp, tol, inner);
            return BoundedValue(m.lower().scaled(lv), m.upper().scaled(lv));
        },
        options.exec);

    std::vector<double> logs;
    LogScalar lo;
    LogScalar hi;
    for (std::size_t i = 0; i < rep.values.size(); ++i) {
        const auto& b = rep.values[i];
        logs.push_back(b.upper().log_mag());
        lo = max(lo, b.lower());
        if (hi < b.upper()) {
            hi = b.upper();
            rep.argsup = i;
        }
    }
    rep.sup = {lo, hi};
    rep.verdict = tail_verdict(grid, logs, rule);
    return rep;
}

std::string WeightedNormReport::to_csv() const
{
    std::string out = csv_row({"r", "value_lower", "value_upper"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out += csv_row({format_double(grid[i]), format_double(values[i].lower_value()),
                        format_double(values[i].upper_value())});
    }
    return out;
}

std::string WeightedNormReport::to_json() const
{
    std::string rows = "[";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        rows += (i ? "," : "");
        rows += "{\"r\":" + json_number(grid[i]) + ",\"value_lower\":" + json_number(values[i].lower_value()) +
                ",\"value_upper\":" + json_number(values[i].upper_value()) + "}";
    }
    return "{\"p\":" + json_number(p) + ",\"sup_lower\":" + json_number(sup.lower_value()) +
           ",\"sup_upper\":" + json_number(sup.upper_value()) + ",\"argsup\":" + json_number(grid[argsup]) +
           ",\"verdict\":" + json_string(to_string(verdict)) + ",\"values\":" + rows + "]}";
}

namespace {

Membership exponent_verdict(double e)
{
    if (e < 0.0) {
        return Membership::InBp0;
    }
    return e == 0.0 ? Membership::InBpInfOnly : Membership::Outside;
}

// Radii up to the largest power of two below the end of the first B-block,
// the range over which a scheduled function's means are not yet in a gap.
std::vector<double> scheduled_grid(const GapSchedule& s)
{
    double top = 128.0;
    if (s.levels >= 1) {
        const double end = (s.betas[0] * s.betas[0]).convert_to<double>();
        top = std::max(top, std::exp2(std::floor(std::log2(end))));
    }
    return geometric_grid(0.0625, top, 160);
}

} // namespace

MembershipResult membership_probe(const EntireFunction& f, const WeightSpec& v, const MeanParams& params,
                                  const EvalOptions& options)
{
    const MeanParams mp = MeanParams::make(params.p);
    using Kind = EntireFunction::Kind;
    if (f.kind() == Kind::Zero) {
        return {Membership::InBp0, "zero function"};
    }
    const bool power_exp = v.form() == WeightSpec::Form::PowerExp;
    if (power_exp && f.kind() == Kind::Polynomial) {
        return {Membership::InBp0, "polynomial: M_p <= C r^d and r^d v(r) -> 0"};
    }
    if (power_exp && f.kind() == Kind::Exponential) {
        // M_p(e^z, r) ~ e^r (2 pi p r)^{-1/(2p)}, so v M_p ~ r^{b - 1/(2p)}.
        const double e = std::isinf(mp.p) ? v.b() : v.b() - 1.0 / (2.0 * mp.p);
        return {exponent_verdict(e), "exponential closed form: v M_p ~ r^" + format_double(e)};
    }
    const double growth = f.growth_exponent();
    if (power_exp && f.schedule() != nullptr && std::isfinite(growth)) {
        // |c_n| = O(n^g) gives M_p <= C e^r r^{g - a} with a = 1/(2 max(2, p)).
        const double e = v.b() + growth - mp.a();
        const auto grid = scheduled_grid(*f.schedule());
        const WeightedNormReport rep = weighted_norm(f, v, mp, grid, 1e-10, options);
        std::vector<double> scaled;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            scaled.push_back(rep.values[i].upper().log_mag() - e * std::log(grid[i]));
        }
        if (tail_verdict(grid, scaled) == TailVerdict::Diverging) {
            return {Membership::Inconclusive, "grid data outgrow r^" + format_double(e)};
        }
        if (e < 0.0) {
            return {Membership::InBp0, "coefficient growth: v M_p <= C r^" + format_double(e) + ", grid consistent"};
        }
        if (rep.verdict == TailVerdict::Diverging) {
            return {Membership::Outside, "grid diverging"};
        }
        return {Membership::Inconclusive, "coefficient bound r^" + format_double(e) + " does not decay"};
    }
    const WeightedNormReport rep = weighted_norm(f, v, mp, default_radius_grid(), 1e-10, options);
    switch (rep.verdict) {
    case TailVerdict::Vanishing: return {Membership::InBp0, "grid vanishing"};
    case TailVerdict::Diverging: return {Membership::Outside, "grid diverging"};
    case TailVerdict::Bounded: break;
    }
    return {Membership::Inconclusive, "grid bounded"};
}

ProbeReport weighted_orbit_probe(const EntireFunction& f, const WeightSpec& v, const MeanParams& params,
                                 const GapSchedule& s, std::size_t level, std::size_t budget,
                                 const std::vector<double>& grid, const EvalOptions& options)
{
    require(level >= 1 && level <= s.levels, "orbit probe level must lie within the schedule");
    const MeanParams mp = MeanParams::make(params.p);
    static const BigInt cap = std::numeric_limits<std::uint64_t>::max();
    ProbeReport rep;
    rep.level = level;
    EvalOptions inner = options;
    inner.exec = Exec::serial;
    auto norm = [&](std::uint64_t j) {
        return weighted_norm(derivative(f, j), v, mp, grid, 1e-10, inner).sup;
    };
    for (std::size_t N = 0; N < level; ++N) {
        const BigInt b_hi = s.betas[N] * s.betas[N];
        if (b_hi > cap) {
            throw Error(ErrorKind::InfeasibleLevel,
                        "level " + std::to_string(N + 1) + " blocks exceed 64-bit indices");
        }
        const auto js = sample_block(s.alphas[N].convert_to<std::uint64_t>(),
                                     (s.alphas[N] * s.alphas[N]).convert_to<std::uint64_t>(), budget);
        const auto ns = sample_block(s.betas[N].convert_to<std::uint64_t>(), b_hi.convert_to<std::uint64_t>(), budget);
        const auto decay = map_indices<BoundedValue>(js.size(), [&](std::size_t i) { return norm(js[i]); }, options.exec);
        const auto growth = map_indices<BoundedValue>(ns.size(), [&](std::size_t i) { return norm(ns[i]); }, options.exec);
        for (std::size_t i = 0; i < js.size(); ++i) {
            rep.decay_records.push_back({js[i], decay[i]});
        }
        for (std::size_t i = 0; i < ns.size(); ++i) {
            rep.growth_records.push_back({ns[i], growth[i]});
        }
    }
    return rep;
}

} // namespace entlab
