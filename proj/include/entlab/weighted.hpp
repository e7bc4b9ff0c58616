#pragma once

// Radial weights, the weighted sup-norms sup_r v(r) M_p(f, r), and probes of
// membership and derivative orbits in the weighted spaces.

#include <string>
#include <vector>

#include "entlab/means.hpp"

namespace entlab {

class WeightSpec {
public:
    enum class Form { PowerExp, Table };

    /// v(r) = r^b e^{-r} for r >= r0 and v(r0) below, with r0 = b for b > 0,
    /// r0 = 0 for b = 0 and r0 = 1 for b < 0.
    static WeightSpec power_exp(double b);
    /// Log-linear interpolation through (radii, values); constant before the
    /// first radius and continued along the last segment after the final one.
    static WeightSpec table(std::vector<double> radii, std::vector<double> values);

    [[nodiscard]] Form form() const noexcept { return form_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] double log_eval(double r) const;
    [[nodiscard]] double eval(double r) const;
    [[nodiscard]] std::string describe() const;

private:
    Form form_ = Form::PowerExp;
    double b_ = 0.0;
    std::vector<double> radii_;
    std::vector<double> log_values_;
};

inline double weight_eval(const WeightSpec& v, double r)
{
    return v.eval(r);
}

struct WeightAxioms {
    bool positive = false;
    bool non_increasing = false;
    bool polynomial_decay = false;  // r^m v(r) -> 0 on the grid tail for m = 1, 2, 3

    [[nodiscard]] bool ok() const { return positive && non_increasing && polynomial_decay; }
};

WeightAxioms check_weight_axioms(const WeightSpec& v, const std::vector<double>& grid);

enum class TailVerdict { Vanishing, Bounded, Diverging };
std::string to_string(TailVerdict v);

/// Thresholds for the tail verdict over the last decade of the grid.
struct TailRule {
    double diverging_growth = 10.0;  // final / decade-start
    double vanishing_fraction = 1e-6; // final / sup
};

struct WeightedNormReport {
    double p = 2.0;
    std::vector<double> grid;
    std::vector<BoundedValue> values;  // v(r) M_p(f, r)
    BoundedValue sup;                  // [max lower, max upper]
    std::size_t argsup = 0;
    TailVerdict verdict = TailVerdict::Vanishing;

    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] std::string to_json() const;
};

/// Verdict on log-values: vanishing if the last decade decreases and ends
/// below vanishing_fraction * sup, diverging if it grows by diverging_growth.
TailVerdict tail_verdict(const std::vector<double>& grid, const std::vector<double>& log_values,
                         const TailRule& rule = {});

WeightedNormReport weighted_norm(const EntireFunction& f, const WeightSpec& v, const MeanParams& params,
                                 const std::vector<double>& grid, double tol = 1e-10,
                                 const EvalOptions& options = {}, const TailRule& rule = {});

enum class Membership { InBp0, InBpInfOnly, Outside, Inconclusive };
std::string to_string(Membership m);

struct MembershipResult {
    Membership verdict = Membership::Inconclusive;
    std::string basis;
};

MembershipResult membership_probe(const EntireFunction& f, const WeightSpec& v, const MeanParams& params,
                                  const EvalOptions& options = {});

/// Grid-sup weighted norms of D^j f for j sampled in the A-blocks (decay
/// records) and B-blocks (growth records) up to `level`.
ProbeReport weighted_orbit_probe(const EntireFunction& f, const WeightSpec& v, const MeanParams& params,
                                 const GapSchedule& s, std::size_t level, std::size_t budget = 16,
                                 const std::vector<double>& grid = geometric_grid(0.0625, 128.0, 64),
                                 const EvalOptions& options = {});

} // namespace entlab
