#pragma once

// Gap schedule: the recursively chosen block endpoints alpha_N, beta_N and
// the index sets A = U [alpha_N, alpha_N^2], B = U [beta_N, beta_N^2].

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "entlab/numerics.hpp"

namespace entlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Bracket on sum_{n >= k} n^{1+n/2} N^n / n!.
BoundedValue tail_sum(std::uint64_t N, const BigInt& k);

struct ScheduleOptions {
    /// Candidates examined per level before giving up.
    std::uint64_t scan_budget = 1'000'000;
};

struct GapSchedule {
    std::size_t levels = 0;
    std::vector<BigInt> alphas;
    std::vector<BigInt> betas;
    std::vector<BoundedValue> tails;  // tail_sum(N, alpha_N)
};

GapSchedule compute_schedule(std::size_t levels, const ScheduleOptions& options = {});

struct Interval {
    BigInt lo;
    BigInt hi;
};

/// Ordered union of disjoint closed integer intervals.
class IndexSet {
public:
    IndexSet() = default;
    explicit IndexSet(std::vector<Interval> intervals);

    [[nodiscard]] const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    [[nodiscard]] bool empty() const noexcept { return intervals_.empty(); }
    [[nodiscard]] bool contains(const BigInt& n) const;
    /// card(S ∩ [1, n]).
    [[nodiscard]] BigInt count_upto(const BigInt& n) const;
    /// Smallest member >= n, if any.
    [[nodiscard]] std::optional<BigInt> next_member(const BigInt& n) const;
    [[nodiscard]] bool intersects(const IndexSet& other) const;

private:
    std::vector<Interval> intervals_;
};

/// (A, B) for the schedule.
std::pair<IndexSet, IndexSet> index_sets(const GapSchedule& s);

/// card(S ∩ [1, n]) / n. Requires n >= 1.
Rational prefix_density(const IndexSet& s, const BigInt& n);

/// Largest prefix density over the checkpoints.
double upper_density_estimate(const IndexSet& s, const std::vector<BigInt>& checkpoints);

/// Default checkpoints: the squared block starts alpha_N^2 (A) or beta_N^2 (B).
std::vector<BigInt> block_checkpoints(const std::vector<BigInt>& starts);

std::string to_json(const GapSchedule& s);

/// Saturating conversion used where indices feed 64-bit evaluation loops.
std::uint64_t saturate_u64(const BigInt& n);

} // namespace entlab
