#include "entlab/kernels.hpp"

#include <cmath>
#include <numbers>

#include <omp.h>

#include "entlab/errors.hpp"

namespace entlab {

Exec default_exec()
{
#ifdef ENTLAB_SERIAL
    return Exec::serial;
#else
    return Exec::parallel;
#endif
}

int worker_count()
{
    return omp_get_max_threads();
}

std::vector<std::complex<double>> unit_roots(std::size_t n)
{
    require(n >= 1, "unit_roots needs n >= 1");
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (4 * k % n == 0) {
            static constexpr std::complex<double> quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            out[k] = quarter[4 * k / n];
            continue;
        }
        const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        out[k] = {std::cos(t), std::sin(t)};
    }
    return out;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n)
{
    require(lo > 0.0 && hi >= lo, "geometric grid needs 0 < lo <= hi");
    require(n >= 1, "grid needs at least one point");
    if (n == 1) {
        return {lo};
    }
    std::vector<double> out(n);
    const double llo = std::log(lo);
    const double step = (std::log(hi) - llo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::exp(llo + step * static_cast<double>(i));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n)
{
    require(hi >= lo, "linear grid needs lo <= hi");
    require(n >= 1, "grid needs at least one point");
    if (n == 1) {
        return {lo};
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    out.back() = hi;
    return out;
}

} // namespace entlab
