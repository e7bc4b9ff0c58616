#pragma once

// Index-parallel map used for circle samples, quadrature nodes and radius
// grids. The serial path is the reference: both paths call the same body and
// store results by index, so their outputs are identical.

#include <complex>
#include <cstddef>
#include <exception>
#include <vector>

namespace entlab {

enum class Exec { serial, parallel };

/// Exec::parallel unless the ENTLAB_SERIAL build flag is set.
Exec default_exec();

int worker_count();

/// result[i] = fn(i) for i in [0, n). The first failing index (in index
/// order) has its exception rethrown after the loop.
template <class T, class Fn>
std::vector<T> map_indices(std::size_t n, Fn&& fn, Exec exec = default_exec())
{
    std::vector<T> out(n);
    if (exec == Exec::serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = fn(i);
        }
        return out;
    }
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (long long i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

/// e^{2 pi i k / n}, k = 0..n-1, with exact values at the quarter points.
std::vector<std::complex<double>> unit_roots(std::size_t n);

/// n points geometrically spaced from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

/// n points linearly spaced from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

} // namespace entlab
