#include <cmath>
#include <numbers>
#include <stdexcept>

#include <doctest.h>

#include "entlab/kernels.hpp"

using namespace entlab;

TEST_CASE("parallel map matches the serial reference")
{
    auto body = [](std::size_t i) { return std::sin(static_cast<double>(i)) * std::exp(-1e-3 * static_cast<double>(i)); };
    const auto serial = map_indices<double>(10'000, body, Exec::serial);
    const auto parallel = map_indices<double>(10'000, body, Exec::parallel);
    CHECK(serial == parallel);
    CHECK(map_indices<int>(0, [](std::size_t) { return 1; }, Exec::parallel).empty());
    CHECK(worker_count() >= 1);
}

TEST_CASE("the first failing index is reported")
{
    auto body = [](std::size_t i) -> int {
        if (i == 37 || i == 900) {
            throw std::runtime_error("index " + std::to_string(i));
        }
        return static_cast<int>(i);
    };
    for (const Exec e : {Exec::serial, Exec::parallel}) {
        try {
            (void)map_indices<int>(1000, body, e);
            FAIL("expected an exception");
        } catch (const std::runtime_error& err) {
            CHECK(std::string(err.what()) == "index 37");
        }
    }
}

TEST_CASE("unit roots are exact at quarter points")
{
    const auto w = unit_roots(8);
    REQUIRE(w.size() == 8);
    CHECK(w[0] == std::complex<double>(1.0, 0.0));
    CHECK(w[2] == std::complex<double>(0.0, 1.0));
    CHECK(w[4] == std::complex<double>(-1.0, 0.0));
    CHECK(w[6] == std::complex<double>(0.0, -1.0));
    CHECK(w[1].real() == doctest::Approx(std::numbers::sqrt2 / 2.0));
    for (const auto& z : unit_roots(1000)) {
        CHECK(std::abs(z) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("grids hit their endpoints exactly")
{
    const auto g = geometric_grid(0.0625, 128.0, 512);
    CHECK(g.front() == 0.0625);
    CHECK(g.back() == 128.0);
    CHECK(g[1] / g[0] == doctest::Approx(std::pow(2048.0, 1.0 / 511.0)));
    const auto l = linear_grid(1.0, 6.0, 11);
    CHECK(l[1] == 1.5);
    CHECK(l[2] == 2.0);
    CHECK(l[4] == 3.0);
    CHECK(l[10] == 6.0);
}
