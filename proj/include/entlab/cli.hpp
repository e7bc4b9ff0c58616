#pragma once

// Command-line front end. Every subcommand writes one CSV, JSON or SVG
// document; failures write a JSON error object to the error stream.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace entlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumeric = 3;

struct RunConfig {
    std::string subcommand;
    std::size_t levels = 2;
    std::string omega = "power:0.1";
    std::string function = "gap";
    double p = 2.0;
    double eps = 0.1;
    double b = 0.1;
    double rmin = 0.0625;
    double rmax = 128.0;
    std::size_t points = 512;
    double pmin = 1.0;
    double pmax = 6.0;
    std::size_t steps = 11;
    std::uint64_t m = 1;
    std::size_t level = 2;
    std::size_t budget = 128;
    std::string format;
    std::string output;
    double tol = 1e-10;
    std::uint64_t index_cap = 1'000'000;
    std::uint64_t seed = 1;
    std::vector<double> exponents{1.0, 2.0};
    std::vector<double> weights{2.0, -3.0};
    std::vector<double> eps_list{0.05, 0.1};
    std::string mode = "membership";
};

/// Parses argv (argv[0] is the program name) and runs the subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace entlab::cli
