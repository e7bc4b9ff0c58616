#include "entlab/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "entlab/errors.hpp"
#include "entlab/means.hpp"
#include "entlab/report_io.hpp"
#include "entlab/weighted.hpp"

namespace entlab::cli {

namespace {

double parse_number(std::string_view text, std::string_view what)
{
    const std::string s(text);
    if (s == "inf" || s == "infinity") {
        return kInfP;
    }
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x)) {
        throw Error(ErrorKind::InvalidArgument, "cannot read " + std::string(what) + " from '" + s + "'");
    }
    return x;
}

std::uint64_t parse_index(std::string_view text, std::string_view what)
{
    std::uint64_t n = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::InvalidArgument, "cannot read " + std::string(what) + " from '" + std::string(text) + "'");
    }
    return n;
}

std::vector<double> parse_list(std::string_view text, std::string_view what)
{
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        values.push_back(parse_number(text.substr(start, end - start), what));
        start = end + 1;
    }
    return values;
}

std::pair<std::string, std::string> split_spec(const std::string& spec)
{
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos) {
        return {spec, ""};
    }
    return {spec.substr(0, colon), spec.substr(colon + 1)};
}

std::vector<double> read_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidArgument, "cannot open omega table '" + path + "'");
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    for (char& ch : text) {
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == '\t') {
            ch = ' ';
        }
    }
    std::vector<double> values;
    std::istringstream tokens(text);
    std::string token;
    while (tokens >> token) {
        values.push_back(parse_number(token, "omega table entry"));
    }
    return values;
}

OmegaSpec parse_omega(const std::string& spec)
{
    const auto [kind, arg] = split_spec(spec);
    if (kind == "power") {
        return OmegaSpec::power(parse_number(arg, "omega exponent"));
    }
    if (kind == "logpower") {
        return OmegaSpec::log_power(parse_number(arg, "omega log exponent"));
    }
    if (kind == "table") {
        return OmegaSpec::table(read_table(arg));
    }
    throw Error(ErrorKind::InvalidArgument, "unknown omega '" + spec + "'");
}

struct Built {
    EntireFunction f;
    std::optional<GapSchedule> schedule;
};

Built make_function(const RunConfig& c)
{
    const auto [kind, arg] = split_spec(c.function);
    if (kind == "gap" || kind == "log") {
        GapSchedule s = compute_schedule(c.levels);
        EntireFunction f = kind == "gap" ? build_irregular(parse_omega(c.omega), s)
                                         : build_log_family(parse_number(arg, "log exponent"), s);
        return {f, std::move(s)};
    }
    if (kind == "exp") {
        return {EntireFunction::exponential(), std::nullopt};
    }
    if (kind == "zero") {
        return {EntireFunction::zero(), std::nullopt};
    }
    if (kind == "monomial") {
        return {EntireFunction::monomial(parse_index(arg, "monomial degree")), std::nullopt};
    }
    if (kind == "poly") {
        std::vector<std::complex<double>> a;
        for (const double x : parse_list(arg, "polynomial coefficient")) {
            a.emplace_back(x, 0.0);
        }
        return {EntireFunction::polynomial(a), std::nullopt};
    }
    if (kind == "random") {
        const std::uint64_t degree = parse_index(arg, "polynomial degree");
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        std::vector<std::complex<double>> a(degree + 1);
        for (auto& x : a) {
            const double re = unif(rng);
            x = {re, unif(rng)};
        }
        return {EntireFunction::polynomial(a), std::nullopt};
    }
    throw Error(ErrorKind::InvalidArgument, "unknown function '" + c.function + "'");
}

MeanParams make_params(const std::string& p)
{
    return MeanParams::make(parse_number(p, "p"));
}

std::vector<double> radius_grid(const RunConfig& c, std::size_t default_points)
{
    const std::size_t n = c.points ? c.points : default_points;
    require(c.rmin > 0.0 && c.rmax > c.rmin && n >= 2, "radius grid needs 0 < rmin < rmax and at least 2 points");
    return geometric_grid(c.rmin, c.rmax, n);
}

std::string unsupported(const RunConfig& c)
{
    throw Error(ErrorKind::InvalidArgument, c.format + " output is not available for " + c.subcommand);
}

std::string json_array(const std::vector<double>& xs)
{
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out += (i ? "," : "") + json_number(xs[i]);
    }
    return out + "]";
}

std::string emit_schedule(const RunConfig& c)
{
    const GapSchedule s = compute_schedule(c.levels);
    if (c.format == "json") {
        return to_json(s) + "\n";
    }
    if (c.format == "csv") {
        std::string out = csv_row({"level", "alpha", "beta", "tail_lower", "tail_upper", "log_tail_lower", "log_tail_upper"});
        for (std::size_t i = 0; i < s.levels; ++i) {
            out += csv_row({std::to_string(i + 1), s.alphas[i].str(), s.betas[i].str(),
                            format_double(s.tails[i].lower_value()), format_double(s.tails[i].upper_value()),
                            format_double(s.tails[i].lower().log_mag()), format_double(s.tails[i].upper().log_mag())});
        }
        return out;
    }
    return unsupported(c);
}

std::string emit_build(const RunConfig& c)
{
    const Built b = make_function(c);
    std::vector<std::pair<std::uint64_t, std::complex<double>>> rows;
    for (auto n = b.f.next_support(0); n && *n <= c.index_cap; n = b.f.next_support(*n + 1)) {
        const LogComplex cn = b.f.coeff(*n);
        if (!cn.is_zero()) {
            rows.emplace_back(*n, cn.to_complex());
        }
        if (*n == UINT64_MAX) {
            break;
        }
    }
    if (c.format == "csv") {
        std::string out = csv_row({"n", "re", "im"});
        for (const auto& [n, z] : rows) {
            out += csv_row({std::to_string(n), format_double(z.real()), format_double(z.imag())});
        }
        return out;
    }
    if (c.format == "json") {
        std::string out = "{\"function\":" + json_string(c.function) + ",\"index_cap\":" + std::to_string(c.index_cap) +
                          ",\"coefficients\":[";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            out += (i ? "," : "");
            out += "{\"n\":" + std::to_string(rows[i].first) + ",\"re\":" + json_number(rows[i].second.real()) +
                   ",\"im\":" + json_number(rows[i].second.imag()) + "}";
        }
        return out + "]}\n";
    }
    return unsupported(c);
}

std::string emit_probe(const RunConfig& c)
{
    const GapSchedule s = compute_schedule(c.level);
    const EntireFunction f = build_irregular(parse_omega(c.omega), s);
    const ProbeReport r = irregularity_probe(f, s, c.m, c.level, c.budget, std::max(c.tol, 1e-8), {c.index_cap});
    if (c.format == "csv") {
        return r.to_csv();
    }
    if (c.format == "json") {
        return r.to_json() + "\n";
    }
    return unsupported(c);
}

std::string emit_means(const RunConfig& c, const std::string& p)
{
    const Built b = make_function(c);
    const MeanParams params = make_params(p);
    const auto grid = radius_grid(c, 64);
    const EvalOptions options{c.index_cap};
    const auto values = map_indices<BoundedValue>(
        grid.size(), [&](std::size_t i) { return mean_p(b.f, grid[i], params, c.tol, options); }, options.exec);
    if (c.format == "csv") {
        std::string out = csv_row({"r", "lower", "upper"});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out += csv_row({format_double(grid[i]), format_double(values[i].lower_value()),
                            format_double(values[i].upper_value())});
        }
        return out;
    }
    if (c.format == "json") {
        std::vector<double> lo;
        std::vector<double> hi;
        for (const auto& v : values) {
            lo.push_back(v.lower_value());
            hi.push_back(v.upper_value());
        }
        return "{\"function\":" + json_string(c.function) + ",\"p\":" + json_number(params.p) +
               ",\"r\":" + json_array(grid) + ",\"lower\":" + json_array(lo) + ",\"upper\":" + json_array(hi) + "}\n";
    }
    std::vector<double> mid;
    for (const auto& v : values) {
        mid.push_back(v.midpoint());
    }
    return svg_plot("M_p(f, r)", "r", "M_p", {{"p = " + format_double(params.p), grid, mid}}, true, true);
}

std::string emit_growth(const RunConfig& c, const std::string& p)
{
    const Built b = make_function(c);
    const GrowthCertificate g =
        growth_certificate(b.f, make_params(p), c.eps, radius_grid(c, 512), c.tol, {c.index_cap});
    if (c.format == "csv") {
        return g.to_csv();
    }
    if (c.format == "json") {
        return g.to_json() + "\n";
    }
    return svg_plot("r^(a-eps) e^(-r) M_p(f, r)", "r", "log value", {{"certificand", g.r_grid, g.log_values}}, true,
                    false);
}

std::string emit_region(const RunConfig& c)
{
    require(c.steps >= 2 && c.pmin >= 1.0 && c.pmax > c.pmin, "region needs 1 <= pmin < pmax and at least 2 steps");
    const auto rows = region_data(linear_grid(c.pmin, c.pmax, c.steps));
    if (c.format == "csv") {
        return region_csv(rows);
    }
    if (c.format == "json") {
        return region_json(rows) + "\n";
    }
    std::vector<double> ps;
    std::vector<double> yes;
    std::vector<double> no;
    for (const auto& r : rows) {
        ps.push_back(r.p);
        yes.push_back(r.yes_level);
        no.push_back(r.no_level);
    }
    return svg_plot("growth exponent region", "p", "a", {{"a(p)", ps, yes}, {"1/2", ps, no}});
}

std::string emit_lineability(const RunConfig& c, const std::string& p)
{
    if (c.weights.size() != c.exponents.size()) {
        throw Error(ErrorKind::LengthMismatch, "weights and exponents differ in length");
    }
    const GapSchedule s = compute_schedule(c.levels);
    std::vector<std::complex<double>> weights;
    std::vector<EntireFunction> parts;
    for (std::size_t k = 0; k < c.weights.size(); ++k) {
        weights.emplace_back(c.weights[k], 0.0);
        parts.push_back(build_log_family(c.exponents[k], s));
    }
    const EntireFunction F = combine(weights, parts);
    const CombinationGrowth cg = combination_growth(weights, c.exponents, s);
    const ProbeReport probe = irregularity_probe(F, s, c.m, c.m, c.budget, std::max(c.tol, 1e-8), {c.index_cap});
    double decay_max = 0.0;
    for (const auto& r : probe.decay_records) {
        decay_max = std::max(decay_max, r.value.upper_value());
    }
    const bool decay_ok = decay_max < 1.0 / static_cast<double>(c.m);
    const MeanParams params = make_params(p);
    const auto grid = radius_grid(c, 512);
    std::vector<GrowthCertificate> certs;
    for (const double eps : c.eps_list) {
        certs.push_back(growth_certificate(F, params, eps, grid, c.tol, {c.index_cap}));
    }
    if (c.format == "csv") {
        std::string out = csv_row({"check", "parameter", "value", "passed"});
        out += csv_row({"combination_growth", "threshold", std::to_string(cg.threshold), cg.holds ? "1" : "0"});
        out += csv_row({"decay", "m=" + std::to_string(c.m), format_double(decay_max), decay_ok ? "1" : "0"});
        for (const auto& g : certs) {
            out += csv_row({"growth", "eps=" + format_double(g.eps), format_double(g.sup),
                            g.verdict == TrendVerdict::InteriorMax ? "1" : "0"});
        }
        return out;
    }
    if (c.format == "json") {
        std::string out = "{\"weights\":" + json_array(c.weights) + ",\"exponents\":" + json_array(c.exponents) +
                          ",\"combination_growth\":{\"threshold\":" + std::to_string(cg.threshold) +
                          ",\"dominant\":" + std::to_string(cg.dominant) +
                          ",\"samples\":" + std::to_string(cg.samples.size()) +
                          ",\"holds\":" + (cg.holds ? "true" : "false") + "}" +
                          ",\"decay\":{\"m\":" + std::to_string(c.m) + ",\"max_upper\":" + json_number(decay_max) +
                          ",\"passed\":" + (decay_ok ? "true" : "false") + "},\"growth\":[";
        for (std::size_t i = 0; i < certs.size(); ++i) {
            const auto& g = certs[i];
            out += (i ? "," : "");
            out += "{\"eps\":" + json_number(g.eps) + ",\"sup\":" + json_number(g.sup) +
                   ",\"argmax\":" + json_number(g.argmax) + ",\"terminal_slope\":" + json_number(g.terminal_slope) +
                   ",\"verdict\":" + json_string(to_string(g.verdict)) + "}";
        }
        return out + "]}\n";
    }
    return unsupported(c);
}

std::string emit_weighted(const RunConfig& c, const std::string& p)
{
    const Built b = make_function(c);
    const WeightSpec v = WeightSpec::power_exp(c.b);
    const MeanParams params = make_params(p);
    const EvalOptions options{c.index_cap};
    if (c.mode == "norm") {
        const WeightedNormReport r = weighted_norm(b.f, v, params, radius_grid(c, 64), c.tol, options);
        if (c.format == "csv") {
            return r.to_csv();
        }
        if (c.format == "json") {
            return r.to_json() + "\n";
        }
        std::vector<double> mid;
        for (const auto& x : r.values) {
            mid.push_back(x.midpoint());
        }
        return svg_plot("v(r) M_p(f, r)", "r", "value", {{v.describe(), r.grid, mid}}, true, true);
    }
    if (c.mode == "membership") {
        const MembershipResult m = membership_probe(b.f, v, params, options);
        if (c.format == "csv") {
            return csv_row({"function", "weight", "p", "verdict", "basis"}) +
                   csv_row({c.function, v.describe(), format_double(params.p), to_string(m.verdict), m.basis});
        }
        if (c.format == "json") {
            return "{\"function\":" + json_string(c.function) + ",\"weight\":" + json_string(v.describe()) +
                   ",\"p\":" + json_number(params.p) + ",\"verdict\":" + json_string(to_string(m.verdict)) +
                   ",\"basis\":" + json_string(m.basis) + "}\n";
        }
        return unsupported(c);
    }
    if (c.mode == "orbit") {
        const GapSchedule s = b.schedule ? *b.schedule : compute_schedule(c.level);
        const ProbeReport r = weighted_orbit_probe(b.f, v, params, s, std::min(c.level, s.levels), 16,
                                                   radius_grid(c, 64), options);
        if (c.format == "csv") {
            return r.to_csv();
        }
        if (c.format == "json") {
            return r.to_json() + "\n";
        }
        return unsupported(c);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown weighted mode '" + c.mode + "'");
}

std::string error_json(std::string_view kind, std::string_view message)
{
    return "{\"error\":" + json_string(kind) + ",\"message\":" + json_string(message) + "}\n";
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig c;
    std::string p = "2";
    std::string format;

    CLI::App app{"Entire-function gap constructions, integral means and weighted norms"};
    app.require_subcommand(1);

    auto add_format = [&](CLI::App* sub, const std::string& fallback) {
        sub->add_option("--format", format, "Output format (default " + fallback + ")")
            ->check(CLI::IsMember({"csv", "json", "svg"}));
        sub->add_option("--output,-o", c.output, "Output path (default stdout)");
        sub->callback([&, fallback] {
            if (format.empty()) {
                format = fallback;
            }
        });
    };
    auto add_levels = [&](CLI::App* sub) {
        sub->add_option("--levels", c.levels, "Schedule levels")->capture_default_str();
    };
    auto add_function = [&](CLI::App* sub) {
        sub->add_option("--function,-f", c.function,
                        "gap | log:t | exp | zero | monomial:k | poly:a0,a1,... | random:degree")
            ->capture_default_str();
        sub->add_option("--omega", c.omega, "power:eps | logpower:t | table:path")->capture_default_str();
        sub->add_option("--seed", c.seed, "Seed for random polynomials")->capture_default_str();
        add_levels(sub);
    };
    auto add_numeric = [&](CLI::App* sub) {
        sub->add_option("--tol", c.tol, "Relative tolerance")->capture_default_str();
        sub->add_option("--index-cap", c.index_cap, "Largest coefficient index summed explicitly")
            ->capture_default_str();
    };
    auto add_grid = [&](CLI::App* sub, std::size_t points) {
        sub->add_option("--rmin", c.rmin, "Smallest radius")->capture_default_str();
        sub->add_option("--rmax", c.rmax, "Largest radius")->capture_default_str();
        sub->add_option("--points", c.points, "Geometric grid size (default " + std::to_string(points) + ")");
    };
    auto add_p = [&](CLI::App* sub) {
        sub->add_option("--p", p, "Mean exponent, 1 <= p <= inf")->capture_default_str();
    };

    auto* schedule = app.add_subcommand("schedule", "Emit the gap schedule");
    add_levels(schedule);
    add_format(schedule, "json");

    auto* build = app.add_subcommand("build", "Emit the nonzero Taylor data f^(n)(0) up to the index cap");
    add_function(build);
    add_numeric(build);
    add_format(build, "csv");

    auto* probe = app.add_subcommand("probe", "Irregularity probe of the gap function");
    probe->add_option("--omega", c.omega, "power:eps | logpower:t | table:path")->capture_default_str();
    probe->add_option("--level", c.level, "Blocks probed")->capture_default_str();
    probe->add_option("--m", c.m, "Disk radius for the decay records")->capture_default_str();
    probe->add_option("--budget", c.budget, "Indices sampled per block")->capture_default_str();
    add_numeric(probe);
    add_format(probe, "csv");

    auto* means = app.add_subcommand("means", "Integral means M_p(f, r) over a radius grid");
    add_function(means);
    add_p(means);
    add_grid(means, 64);
    add_numeric(means);
    add_format(means, "csv");

    auto* growth = app.add_subcommand("growth", "Growth certificate r^(a-eps) e^(-r) M_p(f, r)");
    add_function(growth);
    add_p(growth);
    growth->add_option("--eps", c.eps, "Growth exponent")->capture_default_str();
    add_grid(growth, 512);
    add_numeric(growth);
    add_format(growth, "csv");

    auto* region = app.add_subcommand("region", "Region table (p, 1/(2 max(2, p)), 1/2)");
    region->add_option("--pmin", c.pmin, "Smallest p")->capture_default_str();
    region->add_option("--pmax", c.pmax, "Largest p")->capture_default_str();
    region->add_option("--steps", c.steps, "Evenly spaced p values")->capture_default_str();
    add_format(region, "csv");

    auto* lineability = app.add_subcommand("lineability", "Combine logarithmic-family functions and certify them");
    lineability->add_option("--t", c.exponents, "Exponents t_k")->delimiter(',')->capture_default_str();
    lineability->add_option("--weights", c.weights, "Weights c_k")->delimiter(',')->capture_default_str();
    lineability->add_option("--eps", c.eps_list, "Growth exponents certified")->delimiter(',')->capture_default_str();
    lineability->add_option("--m", c.m, "Disk radius and level of the decay probe")->capture_default_str();
    lineability->add_option("--budget", c.budget, "Indices sampled per block")->capture_default_str();
    add_levels(lineability);
    add_p(lineability);
    add_grid(lineability, 512);
    add_numeric(lineability);
    add_format(lineability, "json");

    auto* weighted = app.add_subcommand("weighted", "Weighted norms, membership and orbit probes for v = r^b e^-r");
    add_function(weighted);
    add_p(weighted);
    weighted->add_option("--b", c.b, "Weight exponent")->capture_default_str();
    weighted->add_option("--mode", c.mode, "norm | membership | orbit")
        ->check(CLI::IsMember({"norm", "membership", "orbit"}))
        ->capture_default_str();
    weighted->add_option("--level", c.level, "Blocks probed in orbit mode")->capture_default_str();
    add_grid(weighted, 64);
    add_numeric(weighted);
    add_format(weighted, "csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << error_json("InvalidArgument", e.what());
        return kExitInvalid;
    }

    const std::map<const CLI::App*, std::function<std::string()>> handlers{
        {schedule, [&] { return emit_schedule(c); }},
        {build, [&] { return emit_build(c); }},
        {probe, [&] { return emit_probe(c); }},
        {means, [&] { return emit_means(c, p); }},
        {growth, [&] { return emit_growth(c, p); }},
        {region, [&] { return emit_region(c); }},
        {lineability, [&] { return emit_lineability(c, p); }},
        {weighted, [&] { return emit_weighted(c, p); }},
    };
    try {
        const CLI::App* sub = app.get_subcommands().front();
        c.subcommand = sub->get_name();
        c.format = format;
        const std::string document = handlers.at(sub)();
        if (c.output.empty()) {
            out << document;
            out.flush();
        } else {
            std::ofstream file(c.output, std::ios::binary);
            if (!(file << document)) {
                throw Error(ErrorKind::InvalidArgument, "cannot write '" + c.output + "'");
            }
        }
        return kExitOk;
    } catch (const Error& e) {
        err << error_json(to_string(e.kind()), e.what());
        return e.is_numeric() ? kExitNumeric : kExitInvalid;
    } catch (const std::exception& e) {
        err << error_json("InvalidArgument", e.what());
        return kExitInvalid;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace entlab::cli
