#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include <doctest.h>

#include "entlab/cli.hpp"

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "entlab");
    std::ostringstream out;
    std::ostringstream err;
    const int code = entlab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<std::string> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            row.push_back(cell);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST_CASE("schedule with no levels")
{
    const Result r = run({"schedule", "--levels", "0"});
    CHECK(r.code == 0);
    CHECK(r.out == "{\"levels\":0,\"alphas\":[],\"betas\":[]}\n");
}

TEST_CASE("schedule csv")
{
    const Result r = run({"schedule", "--levels", "2", "--format", "csv"});
    CHECK(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][1] == "10");
    CHECK(rows[2][2] == "3264643209");
}

TEST_CASE("region rows")
{
    const Result r = run({"region", "--pmin", "1", "--pmax", "6", "--steps", "6"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\n2,0.25,0.5\n") != std::string::npos);
    CHECK(r.out.find("\n3,0.16666666666666666,0.5\n") != std::string::npos);
    const Result golden = run({"region", "--pmin", "1", "--pmax", "6", "--steps", "11"});
    const std::string frozen = read_file(std::string(ENTLAB_GOLDEN_DIR) + "/region.csv");
    CHECK(golden.out == frozen);
    const auto rows = parse_csv(frozen);
    REQUIRE(rows.size() == 12);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double p = std::stod(rows[i][0]);
        CHECK(p == doctest::Approx(1.0 + 0.5 * static_cast<double>(i - 1)));
        CHECK(std::stod(rows[i][1]) == doctest::Approx(1.0 / (2.0 * std::max(2.0, p))));
        CHECK(rows[i][2] == "0.5");
    }
    const Result svg = run({"region", "--format", "svg"});
    CHECK(svg.out.find("<svg") != std::string::npos);
}

TEST_CASE("probe rows at level 1")
{
    const Result r = run({"probe", "--omega", "power:0.1", "--level", "1", "--m", "1"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] == std::vector<std::string>{"index", "set", "value_lower", "value_upper"});
    std::size_t a_rows = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][1] == "A") {
            ++a_rows;
            CHECK(std::strtod(rows[i][3].c_str(), nullptr) < 1.0);
        }
    }
    CHECK(a_rows == 91);
}

TEST_CASE("csv and json carry the same values")
{
    const Result csv = run({"growth", "-f", "monomial:2", "--points", "16"});
    const Result json = run({"growth", "-f", "monomial:2", "--points", "16", "--format", "json"});
    REQUIRE(csv.code == 0);
    REQUIRE(json.code == 0);
    const auto rows = parse_csv(csv.out);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(json.out.find(rows[i][0]) != std::string::npos);
        CHECK(json.out.find(rows[i][2]) != std::string::npos);
    }
}

TEST_CASE("other subcommands")
{
    const Result build = run({"build", "--levels", "1", "--index-cap", "205"});
    CHECK(build.code == 0);
    CHECK(parse_csv(build.out).size() == 6);

    const Result means = run({"means", "-f", "random:5", "--seed", "3", "--p", "inf", "--points", "4"});
    CHECK(means.code == 0);
    CHECK(parse_csv(means.out).size() == 5);

    const Result member = run({"weighted", "-f", "exp", "--p", "inf", "--b", "0.5", "--format", "json"});
    CHECK(member.code == 0);
    CHECK(member.out.find("\"verdict\":\"outside\"") != std::string::npos);

    const Result line = run({"lineability", "--eps", "0.1", "--points", "64"});
    CHECK(line.code == 0);
    CHECK(line.out.find("\"holds\":true") != std::string::npos);
}

TEST_CASE("outputs are deterministic")
{
    const std::vector<std::string> args{"means", "-f", "random:20", "--seed", "9", "--p", "3", "--points", "8"};
    CHECK(run(args).out == run(args).out);
}

TEST_CASE("invalid arguments exit with 2 and an error object")
{
    const Result none = run({});
    CHECK(none.code == 2);
    CHECK(none.err.rfind("{\"error\":", 0) == 0);
    CHECK(run({"means", "--p", "0.5"}).code == 2);
    CHECK(run({"means", "-f", "nonsense"}).code == 2);
    CHECK(run({"region", "--format", "xml"}).code == 2);
    CHECK(run({"probe", "--format", "svg"}).code == 2);
    CHECK(run({"lineability", "--t", "1,2,3"}).code == 2);
    CHECK(run({"build", "--omega", "table:/nonexistent"}).code == 2);
}

TEST_CASE("numeric failures exit with 3")
{
    const Result r = run({"means", "-f", "exp", "--rmin", "1000", "--rmax", "2000", "--points", "2", "--index-cap", "100"});
    CHECK(r.code == 3);
    CHECK(r.err.find("\"error\":\"InfeasibleLevel\"") != std::string::npos);
}

TEST_CASE("the installed binary writes to a file")
{
    const std::string path = "test_cli_region.csv";
    const std::string cmd = std::string(ENTLAB_CLI_PATH) + " region --steps 11 -o " + path;
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(read_file(path) == read_file(std::string(ENTLAB_GOLDEN_DIR) + "/region.csv"));
    std::remove(path.c_str());
}
