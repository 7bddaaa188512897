#include <doctest.h>

#include <gicselect/cli.hpp>
#include <gicselect/report.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

using namespace gicselect;
namespace fs = std::filesystem;

namespace {

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run_args(std::vector<std::string> args)
{
    args.insert(args.begin(), "gicselect");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("gicselect_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Elements open and close in matching order; enough to catch broken markup.
bool well_formed(const std::string& xml)
{
    std::vector<std::string> stack;
    const std::regex tag(R"(<(/?)([A-Za-z][\w:-]*)[^<>]*?(/?)>)");
    for (auto it = std::sregex_iterator(xml.begin(), xml.end(), tag); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        if (m[1].length() > 0) {
            if (stack.empty() || stack.back() != m[2].str()) return false;
            stack.pop_back();
        } else if (m[3].length() == 0) {
            stack.push_back(m[2].str());
        }
    }
    return stack.empty() && xml.find('&') == std::string::npos;
}

void write_problem(const fs::path& dir)
{
    std::mt19937_64 rng(51);
    std::normal_distribution<double> normal;
    std::ofstream x(dir / "x.csv"), y(dir / "y.csv"), yb(dir / "yb.csv");
    x << "g1,g2,g3,g4,g5,g6\n";
    for (int i = 0; i < 60; ++i) {
        double v[6];
        for (double& e : v) e = normal(rng);
        for (int j = 0; j < 6; ++j) x << v[j] << (j < 5 ? "," : "\n");
        const double eta = 1.5 * v[0] - v[2];
        y << eta + normal(rng) << '\n';
        yb << (std::bernoulli_distribution(1 / (1 + std::exp(-eta)))(rng) ? 1 : 0) << '\n';
    }
}

}  // namespace

TEST_CASE("usage errors exit with status 1")
{
    const fs::path dir = scratch("usage");
    write_problem(dir);
    const std::string x = (dir / "x.csv").string(), y = (dir / "y.csv").string();
    CHECK(run_args({}).code == 1);
    CHECK(run_args({"fit", "--data", x, "--response", y}).code == 1);
    CHECK(run_args({"fit", "--data", x, "--response", y, "--lambda", "-1"}).code == 1);
    CHECK(run_args({"select", "--data", x, "--response", y, "--family", "gamma"}).code == 1);
    CHECK(run_args({"select", "--data", x, "--response", y, "--criteria", "hqc"}).code == 1);
    CHECK(run_args({"select", "--data", x, "--response", y, "--phi", "known:-2"}).code == 1);
    CHECK(run_args({"select", "--data", x, "--response", y, "--bogus", "1"}).code == 1);
    CHECK(run_args({"path", "--data", (dir / "missing.csv").string(), "--response", y}).code == 1);
    CHECK(run_args({"simulate", "--n", "50"}).code == 1);
    const Result r = run_args({"select", "--data", x, "--response", y, "--penalty", "ridge"});
    CHECK(r.err.find("usage error") != std::string::npos);
}

TEST_CASE("computation errors exit with status 2")
{
    const fs::path dir = scratch("compute");
    write_problem(dir);
    std::ofstream(dir / "bad.csv") << "1,2\n3,oops\n";
    const Result r = run_args({"path", "--data", (dir / "bad.csv").string(), "--response",
                               (dir / "y.csv").string(), "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("path") != std::string::npos);
}

TEST_CASE("fit, path and select write their artifacts")
{
    const fs::path dir = scratch("artifacts");
    write_problem(dir);
    const std::string x = (dir / "x.csv").string(), out = (dir / "out").string();
    REQUIRE(run_args({"fit", "--data", x, "--header", "--response", (dir / "y.csv").string(), "--lambda", "0.2",
                      "--out", out})
                .code == 0);
    const auto fit = nlohmann::json::parse(slurp(dir / "out" / "fit.json"));
    CHECK(fit["support_names"].size() >= 2);
    CHECK(fit["support_names"][0] == "g1");

    REQUIRE(run_args({"path", "--data", x, "--header", "--response", (dir / "y.csv").string(), "--grid", "25",
                      "--out", out})
                .code == 0);
    const std::string path = slurp(dir / "out" / "path.csv");
    CHECK(path.rfind(std::string(kPathCsvHeader) + "\n", 0) == 0);

    REQUIRE(run_args({"select", "--family", "binomial", "--penalty", "scad", "--criteria", "aic,bic,gic_lll",
                      "--data", x, "--header", "--response", (dir / "yb.csv").string(), "--out", out})
                .code == 0);
    const auto sel = nlohmann::json::parse(slurp(dir / "out" / "selection.json"));
    CHECK(sel["selections"].size() == 3);
    for (const char* c : {"aic", "bic", "gic_lll"}) CHECK(fs::exists(dir / "out" / (std::string("gic_") + c + ".csv")));
}

TEST_CASE("simulate is byte-identical across runs and plots match the CSV")
{
    const fs::path a = scratch("sim_a"), b = scratch("sim_b");
    const std::vector<std::string> common{"simulate", "--model", "linear", "--n", "100", "--reps", "5",
                                          "--seed", "7", "--criteria", "bic,gic_lll", "--threads", "2"};
    auto with_out = [&](const fs::path& d) {
        auto v = common;
        v.push_back("--out");
        v.push_back(d.string());
        return v;
    };
    REQUIRE(run_args(with_out(a)).code == 0);
    REQUIRE(run_args(with_out(b)).code == 0);
    CHECK(slurp(a / "simulation.csv") == slurp(b / "simulation.csv"));
    CHECK(slurp(a / "simulation.json") == slurp(b / "simulation.json"));

    const auto report = nlohmann::json::parse(slurp(a / "simulation.json"));
    const double pc = report["results"]["100"]["scad"]["gic_lll"]["percent_correct"];
    int svgs = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        if (entry.path().extension() != ".svg") continue;
        ++svgs;
        const std::string svg = slurp(entry.path());
        CHECK(well_formed(svg));
        size_t lines = 0;
        for (size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++lines;
        CHECK(lines == 2);
        if (entry.path().filename().string().find("percent_correct") != std::string::npos) {
            const std::regex re("data-label=\"scad/gic_lll\" data-x=\"100\" data-y=\"([^\"]+)\"");
            std::smatch m;
            REQUIRE(std::regex_search(svg, m, re));
            CHECK(std::stod(m[1]) == doctest::Approx(pc).epsilon(1e-6));
        }
    }
    CHECK(svgs == 4);
}

TEST_CASE("diagnose reports the toy delta and passes")
{
    const fs::path dir = scratch("diagnose");
    const Result r = run_args({"diagnose", "--out", dir.string()});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "diagnose.json"));
    CHECK(j["all_passed"] == true);
    bool found = false;
    for (const auto& c : j["checks"]) {
        if (c["name"] == "toy_delta_n") {
            found = true;
            CHECK(c["value"].get<double>() == doctest::Approx(0.5));
        }
    }
    CHECK(found);
}

TEST_CASE("profile writes CSV and an SVG with the oracle curve")
{
    const fs::path dir = scratch("profile");
    std::ofstream(dir / "s.csv") << "0.9\n0.2\n0.7\n0.1\n";
    std::ofstream(dir / "l.csv") << "1\n0\n0\n1\n";
    REQUIRE(run_args({"profile", "--scores", (dir / "s.csv").string(), "--labels", (dir / "l.csv").string(),
                      "--out", dir.string()})
                .code == 0);
    CHECK(slurp(dir / "profile.csv") == "fraction_inspected,fraction_captured\n0.25,0.5\n0.5,0.5\n0.75,0.5\n1,1\n");
    const std::string svg = slurp(dir / "profile.svg");
    CHECK(well_formed(svg));
    CHECK(svg.find("data-label=\"oracle\"") != std::string::npos);
}
