#include "cli.h"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "siwr");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = siwr::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text)
{
    std::ofstream(p, std::ios::binary) << text;
}

json config_line(const std::string& csv)
{
    const std::string key   = "# config: ";
    const std::size_t start = csv.find(key) + key.size();
    json cfg                = json::parse(csv.substr(start, csv.find('\n', start) - start));
    cfg.erase("output_dir");
    return cfg;
}

std::vector<std::string> data_lines(const std::string& csv)
{
    std::vector<std::string> lines;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line[0] != '#') {
            lines.push_back(line);
        }
    }
    return lines;
}

class Cli : public ::testing::Test
{
protected:
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir = fs::temp_directory_path() / (std::string("siwr_cli_") + info->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
    }

    void TearDown() override
    {
        fs::remove_all(dir);
    }

    std::string out(const std::string& sub) const
    {
        return (dir / sub).string();
    }

    fs::path dir;
};

} // namespace

TEST_F(Cli, SimulateWritesHundredAndOneRows)
{
    const Outcome r = invoke({"simulate", "--out", out("o")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = data_lines(slurp(dir / "o" / "trajectory.csv"));
    ASSERT_EQ(lines.size(), 102u);
    EXPECT_EQ(lines.front(), "t,S,I,R,W,C");
    EXPECT_EQ(lines[1].substr(0, 2), "0,");
    EXPECT_EQ(lines.back().substr(0, 4), "100,");

    const json summary = json::parse(slurp(dir / "o" / "summary.json"));
    EXPECT_NEAR(summary["result"]["r0"].get<double>(), 1.9576555412732888, 1e-12);
    EXPECT_NEAR(summary["result"]["peak_time"].get<double>(), 44.0, 1.0);
}

TEST_F(Cli, FullSanitationGivesZeroR0)
{
    const Outcome r =
        invoke({"r0", "--out", out("o"), "--set", "parameters.eps_h=1", "--set", "parameters.eps_w=1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "0");
    EXPECT_EQ(json::parse(slurp(dir / "o" / "r0.json"))["result"]["r0"].get<double>(), 0.0);
}

TEST_F(Cli, NegativeRateIsAConfigError)
{
    spit(dir / "bad.json", R"({"parameters": {"gamma": -0.2}})");
    const Outcome r = invoke({"simulate", "--config", (dir / "bad.json").string(), "--out", out("o")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("gamma"), std::string::npos) << r.err;
    EXPECT_FALSE(fs::exists(dir / "o"));
}

TEST_F(Cli, UnknownKeyNamesItsPath)
{
    spit(dir / "typo.json", R"({"parameters": {"gama": 0.2}})");
    const Outcome r = invoke({"r0", "--config", (dir / "typo.json").string(), "--out", out("o")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("parameters.gama"), std::string::npos) << r.err;
}

TEST_F(Cli, MalformedJson)
{
    spit(dir / "broken.json", R"({"parameters": {"gamma": )");
    const Outcome r = invoke({"r0", "--config", (dir / "broken.json").string(), "--out", out("o")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("not valid JSON"), std::string::npos) << r.err;
}

TEST_F(Cli, MissingConfigFile)
{
    const Outcome r = invoke({"r0", "--config", (dir / "absent.json").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST_F(Cli, NoCommandIsAnError)
{
    EXPECT_EQ(invoke({}).code, 1);
    EXPECT_EQ(invoke({"frobnicate"}).code, 1);
}

TEST_F(Cli, DumpedConfigReproducesTheRun)
{
    const Outcome dumped = invoke({"--dump-config", "--set", "parameters.beta1=0.3", "--seed", "7"});
    ASSERT_EQ(dumped.code, 0) << dumped.err;
    spit(dir / "resolved.json", dumped.out);

    const Outcome a = invoke({"simulate", "--set", "parameters.beta1=0.3", "--seed", "7", "--out", out("a")});
    const Outcome b = invoke({"simulate", "--config", (dir / "resolved.json").string(), "--out", out("b")});
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    const std::string ta = slurp(dir / "a" / "trajectory.csv");
    const std::string tb = slurp(dir / "b" / "trajectory.csv");
    EXPECT_EQ(data_lines(ta), data_lines(tb));
    EXPECT_EQ(config_line(ta), config_line(tb));
    EXPECT_EQ(a.out, b.out);

    const Outcome redumped = invoke({"--dump-config", "--config", (dir / "resolved.json").string()});
    EXPECT_EQ(redumped.out, dumped.out);
}

TEST_F(Cli, DumpedConfigReproducesSensitivity)
{
    const std::vector<std::string> common = {"--set", "sensitivity.n=60", "--seed", "11"};
    std::vector<std::string> dump_args = common;
    dump_args.push_back("--dump-config");
    const Outcome dumped = invoke(dump_args);
    ASSERT_EQ(dumped.code, 0) << dumped.err;
    spit(dir / "resolved.json", dumped.out);

    std::vector<std::string> direct = common;
    direct.insert(direct.end(), {"prcc", "--out", out("a")});
    ASSERT_EQ(invoke(direct).code, 0);
    ASSERT_EQ(invoke({"prcc", "--config", (dir / "resolved.json").string(), "--out", out("b")}).code, 0);
    const std::string pa = slurp(dir / "a" / "prcc.csv");
    const std::string pb = slurp(dir / "b" / "prcc.csv");
    EXPECT_EQ(data_lines(pa), data_lines(pb));
    EXPECT_EQ(config_line(pa), config_line(pb));
}

TEST_F(Cli, MetadataCarriesSeedAndConfig)
{
    ASSERT_EQ(invoke({"simulate", "--seed", "12345", "--out", out("o")}).code, 0);
    const std::string csv = slurp(dir / "o" / "trajectory.csv");
    EXPECT_NE(csv.find("# command: simulate\n"), std::string::npos);
    EXPECT_NE(csv.find("# seed: 12345\n"), std::string::npos);
    EXPECT_NE(csv.find("# generator: "), std::string::npos);

    const std::size_t at = csv.find("# config: ");
    ASSERT_NE(at, std::string::npos);
    const std::size_t start = at + std::string("# config: ").size();
    const json cfg          = json::parse(csv.substr(start, csv.find('\n', start) - start));
    EXPECT_EQ(cfg["seed"].get<std::uint64_t>(), 12345u);
    EXPECT_EQ(cfg["parameters"]["gamma"].get<double>(), 0.2);

    const json summary = json::parse(slurp(dir / "o" / "summary.json"));
    EXPECT_EQ(summary["metadata"]["seed"].get<std::uint64_t>(), 12345u);
    EXPECT_EQ(summary["metadata"]["config"], cfg);
}

TEST_F(Cli, OverridesReachTheModel)
{
    ASSERT_EQ(invoke({"r0", "--set", "parameters.beta1=0", "--set", "parameters.beta_max=0", "--out", out("o")})
                  .code,
              0);
    EXPECT_EQ(json::parse(slurp(dir / "o" / "r0.json"))["result"]["r0"].get<double>(), 0.0);

    const Outcome missing = invoke({"r0", "--set", "parameters.betaone=0", "--out", out("p")});
    EXPECT_EQ(missing.code, 1);
    EXPECT_NE(missing.err.find("parameters.betaone"), std::string::npos) << missing.err;
}

TEST_F(Cli, SeedChangesTheDesign)
{
    ASSERT_EQ(invoke({"prcc", "--set", "sensitivity.n=60", "--seed", "1", "--out", out("a")}).code, 0);
    ASSERT_EQ(invoke({"prcc", "--set", "sensitivity.n=60", "--seed", "2", "--out", out("b")}).code, 0);
    ASSERT_EQ(invoke({"prcc", "--set", "sensitivity.n=60", "--seed", "1", "--out", out("c")}).code, 0);
    const auto a = data_lines(slurp(dir / "a" / "prcc.csv"));
    EXPECT_NE(a, data_lines(slurp(dir / "b" / "prcc.csv")));
    EXPECT_EQ(a, data_lines(slurp(dir / "c" / "prcc.csv")));
}

TEST_F(Cli, NumericalFailureLeavesNoFiles)
{
    const Outcome r = invoke({"simulate", "--set", "solver.h_min=0.4", "--set", "solver.h_init=0.4",
                              "--set", "solver.rel_tol=1e-14", "--set", "solver.abs_tol=1e-14", "--out", out("o")});
    EXPECT_EQ(r.code, 2) << r.err;
    EXPECT_NE(r.err.find("numerical failure"), std::string::npos) << r.err;
    if (fs::exists(dir / "o")) {
        EXPECT_TRUE(fs::is_empty(dir / "o"));
    }
}

TEST_F(Cli, EveryCommandRuns)
{
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"dfe", "dfe.json"},
        {"endemic", "endemic.json"},
        {"bifurcation", "bifurcation.csv"},
        {"contour", "contour.csv"},
        {"scenarios", "scenarios.csv"},
        {"sweep", "sweep.csv"},
    };
    for (const auto& [cmd, file] : cases) {
        const Outcome r = invoke({cmd, "--set", "contour.grid_n=11", "--out", out(cmd)});
        EXPECT_EQ(r.code, 0) << cmd << ": " << r.err;
        EXPECT_TRUE(fs::exists(dir / cmd / file)) << cmd;
    }
    const json dfe = json::parse(slurp(dir / "dfe" / "dfe.json"))["result"];
    EXPECT_EQ(dfe["stability"], "Unstable");
    const auto contour = data_lines(slurp(dir / "contour" / "contour.csv"));
    EXPECT_EQ(contour.size(), 12u);
}

TEST_F(Cli, EndemicNoneReportsCertificate)
{
    const Outcome r = invoke({"endemic", "--set", "parameters.eps_h=1", "--set", "parameters.eps_w=1", "--out", out("o")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json res = json::parse(slurp(dir / "o" / "endemic.json"))["result"];
    EXPECT_EQ(res["kind"], "none");
    EXPECT_GT(res["scan_points"].get<int>(), 0);
}
