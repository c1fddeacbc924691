#include <gtest/gtest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch()
{
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("sklern_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliRun run(const std::string& args, const std::string& env = "")
{
    static int counter = 0;
    const fs::path out = scratch() / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = scratch() / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = env + " '" + std::string(SKLERN_CLI_PATH) + "' " + args + " >'" + out.string() + "' 2>'" +
                            err.string() + "'";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_file(const std::string& name, const std::string& text)
{
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST(CliExpand, UnitCurvature)
{
    const CliRun r = run("expand --n 3 --k 2 --kappa 1,1");
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["coefficients"][0]["p"], 1);
    EXPECT_EQ(j["coefficients"][0]["q"], 0);
    EXPECT_DOUBLE_EQ(j["coefficients"][0]["value"].get<double>(), 0.5);
    EXPECT_EQ(j["c_n1"].get<double>(), 0.0);
}

TEST(CliExpand, NonUmbilicLog)
{
    const CliRun r = run("expand --n 3 --k 2 --kappa 1,2");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(json::parse(r.out)["c_n1"].get<double>(), 0.0);
}

TEST(CliExpand, MissingCurvaturesIsUsageError)
{
    const CliRun r = run("expand --n 3 --k 2");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("--kappa"), std::string::npos);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(CliExpand, BadValuesAreConfigErrors)
{
    EXPECT_EQ(run("expand --n 3 --k 5 --kappa 1,1").code, 1);
    EXPECT_EQ(run("expand --n 3 --k 2 --kappa 1,1,1").code, 1);
    EXPECT_EQ(run("expand --n 3 --k 2 --kappa 1,x").code, 1);
    EXPECT_EQ(run("expand --n 3 --bogus 1 --kappa 1,1").code, 1);
    EXPECT_EQ(run("").code, 1);
}

TEST(CliSolve, AnnulusCornerNearGeometricMean)
{
    const CliRun r = run("solve --annulus 1,4 --n 3 --k 2 --grid 4000");
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["converged"].get<bool>());
    EXPECT_TRUE(j["corner"]["present"].get<bool>());
    EXPECT_NEAR(j["corner"]["location"].get<double>(), 2.0, 2e-3);
}

TEST(CliSolve, BallIsExactAndSmooth)
{
    const CliRun r = run("solve --ball 1 --n 4 --k 2 --grid 2000");
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_LE(j["max_residual"].get<double>(), 1e-12);
    EXPECT_FALSE(j["corner"]["present"].get<bool>());
}

TEST(CliSolve, LoewnerNirenbergHasNoCorner)
{
    const CliRun r = run("solve --annulus 1,4 --n 3 --k 1 --grid 2000");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_FALSE(json::parse(r.out)["corner"]["present"].get<bool>());
}

TEST(CliSolve, CsvLayout)
{
    const fs::path csv = scratch() / "sol.csv";
    const fs::path spheres = scratch() / "spheres.csv";
    const CliRun r = run("solve --annulus 1,4 --n 3 --k 2 --grid 400 --csv '" + csv.string() + "' --spheres '" +
                      spheres.string() + "'");
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string text = slurp(csv);
    EXPECT_EQ(text.rfind("r,w,u,u'_left,u'_right,lamT,lamR,residual\r\n", 0), 0u);
    size_t lines = 0;
    for (char c : text) {
        lines += c == '\n';
    }
    EXPECT_EQ(lines, 402u);
    // Round-trip precision: 17 significant digits.
    const std::string row = text.substr(text.find("\r\n") + 2);
    const std::string first = row.substr(0, row.find(','));
    EXPECT_GE(first.size(), 17u);
    EXPECT_EQ(slurp(spheres).rfind("r,H0,Hu,area_g,obstruction\r\n", 0), 0u);
}

TEST(CliSolve, Deterministic)
{
    const std::string args = "solve --annulus 1,4 --n 3 --k 2 --grid 1000";
    const CliRun a = run(args);
    const CliRun b = run(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(CliVerify, SuitesPass)
{
    for (const std::string args : {"verify barrier --n 3 --k 2 --ball 1", "verify obstruction --annulus 1,4 --grid 4000",
                                   "verify corner --annulus 1,4 --k 1 --grid 2000", "verify expansion --draws 5"}) {
        const CliRun r = run(args);
        EXPECT_EQ(r.code, 0) << args << "\n" << r.out << r.err;
        const json j = json::parse(r.out);
        EXPECT_TRUE(j["pass"].get<bool>()) << args;
        for (const auto& c : j["criteria"]) {
            EXPECT_TRUE(c["pass"].get<bool>()) << args << " " << c["name"];
        }
    }
}

TEST(CliVerify, CornerSuiteAtDefaultGrid)
{
    const CliRun r = run("verify corner --annulus 1,4 --n 3 --k 2");
    EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(CliVerify, FailureExitCodes)
{
    // R = 1 puts the rate measure above its bound.
    const CliRun fail = run("verify xi --ball 1 --grid 4000");
    EXPECT_EQ(fail.code, 4) << fail.out;
    EXPECT_FALSE(json::parse(fail.out)["pass"].get<bool>());
    const CliRun numerical = run("verify xi --ball 1 --epsilon 0.005 --grid 2000");
    EXPECT_EQ(numerical.code, 3);
    EXPECT_TRUE(json::parse(numerical.out).contains("error"));
    EXPECT_EQ(run("verify nonsense --ball 1").code, 1);
    EXPECT_EQ(run("verify").code, 1);
}

TEST(CliConfig, FileValuesAndOverrides)
{
    const fs::path cfg = write_file("expand.json", "{\n  \"n\": 4,\n  \"k\": 2,\n  \"kappa\": [1, 1, 1]\n}\n");
    const CliRun a = run("expand --config '" + cfg.string() + "'");
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(json::parse(a.out)["n"], 4);
    const CliRun b = run("expand --config '" + cfg.string() + "' --kappa 2,2,2");
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_DOUBLE_EQ(json::parse(b.out)["coefficients"][0]["value"].get<double>(), 1.0);
}

TEST(CliConfig, ErrorsCarryLocation)
{
    const fs::path bad = write_file("bad.json", "{\n  \"n\": 3,\n  \"k\": 7,\n  \"kappa\": [1, 1]\n}\n");
    const CliRun r = run("expand --config '" + bad.string() + "'");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find(bad.string() + ":3"), std::string::npos) << r.err;

    const fs::path syntax = write_file("syntax.json", "{\n  \"n\": 3,\n  \"k\": 2\n  \"kappa\": [1, 1]\n}\n");
    const CliRun s = run("expand --config '" + syntax.string() + "'");
    EXPECT_EQ(s.code, 1);
    EXPECT_NE(s.err.find(":4"), std::string::npos) << s.err;

    const fs::path unknown = write_file("unknown.json", "{\n  \"n\": 3,\n  \"colour\": 1\n}\n");
    EXPECT_EQ(run("expand --config '" + unknown.string() + "' --kappa 1,1").code, 1);

    const CliRun flag = run("expand --kappa 1,1 --k 0");
    EXPECT_EQ(flag.code, 1);
    EXPECT_NE(flag.err.find("--k"), std::string::npos) << flag.err;
}

TEST(CliSweep, CsvAndThreads)
{
    const fs::path one = scratch() / "sweep1.csv";
    const fs::path four = scratch() / "sweep4.csv";
    const CliRun a = run("sweep --grid 1000 --csv '" + one.string() + "'", "SKLERN_THREADS=1");
    const CliRun b = run("sweep --grid 1000 --csv '" + four.string() + "'", "SKLERN_THREADS=4");
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(slurp(one), slurp(four));
    EXPECT_EQ(a.out, b.out);
    const std::string text = slurp(one);
    EXPECT_EQ(text.rfind("n,k,status,iterations,max_residual,corner_present,r_star,jump,holder_left,holder_right,r_min\r\n",
                         0),
              0u);
    EXPECT_EQ(run("sweep --grid 1000", "SKLERN_THREADS=zero").code, 1);
    EXPECT_EQ(run("sweep --grid 1000 --pairs 3:4").code, 1);
}
