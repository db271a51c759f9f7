#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hsd/cli.hpp"
#include "hsd/parallel.hpp"

using namespace hsd;
using namespace hsd::cli;
namespace fs = std::filesystem;

namespace {

fs::path fixture(const std::string& name) { return fs::path(HSD_FIXTURE_DIR) / (name + ".json"); }

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "hsd_cli_tests" / name;
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string input_error(const json& j) {
    try {
        parse_problem(j, ".");
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Input);
        return e.what();
    }
    return "";
}

int run_main(std::vector<std::string> args) {
    args.insert(args.begin(), "hsdiff");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return main_entry(static_cast<int>(argv.size()), argv.data());
}

const json kMinimal = json::parse(R"({"grid": {"dim": 1, "points": 64, "xi_extent": 8.0},
                                      "symbol": {"operator": [{"coeff": [1, 0], "shift": [0]}]}})");

}  // namespace

TEST(ProblemFile, MinimalAnalyze) {
    const ProblemSpec p = parse_problem(kMinimal, ".");
    EXPECT_EQ(p.grid.points(), 64);
    EXPECT_EQ(p.s, 0.0);
    EXPECT_FALSE(p.rhs);
    EXPECT_FALSE(p.bc);
    EXPECT_EQ(p.tol.residual, 1e-4);
}

TEST(ProblemFile, FieldPathsInErrors) {
    json j = kMinimal;
    j["grid"]["points"] = 63;
    EXPECT_NE(input_error(j).find("grid.points"), std::string::npos);

    j = kMinimal;
    j["symbol"]["operator"][0]["shift"] = json::array({-1.0});
    EXPECT_NE(input_error(j).find("symbol.operator[0].shift"), std::string::npos);

    j = kMinimal;
    j["bc"] = json::parse(R"({"traces": {"p": [0.5, 0.5], "r": [1, 1]}})");
    EXPECT_NE(input_error(j).find("bc.traces.p"), std::string::npos);

    j = kMinimal;
    j["colour"] = 1;
    EXPECT_NE(input_error(j).find("colour"), std::string::npos);

    j = kMinimal;
    j["symbol"]["rational"] = json::parse(R"({"preset": "omega_power", "ae": 1})");
    EXPECT_NE(input_error(j).find("exactly one"), std::string::npos);

    j = kMinimal;
    j["tolerances"] = json::parse(R"({"speed": 1})");
    EXPECT_NE(input_error(j).find("speed"), std::string::npos);
}

TEST(ProblemFile, SolveWithoutRhsNamesRhs) {
    const RunOutcome out = run(parse_problem(kMinimal, "."), Command::Solve, scratch("norhs"));
    EXPECT_EQ(out.exit_code, 1);
    EXPECT_NE(out.report["error"]["message"].get<std::string>().find("rhs"), std::string::npos);
}

TEST(ProblemFile, AnalyzeRejectsRhs) {
    json j = kMinimal;
    j["rhs"] = json::parse(R"({"preset": "gaussian_bump"})");
    EXPECT_EQ(run(parse_problem(j, "."), Command::Analyze, scratch("analyzerhs")).exit_code, 1);
}

TEST(ToleranceOverride, Parsing) {
    Tolerances t;
    apply_override(t, "residual=2.5e-3");
    EXPECT_EQ(t.residual, 2.5e-3);
    EXPECT_THROW(apply_override(t, "residual"), Error);
    EXPECT_THROW(apply_override(t, "residual=abc"), Error);
    EXPECT_THROW(apply_override(t, "residual=1e-3x"), Error);
    EXPECT_THROW(apply_override(t, "nonsense=1"), Error);
    EXPECT_THROW(apply_override(t, "trace=inf"), Error);
}

TEST(Run, AnalyzeIdentity) {
    const fs::path dir = scratch("identity");
    const RunOutcome out = run(load_problem(fixture("identity_analyze")), Command::Analyze, dir);
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_EQ(out.report["index"]["ae"], 0);
    EXPECT_NEAR(out.report["ellipticity"]["margin"].get<double>(), 1.0, 1e-15);
    EXPECT_EQ(out.report["regime"]["kind"], "unique");
    EXPECT_TRUE(fs::exists(dir / "symbol.csv"));
    EXPECT_FALSE(fs::exists(dir / "solution.csv"));
}

TEST(Run, SolveGeometricSeries) {
    const fs::path dir = scratch("geom");
    const RunOutcome out = run(load_problem(fixture("geometric_series_solve")), Command::Solve, dir);
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_LT(out.report["solve"]["residual"].get<double>(), 1e-4);
    EXPECT_EQ(out.report["tolerances"]["residual"].get<double>(), 1e-4);
    for (const char* f : {"report.json", "timings.json", "solution.csv", "symbol.csv", "factors.csv", "winding.csv"})
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    std::istringstream csv(slurp(dir / "solution.csv"));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "x1,re,im");
}

TEST(Run, ExitCodes) {
    EXPECT_EQ(run_main({"--input", fixture("duplicate_traces").string(), "--outdir", scratch("dup").string(),
                        "--command", "bvp"}),
              1);
    EXPECT_EQ(run_main({"--input", fixture("forbidden_regime").string(), "--outdir", scratch("forb").string(),
                        "--command", "solve"}),
              2);
    EXPECT_EQ(run_main({"--input", fixture("pseudo_singular").string(), "--outdir", scratch("sing").string(),
                        "--command", "bvp"}),
              2);
    EXPECT_EQ(run_main({"--input", fixture("geometric_series_solve").string(), "--outdir", scratch("tight").string(),
                        "--command", "solve", "--tol-override", "residual=0"}),
              3);
    EXPECT_EQ(run_main({"--input", fixture("geometric_series_solve").string(), "--outdir", scratch("badcmd").string(),
                        "--command", "launch"}),
              1);
    EXPECT_EQ(run_main({"--input", "/nonexistent.json", "--outdir", scratch("missing").string()}), 1);
    EXPECT_EQ(run_main({"--outdir", scratch("noinput").string()}), 1);
}

TEST(Run, OverrideIsEmbedded) {
    const fs::path dir = scratch("embed");
    run_main({"--input", fixture("geometric_series_solve").string(), "--outdir", dir.string(), "--command", "solve",
              "--tol-override", "residual=0"});
    const json r = json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(r["tolerances"]["residual"].get<double>(), 0.0);
    EXPECT_FALSE(r["checks"]["residual"]["pass"].get<bool>());
    EXPECT_EQ(r["status"], "numerical_failure");
}

TEST(Run, DeterministicAcrossThreads) {
    for (const char* name : {"geometric_series_solve", "minus_traces_bvp", "product_factorize"}) {
        std::string reports[2];
        for (int k = 0; k < 2; ++k) {
            set_thread_count(k == 0 ? 1 : 4);
            const fs::path dir = scratch(std::string(name) + std::to_string(k));
            run(load_problem(fixture(name)), Command::Verify, dir);
            reports[k] = slurp(dir / "report.json") + slurp(dir / "factors.csv");
        }
        EXPECT_EQ(reports[0], reports[1]) << name;
    }
    set_thread_count(1);
}

TEST(Run, SamplesRhsMatchesPreset) {
    const ProblemSpec preset = load_problem(fixture("geometric_series_solve"));
    const SampledField v = make_rhs(preset);
    const fs::path dir = scratch("samples");
    fs::create_directories(dir);
    std::ofstream csv(dir / "rhs.csv");
    csv << "x1,re,im\n";
    char buf[128];
    for (int j = 0; j < preset.grid.points(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", preset.grid.x_node(j), v.values[j].real(), v.values[j].imag());
        csv << buf;
    }
    csv.close();
    json j = json::parse(slurp(fixture("geometric_series_solve")));
    j["rhs"] = {{"preset", "samples"}, {"path", "rhs.csv"}};
    const ProblemSpec sampled = parse_problem(j, dir);
    EXPECT_EQ(make_rhs(sampled).values, v.values);
}

TEST(Run, InhomogeneousBvpMeetsConditions) {
    const RunOutcome out = run(load_problem(fixture("minus_inhomogeneous_bvp")), Command::Bvp, scratch("inhom"));
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_LT(out.report["bvp"]["condition_error"].get<double>(), 1e-3);
}
