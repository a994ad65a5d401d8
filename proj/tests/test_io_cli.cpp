#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "natcurve/cli.hpp"
#include "natcurve/expression.hpp"
#include "natcurve/io.hpp"
#include "natcurve/spec.hpp"

using namespace natcurve;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("natcurve_test_" + std::to_string(::getpid()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }
    [[nodiscard]] std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(file(name)) << text;
        return file(name);
    }

private:
    fs::path path_;
};

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

std::string parse_message(const nlohmann::json& j) {
    try {
        (void)realize(parse_curve_spec(j));
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Parse) << e.what();
        return e.what();
    }
    ADD_FAILURE() << "spec was accepted: " << j.dump();
    return {};
}

std::size_t count_lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

const char* precession_spec = R"({"family": "constant_precession", "params": {"omega": 4, "mu": 3}, "samples": 10000})";

} // namespace

TEST(Csv, HeaderAndRowCount) {
    CurveSamples s;
    s.grid = Grid({0.0, 1.0}, 2);
    for (int i = 0; i < 3; ++i) {
        s.position.push_back({0.5 * i, 0, 0});
        s.frame.push_back(Frame::identity());
        s.kappa.push_back(0.0);
        s.tau.push_back(0.0);
    }
    std::ostringstream os;
    write_csv(s, os);
    const std::string text = os.str();
    EXPECT_EQ(count_lines(text), 4u);
    EXPECT_EQ(text.substr(0, text.find('\n')), "s,x,y,z,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa,tau");
    EXPECT_NE(text.find("\n0.5,0.5,0,0,1,0,0,0,1,0,0,0,1,0,0\n"), std::string::npos);
}

TEST(Csv, RoundTripIsBitExact) {
    const CurveSamples c = generate(parse_curve_spec(nlohmann::json::parse(
        R"({"family": "constant_precession", "params": {"omega": 1, "mu": "3/4"}, "samples": 997})")));
    std::ostringstream os;
    write_csv(c, os);
    std::istringstream is(os.str());
    const CurveSamples back = read_csv(is);
    ASSERT_EQ(back.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_EQ(back.grid.node(i), c.grid.node(i));
        EXPECT_EQ(back.position[i], c.position[i]);
        EXPECT_EQ(back.frame[i], c.frame[i]);
        EXPECT_EQ(back.kappa[i], c.kappa[i]);
        EXPECT_EQ(back.tau[i], c.tau[i]);
    }
    std::ostringstream again;
    write_csv(back, again);
    EXPECT_EQ(again.str(), os.str());
}

TEST(Csv, PlaneCircleHasZeroTorsionColumn) {
    const CurveSamples c = generate(parse_curve_spec(
        nlohmann::json::parse(R"({"family": "plane", "params": {"kappa": 1}, "domain": [0, 6.283185307179586], "samples": 64})")));
    for (double t : c.tau) EXPECT_EQ(t, 0.0);
    EXPECT_EQ(c.size(), 65u);
}

TEST(Csv, Errors) {
    auto code = [](const std::string& text) {
        std::istringstream is(text);
        try {
            (void)read_csv(is);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    const std::string h = std::string(csv_header) + "\n";
    const std::string row0 = "0,0,0,0,1,0,0,0,1,0,0,0,1,0,0\n";
    EXPECT_EQ(code("s,x,y\n" + row0), ErrorCode::Parse);
    EXPECT_EQ(code(h + "0,0,0,0,1,0,0,0,1,0,0,0,1,0\n" + row0), ErrorCode::Parse);
    EXPECT_EQ(code(h + "0,0,0,0,1,0,0,0,1,0,0,0,1,0,abc\n" + row0), ErrorCode::Parse);
    EXPECT_EQ(code(h + row0), ErrorCode::GridTooSmall);
    EXPECT_EQ(code(h + row0 + "0.1" + row0.substr(1) + "0.3" + row0.substr(1)), ErrorCode::GridMismatch);
    try {
        (void)import_csv("/nonexistent/dir/curve.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
        EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/curve.csv"), std::string::npos);
    }
}

TEST(Expression, EvaluatesAndReportsOffsets) {
    const Expression e = Expression::parse("sin(s)^2 + cos(s)^2 + w * pi - 2^3^0", {{"w", 0.5}});
    EXPECT_NEAR(e(0.7), 1.0 + 0.5 * pi - 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(Expression::parse("-s^2")(3.0), -9.0);
    EXPECT_DOUBLE_EQ(Expression::parse("atan2(1, 1) * 4")(0.0), pi);
    EXPECT_DOUBLE_EQ(Expression::parse("max(s, 2) + min(s, 2)")(5.0), 7.0);
    try {
        (void)Expression::parse("1 + * s");
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::Parse);
        EXPECT_NE(std::string(err.what()).find("offset 4"), std::string::npos) << err.what();
    }
    EXPECT_THROW((void)Expression::parse("foo(s)"), Error);
    EXPECT_THROW((void)Expression::parse("sin(s"), Error);
}

TEST(Spec, DiagnosticsNameTheField) {
    using nlohmann::json;
    EXPECT_NE(parse_message(json::parse(R"({"family": "plane", "colour": 1, "samples": 100})")).find("field 'colour'"),
              std::string::npos);
    EXPECT_NE(parse_message(json::parse(R"({"family": "plane", "params": {"kappa": 1}, "domain": [0, 1], "samples": 8})"))
                  .find("field 'samples'"),
              std::string::npos);
    EXPECT_NE(parse_message(json::parse(R"({"family": "plane", "params": {"kappa": 1}, "samples": 100})"))
                  .find("field 'domain'"),
              std::string::npos);
    EXPECT_NE(parse_message(json::parse(R"({"family": "plane", "params": {"kappa": "1 +"}, "domain": [0, 1], "samples": 100})"))
                  .find("field 'params.kappa'"),
              std::string::npos);
    EXPECT_NE(parse_message(json::parse(R"({"family": "helix", "params": {"theta": 2.0, "kappa": 1}, "domain": [0, 1], "samples": 100})"))
                  .find("field 'params.theta'"),
              std::string::npos);
    EXPECT_NE(parse_message(json::parse(R"({"family": "constant_precession", "params": {"omega": "3/0", "mu": 1}, "samples": 100})"))
                  .find("field 'params.omega'"),
              std::string::npos);
    EXPECT_NE(parse_message(json::parse(R"({"family": "knot", "samples": 100})")).find("field 'family'"),
              std::string::npos);
    EXPECT_NE(parse_message(json::parse(R"({"family": "plane", "params": {"kappa": 1}, "domain": [0, 1], "samples": 100, "initial_frame": [1,0,0, 1,0,0, 0,0,1]})"))
                  .find("field 'initial_frame'"),
              std::string::npos);
}

TEST(Spec, PrecessionDefaultsToOnePeriod) {
    const CurveSpec spec = parse_curve_spec(nlohmann::json::parse(precession_spec));
    const RealizedSpec r = realize(spec);
    EXPECT_DOUBLE_EQ(r.development.domain.hi, 2 * pi);
    const CurveSamples c = generate(spec);
    EXPECT_EQ(c.size(), 10001u);
    EXPECT_LT(norm(c.position.back() - c.position.front()), 1e-9);
    EXPECT_EQ(c.frame.front().e1, Vec3(1, 0, 0));
}

TEST(Spec, DevelopmentDocument) {
    const CurveSpec spec = parse_development_spec(
        nlohmann::json::parse(R"j({"kappa": "2 * cos(s)", "tau": {"table": [0, 0.5, 1]}, "domain": [0, 2], "samples": 50})j"));
    EXPECT_EQ(spec.family, "custom_development");
    const RealizedSpec r = realize(spec);
    EXPECT_DOUBLE_EQ(r.development.kappa(1.0), 2 * std::cos(1.0));
    EXPECT_DOUBLE_EQ(r.development.tau(1.5), 0.75);
    EXPECT_THROW((void)parse_development_spec(nlohmann::json::parse(R"({"kappa": 1, "tau": 0, "domain": [0, 1], "frame": 1})")),
                 Error);
}

TEST(Cli, GenerateVerifyTransformClassify) {
    const TempDir dir;
    const std::string spec = dir.write("cp.json", precession_spec);
    const std::string csv = dir.file("cp.csv");

    CliRun g = run({"generate", spec, "--out", csv});
    ASSERT_EQ(g.code, 0) << g.err;
    EXPECT_EQ(import_csv(csv).size(), 10001u);

    CliRun v = run({"verify", csv, "--checks", "closure"});
    EXPECT_EQ(v.code, 0) << v.err;
    const auto report = nlohmann::json::parse(v.out);
    EXPECT_TRUE(report["passed"].get<bool>());
    ASSERT_EQ(report["checks"].size(), 1u);
    EXPECT_EQ(report["checks"][0]["name"], "closure");

    CliRun all = run({"verify", csv});
    EXPECT_EQ(all.code, 0) << all.out;

    CliRun missing = run({"transform", csv, "--op", "successor"});
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("--phi0"), std::string::npos) << missing.err;

    EXPECT_EQ(run({"transform", csv, "--op", "predecessor", "--phi0", "1"}).code, 2);

    const std::string succ = dir.file("succ.csv");
    CliRun s = run({"transform", csv, "--op", "successor", "--phi0", "0.3", "--out", succ});
    ASSERT_EQ(s.code, 0) << s.err;
    const CurveSamples sc = import_csv(succ);
    const CurveSamples base = import_csv(csv);
    for (std::size_t i = 0; i < sc.size(); i += 101) EXPECT_EQ(sc.frame[i].e2, base.frame[i].e1);

    const std::string dev = dir.write("dev.json", R"j({"kappa": "cos(0.75 * s)", "tau": "sin(0.75 * s)", "domain": [0, 6]})j");
    CliRun c = run({"classify", dev});
    ASSERT_EQ(c.code, 0) << c.err;
    const auto cls = nlohmann::json::parse(c.out);
    EXPECT_EQ(cls["family"], "slant_helix");
    EXPECT_NEAR(cls["slope"].get<double>(), 0.75, 1e-8);

    CliRun solve = run({"solve", dev});
    ASSERT_EQ(solve.code, 0) << solve.err;
    EXPECT_EQ(count_lines(solve.out), 10002u);
}

TEST(Cli, FailuresAndInputErrors) {
    const TempDir dir;
    const std::string open = dir.write(
        "open.json", R"({"family": "helix", "params": {"theta": 0.5, "kappa": 1}, "domain": [0, 3], "samples": 300})");
    const std::string csv = dir.file("open.csv");
    ASSERT_EQ(run({"generate", open, "--out", csv}).code, 0);
    CliRun v = run({"verify", csv, "--checks", "closure,unit_speed"});
    EXPECT_EQ(v.code, 1);
    EXPECT_NE(v.err.find("closure"), std::string::npos);
    EXPECT_EQ(run({"verify", csv, "--checks", "bogus"}).code, 2);

    const std::string bad = dir.write("bad.json", R"({"family": "plane", "params": {"kappa": 1}, "domain": [0, 1], "samples": 4})");
    CliRun b = run({"generate", bad});
    EXPECT_EQ(b.code, 2);
    EXPECT_NE(b.err.find("field 'samples'"), std::string::npos) << b.err;

    EXPECT_EQ(run({"generate", dir.file("missing.json")}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"transform", csv, "--op", "twist", "--phi0", "1"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, BishopRoundTripThroughFiles) {
    const TempDir dir;
    const std::string spec = dir.write(
        "h.json", R"({"family": "helix", "params": {"theta": 0.8, "kappa": 1.5}, "domain": [0, 4], "samples": 4000})");
    const std::string csv = dir.file("h.csv"), bishop = dir.file("b.csv"), back = dir.file("f.csv");
    ASSERT_EQ(run({"generate", spec, "--out", csv}).code, 0);
    ASSERT_EQ(run({"transform", csv, "--op", "bishop", "--phi0", "0", "--out", bishop}).code, 0);
    ASSERT_EQ(run({"transform", bishop, "--op", "inverse-bishop", "--out", back}).code, 0);
    const CurveSamples a = import_csv(csv), f = import_csv(back);
    for (std::size_t i = 0; i < a.size(); i += 97) {
        EXPECT_LT(max_abs_diff(a.frame[i], f.frame[i]), 1e-10);
        EXPECT_NEAR(a.kappa[i], f.kappa[i], 1e-10);
        EXPECT_NEAR(a.tau[i], f.tau[i], 1e-8);
        EXPECT_EQ(a.position[i], f.position[i]);
    }
}

TEST(Cli, ExecutableExitCodes) {
    const TempDir dir;
    const std::string spec = dir.write("cp.json", precession_spec);
    const std::string csv = dir.file("cp.csv");
    const std::string exe = NATCURVE_CLI_PATH;
    auto status = [](const std::string& cmd) {
        const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status(exe + " generate " + spec + " --out " + csv), 0);
    EXPECT_EQ(status(exe + " verify " + csv + " --checks closure"), 0);
    EXPECT_EQ(status(exe + " transform " + csv + " --op successor"), 2);
}
