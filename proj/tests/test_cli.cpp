// Subcommands end to end: exit codes, emitted files and determinism.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <tuple>

#include "dissfield/commands.hpp"
#include "dissfield/io.hpp"

using namespace dissfield;
namespace fs = std::filesystem;

namespace {

const char* kDrude = "[model]\nkind = drude_lorentz\neta = 0.1\nomega0 = 1\ngamma = 0.1\n[mode]\nk = 1\n";

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("dissfield_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    RunReport run(const std::string& command, const std::string& text, const std::string& out = "out",
                  PiMeanSign sign = PiMeanSign::subtract) {
        const fs::path cfg = dir_ / (out + ".ini");
        std::ofstream(cfg) << text;
        CommandOptions opts;
        opts.config = cfg;
        opts.out = dir_ / out;
        opts.threads = 1;
        opts.pi_mean_sign = sign;
        return run_command(command, opts);
    }
    io::Table table(const std::string& out, const std::string& name) { return io::read_csv(dir_ / out / name); }
    io::Json json(const std::string& out, const std::string& name) {
        std::ifstream in(dir_ / out / name);
        return io::Json::parse(in);
    }
    std::string bytes(const std::string& out, const std::string& name) {
        std::ifstream in(dir_ / out / name, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), {}};
    }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, KkCheckDefaultGridPasses) {
    const auto rep = run("kk-check", std::string(kDrude));
    EXPECT_EQ(rep.exit_code, kExitOk) << rep.message;
    const auto t = table("out", "kk.csv");
    EXPECT_EQ(t.columns, (std::vector<std::string>{"omega", "re_closed", "re_kk", "abs_dev", "rel_dev"}));
    EXPECT_EQ(t.rows.size(), 200u);
    EXPECT_LE(json("out", "kk_summary.json")["max_rel_dev"].get<double>(), 1e-3);
}

TEST_F(Cli, KkCheckMissingParameterIsConfigError) {
    const auto rep = run("kk-check", "[model]\nkind = drude_lorentz\neta = 0.1\ngamma = 0.1\n");
    EXPECT_EQ(rep.exit_code, kExitConfig);
    EXPECT_NE(rep.message.find("model.omega0"), std::string::npos) << rep.message;
    EXPECT_TRUE(fs::exists(dir_ / "out" / "run_report.json"));
}

TEST_F(Cli, KkCheckUnattainableThreshold) {
    const auto rep = run("kk-check", std::string(kDrude) + "[kk]\nthreshold = 1e-16\n");
    EXPECT_EQ(rep.exit_code, kExitThreshold);
    EXPECT_FALSE(json("out", "kk_summary.json")["pass"].get<bool>());
}

TEST_F(Cli, GreensFreeFieldWarnsAtPole) {
    const auto rep =
        run("greens", "[model]\nkind = drude_lorentz\neta = 0\nomega0 = 1\ngamma = 0.1\n[mode]\nk = 1\n"
                      "[greens]\nomega = linspace(0.5, 1.5, 11)\n");
    EXPECT_EQ(rep.exit_code, kExitOk) << rep.message;
    ASSERT_FALSE(rep.warnings.empty());
    EXPECT_NE(rep.warnings.front().find("PoleHit"), std::string::npos);
    for (const auto& row : table("out", "greens.csv").rows)
        if (std::abs(row[0] - 1.0) > 1e-6) EXPECT_LT(std::abs(row[2]), 1e-12) << row[0];
}

TEST_F(Cli, GreensSumRuleAndDeterminism) {
    const auto a = run("greens", kDrude, "a");
    const auto b = run("greens", kDrude, "b");
    ASSERT_EQ(a.exit_code, kExitOk) << a.message;
    const double sr = json("a", "greens_summary.json")["sum_rule"].get<double>();
    EXPECT_GE(sr, 0.999);
    EXPECT_LE(sr, 1.001);
    ASSERT_EQ(a.outputs.size(), b.outputs.size());
    for (std::size_t i = 0; i < a.outputs.size(); ++i) EXPECT_EQ(a.outputs[i].sha256, b.outputs[i].sha256);
}

TEST_F(Cli, RunReportListsEveryOutput) {
    const auto rep = run("greens", kDrude);
    const auto j = json("out", "run_report.json");
    EXPECT_EQ(j["command"], "greens");
    EXPECT_EQ(j["outputs"].size(), rep.outputs.size());
    for (const auto& o : j["outputs"])
        EXPECT_EQ(io::sha256_file(dir_ / "out" / o["path"].get<std::string>()), o["sha256"].get<std::string>());
}

TEST_F(Cli, JsonTableFormat) {
    const auto rep = run("greens", std::string(kDrude) + "[output]\nformat = json\n");
    ASSERT_EQ(rep.exit_code, kExitOk);
    const auto j = json("out", "greens.json");
    EXPECT_EQ(j["columns"].size(), 3u);
    EXPECT_EQ(j["rows"].size(), 500u);
    EXPECT_FALSE(fs::exists(dir_ / "out" / "greens.csv"));
}

TEST_F(Cli, ThermoWeakCouplingMatchesFreeOscillator) {
    const auto rep = run("thermo", "[model]\nkind = drude_lorentz\neta = 0.001\nomega0 = 1\ngamma = 0.1\n"
                                   "[mode]\nk = 1\n[thermo]\nT = 0.2, 1, 5\n");
    EXPECT_NE(rep.exit_code, kExitNumerical) << rep.message;
    const auto t = table("out", "thermo.csv");
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.columns[1], "U_star");
    for (const auto& row : t.rows) {
        const double free = 0.5 / std::tanh(0.5 / row[0]);
        EXPECT_NEAR(row[1] / free, 1.0, 2e-3) << "T = " << row[0];
    }
}

TEST_F(Cli, ThermoSingleTemperature) {
    const auto rep = run("thermo", std::string(kDrude) + "[thermo]\nT = 1\n");
    EXPECT_EQ(rep.exit_code, kExitOk) << rep.message;
    EXPECT_EQ(table("out", "thermo.csv").rows.size(), 1u);
}

TEST_F(Cli, ThermoNegativeTemperature) {
    EXPECT_EQ(run("thermo", std::string(kDrude) + "[thermo]\nT = -1\n").exit_code, kExitConfig);
}

TEST_F(Cli, CorrelateVacuum) {
    const auto rep = run("correlate", "[model]\nkind = drude_lorentz\neta = 0.001\nomega0 = 1\ngamma = 0.1\n"
                                      "[mode]\nk = 1\n[correlate]\nT = 0\ndt = 0, 1\ndr = 0\n");
    ASSERT_EQ(rep.exit_code, kExitOk) << rep.message;
    const auto t = table("out", "corr_phi.csv");
    EXPECT_EQ(t.columns, (std::vector<std::string>{"dt", "dr", "value", "est_error"}));
    EXPECT_NEAR(t.rows[0][2], 0.5, 0.005);
    EXPECT_FALSE(fs::exists(dir_ / "out" / "coherent_phi.csv"));
}

TEST_F(Cli, CoherentZeroAmplitudeEqualsVacuum) {
    const auto rep = run("correlate", std::string(kDrude) +
                                          "[correlate]\nT = 0\ndt = 0, 0.5, 2\ndr = 0, 1\n"
                                          "[coherent]\nkind = constant\nre = 0\nim = 0\n");
    ASSERT_EQ(rep.exit_code, kExitOk) << rep.message;
    for (const char* q : {"phi", "pi"}) {
        const auto thermal = table("out", std::string("corr_") + q + ".csv");
        const auto coherent = table("out", std::string("coherent_") + q + ".csv");
        EXPECT_EQ(thermal.rows, coherent.rows) << q;
    }
}

TEST_F(Cli, PiMeanSignFlag) {
    const std::string text = std::string(kDrude) +
                             "[correlate]\nT = 0\ndt = 0\ndr = 0\n"
                             "[coherent]\nkind = constant\nre = 0.3\nim = 0.1\n";
    run("correlate", text, "subtract", PiMeanSign::subtract);
    run("correlate", text, "add", PiMeanSign::add);
    const double vac = table("subtract", "corr_pi.csv").rows[0][2];
    const double minus = table("subtract", "coherent_pi.csv").rows[0][2];
    const double plus = table("add", "coherent_pi.csv").rows[0][2];
    EXPECT_LT(minus, vac);
    EXPECT_GT(plus, vac);
    EXPECT_NEAR(plus - vac, vac - minus, 1e-9 * vac);
    EXPECT_EQ(table("subtract", "coherent_phi.csv").rows, table("add", "coherent_phi.csv").rows);
}

TEST_F(Cli, CorrelateMissingGrid) {
    EXPECT_EQ(run("correlate", kDrude).exit_code, kExitConfig);
}

TEST_F(Cli, CorrelateTabulatedModel) {
    const fs::path data = fs::path(DISSFIELD_CONFIGS) / "drude_table.dat";
    const auto rep = run("correlate", "[model]\nkind = tabulated\npath = " + data.string() +
                                          "\n[mode]\nk = 1\n[correlate]\nT = 1\ndt = 0\ndr = 0\n");
    ASSERT_EQ(rep.exit_code, kExitOk) << rep.message;
    EXPECT_GT(table("out", "corr_phi.csv").rows[0][2], 0.5);
}

namespace {
const char* kSmallLangevin = "[langevin]\nT = 10\ndt = 0.05\nt_max = 400\nburn_in = 50\nn_traj = 8\nseed = 99\n"
                             "acf_max_lag = 5\ndump_trajectories = 1\n";
}

TEST_F(Cli, LangevinDeterministic) {
    const auto a = run("langevin", std::string(kDrude) + kSmallLangevin, "a");
    const auto b = run("langevin", std::string(kDrude) + kSmallLangevin, "b");
    ASSERT_NE(a.exit_code, kExitConfig) << a.message;
    ASSERT_NE(a.exit_code, kExitNumerical) << a.message;
    EXPECT_EQ(bytes("a", "ensemble.json"), bytes("b", "ensemble.json"));
    EXPECT_EQ(bytes("a", "traj_0000.csv"), bytes("b", "traj_0000.csv"));
    const auto traj = table("a", "traj_0000.csv");
    EXPECT_EQ(traj.columns, (std::vector<std::string>{"t", "phi", "phidot"}));
    EXPECT_EQ(traj.rows.size(), 8001u);
}

TEST_F(Cli, LangevinSingleTrajectory) {
    const auto rep = run("langevin", std::string(kDrude) +
                                         "[langevin]\nT = 10\nt_max = 400\nburn_in = 50\nn_traj = 1\nacf_max_lag = 5\n");
    EXPECT_EQ(rep.exit_code, kExitOk) << rep.message;
    EXPECT_FALSE(rep.warnings.empty());
    const auto j = json("out", "ensemble.json");
    EXPECT_TRUE(j["stderr"]["var_phi"].is_null());
    EXPECT_TRUE(j["acf_phi"][0]["stderr"].is_null());
    EXPECT_FALSE(j["warnings"].empty());
}

TEST_F(Cli, LangevinStepTooLarge) {
    const auto rep = run("langevin", std::string(kDrude) + "[langevin]\nT = 10\ndt = 0.5\n");
    EXPECT_EQ(rep.exit_code, kExitConfig);
    EXPECT_NE(rep.message.find("dt"), std::string::npos);
}

TEST(ExitCodes, InstabilityIsNumericalFailureNamingStep) {
    // Valid configs cannot destabilise the integrator, so feed it a runaway forcing directly.
    const ResponseEvaluator ev(SusceptibilityModel(DrudeLorentz{0.1, 1.0, 0.1}), ModeContext::with_frequency(1.0));
    LangevinConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 0.05;
    cfg.t_max = 20.0;
    cfg.burn_in = 1.0;
    NoiseRealization noise;
    noise.dt = cfg.dt;
    noise.samples.assign(cfg.n_steps() + 1, 1e8);
    try {
        integrate_gle(ev, cfg, noise);
        ADD_FAILURE() << "expected Instability";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Instability);
        EXPECT_EQ(exit_code_for(e.kind()), kExitNumerical);
        EXPECT_NE(std::string(e.what()).find("dt = 0.05"), std::string::npos) << e.what();
    }
    EXPECT_EQ(exit_code_for(ErrorKind::ConfigInvalid), kExitConfig);
    EXPECT_EQ(exit_code_for(ErrorKind::NonConvergence), kExitNumerical);
}

TEST_F(Cli, BinaryExitCodes) {
    const fs::path cfg = dir_ / "bad.ini";
    std::ofstream(cfg) << "[model]\nkind = drude_lorentz\n";
    const std::string cli = DISSFIELD_CLI;
    auto status = [](const std::string& cmd) {
        const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    };
    EXPECT_EQ(status(cli + " kk-check --config " + cfg.string() + " --out " + (dir_ / "o").string()), kExitConfig);
    EXPECT_EQ(status(cli + " kk-check --config " + (dir_ / "missing.ini").string()), kExitConfig);
    EXPECT_EQ(status(cli + " greens --config " + cfg.string() + " --pi-mean-sign bogus"), kExitConfig);
    EXPECT_EQ(status(cli + " schema"), kExitOk);
    EXPECT_EQ(status(cli + " kk-check --config " + (fs::path(DISSFIELD_CONFIGS) / "kk_drude.ini").string() +
                     " --out " + (dir_ / "ok").string()),
              kExitOk);
}

TEST(Golden, ExampleConfigsReproduceFrozenTables) {
    const fs::path out = fs::temp_directory_path() / "dissfield_golden";
    fs::remove_all(out);
    for (const auto& [cmd, cfg, file, golden] :
         {std::tuple{"greens", "greens_drude.ini", "greens.csv", "greens_drude.golden.csv"},
          std::tuple{"kk-check", "kk_drude.ini", "kk.csv", "kk_drude.golden.csv"}}) {
        CommandOptions opts;
        opts.config = fs::path(DISSFIELD_CONFIGS) / cfg;
        opts.out = out / cmd;
        ASSERT_EQ(run_command(cmd, opts).exit_code, kExitOk) << cmd;
        const auto got = io::read_csv(out / cmd / file);
        const auto want = io::read_csv(fs::path(DISSFIELD_TEST_DATA) / golden);
        ASSERT_EQ(got.rows.size(), want.rows.size()) << cmd;
        for (std::size_t i = 0; i < want.rows.size(); ++i)
            for (std::size_t j = 0; j < want.columns.size(); ++j) {
                ASSERT_EQ(got.columns[j], want.columns[j]);
                EXPECT_NEAR(got.rows[i][j], want.rows[i][j], 1e-12 * (1.0 + std::abs(want.rows[i][j])))
                    << cmd << " row " << i << " " << want.columns[j];
            }
    }
    fs::remove_all(out);
}
