#include "svpath/cli.hpp"
#include "svpath/config.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace svpath;
namespace fs = std::filesystem;

namespace {

const char* kBase = R"(# small smoke-test model
r = 0.04
xi = 0.5
rho = -0.3
mu = 0.0
spot = 1.0
v0 = 0.09   # variance, not volatility
maturity = 1
strike = 1
seed = 42
n = 8
y0_nodes = 21
variance_paths = 10
price_paths = 4
)";

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("svpath_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const fs::path& dir, const std::string& extra = "")
{
    const auto p = dir / "run.cfg";
    std::ofstream(p) << kBase << extra;
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int invoke(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr)
{
    args.insert(args.begin(), "svpath");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST(Config, ParsesCommentsAndOverrides)
{
    auto cfg = config::Config::parse(kBase);
    EXPECT_EQ(cfg.get_double("v0"), 0.09);
    EXPECT_EQ(cfg.get_int("seed"), 42);
    cfg.apply_override("rho=0.25");
    EXPECT_EQ(cfg.get_double("rho"), 0.25);
    const auto run = config::build_run_spec(cfg);
    EXPECT_DOUBLE_EQ(run.state.spot_log_variance, std::log(0.09));
    EXPECT_EQ(run.state.spot_log_price, 0.0);
    EXPECT_EQ(run.grid.n, 8);
    EXPECT_EQ(run.mc.seed, 42u);
    EXPECT_EQ(run.params.rho, 0.25);
}

TEST(Config, RejectsBadInput)
{
    EXPECT_THROW(config::Config::parse("volatility = 3"), config::ConfigError);
    EXPECT_THROW(config::Config::parse("r 0.04"), config::ConfigError);
    auto cfg = config::Config::parse(kBase);
    EXPECT_THROW(cfg.apply_override("no_equals_sign"), config::ConfigError);
    cfg.set("xi", "abc");
    EXPECT_THROW(config::build_run_spec(cfg), config::ConfigError);

    auto both = config::Config::parse(std::string(kBase) + "spot_log_price = 0\n");
    EXPECT_THROW(config::build_run_spec(both), config::ConfigError);
}

TEST(Config, ListsAndContracts)
{
    auto cfg = config::Config::parse(std::string(kBase) + "strikes = 0.8, 0.9,1.0\nbarrier = 1.3\n");
    EXPECT_EQ(cfg.get_double_list("strikes"), (std::vector<double>{0.8, 0.9, 1.0}));
    const auto c = config::make_contract("up_and_out_call", cfg);
    EXPECT_EQ(c.kind, PayoffKind::UpAndOutCall);
    EXPECT_EQ(c.barrier, 1.3);
    EXPECT_EQ(config::make_contract("const1", cfg).kind, PayoffKind::Custom);
    EXPECT_THROW(config::make_contract("bermudan", cfg), config::ConfigError);
    EXPECT_EQ(config::build_euler_config(cfg, config::build_run_spec(cfg)).observation_intervals, 9);
}

TEST(Cli, MissingSeedIsConfigError)
{
    TempDir dir;
    const auto p = dir.path / "noseed.cfg";
    std::string text = kBase;
    text.erase(text.find("seed = 42\n"), 10);
    std::ofstream(p) << text;
    std::string err;
    EXPECT_EQ(invoke({"price", "--config", p.string()}, nullptr, &err), cli::kConfigError);
    EXPECT_NE(err.find("seed"), std::string::npos);
}

TEST(Cli, InvalidParametersAreConfigErrors)
{
    TempDir dir;
    const auto cfg = write_config(dir.path).string();
    EXPECT_EQ(invoke({"price", "--config", cfg, "--set", "kind=bermudan"}), cli::kConfigError);
    EXPECT_EQ(invoke({"price", "--config", cfg, "--set", "xi=0"}), cli::kConfigError);
    EXPECT_EQ(invoke({"price", "--config", cfg, "--set", "rho=1"}), cli::kConfigError);
    EXPECT_EQ(invoke({"price", "--config", (dir.path / "missing.cfg").string()}), cli::kConfigError);
    EXPECT_EQ(invoke({"price", "--config", cfg, "--format", "xml"}), cli::kConfigError);
    EXPECT_EQ(invoke({}), cli::kConfigError);
}

TEST(Cli, PriceConstantPayoff)
{
    TempDir dir;
    std::string out;
    ASSERT_EQ(invoke({"price", "--config", write_config(dir.path).string(), "--set", "kind=const1", "--format", "json"}, &out),
              cli::kOk);
    const auto pos = out.find("\"price\":");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_NEAR(std::stod(out.substr(pos + 8)), std::exp(-0.04), 1e-6);
}

TEST(Cli, SmileCsvIsByteIdenticalAcrossThreads)
{
    TempDir dir;
    const auto cfg = write_config(dir.path, "strikes = 0.8,0.9,1.0,1.1,1.2\n").string();
    const auto a = dir.path / "one.csv", b = dir.path / "eight.csv";
    ASSERT_EQ(invoke({"smile", "--config", cfg, "--threads", "1", "--out", a.string()}), cli::kOk);
    ASSERT_EQ(invoke({"smile", "--config", cfg, "--threads", "8", "--out", b.string()}), cli::kOk);
    const auto text = slurp(a);
    EXPECT_EQ(text, slurp(b));
    EXPECT_EQ(text.substr(0, text.find('\n')), "strike,price,std_error,implied_vol,flag");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
}

TEST(Cli, SweepWritesOneFilePerValue)
{
    TempDir dir;
    const auto cfg = write_config(dir.path, "strikes = 0.9,1.0,1.1\nsweep_key = rho\nsweep_values = -0.3,0.3\n").string();
    ASSERT_EQ(invoke({"smile", "--config", cfg, "--out", (dir.path / "smile.csv").string()}), cli::kOk);
    EXPECT_TRUE(fs::exists(dir.path / "smile_rho_-0.3.csv"));
    EXPECT_TRUE(fs::exists(dir.path / "smile_rho_0.3.csv"));
    EXPECT_EQ(invoke({"smile", "--config", cfg}), cli::kConfigError);
}

TEST(Cli, FarStrikesAreNotInvertible)
{
    TempDir dir;
    std::string out, err;
    const auto cfg = write_config(dir.path, "strikes = 100,200\n").string();
    EXPECT_EQ(invoke({"smile", "--config", cfg}, &out, &err), cli::kNumericalFailure);
    EXPECT_NE(out.find("non_invertible"), std::string::npos);
    EXPECT_FALSE(err.empty());
}

TEST(Cli, CompareKnockedOutBarrierIsZeroEverywhere)
{
    TempDir dir;
    const auto cfg = write_config(dir.path, "kinds = up_and_out_call,european_call\nbarrier = 0.95\neuler_paths = 2000\neuler_steps = 18\n");
    const auto rows = cli::cmd_compare(config::Config::load(cfg));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].pathint.price, 0.0);
    EXPECT_EQ(rows[0].sequential.price, 0.0);
    EXPECT_EQ(rows[0].euler.price, 0.0);
    EXPECT_FALSE(rows[0].black_scholes.has_value());
    ASSERT_TRUE(rows[1].black_scholes.has_value());
    const auto csv = cli::render_compare(rows, cli::Format::Csv);
    EXPECT_EQ(csv.substr(0, 5), "kind,");
}

TEST(Cli, AgreementRule)
{
    EXPECT_TRUE(cli::agrees(1.0, 0.1, 1.29, 0.0));
    EXPECT_FALSE(cli::agrees(1.0, 0.1, 1.31, 0.0));
    EXPECT_TRUE(cli::agrees(1.0, 0.3, 2.45, 0.4));
    EXPECT_EQ(cli::format_number(0.1), "0.1");
    EXPECT_EQ(cli::format_number(1.0 / 3.0), "0.333333333333");
}

TEST(Cli, SmileNeedsNoScalarStrike)
{
    auto text = std::string(kBase);
    text.erase(text.find("strike = 1\n"), 11);
    const auto smiles = cli::cmd_smile(config::Config::parse(text + "strikes = 0.9,1.1\n"));
    ASSERT_EQ(smiles.size(), 1u);
    EXPECT_EQ(smiles[0].smile.rows.size(), 2u);
}
