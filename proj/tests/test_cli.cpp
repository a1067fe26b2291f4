#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "radflow/cli.hpp"
#include "radflow/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace radflow;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "radflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const fs::path p = fs::temp_directory_path() / (std::string("radflow_") + info->name());
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p.string();
}

const char* kSmallFlow = R"(
[grid]
N = 64
n = 3
[eos]
kind = polytropic
q = 2/3
[init]
rho = 1 + 0.2*exp(-10*(r - 3/2)^2)
U = 0.1*sin(pi*r)
S = 0.2*cos(r)
[run]
t_end = 0.05
tracers = 1.2, 1.4
window_a = 1.0
window_b = 2.0
)";

} // namespace

TEST(Config, KeyValues) {
  const auto kv = config::KeyValues::from_string("a = 2/3\n# note\n[grid]\nN = 64 ; trailing\nlist = 1, 2.5,3\n");
  EXPECT_DOUBLE_EQ(kv.num("a"), 2.0 / 3.0);
  EXPECT_EQ(kv.integer("grid.N", 0), 64);
  EXPECT_EQ(kv.list("grid.list"), (std::vector<double>{1, 2.5, 3}));
  EXPECT_EQ(kv.num("missing", 7), 7);
  EXPECT_THROW(kv.str("grid.missing"), config::ConfigError);
  EXPECT_THROW(config::KeyValues::from_string("[grid\nN=1").keys(), config::ConfigError);
  EXPECT_THROW(config::KeyValues::from_string("x = 1.5\n").integer("x", 0), config::ConfigError);
}

TEST(Config, ScalarFunctions) {
  const auto f = config::scalar_function(config::parse_expression("sin(pi*x) + cos(x)^2 + tanh(x)", "f"), "x");
  for (double x : {0.1, 0.7, 1.3}) EXPECT_NEAR(f(x), std::sin(M_PI * x) + std::pow(std::cos(x), 2) + std::tanh(x), 1e-14);
  EXPECT_THROW(config::scalar_function(config::parse_expression("x*y", "f"), "x"), config::ConfigError);
  EXPECT_THROW(config::scalar_function(config::parse_expression("erf(x)", "f"), "x"), config::ConfigError);
  EXPECT_THROW(config::scalar_function(config::parse_expression("x + U", "f"), "x"), config::ConfigError);
  EXPECT_THROW(config::parse_expression("1 + * 2", "f"), config::ConfigError);
}

TEST(Config, KappaFromText) {
  const auto e = config::kappa_from_text("3*exp(S)");
  EXPECT_NEAR(e.f(0.5), 3 * std::exp(0.5), 1e-14);
  EXPECT_NEAR(e.inv(e.f(0.2)), 0.2, 1e-14);
  const auto l = config::kappa_from_text("2 - S/2");
  EXPECT_NEAR(l.inv(l.f(1.7)), 1.7, 1e-14);
  // general route: symbolic derivative, numeric inverse
  const auto c = config::kappa_from_text("S^3 + S");
  EXPECT_NEAR(c.df(2), 13, 1e-13);
  EXPECT_NEAR(c.inv(10), 2, 1e-12);
  const auto s = config::kappa_from_text("S^2 + 1");
  EXPECT_THROW(s.inv(0.5), std::domain_error);
}

TEST(Config, SimulationValidation) {
  auto kv = [](const std::string& extra) { return config::KeyValues::from_string(std::string(kSmallFlow) + extra); };
  const auto sim = config::load_simulation(kv(""));
  EXPECT_EQ(sim.grid.N, 64);
  EXPECT_NEAR(sim.init(1.5).rho, 1.2, 1e-14);
  EXPECT_NEAR(sim.init(0.5).u, 0.1, 1e-14);
  EXPECT_THROW(config::load_simulation(config::KeyValues::from_string("[init]\nrho = 1\nU = 0\n")), config::ConfigError);
  EXPECT_THROW(config::load_simulation(kv("cfl = 2\n")), config::ConfigError);
  EXPECT_THROW(config::load_simulation(kv("window_b = 3\n")), config::ConfigError);
  EXPECT_THROW(config::load_simulation(kv("tracers = 0.1\n")), config::ConfigError);
  EXPECT_THROW(config::load_simulation(config::KeyValues::from_string(std::string(kSmallFlow) + "[eos]\n")),
               config::ConfigError);
}

TEST(Cli, UnknownCase) {
  const auto r = run({"verify-symmetries", "--case", "99"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unknown case"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"casimir-check"}).code, 2);
  EXPECT_EQ(run({"casimir-check", "--order", "1", "--f", "J0*J7"}).code, 2);
  EXPECT_EQ(run({"simulate", "--config", "/nonexistent"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, VerifyCaseEight) {
  const auto r = run({"verify-symmetries", "--case", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], cli::kSchema);
  EXPECT_EQ(j["seed"], 20240611);
  ASSERT_EQ(j["rows"].size(), 5u);
  for (const auto& row : j["rows"]) {
    EXPECT_EQ(row["case"], 8);
    EXPECT_TRUE(row["residual_zero"]);
    EXPECT_TRUE(row["commutators_ok"]);
  }
  EXPECT_EQ(j["cases"][0]["algebra"], "sl(2,R)+2A_1");
}

TEST(Cli, VerifyAgainstConcreteEos) {
  const auto dir = scratch();
  const auto eos = write(dir / "eos.ini", "p = exp(S)*rho^(5/3)\nkappa = exp(S)\nn = 3\nq = 2/3\n");
  EXPECT_EQ(run({"verify-symmetries", "--case", "8", "--eos", eos}).code, 0);
  EXPECT_EQ(run({"verify-symmetries", "--case", "6", "--eos", eos}).code, 0);
  // kappa + k ln(rho) generators are not symmetries of a polytropic gas
  const auto r = run({"verify-symmetries", "--case", "7", "--eos", eos});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(json::parse(r.out)["pass"]);
  const auto bad = write(dir / "bad.ini", "kind = nonsense\n");
  EXPECT_EQ(run({"verify-symmetries", "--case", "1", "--eos", bad}).code, 2);
}

TEST(Cli, CasimirCheck) {
  const auto r = run({"casimir-check", "--order", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["levels"].size(), 3u);
  EXPECT_EQ(j["levels"][2]["first_residual_terms"], 0);
  const json f = json::parse(run({"casimir-check", "--order", "1", "--f", "J0*J1^2"}).out);
  EXPECT_TRUE(f["pass"]);
  EXPECT_TRUE(f["nontrivial"]);
  EXPECT_FALSE(json::parse(run({"casimir-check", "--order", "1", "--f", "J0*J1"}).out)["nontrivial"]);
}

TEST(Cli, HamSymmetry) {
  const auto dir = scratch();
  const auto eos = write(dir / "eos.ini", "kind = polytropic\n");
  const auto energy = write(dir / "energy.txt", "# total energy\nrho*(U^2/2 + e)\n");
  auto r = run({"ham-symmetry", "--density", energy, "--eos", eos});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_TRUE(j["symmetry"]);
  EXPECT_FALSE(j["trivial"]);
  r = run({"ham-symmetry", "--density", write(dir / "c.txt", "density = rho*f(S)\n"), "--eos", eos});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["casimir"]);
  // not conserved, so its Hamiltonian vector field is no symmetry
  r = run({"ham-symmetry", "--density", write(dir / "u3.txt", "rho*U^3"), "--eos", eos});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(json::parse(r.out)["symmetry"]);
}

TEST(Cli, SimulateWritesSnapshots) {
  const auto dir = scratch();
  const auto cfg = write(dir / "flow.ini", kSmallFlow);
  const auto r = run({"simulate", "--config", cfg, "--out", (dir / "out").string(), "--emit-plot-data",
                      (dir / "plot.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_LE(j["max_mass_defect"].get<double>(), 1e-12);
  EXPECT_EQ(j["tolerances"]["mass_defect"], 1e-12);
  ASSERT_EQ(j["snapshots"].size(), 4u);
  std::ifstream snap(j["snapshots"][3].get<std::string>());
  std::string head;
  std::getline(snap, head);
  EXPECT_NE(head.find("n = 3"), std::string::npos);
  EXPECT_NE(head.find("t = 0.05"), std::string::npos);
  std::getline(snap, head);
  EXPECT_EQ(head, "# r U rho S");
  int rows = 0;
  for (std::string line; std::getline(snap, line);) ++rows;
  EXPECT_EQ(rows, 64);
  std::ifstream plot(dir / "plot.csv");
  std::getline(plot, head);
  EXPECT_EQ(head, "t,r,U,rho,S");
}

TEST(Cli, ReportToFile) {
  const auto dir = scratch();
  const auto path = (dir / "report.json").string();
  const auto r = run({"--report", path, "verify-symmetries", "--case", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_EQ(json::parse(in)["command"], "verify-symmetries");
}

TEST(Cli, NumericChecks) {
  const auto dir = scratch();
  const auto cfg = write(dir / "flow.ini", kSmallFlow);
  EXPECT_EQ(run({"conserve-report", "--config", cfg}).code, 0);
  // the J-hierarchy of entropic flows only
  EXPECT_EQ(run({"advected-check", "--branch", "J1", "--order", "1", "--flow", cfg}).code, 2);
  // finite differences in time need a longer history than t_end = 0.05
  EXPECT_EQ(run({"transform-solution", "--config", cfg, "--group", "X_vii"}).code, 2);
  std::string text = kSmallFlow;
  text.replace(text.find("t_end = 0.05"), 12, "t_end = 0.25");
  const auto longer = write(dir / "longer.ini", text);
  auto r = run({"transform-solution", "--config", longer, "--group", "X_vii", "--eps", "0.05"});
  EXPECT_EQ(r.code, 1);
  EXPECT_GT(json::parse(r.out)["ratio"].get<double>(), 3.0);
  EXPECT_EQ(run({"transform-solution", "--config", longer, "--group", "X1", "--eps", "0.01"}).code, 0);
  EXPECT_EQ(run({"transform-solution", "--config", cfg, "--group", "X_42"}).code, 2);

  const auto ent = write(dir / "entropic.ini", R"(
[grid]
N = 64
[eos]
kind = entropic
[init]
rho = 1 + 0.2*r
U = 0.4 + 0.2*r
S = 1 + 0.5*r + 0.1*sin(2*r)
[run]
t_end = 0.1
tracers = 1.2, 1.4
)");
  r = run({"advected-check", "--branch", "J2", "--order", "1", "--flow", ent});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "branch,order,r0,initial,final,max_abs,max_relative");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
}
