#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "frobrep/cli.hpp"

using namespace frobrep;
using cli::Format;
using cli::RunConfig;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Golden {
  std::string file;
  RunConfig cfg;
};

RunConfig config(std::string command, Scalar p, int n, int r) {
  RunConfig c;
  c.command = std::move(command);
  c.p = p;
  c.n = n;
  c.r = r;
  return c;
}

std::vector<Golden> goldens() {
  std::vector<Golden> out;
  auto d1 = config("dims", 3, 1, 1);
  d1.lambda_max = 6;
  d1.format = Format::csv;
  out.push_back({"dims_p3_n1_r1.csv", d1});
  auto d2 = config("dims", 3, 2, 1);
  d2.lambda_max = 4;
  out.push_back({"dims_p3_n2_r1.json", d2});
  auto d3 = config("dims", 2, 2, 1);
  d3.lambda_max = 3;
  out.push_back({"dims_p2_n2_r1.json", d3});
  out.push_back({"cohomology_p2_n2_r1.json", config("cohomology", 2, 2, 1)});
  auto h = config("cohomology", 3, 1, 2);
  h.format = Format::csv;
  out.push_back({"cohomology_p3_n1_r2.csv", h});
  out.push_back({"kernel_p2_n1_r1.json", config("kernel", 2, 1, 1)});
  auto v = config("verify-socle", 3, 2, 1);
  v.lambda = Weight{1, 0};
  out.push_back({"verify-socle_p3_n2_r1.json", v});
  auto ch = config("character", 3, 2, 1);
  ch.lambda = Weight{2, 1};
  out.push_back({"character_p3_n2_r1.json", ch});
  auto g = config("group-check", 2, 1, 2);
  g.samples = 10;
  out.push_back({"group-check_p2_n1_r2.json", g});
  return out;
}

struct Process {
  int status;
  std::string out;
};

Process run_binary(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + FROBREP_CLI_PATH + " " + args + " 2>/dev/null";
  Process res{0, ""};
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
  const int st = pclose(pipe);
  res.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return res;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("frobrep_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Cli, GoldenOutputs) {
  for (const auto& g : goldens()) {
    auto res = cli::run(g.cfg);
    EXPECT_EQ(res.exit_code, 0) << g.file;
    const std::string expected = slurp(std::filesystem::path(FROBREP_GOLDEN_DIR) / g.file);
    ASSERT_FALSE(expected.empty()) << g.file;
    EXPECT_EQ(res.text, expected) << g.file;
  }
}

TEST(Cli, SameSeedSameBytes) {
  for (const auto& g : goldens()) EXPECT_EQ(cli::run(g.cfg).text, cli::run(g.cfg).text) << g.file;
  auto k = config("kernel", 3, 2, 1);
  k.seed = 99;
  EXPECT_EQ(cli::run(k).text, cli::run(k).text);
  auto a = run_binary("group-check --p 3 --n 2 --r 1 --samples 4 --seed 7");
  auto b = run_binary("group-check --p 3 --n 2 --r 1 --samples 4 --seed 7");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, BinaryMatchesLibrary) {
  auto res = run_binary("dims --p 3 --n 1 --r 1 --lambda-max 6 --format csv");
  EXPECT_EQ(res.status, 0);
  EXPECT_EQ(res.out, slurp(std::filesystem::path(FROBREP_GOLDEN_DIR) / "dims_p3_n1_r1.csv"));
  const auto out = temp_file("coh.json");
  res = run_binary("cohomology --p 2 --n 2 --output " + out.string());
  EXPECT_EQ(res.status, 0);
  EXPECT_TRUE(res.out.empty());
  EXPECT_EQ(slurp(out), slurp(std::filesystem::path(FROBREP_GOLDEN_DIR) / "cohomology_p2_n2_r1.json"));
  std::filesystem::remove(out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_binary("").status, 2);
  EXPECT_EQ(run_binary("dims --n 1").status, 2);
  EXPECT_EQ(run_binary("dims --p 4 --lambda 1").status, 2);
  EXPECT_EQ(run_binary("dims --p 3 --n 2").status, 2);
  EXPECT_EQ(run_binary("character --p 3 --lambda 1 --format csv").status, 2);
  EXPECT_EQ(run_binary("dims --p 3 --lambda 1,x").status, 2);
  EXPECT_EQ(run_binary("dims --p 3 --n 2 --lambda 0,1").status, 2);
  EXPECT_EQ(run_binary("dims --p 3 --n 4 --lambda 1,0,0,0").status, 2);
  EXPECT_EQ(run_binary("verify-socle --p 2 --n 2 --lambda 2,1").status, 3);
  EXPECT_EQ(run_binary("dims --p 3 --lambda 2").status, 0);
  // dims keeps going past weights it cannot handle
  auto res = run_binary("dims --p 2 --n 2 --lambda 2,1");
  EXPECT_EQ(res.status, 0);
  auto row = Json::parse(res.out)["rows"][0];
  EXPECT_EQ(row["case"], "outside_hypotheses");
  EXPECT_TRUE(row["dim"].is_null());
}

TEST(Cli, ScopeLimit) {
  EXPECT_EQ(run_binary("cohomology --p 3 --n 2", "FROBREP_SCOPE_LIMIT=10").status, 2);
  EXPECT_EQ(run_binary("cohomology --p 3 --n 2", "FROBREP_SCOPE_LIMIT=100").status, 0);
  // the flag wins over the environment
  EXPECT_EQ(run_binary("cohomology --p 3 --n 2 --scope-limit 100", "FROBREP_SCOPE_LIMIT=10").status, 0);
  EXPECT_EQ(run_binary("cohomology --p 3 --n 2", "FROBREP_SCOPE_LIMIT=zero").status, 2);
  auto c = config("cohomology", 3, 2, 1);
  c.scope_limit = 10;
  EXPECT_EQ(cli::run(c).exit_code, 2);
}

TEST(Cli, KernelWitness) {
  const PairRingParams prm{1, 1, 3};
  const auto a = LaurentPoly::monomial(1, {2}) + LaurentPoly::constant(1, -1);
  const auto x = kernel_element(a, prm);
  const auto good = temp_file("good.json");
  {
    std::ofstream f(good);
    f << Json{{"b", to_json(x.b)}, {"a", to_json(x.a)}}.dump();
  }
  auto c = config("kernel", 3, 1, 1);
  c.witness = good.string();
  auto res = cli::run(c);
  EXPECT_EQ(res.exit_code, 0) << res.text;
  auto body = Json::parse(res.text);
  EXPECT_TRUE(body["membership"].get<bool>());
  EXPECT_EQ(laurent_from_json(body["witness"], 1), a);

  const auto bad = temp_file("bad.json");
  {
    std::ofstream f(bad);
    f << Json{{"b", to_json(LaurentPoly::constant(1, 1))}, {"a", to_json(LaurentPoly(1))}}.dump();
  }
  c.witness = bad.string();
  res = cli::run(c);
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_FALSE(Json::parse(res.text)["in_kernel"].get<bool>());
  EXPECT_EQ(run_binary("kernel --p 3 --witness " + bad.string()).status, 1);

  const auto malformed = temp_file("malformed.json");
  {
    std::ofstream f(malformed);
    f << R"({"b": [[[1], 2]], "a": {"terms": []}})";
  }
  c.witness = malformed.string();
  EXPECT_EQ(cli::run(c).exit_code, 2);
  std::filesystem::remove(malformed);

  c.witness = temp_file("missing.json").string();
  EXPECT_EQ(cli::run(c).exit_code, 2);
  std::filesystem::remove(good);
  std::filesystem::remove(bad);
}

TEST(Cli, ReportsCarryParameters) {
  auto c = config("character", 5, 1, 2);
  c.lambda = Weight{7};
  auto res = cli::run(c);
  ASSERT_EQ(res.exit_code, 0) << res.text;
  auto body = Json::parse(res.text);
  EXPECT_EQ(body["command"], "character");
  EXPECT_EQ(body["p"], 5);
  EXPECT_EQ(body["r"], 2);
  EXPECT_TRUE(body["ok"].get<bool>());
  EXPECT_TRUE(body["failures"].empty());
}

TEST(Json, PolynomialAndPointEncodings) {
  auto R = PolyRing::make(2, 1, 3);
  auto F = TestAlgebra::field(3);
  auto f = TruncatedPolynomial::monomial(R, {2, 0}, AlgebraElement::scalar(F, 2)) +
           TruncatedPolynomial::monomial(R, {0, 1}, AlgebraElement::one(F));
  auto j = to_json(f);
  EXPECT_EQ(j["n"], 2);
  EXPECT_EQ(j["p"], 3);
  // degree-lexicographic: x_2 before x_1^2
  ASSERT_EQ(j["terms"].size(), 2u);
  EXPECT_EQ(j["terms"][0]["exp"], Json({0, 1}));
  EXPECT_EQ(j["terms"][1]["coeff"], 2);

  auto A = TestAlgebra::dual_numbers(3);
  auto g = GroupPoint::translation(R, {AlgebraElement::generator(A, 0), AlgebraElement::zero(A)});
  auto jg = to_json(g);
  EXPECT_EQ(jg["algebra"]["orders"], Json({2}));
  ASSERT_EQ(jg["images"].size(), 2u);
  // x_1 + eps: constant term has coordinates (0, 1) over {1, eps}
  EXPECT_EQ(jg["images"][0]["terms"][0]["coeff"], Json({0, 1}));
  EXPECT_EQ(to_json(LaurentPoly::constant(1, 0)), Json({{"terms", Json::array()}}));
  EXPECT_EQ(laurent_from_json(to_json(LaurentPoly::monomial(2, {-1, 3}, 4)), 2), LaurentPoly::monomial(2, {-1, 3}, 4));
  EXPECT_THROW(laurent_from_json(Json::array(), 1), ParameterError);
}
