#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "common/random_systems.hpp"
#include "json.hpp"
#include "lqo/io.hpp"
#include "lqo_cli/demo.hpp"
#include "lqo_cli/run_command.hpp"

namespace lqo {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lqo_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

const std::string kData = LQO_DATA_DIR;

// ---- signal expressions ----

TEST(Signal, Evaluates) {
  EXPECT_EQ(parse_signal("0.01*cos(2*t)")(0.0), 0.01);
  EXPECT_EQ(parse_signal("t")(3.5), 3.5);
  EXPECT_EQ(parse_signal("-2^2")(0.0), -4.0);
  EXPECT_EQ(parse_signal("2^3^2")(0.0), 512.0);
  EXPECT_EQ(parse_signal(" 1 - 2 - 3 ")(0.0), -4.0);
  EXPECT_NEAR(parse_signal("exp(-t)*sin(t)")(0.7), std::exp(-0.7) * std::sin(0.7), 1e-15);
}

TEST(Signal, AgreesWithHandWrittenLambda) {
  const SignalExpr e = parse_signal("0.01*cos(2*t) + 0.5*exp(-t/3)");
  for (double t = 0.0; t <= 5.0; t += 0.25) {
    EXPECT_NEAR(e(t), 0.01 * std::cos(2 * t) + 0.5 * std::exp(-t / 3), 1e-15);
  }
}

TEST(Signal, DivisionByZeroAtEvaluation) {
  const SignalExpr e = parse_signal("1/(t-1)");
  EXPECT_EQ(e(2.0), 1.0);
  EXPECT_THROW(e(1.0), ValidationError);
}

TEST(Signal, SyntaxErrorsCarryOffset) {
  try {
    parse_signal("2*(t+");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.context(), "offset 5");
  }
  try {
    parse_signal("2*x");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.context(), "offset 2");
  }
  EXPECT_THROW(parse_signal("tan(t)"), ValidationError);
  EXPECT_THROW(parse_signal(""), ValidationError);
  EXPECT_THROW(parse_signal("1 2"), ValidationError);
}

// ---- system files ----

TEST(SystemFile, ThreeMassExample) {
  const LqoSystem s = load_system(kData + "/three_mass.json");
  EXPECT_EQ(s.states(), 6);
  EXPECT_EQ(s.a()(4, 1), -21.0);
  EXPECT_EQ(s.m(0)(0, 0), 0.5);
  EXPECT_EQ(s.m(0)(1, 1), 0.3);
  EXPECT_LE((s.a() - cli::example_system().a()).norm(), 0.0);
}

TEST(SystemFile, QuadraticListLength) {
  const std::string text = R"({"schema_version":1,"n_states":1,"n_inputs":1,"n_outputs":1,
    "A":[[-1]],"B":[[1]],"C":[[1]],"M":[]})";
  try {
    parse_system(text);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("M length 0 ≠ p 1"), std::string::npos);
    EXPECT_EQ(e.context(), "/M");
  }
}

TEST(SystemFile, NonHurwitzOnlyWhenRequired) {
  const std::string text = R"({"schema_version":1,"n_states":2,"n_inputs":1,"n_outputs":1,
    "A":[[1,0],[0,1]],"B":[[1],[1]],"C":[[1,1]],"M":[[[0,0],[0,0]]]})";
  EXPECT_THROW(parse_system(text), ValidationError);
  ParseOptions lax;
  lax.require_hurwitz = false;
  EXPECT_NO_THROW(parse_system(text, lax));
}

TEST(SystemFile, RaggedRowReportsPath) {
  const std::string text = R"({"schema_version":1,"n_states":2,"n_inputs":1,"n_outputs":1,
    "A":[[-1,0],[0]],"B":[[1],[1]],"C":[[1,1]],"M":[[[0,0],[0,0]]]})";
  try {
    parse_system(text);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.context().rfind("/A", 0), 0u) << e.context();
  }
}

TEST(SystemFile, BitIdenticalRoundTrip) {
  testing::Rng rng(80);
  const LqoSystem s = rng.system(5, 2, 3, false);
  ParseOptions lax;
  lax.require_hurwitz = false;
  const LqoSystem back = parse_system(serialize_system(s), lax);
  EXPECT_TRUE(back.a() == s.a());
  EXPECT_TRUE(back.b() == s.b());
  EXPECT_TRUE(back.c() == s.c());
  for (std::size_t i = 0; i < s.m().size(); ++i) EXPECT_TRUE(back.m(i) == s.m(i));
  EXPECT_EQ(serialize_system(back), serialize_system(s));
}

TEST(MatrixMarket, ArrayAndSymmetricCoordinate) {
  std::istringstream arr("%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n2\n3\n4\n");
  Matrix a = read_matrix_market(arr);
  EXPECT_EQ(a(1, 0), 2.0);
  EXPECT_EQ(a(0, 1), 3.0);

  std::istringstream coo(
      "%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n1 1 5\n3 1 -2\n");
  Matrix c = read_matrix_market(coo);
  EXPECT_EQ(c(0, 0), 5.0);
  EXPECT_EQ(c(2, 0), -2.0);
  EXPECT_EQ(c(0, 2), -2.0);
  EXPECT_EQ(c(1, 1), 0.0);

  std::istringstream bad("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n");
  EXPECT_THROW(read_matrix_market(bad), ValidationError);
}

TEST(MatrixMarket, ReferencedFromSystemFile) {
  write_text_file(scratch("a.mtx"), "%%MatrixMarket matrix array real general\n1 1\n-2\n");
  write_text_file(scratch("mm.json"), R"({"schema_version":1,"n_states":1,"n_inputs":1,
    "n_outputs":1,"A":{"matrix_market":"a.mtx"},"B":[[1]],"C":[[1]],"M":[[[0]]]})");
  const LqoSystem s = load_system(scratch("mm.json"));
  EXPECT_EQ(s.a()(0, 0), -2.0);
}

// ---- command line ----

TEST(Cli, NormOfScalarSystem) {
  const CliRun r = run({"norm", "--system", kData + "/scalar.json", "--t0", "0", "--t1", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), std::sqrt((1.0 - std::exp(-2.0)) / 2.0), 1e-14);
  EXPECT_NEAR(j["value"].get<double>(), 0.657524, 1e-5);
}

TEST(Cli, NormWithQuadrature) {
  const CliRun r = run({"norm", "--system", kData + "/scalar_quadratic.json", "--t1", "1",
                     "--quadrature", "400"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 0.432332, 1e-6);
  EXPECT_LE(j["quadrature"]["relative_difference"].get<double>(), 1e-6);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"norm", "--system", kData + "/scalar.json"}).code, 2);
  EXPECT_EQ(run({"norm", "--system", kData + "/scalar.json", "--t1", "soon"}).code, 2);
  EXPECT_EQ(run({"reduce", "--method", "pod", "--system", kData + "/scalar.json"}).code, 2);

  const CliRun missing = run({"norm", "--system", kData + "/nope.json", "--t1", "1"});
  EXPECT_EQ(missing.code, 3);
  EXPECT_EQ(json::parse(missing.err)["code"], 3);

  write_text_file(scratch("badm.json"), R"({"schema_version":1,"n_states":1,"n_inputs":1,
    "n_outputs":1,"A":[[-1]],"B":[[1]],"C":[[1]],"M":[]})");
  const CliRun badm = run({"norm", "--system", scratch("badm.json").string(), "--t1", "1"});
  EXPECT_EQ(badm.code, 3);
  const json e = json::parse(badm.err);
  EXPECT_EQ(e["context"], "/M");
  EXPECT_NE(e["message"].get<std::string>().find("M length 0"), std::string::npos);

  // HOMORA on the sixth-order example runs into an unstable iterate.
  const CliRun aborted = run({"reduce", "--method", "homora", "--system", kData + "/three_mass.json",
                         "--init", kData + "/three_mass_init.json", "--report",
                         scratch("homora.json").string()});
  EXPECT_EQ(aborted.code, 4);
  EXPECT_EQ(json::parse(read_text_file(scratch("homora.json")))["termination"],
            "non_hurwitz_abort");
}

TEST(Cli, ReduceTlhnoiaWritesReportAndRom) {
  const fs::path rom = scratch("rom.json");
  const CliRun r = run({"reduce", "--method", "tlhnoia", "--system", kData + "/three_mass.json",
                     "--init", kData + "/three_mass_init.json", "--t1", "0.5", "--out", rom.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["method"], "tlhnoia");
  EXPECT_EQ(j["converged"], true);
  EXPECT_EQ(j["order"], 3);
  for (const char* k : {"op1", "op2", "op3", "op4"}) EXPECT_TRUE(j["residual_norms"].contains(k));
  EXPECT_EQ(load_system(rom, false).states(), 3);

  const CliRun again = run({"reduce", "--method", "tlhnoia", "--system", kData + "/three_mass.json",
                         "--init", kData + "/three_mass_init.json", "--t1", "0.5"});
  EXPECT_EQ(again.out, r.out);

  const CliRun err = run({"error", "--system", kData + "/three_mass.json", "--rom", rom.string(),
                       "--t1", "0.5"});
  ASSERT_EQ(err.code, 0) << err.err;
  EXPECT_GT(json::parse(err.out)["value"].get<double>(), 0.0);

  const CliRun res = run({"residuals", "--system", kData + "/three_mass.json", "--rom",
                       rom.string(), "--t1", "0.5"});
  ASSERT_EQ(res.code, 0) << res.err;
}

TEST(Cli, ReduceBalancedTruncation) {
  const CliRun r = run({"reduce", "--method", "tlbt", "--order", "3", "--system",
                     kData + "/three_mass.json", "--t1", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["hankel_singular_values"].size(), 6u);
  EXPECT_EQ(run({"reduce", "--method", "bt", "--system", kData + "/three_mass.json"}).code, 2);
}

TEST(Cli, SimulateCsv) {
  const CliRun r = run({"simulate", "--system", kData + "/scalar.json", "--input", "1", "--t1", "1",
                     "--step", "0.25"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,y_full_1");
  int rows = 0;
  double last_t = 0.0, last_y = 0.0;
  while (std::getline(in, line)) {
    ++rows;
    std::sscanf(line.c_str(), "%lf,%lf", &last_t, &last_y);
  }
  EXPECT_EQ(rows, 5);
  EXPECT_EQ(last_t, 1.0);
  EXPECT_NEAR(last_y, 1.0 - std::exp(-1.0), 1e-9);

  const CliRun bad = run({"simulate", "--system", kData + "/scalar.json", "--input", "1/(t-0.5)",
                       "--t1", "1", "--step", "0.25"});
  EXPECT_EQ(bad.code, 3);
}

TEST(Cli, HsvAndHelp) {
  const CliRun r = run({"hsv", "--system", kData + "/three_mass.json", "--t1", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["sigma"].size(), 6u);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DemoWritesArtifacts) {
  const fs::path dir = scratch("demo");
  const CliRun r = run({"demo", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* m : {"bt", "tlbt", "homora", "tlhnoia"}) {
    EXPECT_TRUE(fs::exists(dir / (std::string("outputs_") + m + ".csv"))) << m;
    EXPECT_TRUE(fs::exists(dir / (std::string("report_") + m + ".json"))) << m;
  }
  const json tl = json::parse(read_text_file(dir / "report_tlhnoia.json"));
  EXPECT_EQ(tl["residual_norms"].size(), 4u);
  EXPECT_NE(r.out.find("tlhnoia: converged"), std::string::npos);
}

}  // namespace
}  // namespace lqo
