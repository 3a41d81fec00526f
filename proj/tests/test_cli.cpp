#include <doctest.h>

#include <random>
#include <sstream>

#include "actionalg/cli.hpp"
#include "support.hpp"

using namespace actionalg;
namespace cli = actionalg::cli;

namespace {

cli::ExperimentConfig config_from(const std::string& text, const std::string& experiment = "") {
  return cli::build_config(cli::parse_config_text(text), experiment);
}

std::string error_of(const std::string& text, const std::string& experiment = "") {
  try {
    config_from(text, experiment);
  } catch (const cli::ConfigError& e) {
    return e.what();
  }
  return "";
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

const char* kFreePanalytic = R"(# free pair
experiment = panalytic
presentation.orders = inf, inf
presentation.names = a, b
elements.h = a
elements.g = b
budget.J_max = 3
)";

}  // namespace

TEST_CASE("config text parsing") {
  const auto raw = cli::parse_config_text("# comment\n\n a.b = 1 # trailing\nc=x y\n");
  CHECK(raw.entries.at("a.b") == "1");
  CHECK(raw.entries.at("c") == "x y");
  CHECK(raw.line_of.at("c") == 4);
  CHECK_THROWS_AS(cli::parse_config_text("novalue\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config_text("a = 1\na = 2\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config_text(" = 2\n"), cli::ConfigError);
}

TEST_CASE("config validation with line diagnostics") {
  const auto cfg = config_from(kFreePanalytic);
  CHECK(cfg.experiment == "panalytic");
  CHECK(cfg.J_max == 3);
  CHECK(cfg.elements.at("h") == "a");
  CHECK(cfg.presentation == Presentation::free_group({"a", "b"}));

  CHECK(error_of("budget.J_max = 0\n", "panalytic").find("line 1 field 'budget.J_max'") !=
        std::string::npos);
  CHECK(error_of("bogus.key = 1\n", "panalytic").find("unknown key") != std::string::npos);
  CHECK(error_of("elements.h = q\n", "panalytic").find("line 1 field 'elements.h'") !=
        std::string::npos);
  CHECK(error_of("presentation.orders = 1, inf\npresentation.names = s, g\n", "orbits") != "");
  CHECK(error_of("presentation.orders = inf\n", "orbits") != "");
  CHECK(error_of("action = curve_graph\n", "orbits").find("cayley") != std::string::npos);
  CHECK(error_of("experiment = norm\n", "trace") != "");
  CHECK(error_of("", "nonsense") != "");
  CHECK(error_of("budget.prune_threshold = abc\n", "norm") != "");
  CHECK(error_of("output.format = png\n", "norm") != "");

  const auto torsion =
      config_from("presentation.orders = 3, inf\npresentation.names = h, g\n", "orbits");
  CHECK(torsion.presentation == Presentation({{"h", 3}, {"g", kInfiniteOrder}}));
}

TEST_CASE("echo and parameter hash are canonical") {
  const auto a = config_from("elements.h = a\nbudget.J_max = 3\n", "panalytic");
  const auto b = config_from("budget.J_max = 3\n\n# reordered\nelements.h = a\n", "panalytic");
  CHECK(a.echo == b.echo);
  CHECK(cli::param_hash(a) == cli::param_hash(b));
  CHECK(cli::param_hash(a).size() == 16);
  const auto c = config_from("elements.h = a\nbudget.J_max = 4\n", "panalytic");
  CHECK(cli::param_hash(a) != cli::param_hash(c));
  // the output location does not change the experiment
  const auto d = config_from("elements.h = a\nbudget.J_max = 3\noutput.path = /tmp/x\n", "panalytic");
  CHECK(cli::param_hash(a) == cli::param_hash(d));
}

TEST_CASE("decimal formatting") {
  CHECK(cli::format_decimal(2.0) == "2");
  CHECK(cli::format_decimal(1.0 / 3.0) == "0.333333333333");
  CHECK(cli::format_decimal(std::sqrt(2.0)) == "1.41421356237");
  CHECK(cli::format_decimal(1e-9) == "1e-09");
  CHECK(cli::format_decimal(123456789012345.0) == "1.23456789012e+14");
}

TEST_CASE("operator text round trip") {
  const Group F = testing::free2();
  const FormalOperator T = cli::parse_operator(F, "2*e + 1*a - 0.5*b^-1 a");
  CHECK(T.coefficient(F.identity()) == Complex(2.0));
  CHECK(T.coefficient(F.parse("a")) == Complex(1.0));
  CHECK(T.coefficient(F.parse("b^-1 a")) == Complex(-0.5));
  CHECK(cli::parse_operator(F, "a b") == FormalOperator::single(F.parse("a b")));
  CHECK(cli::parse_operator(F, "(1,-2)*a + 3i*b").coefficient(F.parse("a")) == Complex(1.0, -2.0));
  CHECK(cli::parse_operator(F, "3i*b").coefficient(F.parse("b")) == Complex(0.0, 3.0));
  CHECK(cli::parse_operator(F, "(1e-3,0)*a").coefficient(F.parse("a")) == Complex(1e-3));
  CHECK_THROWS_AS(cli::parse_operator(F, "2* + a"), ParseError);
  CHECK_THROWS_AS(cli::parse_operator(F, "(1,2*a"), ParseError);

  std::mt19937_64 rng(61);
  for (const Group& G : {testing::free2(), testing::z2_z3(), testing::z3_z()}) {
    for (int i = 0; i < 100; ++i) {
      const FormalOperator S = cli::random_operator(G, rng, 5, 4);
      CHECK(S.support_size() <= 5);
      for (const auto& [g, c] : S.terms()) CHECK(G.word_length(g) <= 4);
      const FormalOperator back = cli::parse_operator(G, cli::render_operator(G, S));
      REQUIRE(back.support_size() == S.support_size());
      for (const auto& [g, c] : S.terms()) CHECK(std::abs(back.coefficient(g) - c) <= 1e-11);
    }
  }
}

TEST_CASE("CSV rows") {
  cli::ResultRow r;
  r.experiment = "panalytic";
  r.param_hash = "0123456789abcdef";
  r.index = 4;
  r.bound = 1.0;
  r.estimate = std::sqrt(3.0) / 2.0;
  r.residual = 6.5e-6;
  r.support = 9841;
  CHECK(cli::csv_line(r) == "panalytic,0123456789abcdef,4,1,0.866025403784,6.5e-06,9841,true,PASS");
}

TEST_CASE("run: panalytic on the free pair") {
  const auto cfg = config_from(kFreePanalytic);
  const auto result = cli::run(cfg);
  CHECK(result.exit_code == cli::kExitPass);
  REQUIRE(result.rows.size() == 3);
  for (const auto& row : result.rows) {
    CHECK(row.estimate <= row.bound);
    CHECK(row.verdict == Verdict::kPass);
  }
  const auto csv = lines_of(cli::render_csv(result));
  CHECK(csv.front() == cli::kCsvHeader);
  CHECK(csv.size() == 4);
  CHECK(cli::render_csv(cli::run(cfg)) == cli::render_csv(result));
}

TEST_CASE("run: h = e is a configuration error") {
  auto cfg = config_from(kFreePanalytic);
  cfg.elements["h"] = "e";
  try {
    cli::run(cfg);
    FAIL("expected a ConfigError");
  } catch (const cli::ConfigError& e) {
    CHECK(std::string(e.what()).find("h must be nontrivial") != std::string::npos);
  }
  cfg.elements.erase("h");
  CHECK_THROWS_AS(cli::run(cfg), cli::ConfigError);
}

TEST_CASE("run: blowup rows are exact") {
  const auto cfg = config_from(
      "presentation.orders = 2, 3\npresentation.names = s, t\nelements.h = t\nelements.g = s\n"
      "budget.N_list = 4\n",
      "blowup");
  const auto result = cli::run(cfg);
  CHECK(result.exit_code == cli::kExitPass);
  REQUIRE(result.rows.size() == 1);
  CHECK(result.rows[0].estimate == 2.0);
  CHECK(result.rows[0].bound == 2.0);
  CHECK(result.rows[0].residual == 0.0);
}

TEST_CASE("run: exit code follows the worst row") {
  const auto falsified = cli::run(config_from(
      "presentation.orders = 2, 3\npresentation.names = s, t\nelements.h = t\nelements.g = s\n"
      "budget.J_list = 1, 32\n",
      "panalytic"));
  CHECK(falsified.exit_code == cli::kExitFalsified);
  REQUIRE(falsified.rows.size() == 2);
  CHECK(falsified.rows[0].verdict == Verdict::kPass);
  CHECK(falsified.rows[1].verdict == Verdict::kFalsified);
  CHECK(falsified.witness.find("point,re,im") != std::string::npos);

  const auto capped = cli::run(config_from(
      "elements.h = a\nelements.g = b\nbudget.J_list = 3\nbudget.support_cap = 4\n"
      "budget.prune_threshold = 1e-12\n",
      "panalytic"));
  CHECK(capped.exit_code == cli::kExitInconclusive);
  CHECK(capped.rows[0].verdict == Verdict::kInconclusive);
}

TEST_CASE("run: budget overflow keeps the rows computed so far") {
  const auto result = cli::run(config_from(
      "elements.h = a\nelements.g = b\nbudget.J_max = 2\nbudget.L = 6\nbudget.ball_cap = 50\n",
      "orbits"));
  CHECK(result.exit_code == cli::kExitInconclusive);
  bool mentioned = false;
  for (const auto& line : result.summary) mentioned |= line.find("budget exceeded") != std::string::npos;
  CHECK(mentioned);
}

TEST_CASE("run: every experiment produces rows") {
  struct Case {
    const char* experiment;
    const char* text;
    int exit_code;
  };
  const Case cases[] = {
      {"average", "operators.T = 2*e + 1*a\nelements.g = b\nbudget.J_list = 1, 2\n", 0},
      {"norm", "operators.T = 0.5*b^-1 a b + 0.5*b^-2 a b^2\n", 0},
      {"trace", "budget.pairs = 20\nseed = 7\n", 0},
      {"trace", "operators.S = a + 2*b\noperators.T = a^-1 + b^-1\n", 0},
      {"orbits", "elements.h = a\nelements.g = b\nbudget.J_max = 3\nbudget.L = 4\n", 0},
      {"orbits", "elements.h = a\nelements.g = a\nbudget.J_max = 2\nbudget.L = 3\n", 1},
      {"pingpong", "elements.h = a\nelements.g = b\nbudget.L = 4\nbudget.J_max = 4\n", 0},
      {"pingpong",
       "presentation.orders = 2, 3\npresentation.names = s, t\nelements.h = t\nelements.g = s\n"
       "budget.L = 3\nbudget.J_max = 3\n",
       1},
      {"ideal", "operators.T = 2*e + 1*a + 1*b\nelements.g = a b\nbudget.J_max = 20\n"
                "budget.numeric_J = 2\n",
       0},
  };
  for (const Case& c : cases) {
    CAPTURE(c.experiment);
    CAPTURE(c.text);
    const auto result = cli::run(config_from(c.text, c.experiment));
    CHECK(result.exit_code == c.exit_code);
    CHECK_FALSE(result.rows.empty());
    bool any_falsified = false;
    for (const auto& row : result.rows) {
      any_falsified |= row.verdict == Verdict::kFalsified;
      CHECK(row.bound >= 0.0);
      CHECK(row.estimate >= 0.0);
      CHECK(std::isfinite(row.bound));
      CHECK(std::isfinite(row.estimate));
    }
    CHECK(any_falsified == (result.exit_code == cli::kExitFalsified));
  }
}

TEST_CASE("run: ideal experiment closes at J = 17") {
  const auto result = cli::run(config_from(
      "operators.T = 2*e + 1*a + 1*b\nelements.g = a b\nbudget.J_max = 64\nbudget.numeric_J = 2\n",
      "ideal"));
  bool found = false;
  for (const auto& row : result.rows) {
    if (row.experiment == "ideal.closing") {
      found = true;
      CHECK(row.index == 17);
    }
    if (row.experiment == "ideal.threshold") CHECK(row.converged == (row.index >= 17));
  }
  CHECK(found);
}

TEST_CASE("artifacts and chart") {
  auto cfg = config_from(kFreePanalytic);
  cfg.svg = true;
  const auto result = cli::run(cfg);
  const std::string svg = cli::render_svg(result);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  const std::string summary = cli::render_summary(cfg, result);
  CHECK(summary.find("verdict: PASS") != std::string::npos);
}
