#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "fermiwork/cli.hpp"
#include "fermiwork/cm_io.hpp"
#include "fermiwork/covariance.hpp"
#include "fermiwork/errors.hpp"
#include "fermiwork/gaussian.hpp"

using namespace fermiwork;

namespace {

struct TempFile {
  std::string path;
  TempFile(std::string name, const std::string& content) : path(std::move(name)) {
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// Value printed after "key: " on its own line; NaN if the key is missing.
double value_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  if (pos == std::string::npos) return std::nan("");
  return std::stod(text.substr(pos + key.size()));
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

// Covariance file text for a block-diagonal matrix with the given pair values.
std::string block_diag_text(const std::vector<double>& omegas,
                            const std::vector<double>& lambdas) {
  const int n = static_cast<int>(omegas.size());
  std::ostringstream out;
  out.precision(17);
  out << "modes " << n << "\nomega";
  for (double w : omegas) out << ' ' << w;
  out << "\n";
  for (int r = 0; r < 2 * n; ++r) {
    for (int c = 0; c < 2 * n; ++c) {
      double v = 0.0;
      if (r / 2 == c / 2) {
        if (c == r + 1) v = lambdas[r / 2];
        if (c + 1 == r) v = -lambdas[c / 2];
      }
      out << (c ? " " : "") << v;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace

TEST_CASE("format_number normalizes to 12 significant digits") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(std::acos(-1.0) / 2) == "1.57079632679");
  CHECK(format_number(1e-5) == "1e-05");
  CHECK(format_number(-2.5) == "-2.5");
}

TEST_CASE("sweep config parsing") {
  SUBCASE("ranges and lists") {
    std::istringstream in(
        "# grid\n"
        "beta_a = 1:0.5:3\n"
        "beta_b = 1\n"
        "omega_a = 0.5, 1, 2\n"
        "omega_b=2\n");
    const SweepConfig cfg = parse_sweep_config(in);
    CHECK(cfg.beta_a == std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0});
    CHECK(cfg.beta_b == std::vector<double>{1.0});
    CHECK(cfg.omega_a == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(cfg.omega_b == std::vector<double>{2.0});
  }
  SUBCASE("unknown key is named") {
    std::istringstream in("gamma = 1\n");
    CHECK_THROWS_WITH_AS(parse_sweep_config(in), "line 1: unknown key 'gamma'", ParseError);
  }
  SUBCASE("duplicate key") {
    std::istringstream in("beta_a = 1\nbeta_a = 2\n");
    CHECK_THROWS_WITH_AS(parse_sweep_config(in), "line 2: duplicate key 'beta_a'", ParseError);
  }
  SUBCASE("bad number") {
    std::istringstream in("beta_a = 1,x\n");
    CHECK_THROWS_AS(parse_sweep_config(in), ParseError);
  }
  SUBCASE("bad range step") {
    std::istringstream in("beta_a = 1:0:3\n");
    CHECK_THROWS_AS(parse_sweep_config(in), ParseError);
  }
  SUBCASE("missing equals") {
    std::istringstream in("beta_a 1\n");
    CHECK_THROWS_AS(parse_sweep_config(in), ParseError);
  }
  SUBCASE("empty value gives an empty grid axis") {
    std::istringstream in("beta_a =\n");
    CHECK(parse_sweep_config(in).beta_a.empty());
  }
}

TEST_CASE("covariance file parse errors carry line numbers") {
  SUBCASE("wrong leading token") {
    std::istringstream in("nodes 2\n");
    CHECK_THROWS_WITH_AS(parse_cm_text(in),
                         doctest::Contains("line 1"), ParseError);
  }
  SUBCASE("short matrix row") {
    std::istringstream in("modes 1\nomega 1\n0 1\n-1\n");
    CHECK_THROWS_WITH_AS(parse_cm_text(in), doctest::Contains("line 4"), ParseError);
  }
  SUBCASE("non-numeric entry") {
    std::istringstream in("modes 1\nomega 1\n0 q\n");
    CHECK_THROWS_WITH_AS(parse_cm_text(in), doctest::Contains("line 3"), ParseError);
  }
  SUBCASE("premature end of file") {
    std::istringstream in("modes 2\nomega 1 2\n");
    CHECK_THROWS_AS(parse_cm_text(in), ParseError);
  }
}

TEST_CASE("covariance text round trip is lossless") {
  const ModeSystem m({1.0, 2.0});
  CovarianceMatrix cm = thermal_cm({0.7, 1.3}, m);
  cm = apply(beamsplit_matrix(2, 0, 1, 0.37), cm);  // populate the off blocks
  const std::string text = format_cm_text(m, cm);
  std::istringstream in(text);
  const CmFile file = parse_cm_text(in);
  CHECK(file.modes.omegas() == m.omegas());
  CHECK((file.cm.matrix() - cm.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(format_cm_text(file.modes, file.cm) == text);
}

TEST_CASE("validate subcommand") {
  SUBCASE("vacuum file is physical and pure") {
    TempFile f("tmp_cli_vacuum.txt", block_diag_text({1.0, 1.0}, {1.0, 1.0}));
    const CliResult r = run({"validate", f.path});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "modes: 2"));
    CHECK(contains(r.out, "antisymmetric: yes"));
    CHECK(contains(r.out, "max_singular_value: 1"));
    CHECK(contains(r.out, "physical: yes"));
    CHECK(contains(r.out, "pure: yes"));
    CHECK(contains(r.out, "canonical_values: 1 1"));
    CHECK(contains(r.out, "energy: 0"));
  }
  SUBCASE("thermal file reports its canonical value") {
    TempFile f("tmp_cli_thermal.txt", block_diag_text({1.0}, {std::tanh(1.0)}));
    const CliResult r = run({"validate", f.path});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "pure: no"));
    CHECK(contains(r.out, "canonical_values: 0.761594155956"));
  }
  SUBCASE("overscaled file fails with a report") {
    TempFile f("tmp_cli_big.txt", block_diag_text({1.0}, {1.5}));
    const CliResult r = run({"validate", f.path});
    CHECK(r.code == 2);
    CHECK(contains(r.out, "max_singular_value: 1.5"));
    CHECK(contains(r.out, "physical: no"));
    CHECK_FALSE(contains(r.out, "canonical_values"));
  }
  SUBCASE("asymmetric file names the offending entry") {
    TempFile f("tmp_cli_asym.txt", "modes 1\nomega 1\n0 0.5\n0.5 0\n");
    const CliResult r = run({"validate", f.path});
    CHECK(r.code == 2);
    CHECK(contains(r.out, "antisymmetric: no"));
    CHECK(contains(r.out, "violation 1 at entry 0,1"));
  }
  SUBCASE("malformed file exits 1 with a line number") {
    TempFile f("tmp_cli_garbage.txt", "hello\n");
    const CliResult r = run({"validate", f.path});
    CHECK(r.code == 1);
    CHECK(contains(r.err, "line 1"));
  }
  SUBCASE("missing file exits 1") {
    const CliResult r = run({"validate", "tmp_cli_does_not_exist.txt"});
    CHECK(r.code == 1);
    CHECK(contains(r.err, "cannot open"));
  }
}

TEST_CASE("minimize subcommand") {
  TempFile f("tmp_cli_full.txt", block_diag_text({1.0, 2.0}, {-1.0, -1.0}));
  SUBCASE("fully occupied two modes drain to the vacuum") {
    const CliResult r = run({"minimize", f.path});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "input: energy 3"));
    CHECK(contains(r.out, "standard_form:"));
    CHECK(contains(r.out, "squeeze: r* = 1.57079632679"));
    CHECK(contains(r.out, "beamsplit: theta* = "));
    CHECK(contains(r.out, "williamson_values: 1 1"));
    CHECK(contains(r.out, "gaussian_ergotropy: 3"));
  }
  SUBCASE("trace CSV has the pinned header and monotone energies") {
    const CliResult r = run({"minimize", f.path, "--trace", "tmp_cli_trace.csv"});
    CHECK(r.code == 0);
    std::ifstream trace("tmp_cli_trace.csv");
    REQUIRE(trace.good());
    std::stringstream buf;
    buf << trace.rdbuf();
    const std::vector<std::string> rows = lines_of(buf.str());
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "stage,param,energy,a,b,e1,e2");
    const char* names[4] = {"input", "standard_form", "squeeze", "beamsplit"};
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 4; ++i) {
      std::istringstream row(rows[i]);
      std::string stage, param, energy;
      std::getline(row, stage, ',');
      std::getline(row, param, ',');
      std::getline(row, energy, ',');
      CHECK(stage == names[i - 1]);
      const double e = std::stod(energy);
      CHECK(e <= prev + 1e-12);
      prev = e;
    }
    std::remove("tmp_cli_trace.csv");
  }
  SUBCASE("three-mode input is rejected") {
    TempFile g("tmp_cli_three.txt", block_diag_text({1.0, 1.0, 1.0}, {0.5, 0.5, 0.5}));
    const CliResult r = run({"minimize", g.path});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "two-mode"));
  }
}

TEST_CASE("ergotropy subcommand") {
  SUBCASE("equal-temperature thermal input is passive both ways") {
    const CliResult r = run({"ergotropy", "--betas", "1,1", "--omegas", "1,2"});
    CHECK(r.code == 0);
    CHECK(std::abs(value_after(r.out, "fock_ergotropy: ")) < 1e-12);
    CHECK(std::abs(value_after(r.out, "gaussian_ergotropy: ")) < 1e-12);
    CHECK(contains(r.out, "max_discrepancy: "));
  }
  SUBCASE("gaussian and sampler agree on a drainable pure state") {
    TempFile f("tmp_cli_full2.txt", block_diag_text({1.0, 2.0}, {-1.0, -1.0}));
    const CliResult r =
        run({"ergotropy", f.path, "--method", "gaussian,sampler", "--trials", "5000"});
    CHECK(r.code == 0);
    CHECK(value_after(r.out, "gaussian_ergotropy: ") == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(value_after(r.out, "sampler_ergotropy: ") == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(value_after(r.out, "max_discrepancy: ") < 1e-6);
  }
  SUBCASE("sampler output is reproducible byte for byte") {
    TempFile f("tmp_cli_rand.txt", block_diag_text({1.0, 2.0}, {0.9, -0.3}));
    const std::vector<std::string> args{"ergotropy", f.path, "--method", "sampler",
                                        "--trials",  "2000", "--seed",   "7"};
    const CliResult a = run(args);
    const CliResult b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  SUBCASE("fock method over the register cap points at the alternatives") {
    const CliResult r = run({"ergotropy", "--betas", "1,1,1,1,1,1,1,1,1", "--omega", "1",
                             "--method", "fock"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "gaussian"));
  }
  SUBCASE("unknown method") {
    const CliResult r = run({"ergotropy", "--betas", "1", "--omega", "1", "--method", "magic"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "unknown method"));
  }
  SUBCASE("state must come from exactly one source") {
    TempFile f("tmp_cli_one.txt", block_diag_text({1.0}, {0.5}));
    CHECK(run({"ergotropy", f.path, "--betas", "1", "--omega", "1"}).code == 2);
    CHECK(run({"ergotropy"}).code == 2);
  }
}

TEST_CASE("activate subcommand") {
  SUBCASE("inverted thermal product reports the swap protocol") {
    const CliResult r = run({"activate", "--betas", "0.25,0.25,1", "--omega", "1"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "passive: no"));
    CHECK(contains(r.out, "witness: 001 <-> 110"));
    CHECK(contains(r.out, "activation_number: 1"));
    CHECK(contains(r.out, "endpoints_not_uniform: ok"));
    CHECK(contains(r.out, "both_flip_directions: ok"));
    CHECK(contains(r.out, "weight_transfer: ok"));
    CHECK(contains(r.out, "spectators_neutral: ok"));
    const double z = std::pow(1.0 + std::exp(-0.25), 2) * (1.0 + std::exp(-1.0));
    const double work = (std::exp(-0.5) - std::exp(-1.0)) / z;
    CHECK(value_after(r.out, "activation_work: ") == doctest::Approx(work).epsilon(1e-10));
    CHECK(value_after(r.out, "activation_work_unnormalized: ") ==
          doctest::Approx(work * z).epsilon(1e-10));
  }
  SUBCASE("uniform temperatures are globally thermal") {
    const CliResult r = run({"activate", "--betas", "1,1", "--omega", "1"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "passive: yes"));
    CHECK(contains(r.out, "witness: none"));
    CHECK(contains(r.out, "note: globally thermal"));
    CHECK(contains(r.out, "activation_number: none within 5 copies"));
  }
  SUBCASE("two baths activate at three copies") {
    const CliResult r = run({"activate", "--betas", "1,2", "--omega", "1", "--max-copies", "3"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "passive: yes"));
    CHECK_FALSE(contains(r.out, "note: globally thermal"));
    CHECK(contains(r.out, "activation_number: 3"));
  }
  SUBCASE("the copy budget is honored") {
    const CliResult r = run({"activate", "--betas", "1,2", "--omega", "1", "--max-copies", "2"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "activation_number: none within 2 copies"));
  }
  SUBCASE("frequencies are required") {
    CHECK(run({"activate", "--betas", "1,2"}).code == 2);
  }
}

TEST_CASE("sweep subcommand") {
  SUBCASE("grid rows follow the nested loop order") {
    TempFile cfg("tmp_cli_grid.txt",
                 "beta_a = 4,2,1\nbeta_b = 1\nomega_a = 1\nomega_b = 2\n");
    const CliResult r = run({"sweep", "--config", cfg.path});
    CHECK(r.code == 0);
    const std::vector<std::string> rows = lines_of(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "beta_a,beta_b,omega_a,omega_b,E,fock_erg,gauss_erg,passive,gauss_passive,boundary");
    // Column layout: ba,bb,wa,wb,E,fock,gauss,passive,gauss_passive,boundary.
    const double expect_ba[3] = {4.0, 2.0, 1.0};
    const char expect_gp[3] = {'0', '1', '1'};
    const int expect_boundary_sign[3] = {1, 0, -1};
    for (int i = 0; i < 3; ++i) {
      std::vector<std::string> cells;
      std::istringstream row(rows[i + 1]);
      std::string cell;
      while (std::getline(row, cell, ',')) cells.push_back(cell);
      REQUIRE(cells.size() == 10);
      CHECK(std::stod(cells[0]) == expect_ba[i]);
      CHECK(cells[1] == "1");
      CHECK(cells[2] == "1");
      CHECK(cells[3] == "2");
      CHECK(cells[7] == std::string(1, expect_gp[i]));  // fock passivity flag
      CHECK(cells[8] == std::string(1, expect_gp[i]));  // gaussian passivity flag
      const double boundary = std::stod(cells[9]);
      if (expect_boundary_sign[i] > 0) CHECK(boundary > 0.0);
      if (expect_boundary_sign[i] == 0) CHECK(boundary == 0.0);
      if (expect_boundary_sign[i] < 0) CHECK(boundary < 0.0);
      // Active rows extract positive Gaussian work, passive rows none.
      const double gauss_erg = std::stod(cells[6]);
      if (expect_gp[i] == '0') CHECK(gauss_erg > 1e-6);
      else CHECK(std::abs(gauss_erg) < 1e-10);
    }
  }
  SUBCASE("an empty grid prints only the header") {
    TempFile cfg("tmp_cli_empty.txt", "beta_a =\n");
    const CliResult r = run({"sweep", "--config", cfg.path});
    CHECK(r.code == 0);
    CHECK(r.out == "beta_a,beta_b,omega_a,omega_b,E,fock_erg,gauss_erg,passive,gauss_passive,boundary\n");
  }
  SUBCASE("unknown keys are parse errors") {
    TempFile cfg("tmp_cli_bad.txt", "gamma = 1\n");
    const CliResult r = run({"sweep", "--config", cfg.path});
    CHECK(r.code == 1);
    CHECK(contains(r.err, "unknown key 'gamma'"));
  }
  SUBCASE("missing config file exits 1") {
    CHECK(run({"sweep", "--config", "tmp_cli_nope.txt"}).code == 1);
  }
  SUBCASE("the config option is required") {
    CHECK(run({"sweep"}).code == 1);
  }
}

TEST_CASE("top-level dispatch") {
  const CliResult help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(contains(help.out, "fermiwork"));
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
}
