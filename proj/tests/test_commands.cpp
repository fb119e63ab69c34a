#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "nvreg/commands.hpp"
#include "oracles.hpp"

using namespace nvreg;
using commands::CommandResult;

namespace {

std::string csv(const CommandResult& r) {
  std::ostringstream o;
  output::write_csv(o, r.report);
  return o.str();
}

const output::ResultTable& table(const CommandResult& r, const std::string& name) {
  for (const auto& t : r.report.tables)
    if (t.name == name) return t;
  throw std::runtime_error("no table " + name);
}

int column(const output::ResultTable& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return static_cast<int>(i);
  throw std::runtime_error("no column " + name);
}

double number(const output::Cell& c) { return std::get<double>(c); }

acceptance::BesselOracle series_oracle() { return {oracle::series_j, oracle::series_y}; }

// Small sweep: two columns, three spacings.
config::Config small_sweep() {
  return config::parse_config("[chain]\ncolumns = 40:2.5, 50:3\nratios = 2.11, 2.21, 2.31\n");
}

}  // namespace

TEST(DiskSolve, DefaultTable) {
  const auto r = commands::disk_solve(config::default_config());
  EXPECT_EQ(r.exit_code, commands::kOk);
  const auto& t = table(r, "disk_solve");
  ASSERT_EQ(t.rows.size(), 14u);
  const int h = column(t, "h_um"), pub = column(t, "h_published_um"), status = column(t, "status");
  bool found = false;
  for (const auto& row : t.rows) {
    EXPECT_EQ(std::get<std::string>(row[status]), "ok");
    const double computed = number(row[h]), published = number(row[pub]);
    EXPECT_LE(std::abs(computed - published), std::max(0.05 * published, 0.005));
    if (std::get<long long>(row[0]) == 40 && number(row[1]) == 3.3) {
      found = true;
      EXPECT_NEAR(computed, 0.128, 0.005);
    }
  }
  EXPECT_TRUE(found);
}

TEST(DiskSolve, NoSolutionRowIsReportedNotThrown) {
  // n_c = 1.2 traps no m = 50 mode in a 2 um disk
  const auto r = commands::disk_solve(config::parse_config("[disk]\nrefractive_index = 1.2\nrows = 50:2.0, 40:4\n"));
  const auto& t = table(r, "disk_solve");
  ASSERT_EQ(t.rows.size(), 2u);
  const int status = column(t, "status"), h = column(t, "h_um");
  EXPECT_EQ(std::get<std::string>(t.rows[0][status]), "no solution");
  EXPECT_TRUE(std::holds_alternative<std::monostate>(t.rows[0][h]));
  EXPECT_NE(csv(r).find("50,2,,,,,,,no solution"), std::string::npos);
}

TEST(Output, CsvIsDeterministic) {
  const auto cfg = small_sweep();
  const std::string a = csv(commands::coupling_sweep(cfg));
  const std::string b = csv(commands::coupling_sweep(cfg, {std::nullopt, 2}));
  EXPECT_EQ(a, b);
  EXPECT_EQ(csv(commands::disk_solve(cfg)), csv(commands::disk_solve(cfg)));
}

TEST(Output, CsvCarriesRerunnableConfig) {
  const auto cfg = small_sweep();
  const std::string text = csv(commands::disk_solve(cfg));
  std::istringstream in(text);
  std::string line, ini;
  bool inside = false;
  while (std::getline(in, line)) {
    if (line == "# config:") {
      inside = true;
      continue;
    }
    if (inside && line.rfind("#   ", 0) == 0) ini += line.substr(4) + "\n";
    else if (inside) break;
  }
  EXPECT_EQ(ini, config::to_ini(cfg));
  EXPECT_EQ(config::to_ini(config::parse_config(ini)), ini);
}

TEST(Output, JsonMirrorsCsv) {
  const auto r = commands::coupling_sweep(small_sweep());
  const auto j = output::to_json(r.report);
  EXPECT_EQ(j["command"], "coupling-sweep");
  ASSERT_EQ(j["tables"].size(), r.report.tables.size());
  for (std::size_t t = 0; t < r.report.tables.size(); ++t) {
    const auto& table = r.report.tables[t];
    const auto& jt = j["tables"][t];
    EXPECT_EQ(jt["name"], table.name);
    ASSERT_EQ(jt["rows"].size(), table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        const auto& cell = table.rows[i][c];
        const auto& jc = jt["rows"][i][c];
        if (std::holds_alternative<double>(cell)) EXPECT_EQ(jc.get<double>(), std::get<double>(cell));
        else if (std::holds_alternative<std::monostate>(cell)) EXPECT_TRUE(jc.is_null());
      }
    }
  }
}

TEST(CouplingSweep, TableUnitIsMilliElectronVolt) {
  const auto r = commands::coupling_sweep(small_sweep());
  const auto& t = table(r, "coupling_sweep");
  const int ev = column(t, "kappa_eV"), tab = column(t, "kappa_table"), rad = column(t, "kappa_rad_s");
  for (const auto& row : t.rows) {
    EXPECT_NEAR(number(row[tab]), number(row[ev]) * 1e3, 1e-12 * number(row[tab]));
    EXPECT_NEAR(number(row[ev]), number(row[rad]) * 6.582119569e-16, 1e-8 * number(row[ev]));
  }
  EXPECT_EQ(table(r, "log_linear_fit").rows.size(), 2u);
}

TEST(Dispersion, BandAndRim) {
  const auto cfg = config::parse_config("[chain]\nbloch_points = 9\n");
  const auto r = commands::dispersion(cfg);
  EXPECT_EQ(r.exit_code, commands::kOk);
  const auto& band = table(r, "dispersion");
  ASSERT_EQ(band.rows.size(), 9u);
  const int w = column(band, "Omega_rad_s");
  // cos(KL) band: symmetric about K = 0, extremal at the zone centre
  EXPECT_NEAR(number(band.rows[0][w]), number(band.rows[8][w]), 1e-6 * number(band.rows[4][w]));
  EXPECT_NE(number(band.rows[4][w]), number(band.rows[0][w]));
  EXPECT_EQ(table(r, "rim_field").rows.size(), 720u);
}

TEST(GateSim, DefaultPasses) {
  const auto r = commands::gate_sim(config::default_config());
  EXPECT_EQ(r.exit_code, commands::kOk);
  const auto& t = table(r, "trajectory");
  EXPECT_EQ(t.rows.size(), 401u);
  const auto& truth = table(r, "truth_table");
  ASSERT_EQ(truth.rows.size(), 4u);
  for (const auto& row : truth.rows) EXPECT_EQ(std::get<std::string>(row.back()), "ok");
}

TEST(GateSim, SmallDetuningLeaksAndFails) {
  const auto base = commands::gate_sim(config::default_config());
  const auto weak = commands::gate_sim(config::parse_config("[gate]\ndelta_max = 1e11\n"));
  EXPECT_EQ(weak.exit_code, commands::kNumerical);
  const auto& a = table(base, "truth_table");
  const auto& b = table(weak, "truth_table");
  const int leak = column(a, "leakage");
  // |00> leaks through both emitters; (g/delta)^2 scaling predicts x100
  const double ratio = number(b.rows[0][leak]) / number(a.rows[0][leak]);
  EXPECT_GT(ratio, 30.0);
  EXPECT_LT(ratio, 300.0);
}

TEST(GateSim, ToleranceOverride) {
  const auto r = commands::gate_sim(config::default_config(), {1e-6, 1});
  EXPECT_EQ(r.exit_code, commands::kNumerical);
}

TEST(GateSim, UnpopulatedPhasesAreGaps) {
  const auto r = commands::gate_sim(config::parse_config("[gate]\ninitial = 0, 0, 0, 1\n"));
  const auto& t = table(r, "trajectory");
  const int p00 = column(t, "phase00"), p11 = column(t, "phase11");
  for (const auto& row : t.rows) {
    EXPECT_TRUE(std::holds_alternative<std::monostate>(row[p00]));
    EXPECT_NEAR(number(row[p11]), 0.0, 1e-9);
  }
  EXPECT_NE(csv(r).find(",,,"), std::string::npos);
}

TEST(Reproduce, PerturbedIndexFailsThicknessCriterion) {
  acceptance::Runner runner(config::parse_config("[disk]\nrefractive_index = 2.5\n"), series_oracle());
  const auto r = runner.run(1);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.line().rfind("FAIL criterion 1 (", 0), 0u);
}

TEST(Reproduce, DefaultThicknessCriterionPasses) {
  acceptance::Runner runner(config::default_config(), series_oracle());
  EXPECT_TRUE(runner.run(1).passed);
}
