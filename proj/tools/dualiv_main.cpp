// dualiv: LATE estimation with two imperfect instruments.
//
//   dualiv estimate --input data.csv [--level 0.95] [--k1 0] [--k0 0] ...
//   dualiv simulate [--table table1] [--n 1000] [--rho 1] [--reps 5000] ...
//   dualiv theta0   [--design threshold --k -0.25] ...

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dualiv/cli.hpp"

namespace {

struct DgpFlags {
  std::size_t n = 1000;
  std::size_t reps = 5000;
  std::optional<double> rho;
  std::optional<double> rho1;
  std::optional<double> rho0;
  double a1 = 1.0;
  double a0 = 0.0;
  double c = 0.5;
  double p_z = 0.5;
  std::string design = "baseline";
  double k = 0.0;
  std::uint64_t seed = dualiv::SimConfig{}.seed;
};

void add_dgp_flags(CLI::App* cmd, DgpFlags& f, bool with_sampling) {
  if (with_sampling) {
    cmd->add_option("--n", f.n, "Sample size per replication")->capture_default_str();
    cmd->add_option("--reps", f.reps, "Number of replications")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str();
  }
  cmd->add_option("--rho", f.rho, "Direct effect for both treatment arms (rho1 = rho0)");
  cmd->add_option("--rho1", f.rho1, "Direct effect on the treated outcome");
  cmd->add_option("--rho0", f.rho0, "Direct effect on the untreated outcome");
  cmd->add_option("--a1", f.a1, "Treated intercept")->capture_default_str();
  cmd->add_option("--a0", f.a0, "Untreated intercept")->capture_default_str();
  cmd->add_option("--c", f.c, "corr(eps, u1)")->capture_default_str();
  cmd->add_option("--pz", f.p_z, "P(Z = 1)")->capture_default_str();
  cmd->add_option("--design", f.design, "baseline | threshold")
      ->check(CLI::IsMember({"baseline", "threshold"}))
      ->capture_default_str();
  cmd->add_option("--k", f.k, "Lower threshold of the threshold design")->capture_default_str();
}

dualiv::SimConfig to_config(const DgpFlags& f) {
  dualiv::SimConfig c;
  c.n = f.n;
  c.reps = f.reps;
  c.rho1 = f.rho1.value_or(f.rho.value_or(0.0));
  c.rho0 = f.rho0.value_or(f.rho.value_or(0.0));
  c.a1 = f.a1;
  c.a0 = f.a0;
  c.c = f.c;
  c.p_z = f.p_z;
  c.design = f.design == "threshold" ? dualiv::Design::threshold(f.k) : dualiv::Design::baseline();
  c.seed = f.seed;
  return c;
}

int emit(const dualiv::CommandResult& r) {
  std::cout << r.output;
  if (!r.message.empty()) {
    std::cerr << r.message;
    if (r.message.back() != '\n') std::cerr << '\n';
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LATE estimation with two imperfect instruments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DUALIV_VERSION);

  std::string format = "json";

  dualiv::EstimateRequest est;
  std::string condition_on = "w1";
  auto* estimate = app.add_subcommand("estimate", "Estimate LATE, direct effects and bounds from a CSV");
  estimate->add_option("--input", est.input_path, "CSV with columns y,d,z,w")->required();
  estimate->add_option("--level", est.level, "Confidence level")->capture_default_str();
  estimate->add_option("--k1", est.k1, "Cap on complier vs always-taker direct effect gap")
      ->capture_default_str();
  estimate->add_option("--k0", est.k0, "Cap on complier vs never-taker direct effect gap")
      ->capture_default_str();
  estimate->add_option("--condition-on", condition_on, "w1 | w0")
      ->check(CLI::IsMember({"w1", "w0"}))
      ->capture_default_str();
  estimate->add_option("--relevance-tol", est.relevance_tol, "Relevance threshold")
      ->capture_default_str();
  estimate->add_option("--format", format, "json | csv | markdown")->capture_default_str();

  DgpFlags sim_flags;
  std::string table;
  unsigned workers = 0;
  auto* simulate = app.add_subcommand("simulate", "Run the Monte Carlo designs");
  add_dgp_flags(simulate, sim_flags, true);
  simulate->add_option("--table", table, "Preset grid: table1 | table2 | table3 | table4");
  simulate->add_option("--workers", workers, "Worker threads (0 = all cores)")
      ->capture_default_str();
  simulate->add_option("--format", format, "json | csv | markdown")->capture_default_str();

  DgpFlags truth_flags;
  auto* theta0 = app.add_subcommand("theta0", "Print the true LATE of a simulation design");
  add_dgp_flags(theta0, truth_flags, false);
  theta0->add_option("--format", format, "json | csv | markdown")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dualiv::exit_status(dualiv::ErrorCategory::Config);
  }

  try {
    const dualiv::OutputFormat fmt = dualiv::parse_output_format(format);
    if (*estimate) {
      est.output_format = fmt;
      est.condition_on = dualiv::parse_condition_on(condition_on);
      return emit(dualiv::run_estimate(est));
    }
    if (*simulate) {
      dualiv::SimulateRequest req;
      req.config = to_config(sim_flags);
      if (!table.empty()) req.table = dualiv::parse_table_id(table);
      req.workers = workers;
      req.output_format = fmt;
      return emit(dualiv::run_simulate(req));
    }
    return emit(dualiv::run_theta0(to_config(truth_flags), fmt));
  } catch (const dualiv::Error& e) {
    std::cout << dualiv::error_json(e);
    std::cerr << e.what() << '\n';
    return dualiv::exit_status(e.category());
  }
}
