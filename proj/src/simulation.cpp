#include "dualiv/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "dualiv/compensated_sum.hpp"
#include "dualiv/error.hpp"
#include "dualiv/estimators.hpp"
#include "dualiv/normal.hpp"
#include "dualiv/rng.hpp"

namespace dualiv {
namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, what);
}

Metrics nan_metrics() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return Metrics{nan, nan, nan, nan};
}

}  // namespace

void validate(const SimConfig& config) {
  if (config.n < 2) invalid("n must be at least 2");
  if (config.reps < 1) invalid("reps must be at least 1");
  if (!(std::fabs(config.c) < 1.0)) invalid("correlation c must satisfy |c| < 1");
  if (!(config.p_z > 0.0 && config.p_z < 1.0)) invalid("p_z must lie in (0, 1)");
  if (config.design.kind == Design::Kind::ThresholdK && !(config.design.k < 1.0)) {
    invalid("threshold design requires k < 1");
  }
  for (const double v : {config.rho1, config.rho0, config.a1, config.a0, config.design.k,
                         config.complier_shift1, config.complier_shift0}) {
    if (!std::isfinite(v)) invalid("simulation parameters must be finite");
  }
}

Sample generate_sample(const SimConfig& config, std::size_t rep_index) {
  validate(config);
  NormalStream stream(stream_seed(config.seed, rep_index));
  const double lower = config.design.lower_threshold();
  const double c = config.c;
  const double s = std::sqrt(1.0 - c * c);

  std::vector<double> y(config.n);
  std::vector<int> d(config.n), z(config.n), w(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    const bool zi = stream.uniform() < config.p_z;
    const double eps = stream.normal();
    const double u1 = c * eps + s * stream.normal();
    const double u0 = stream.normal();
    const double v = stream.normal();

    const int d1 = eps <= 1.0 ? 1 : 0;
    const int d0 = eps <= lower ? 1 : 0;
    const bool complier = d1 == 1 && d0 == 0;
    const int di = zi ? d1 : d0;
    const double zf = zi ? 1.0 : 0.0;

    const double rho1 = config.rho1 + (complier ? config.complier_shift1 : 0.0);
    const double rho0 = config.rho0 + (complier ? config.complier_shift0 : 0.0);
    const double y1 = config.a1 + rho1 * zf + u1;
    const double y0 = config.a0 + rho0 * zf + u0;

    y[i] = di ? y1 : y0;
    d[i] = di;
    z[i] = zi ? 1 : 0;
    w[i] = v <= static_cast<double>(d1 + d0) ? 1 : 0;
  }
  return Sample::validate(std::move(y), std::move(d), std::move(z), std::move(w));
}

double true_late(const SimConfig& config) {
  const double lower = config.design.lower_threshold();
  const double complier_mass = normal::cdf(1.0) - normal::cdf(lower);
  if (!(complier_mass > 0.0)) {
    std::ostringstream msg;
    msg << "design has no compliers (lower threshold " << lower << ")";
    throw Error(ErrorCode::EmptyComplierSet, msg.str());
  }
  // u0 is independent of eps, so only u1 is selected on.
  const double selection = config.c * normal::truncated_mean(lower, 1.0);
  const double direct = (config.rho1 + config.complier_shift1 - config.rho0 -
                         config.complier_shift0) * config.p_z;
  return (config.a1 - config.a0) + direct + selection;
}

Metrics metrics(std::span<const double> estimates, double truth) {
  if (estimates.empty()) throw Error(ErrorCode::EmptySequence, "no estimates to summarize");
  const double b = static_cast<double>(estimates.size());

  CompensatedSum sum;
  for (const double x : estimates) sum += x;
  const double mean = sum.value() / b;

  CompensatedSum dev2;
  CompensatedSum err2;
  std::vector<double> abs_err;
  abs_err.reserve(estimates.size());
  for (const double x : estimates) {
    dev2 += (x - mean) * (x - mean);
    err2 += (x - truth) * (x - truth);
    abs_err.push_back(std::fabs(x - truth));
  }

  std::sort(abs_err.begin(), abs_err.end());
  const std::size_t mid = abs_err.size() / 2;
  const double median =
      abs_err.size() % 2 == 1 ? abs_err[mid] : 0.5 * (abs_err[mid - 1] + abs_err[mid]);

  Metrics m;
  m.bias = mean - truth;
  m.sd = std::sqrt(dev2.value() / b);
  m.rmse = std::sqrt(err2.value() / b);
  m.mad = median;
  return m;
}

std::vector<ReplicationResult> run_replications(const SimConfig& config, unsigned workers) {
  validate(config);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, config.reps));

  std::vector<ReplicationResult> results(config.reps);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t r = next.fetch_add(1); r < config.reps; r = next.fetch_add(1)) {
      const Sample sample = generate_sample(config, r);
      ReplicationResult out;
      try {
        const CellMoments m = cell_moments(sample);
        const LateComponents fit = late_estimate(m);
        out.theta_zw = fit.late;
        out.theta_z = fit.iv;
        out.rho1 = fit.rho.rho1;
        out.rho0 = fit.rho.rho0;
        out.ok = true;
      } catch (const Error&) {
        out.ok = false;
      }
      results[r] = out;
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  return results;
}

SimReport summarize(const SimConfig& config, std::span<const ReplicationResult> results) {
  SimReport report;
  report.config = config;
  report.theta0 = true_late(config);

  std::vector<double> zw, z, r1, r0;
  for (const ReplicationResult& r : results) {
    if (!r.ok) {
      ++report.failed_reps;
      continue;
    }
    zw.push_back(r.theta_zw);
    z.push_back(r.theta_z);
    r1.push_back(r.rho1);
    r0.push_back(r.rho0);
  }
  if (zw.empty()) {
    report.theta_zw = report.theta_z = report.rho1_hat = report.rho0_hat = nan_metrics();
    return report;
  }
  report.theta_zw = metrics(zw, report.theta0);
  report.theta_z = metrics(z, report.theta0);
  // The direct-effect estimators target the always-taker / never-taker effects.
  report.rho1_hat = metrics(r1, config.rho1);
  report.rho0_hat = metrics(r0, config.rho0);
  return report;
}

SimReport run_monte_carlo(const SimConfig& config, unsigned workers) {
  const auto results = run_replications(config, workers);
  return summarize(config, results);
}

}  // namespace dualiv
