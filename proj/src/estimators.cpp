#include "dualiv/estimators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dualiv/compensated_sum.hpp"
#include "dualiv/error.hpp"

namespace dualiv {
namespace {

void require_binary(int v, const char* what) {
  if (v != 0 && v != 1) {
    throw std::invalid_argument(std::string(what) + " must be 0 or 1");
  }
}

double cell_mean(const std::array<std::array<double, 2>, 2>& sums, const CellMoments& m, int z,
                 int w) {
  return sums[z][w] / m.count[z][w];
}

Error weak_share_error(int w, double p_cp, double tol) {
  std::ostringstream msg;
  msg << "complier share given W=" << w << " is " << p_cp << " (threshold " << tol << ")";
  ErrorDetail detail;
  detail.component = "weights";
  detail.w = w;
  return Error(ErrorCode::WeakComplierShare, msg.str(), std::move(detail));
}

}  // namespace

void CellMoments::require_cell(int z, int w) const {
  if (count[z][w] == 0.0) throw empty_cell_error(z, w);
}

CellMoments cell_moments(const Sample& sample) {
  std::array<std::array<std::size_t, 2>, 2> count{};
  std::array<std::array<std::size_t, 2>, 2> treated{};
  std::array<std::array<CompensatedSum, 2>, 2> sum_y{};
  std::array<std::array<CompensatedSum, 2>, 2> sum_yd{};
  std::array<std::array<CompensatedSum, 2>, 2> sum_yu{};

  const auto y = sample.y();
  const auto d = sample.d();
  const auto z = sample.z();
  const auto w = sample.w();
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const int zi = z[i];
    const int wi = w[i];
    ++count[zi][wi];
    sum_y[zi][wi] += y[i];
    if (d[i]) {
      ++treated[zi][wi];
      sum_yd[zi][wi] += y[i];
    } else {
      sum_yu[zi][wi] += y[i];
    }
  }

  CellMoments m;
  for (int zi = 0; zi < 2; ++zi) {
    for (int wi = 0; wi < 2; ++wi) {
      m.count[zi][wi] = static_cast<double>(count[zi][wi]);
      m.treated[zi][wi] = static_cast<double>(treated[zi][wi]);
      m.sum_y[zi][wi] = sum_y[zi][wi].value();
      m.sum_y_treated[zi][wi] = sum_yd[zi][wi].value();
      m.sum_y_untreated[zi][wi] = sum_yu[zi][wi].value();
    }
  }
  m.n = static_cast<double>(sample.size());
  return m;
}

SubgroupProbs subgroup_probs(const CellMoments& m, int w) {
  require_binary(w, "w");
  m.require_cell(0, w);
  m.require_cell(1, w);
  const double treated_z1 = cell_mean(m.treated, m, 1, w);
  const double treated_z0 = cell_mean(m.treated, m, 0, w);
  SubgroupProbs p;
  p.w = w;
  p.p_at = treated_z0;
  p.p_nt = (m.count[1][w] - m.treated[1][w]) / m.count[1][w];
  p.p_cp = treated_z1 - treated_z0;
  return p;
}

SubgroupProbs subgroup_probs(const Sample& sample, int w) {
  return subgroup_probs(cell_moments(sample), w);
}

double iv_estimand(const CellMoments& m, double relevance_tol) {
  const double n1 = m.count[1][0] + m.count[1][1];
  const double n0 = m.count[0][0] + m.count[0][1];
  if (n0 == 0.0) throw empty_cell_error(0, std::nullopt, "iv");
  if (n1 == 0.0) throw empty_cell_error(1, std::nullopt, "iv");
  const double y1 = (m.sum_y[1][0] + m.sum_y[1][1]) / n1;
  const double y0 = (m.sum_y[0][0] + m.sum_y[0][1]) / n0;
  const double d1 = (m.treated[1][0] + m.treated[1][1]) / n1;
  const double d0 = (m.treated[0][0] + m.treated[0][1]) / n0;
  const double contrast = d1 - d0;
  if (!(std::fabs(contrast) > relevance_tol)) {
    throw weak_relevance_error("iv", std::fabs(contrast), relevance_tol);
  }
  return (y1 - y0) / contrast;
}

double iv_estimand(const Sample& sample, double relevance_tol) {
  return iv_estimand(cell_moments(sample), relevance_tol);
}

double conditional_iv_estimand(const CellMoments& m, int w, double relevance_tol) {
  require_binary(w, "w");
  const char* component = w == 1 ? "iv1" : "iv0";
  if (m.count[0][w] == 0.0) throw empty_cell_error(0, w, component);
  if (m.count[1][w] == 0.0) throw empty_cell_error(1, w, component);

  const double contrast = cell_mean(m.treated, m, 1, w) - cell_mean(m.treated, m, 0, w);
  if (!(std::fabs(contrast) > relevance_tol)) {
    throw weak_relevance_error(component, std::fabs(contrast), relevance_tol);
  }

  // (sum YZW * sum W - sum YW * sum ZW) / (sum DZW * sum W - sum DW * sum ZW)
  const double sum_w = m.count[0][w] + m.count[1][w];
  const double sum_zw = m.count[1][w];
  const double sum_yzw = m.sum_y[1][w];
  const double sum_yw = m.sum_y[0][w] + m.sum_y[1][w];
  const double sum_dzw = m.treated[1][w];
  const double sum_dw = m.treated[0][w] + m.treated[1][w];
  return (sum_yzw * sum_w - sum_yw * sum_zw) / (sum_dzw * sum_w - sum_dw * sum_zw);
}

double iv1_estimand(const Sample& sample, double relevance_tol) {
  return conditional_iv_estimand(cell_moments(sample), 1, relevance_tol);
}

double r_moment(const CellMoments& m, int d, int w) {
  require_binary(d, "d");
  require_binary(w, "w");
  m.require_cell(0, w);
  m.require_cell(1, w);
  const auto& sums = d == 1 ? m.sum_y_treated : m.sum_y_untreated;
  return cell_mean(sums, m, 1, w) - cell_mean(sums, m, 0, w);
}

double r_moment(const Sample& sample, int d, int w) {
  return r_moment(cell_moments(sample), d, w);
}

DirectEffects direct_effects(const CellMoments& m, double relevance_tol) {
  const SubgroupProbs p1 = subgroup_probs(m, 1);
  const SubgroupProbs p0 = subgroup_probs(m, 0);

  const double at_cross = p1.p_at * p0.p_cp - p0.p_at * p1.p_cp;
  if (!(std::fabs(at_cross) > relevance_tol)) {
    throw weak_relevance_error("at", std::fabs(at_cross), relevance_tol);
  }
  const double nt_cross = p1.p_nt * p0.p_cp - p0.p_nt * p1.p_cp;
  if (!(std::fabs(nt_cross) > relevance_tol)) {
    throw weak_relevance_error("nt", std::fabs(nt_cross), relevance_tol);
  }

  DirectEffects rho;
  rho.rho1 = (r_moment(m, 1, 1) * p0.p_cp - r_moment(m, 1, 0) * p1.p_cp) / at_cross;
  rho.rho0 = (r_moment(m, 0, 1) * p0.p_cp - r_moment(m, 0, 0) * p1.p_cp) / nt_cross;
  return rho;
}

DirectEffects direct_effects(const Sample& sample, double relevance_tol) {
  return direct_effects(cell_moments(sample), relevance_tol);
}

LateWeights late_weights(const CellMoments& m, const EstimatorOptions& options) {
  const int c = conditioning_value(options.condition_on);
  const SubgroupProbs p = subgroup_probs(m, c);
  if (!(std::fabs(p.p_cp) > options.relevance_tol)) {
    throw weak_share_error(c, p.p_cp, options.relevance_tol);
  }
  const double z_bar = (m.count[1][0] + m.count[1][1]) / m.n;
  return LateWeights{p.p_at / p.p_cp + 1.0 - z_bar, p.p_nt / p.p_cp + z_bar};
}

LateWeights late_weights(const Sample& sample, const EstimatorOptions& options) {
  return late_weights(cell_moments(sample), options);
}

LateComponents late_estimate(const CellMoments& m, const EstimatorOptions& options) {
  const int c = conditioning_value(options.condition_on);
  LateComponents fit;
  fit.condition_on = options.condition_on;
  fit.n = static_cast<std::size_t>(m.n);
  fit.z_bar = (m.count[1][0] + m.count[1][1]) / m.n;

  try {
    fit.probs_w1 = subgroup_probs(m, 1);
    fit.probs_w0 = subgroup_probs(m, 0);
  } catch (const Error& e) {
    throw e.with_component("subgroup_probs");
  }
  for (int w = 0; w < 2; ++w) {
    fit.r1[w] = r_moment(m, 1, w);
    fit.r0[w] = r_moment(m, 0, w);
  }
  const auto& p1 = fit.probs_w1;
  const auto& p0 = fit.probs_w0;
  fit.denominators.iv_cond = fit.probs(c).p_cp;
  fit.denominators.at_cross = p1.p_at * p0.p_cp - p0.p_at * p1.p_cp;
  fit.denominators.nt_cross = p1.p_nt * p0.p_cp - p0.p_nt * p1.p_cp;

  const double n1 = m.count[1][0] + m.count[1][1];
  const double n0 = m.count[0][0] + m.count[0][1];
  fit.denominators.iv =
      (m.treated[1][0] + m.treated[1][1]) / n1 - (m.treated[0][0] + m.treated[0][1]) / n0;

  fit.iv = iv_estimand(m, options.relevance_tol);
  fit.iv1 = conditional_iv_estimand(m, c, options.relevance_tol);
  try {
    fit.rho = direct_effects(m, options.relevance_tol);
  } catch (const Error& e) {
    throw e.with_component("direct_effects");
  }
  const LateWeights weights = late_weights(m, options);
  fit.w1 = weights.w1;
  fit.w0 = weights.w0;
  fit.late = fit.iv1 - fit.rho.rho1 * fit.w1 - fit.rho.rho0 * fit.w0;
  return fit;
}

LateComponents late_estimate(const Sample& sample, const EstimatorOptions& options) {
  return late_estimate(cell_moments(sample), options);
}

ComplierMeans complier_means(const LateComponents& fit, double relevance_tol) {
  const int c = conditioning_value(fit.condition_on);
  const SubgroupProbs& p = fit.probs(c);
  if (!(std::fabs(p.p_cp) > relevance_tol)) throw weak_share_error(c, p.p_cp, relevance_tol);
  ComplierMeans out;
  out.treated = (fit.r1[c] - fit.rho.rho1 * p.p_at) / p.p_cp;
  out.untreated = -(fit.r0[c] - fit.rho.rho0 * p.p_nt) / p.p_cp;
  return out;
}

}  // namespace dualiv
