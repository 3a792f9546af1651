#include "dualiv/inference.hpp"

#include <cmath>
#include <sstream>

#include "dualiv/compensated_sum.hpp"
#include "dualiv/error.hpp"
#include "dualiv/normal.hpp"

namespace dualiv {
namespace {

// Linearization of mean(a) / mean(b) at observation i.
inline double ratio_influence(double a_i, double b_i, double mean_a, double mean_b) {
  return (a_i - mean_a) / mean_b - mean_a * (b_i - mean_b) / (mean_b * mean_b);
}

// Population-style means of the cell products, E[X * 1{Z=z, W=w}].
struct CellExpectations {
  double p[2][2];         // E[1{z,w}]
  double d[2][2];         // E[D 1{z,w}]
  double y[2][2];         // E[Y 1{z,w}]
  double yd[2][2];        // E[Y D 1{z,w}]
  double yu[2][2];        // E[Y (1-D) 1{z,w}]

  explicit CellExpectations(const CellMoments& m) {
    for (int z = 0; z < 2; ++z) {
      for (int w = 0; w < 2; ++w) {
        p[z][w] = m.count[z][w] / m.n;
        d[z][w] = m.treated[z][w] / m.n;
        y[z][w] = m.sum_y[z][w] / m.n;
        yd[z][w] = m.sum_y_treated[z][w] / m.n;
        yu[z][w] = m.sum_y_untreated[z][w] / m.n;
      }
    }
  }
};

Interval symmetric_interval(double center, double se, double crit) {
  return Interval{center - crit * se, center + crit * se};
}

}  // namespace

InfluenceSet influence_set(const Sample& sample, const LateComponents& fit,
                           double relevance_tol) {
  const CellMoments m = cell_moments(sample);
  const CellExpectations e(m);
  const int c = conditioning_value(fit.condition_on);

  const SubgroupProbs& p1 = fit.probs_w1;
  const SubgroupProbs& p0 = fit.probs_w0;
  const SubgroupProbs& pc = fit.probs(c);
  const double at_cross = fit.denominators.at_cross;
  const double nt_cross = fit.denominators.nt_cross;

  // Product-moment pieces of the conditional IV; "W" is the indicator 1{W=c}.
  const double e_w = e.p[0][c] + e.p[1][c];
  const double e_zw = e.p[1][c];
  const double e_yzw = e.y[1][c];
  const double e_yw = e.y[0][c] + e.y[1][c];
  const double e_dzw = e.d[1][c];
  const double e_dw = e.d[0][c] + e.d[1][c];
  const double iv1_den = e_dzw * e_w - e_dw * e_zw;

  // Pieces of the unconditional Wald ratio.
  const double e_z = e.p[1][0] + e.p[1][1];
  const double e_zt = e.p[0][0] + e.p[0][1];
  const double e_yz = e.y[1][0] + e.y[1][1];
  const double e_yzt = e.y[0][0] + e.y[0][1];
  const double e_dz = e.d[1][0] + e.d[1][1];
  const double e_dzt = e.d[0][0] + e.d[0][1];
  const double iv_den = e_dz / e_z - e_dzt / e_zt;

  const auto require = [relevance_tol](const char* component, double magnitude) {
    if (!(std::fabs(magnitude) > relevance_tol)) {
      throw weak_relevance_error(component, std::fabs(magnitude), relevance_tol);
    }
  };
  require("iv", iv_den);
  require(c == 1 ? "iv1" : "iv0", pc.p_cp);
  require("at", at_cross);
  require("nt", nt_cross);

  const double z_bar = fit.z_bar;
  const double rho1 = fit.rho.rho1;
  const double rho0 = fit.rho.rho0;

  const std::size_t n = sample.size();
  InfluenceSet out;
  out.phi_iv1.resize(n);
  out.phi_w1.resize(n);
  out.phi_w0.resize(n);
  out.phi_rho1.resize(n);
  out.phi_rho0.resize(n);
  out.phi_late.resize(n);
  out.phi_iv.resize(n);

  const auto ys = sample.y();
  const auto ds = sample.d();
  const auto zs = sample.z();
  const auto ws = sample.w();

  for (std::size_t i = 0; i < n; ++i) {
    const double y = ys[i];
    const double d = ds[i];
    const double z = zs[i];
    const double zt = 1.0 - z;

    // cell[zz][ww] = 1{Z_i = zz, W_i = ww}
    double cell[2][2];
    for (int ww = 0; ww < 2; ++ww) {
      const double in_w = ws[i] == ww ? 1.0 : 0.0;
      cell[1][ww] = z * in_w;
      cell[0][ww] = zt * in_w;
    }

    double phi_at[2], phi_nt[2], phi_cp[2], phi_r1[2], phi_r0[2];
    for (int w = 0; w < 2; ++w) {
      const double treated_z0 = ratio_influence(d * cell[0][w], cell[0][w], e.d[0][w], e.p[0][w]);
      const double treated_z1 = ratio_influence(d * cell[1][w], cell[1][w], e.d[1][w], e.p[1][w]);
      phi_at[w] = treated_z0;
      phi_nt[w] = ratio_influence((1.0 - d) * cell[1][w], cell[1][w], e.p[1][w] - e.d[1][w],
                                  e.p[1][w]);
      phi_cp[w] = treated_z1 - treated_z0;
      phi_r1[w] = ratio_influence(y * d * cell[1][w], cell[1][w], e.yd[1][w], e.p[1][w]) -
                  ratio_influence(y * d * cell[0][w], cell[0][w], e.yd[0][w], e.p[0][w]);
      phi_r0[w] =
          ratio_influence(y * (1.0 - d) * cell[1][w], cell[1][w], e.yu[1][w], e.p[1][w]) -
          ratio_influence(y * (1.0 - d) * cell[0][w], cell[0][w], e.yu[0][w], e.p[0][w]);
    }

    // Conditional IV.
    const double wc = cell[0][c] + cell[1][c];
    const double zw = cell[1][c];
    const double phi_num = e_yzw * (wc - e_w) + e_w * (y * zw - e_yzw) -
                           e_yw * (zw - e_zw) - e_zw * (y * wc - e_yw);
    const double phi_den = e_dzw * (wc - e_w) + e_w * (d * zw - e_dzw) -
                           e_dw * (zw - e_zw) - e_zw * (d * wc - e_dw);
    const double phi_iv1 = (phi_num - fit.iv1 * phi_den) / iv1_den;

    // Weights.
    const double phi_z = z - z_bar;
    const double phi_w1 = phi_at[c] / pc.p_cp - pc.p_at * phi_cp[c] / (pc.p_cp * pc.p_cp) - phi_z;
    const double phi_w0 = phi_nt[c] / pc.p_cp - pc.p_nt * phi_cp[c] / (pc.p_cp * pc.p_cp) + phi_z;

    // Direct effects.
    const double phi_d1 = p1.p_at * phi_cp[0] + p0.p_cp * phi_at[1] - p0.p_at * phi_cp[1] -
                          p1.p_cp * phi_at[0];
    const double phi_n1 = fit.r1[1] * phi_cp[0] + p0.p_cp * phi_r1[1] - fit.r1[0] * phi_cp[1] -
                          p1.p_cp * phi_r1[0];
    const double phi_rho1 = (phi_n1 - rho1 * phi_d1) / at_cross;

    const double phi_d0 = p1.p_nt * phi_cp[0] + p0.p_cp * phi_nt[1] - p0.p_nt * phi_cp[1] -
                          p1.p_cp * phi_nt[0];
    const double phi_n0 = fit.r0[1] * phi_cp[0] + p0.p_cp * phi_r0[1] - fit.r0[0] * phi_cp[1] -
                          p1.p_cp * phi_r0[0];
    const double phi_rho0 = (phi_n0 - rho0 * phi_d0) / nt_cross;

    // Unconditional Wald ratio.
    const double phi_y1 = ratio_influence(y * z, z, e_yz, e_z);
    const double phi_y0 = ratio_influence(y * zt, zt, e_yzt, e_zt);
    const double phi_dd1 = ratio_influence(d * z, z, e_dz, e_z);
    const double phi_dd0 = ratio_influence(d * zt, zt, e_dzt, e_zt);

    out.phi_iv1[i] = phi_iv1;
    out.phi_w1[i] = phi_w1;
    out.phi_w0[i] = phi_w0;
    out.phi_rho1[i] = phi_rho1;
    out.phi_rho0[i] = phi_rho0;
    out.phi_late[i] =
        phi_iv1 - rho1 * phi_w1 - fit.w1 * phi_rho1 - rho0 * phi_w0 - fit.w0 * phi_rho0;
    out.phi_iv[i] = (phi_y1 - phi_y0 - fit.iv * (phi_dd1 - phi_dd0)) / iv_den;
  }
  return out;
}

double influence_standard_error(std::span<const double> phi) {
  if (phi.empty()) throw Error(ErrorCode::EmptySequence, "empty influence sequence");
  const double n = static_cast<double>(phi.size());
  CompensatedSum sum;
  for (const double v : phi) sum += v;
  const double mean = sum.value() / n;
  CompensatedSum squares;
  for (const double v : phi) squares += (v - mean) * (v - mean);
  return std::sqrt(squares.value() / n) / std::sqrt(n);
}

InferenceResult standard_errors(const InfluenceSet& influences, const LateComponents& fit,
                                double level) {
  if (!(level > 0.0 && level < 1.0)) {
    std::ostringstream msg;
    msg << "confidence level must lie in (0, 1), got " << level;
    throw Error(ErrorCode::InvalidLevel, msg.str());
  }
  const double crit = normal::critical_value(level);
  InferenceResult r;
  r.level = level;
  r.se_late = influence_standard_error(influences.phi_late);
  r.se_rho1 = influence_standard_error(influences.phi_rho1);
  r.se_rho0 = influence_standard_error(influences.phi_rho0);
  r.se_iv1 = influence_standard_error(influences.phi_iv1);
  r.se_iv = influence_standard_error(influences.phi_iv);
  r.ci_late = symmetric_interval(fit.late, r.se_late, crit);
  r.ci_rho1 = symmetric_interval(fit.rho.rho1, r.se_rho1, crit);
  r.ci_rho0 = symmetric_interval(fit.rho.rho0, r.se_rho0, crit);
  r.ci_iv1 = symmetric_interval(fit.iv1, r.se_iv1, crit);
  r.ci_iv = symmetric_interval(fit.iv, r.se_iv, crit);
  return r;
}

}  // namespace dualiv
