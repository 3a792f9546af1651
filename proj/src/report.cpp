#include <cmath>
#include <cstdio>
#include <sstream>

#include "dualiv/error.hpp"
#include "dualiv/io.hpp"
#include "json.hpp"

namespace dualiv {
namespace {

using nlohmann::json;

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json interval(const Interval& ci) { return json::array({ci.lower, ci.upper}); }

json probs_json(const SubgroupProbs& p) {
  return json{{"at", p.p_at}, {"nt", p.p_nt}, {"cp", p.p_cp}};
}

const char* condition_name(ConditionOn c) { return c == ConditionOn::W1 ? "w1" : "w0"; }

json estimate_json(const EstimateReport& r) {
  const LateComponents& f = r.fit;
  json estimates{
      {"late", f.late},
      {"iv", f.iv},
      {"iv1", f.iv1},
      {"rho1", f.rho.rho1},
      {"rho0", f.rho.rho0},
      {"w1", f.w1},
      {"w0", f.w0},
      {"z_bar", f.z_bar},
      {"r1", {{"w0", f.r1[0]}, {"w1", f.r1[1]}}},
      {"r0", {{"w0", f.r0[0]}, {"w1", f.r0[1]}}},
      {"complier_means", {{"treated", r.complier.treated}, {"untreated", r.complier.untreated}}},
      {"condition_on", condition_name(f.condition_on)},
  };
  const InferenceResult& inf = r.inference;
  json inference{
      {"level", inf.level},     {"se_late", inf.se_late},         {"se_rho1", inf.se_rho1},
      {"se_rho0", inf.se_rho0}, {"se_iv1", inf.se_iv1},           {"se_iv", inf.se_iv},
      {"ci_late", interval(inf.ci_late)}, {"ci_rho1", interval(inf.ci_rho1)},
      {"ci_rho0", interval(inf.ci_rho0)}, {"ci_iv1", interval(inf.ci_iv1)},
      {"ci_iv", interval(inf.ci_iv)},
  };
  json bounds{
      {"k1", r.caps.k1},         {"k0", r.caps.k0},         {"lower", r.bounds.lower},
      {"upper", r.bounds.upper}, {"center", r.bounds.center}, {"half_width", r.bounds.half_width},
  };
  json cells = json::array();
  for (int z = 0; z < 2; ++z) {
    for (int w = 0; w < 2; ++w) {
      cells.push_back({{"z", z}, {"w", w}, {"count", r.counts.count[z][w]},
                       {"treated", r.counts.treated_count[z][w]}});
    }
  }
  json diagnostics{
      {"n", f.n},
      {"cell_counts", cells},
      {"subgroup_probs", {{"w0", probs_json(f.probs_w0)}, {"w1", probs_json(f.probs_w1)}}},
      {"denominators",
       {{"iv", f.denominators.iv},
        {"iv_cond", f.denominators.iv_cond},
        {"at_cross", f.denominators.at_cross},
        {"nt_cross", f.denominators.nt_cross}}},
      {"relevance_tol", r.relevance_tol},
      {"warnings", r.warnings},
  };
  return json{{"estimates", estimates},
              {"inference", inference},
              {"bounds", bounds},
              {"diagnostics", diagnostics},
              {"meta", {{"version", DUALIV_VERSION}}}};
}

// Flattens nested objects into dotted keys; arrays of numbers become key.0, key.1.
void flatten(const json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten(j[i], prefix + "." + std::to_string(i), out);
    }
  } else if (j.is_number_float()) {
    out << prefix << ',' << full(j.get<double>()) << '\n';
  } else if (j.is_string()) {
    out << prefix << ',' << j.get<std::string>() << '\n';
  } else {
    out << prefix << ',' << j.dump() << '\n';
  }
}

std::string estimate_markdown(const EstimateReport& r) {
  const LateComponents& f = r.fit;
  const InferenceResult& inf = r.inference;
  std::ostringstream out;
  out << "| Estimate | Value | SE | CI lower | CI upper |\n";
  out << "|---|---|---|---|---|\n";
  const auto row = [&](const char* name, double v, double se, const Interval& ci) {
    out << "| " << name << " | " << fixed3(v) << " | " << fixed3(se) << " | "
        << fixed3(ci.lower) << " | " << fixed3(ci.upper) << " |\n";
  };
  row("LATE", f.late, inf.se_late, inf.ci_late);
  row("rho1", f.rho.rho1, inf.se_rho1, inf.ci_rho1);
  row("rho0", f.rho.rho0, inf.se_rho0, inf.ci_rho0);
  row(f.condition_on == ConditionOn::W1 ? "IV1" : "IV0", f.iv1, inf.se_iv1, inf.ci_iv1);
  row("IV", f.iv, inf.se_iv, inf.ci_iv);
  out << "\nConfidence level: " << inf.level << "\n\n";

  out << "| Weight | Value |\n|---|---|\n";
  out << "| w1 | " << fixed3(f.w1) << " |\n| w0 | " << fixed3(f.w0) << " |\n\n";

  out << "| W | P(AT) | P(NT) | P(CP) |\n|---|---|---|---|\n";
  for (int w = 1; w >= 0; --w) {
    const SubgroupProbs& p = f.probs(w);
    out << "| " << w << " | " << fixed3(p.p_at) << " | " << fixed3(p.p_nt) << " | "
        << fixed3(p.p_cp) << " |\n";
  }

  out << "\n| Bounds (k1, k0) | Lower | Upper |\n|---|---|---|\n";
  out << "| (" << r.caps.k1 << ", " << r.caps.k0 << ") | " << fixed3(r.bounds.lower) << " | "
      << fixed3(r.bounds.upper) << " |\n";

  out << "\n| Z | W | Count | Treated |\n|---|---|---|---|\n";
  for (int z = 0; z < 2; ++z) {
    for (int w = 0; w < 2; ++w) {
      out << "| " << z << " | " << w << " | " << r.counts.count[z][w] << " | "
          << r.counts.treated_count[z][w] << " |\n";
    }
  }
  for (const std::string& warning : r.warnings) out << "\nWarning: " << warning << '\n';
  return out.str();
}

const char* design_name(const Design& d) {
  return d.kind == Design::Kind::Baseline ? "baseline" : "threshold";
}

json metrics_json(const Metrics& m) {
  return json{{"bias", m.bias}, {"sd", m.sd}, {"rmse", m.rmse}, {"mad", m.mad}};
}

Metrics metrics_from(const json& j) {
  const auto num = [&](const char* key) {
    return j.at(key).is_null() ? std::nan("") : j.at(key).get<double>();
  };
  return Metrics{num("bias"), num("sd"), num("rmse"), num("mad")};
}

json config_json(const SimConfig& c) {
  return json{{"n", c.n},
              {"reps", c.reps},
              {"rho1", c.rho1},
              {"rho0", c.rho0},
              {"a1", c.a1},
              {"a0", c.a0},
              {"c", c.c},
              {"p_z", c.p_z},
              {"design", design_name(c.design)},
              {"k", c.design.k},
              {"seed", c.seed},
              {"complier_shift1", c.complier_shift1},
              {"complier_shift0", c.complier_shift0}};
}

json report_json(const SimReport& r) {
  return json{{"config", config_json(r.config)},
              {"theta0", r.theta0},
              {"failed_reps", r.failed_reps},
              {"metrics",
               {{"theta_zw", metrics_json(r.theta_zw)},
                {"theta_z", metrics_json(r.theta_z)},
                {"rho1_hat", metrics_json(r.rho1_hat)},
                {"rho0_hat", metrics_json(r.rho0_hat)}}}};
}

std::string metric_cells(const Metrics& m) {
  return fixed3(m.bias) + " | " + fixed3(m.sd) + " | " + fixed3(m.rmse) + " | " + fixed3(m.mad);
}

std::string simulation_markdown(std::span<const SimReport> reports, std::optional<TableId> table) {
  std::ostringstream out;
  const std::string four = " Bias | SD | rMSE | MAD |";
  const std::string rule8 = "---|---|---|---|---|---|---|---|";
  if (table == TableId::Table1) {
    out << "| N | rho | theta_zw" << four << " theta_z" << four << "\n";
    out << "|---|---|" << rule8 << "\n";
    for (const SimReport& r : reports) {
      out << "| " << r.config.n << " | " << r.config.rho1 << " | " << metric_cells(r.theta_zw)
          << " | " << metric_cells(r.theta_z) << " |\n";
    }
  } else if (table == TableId::Table2) {
    out << "| N | rho1_hat" << four << " rho0_hat" << four << "\n";
    out << "|---|" << rule8 << "\n";
    for (const SimReport& r : reports) {
      out << "| " << r.config.n << " | " << metric_cells(r.rho1_hat) << " | "
          << metric_cells(r.rho0_hat) << " |\n";
    }
  } else if (table == TableId::Table3 || table == TableId::Table4) {
    out << "N = " << (reports.empty() ? 0 : reports.front().config.n) << "\n\n";
    out << "| k | rho | theta_zw" << four << " theta_z" << four << "\n";
    out << "|---|---|" << rule8 << "\n";
    for (const SimReport& r : reports) {
      out << "| " << r.config.design.k << " | " << r.config.rho1 << " | "
          << metric_cells(r.theta_zw) << " | " << metric_cells(r.theta_z) << " |\n";
    }
  } else {
    out << "| N | reps | design | k | rho1 | rho0 | theta0 | failed | theta_zw" << four
        << " theta_z" << four << " rho1_hat" << four << " rho0_hat" << four << "\n";
    out << "|---|---|---|---|---|---|---|---|" << rule8 << rule8 << "\n";
    for (const SimReport& r : reports) {
      const SimConfig& c = r.config;
      out << "| " << c.n << " | " << c.reps << " | " << design_name(c.design) << " | "
          << c.design.k << " | " << c.rho1 << " | " << c.rho0 << " | " << fixed3(r.theta0)
          << " | " << r.failed_reps << " | " << metric_cells(r.theta_zw) << " | "
          << metric_cells(r.theta_z) << " | " << metric_cells(r.rho1_hat) << " | "
          << metric_cells(r.rho0_hat) << " |\n";
    }
  }
  return out.str();
}

std::string simulation_csv(std::span<const SimReport> reports) {
  std::ostringstream out;
  out << "n,reps,design,k,rho1,rho0,a1,a0,c,p_z,seed,theta0,failed_reps";
  for (const char* est : {"theta_zw", "theta_z", "rho1_hat", "rho0_hat"}) {
    for (const char* m : {"bias", "sd", "rmse", "mad"}) out << ',' << est << '_' << m;
  }
  out << '\n';
  for (const SimReport& r : reports) {
    const SimConfig& c = r.config;
    out << c.n << ',' << c.reps << ',' << design_name(c.design) << ',' << full(c.design.k) << ','
        << full(c.rho1) << ',' << full(c.rho0) << ',' << full(c.a1) << ',' << full(c.a0) << ','
        << full(c.c) << ',' << full(c.p_z) << ',' << c.seed << ',' << full(r.theta0) << ','
        << r.failed_reps;
    for (const Metrics* m : {&r.theta_zw, &r.theta_z, &r.rho1_hat, &r.rho0_hat}) {
      out << ',' << full(m->bias) << ',' << full(m->sd) << ',' << full(m->rmse) << ','
          << full(m->mad);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

OutputFormat parse_output_format(std::string_view name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "markdown" || name == "md") return OutputFormat::Markdown;
  throw Error(ErrorCode::InvalidConfig, "unknown output format '" + std::string(name) + "'");
}

ConditionOn parse_condition_on(std::string_view name) {
  if (name == "w1" || name == "W1") return ConditionOn::W1;
  if (name == "w0" || name == "W0") return ConditionOn::W0;
  throw Error(ErrorCode::InvalidConfig, "condition_on must be w1 or w0");
}

EstimateReport build_estimate_report(const Sample& sample, const EstimatorOptions& options,
                                     const HeterogeneityCaps& caps, double level) {
  EstimateReport r;
  r.relevance_tol = options.relevance_tol;
  r.caps = caps;
  r.counts = cell_counts(sample);
  r.fit = late_estimate(sample, options);
  r.complier = complier_means(r.fit, options.relevance_tol);
  r.inference = standard_errors(influence_set(sample, r.fit, options.relevance_tol), r.fit, level);
  r.bounds = late_bounds(r.fit, caps);
  for (int w = 1; w >= 0; --w) {
    const double p_cp = r.fit.probs(w).p_cp;
    if (p_cp < 0.0) {
      std::ostringstream msg;
      msg << "estimated complier share given W=" << w << " is negative (" << p_cp
          << "); Z may violate monotonicity";
      r.warnings.push_back(msg.str());
    }
  }
  return r;
}

std::string render_estimate(const EstimateReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::Json: return estimate_json(report).dump(2) + "\n";
    case OutputFormat::Csv: {
      std::ostringstream out;
      out << "key,value\n";
      json j = estimate_json(report);
      j["diagnostics"].erase("warnings");
      flatten(j, "", out);
      for (std::size_t i = 0; i < report.warnings.size(); ++i) {
        out << "diagnostics.warnings." << i << ",\"" << report.warnings[i] << "\"\n";
      }
      return out.str();
    }
    case OutputFormat::Markdown: return estimate_markdown(report);
  }
  return {};
}

TableId parse_table_id(std::string_view name) {
  if (name == "table1") return TableId::Table1;
  if (name == "table2") return TableId::Table2;
  if (name == "table3") return TableId::Table3;
  if (name == "table4") return TableId::Table4;
  throw Error(ErrorCode::InvalidConfig, "unknown table preset '" + std::string(name) + "'");
}

std::string_view table_name(TableId id) noexcept {
  switch (id) {
    case TableId::Table1: return "table1";
    case TableId::Table2: return "table2";
    case TableId::Table3: return "table3";
    case TableId::Table4: return "table4";
  }
  return "";
}

std::vector<SimConfig> table_grid(TableId id, const SimConfig& base) {
  static constexpr std::size_t kSizes[] = {1000, 4000, 16000};
  static constexpr double kRhos[] = {0.0, 0.5, 1.0, -1.0};
  static constexpr double kThresholds[] = {-0.25, 0.0, 0.25};

  std::vector<SimConfig> grid;
  switch (id) {
    case TableId::Table1:
      for (const std::size_t n : kSizes) {
        for (const double rho : kRhos) {
          SimConfig c = base;
          c.n = n;
          c.rho1 = c.rho0 = rho;
          c.design = Design::baseline();
          grid.push_back(c);
        }
      }
      break;
    case TableId::Table2:
      for (const std::size_t n : kSizes) {
        SimConfig c = base;
        c.n = n;
        c.design = Design::baseline();
        grid.push_back(c);
      }
      break;
    case TableId::Table3:
    case TableId::Table4:
      for (const double k : kThresholds) {
        for (const double rho : kRhos) {
          SimConfig c = base;
          c.n = id == TableId::Table3 ? 1000 : 4000;
          c.rho1 = c.rho0 = rho;
          c.design = Design::threshold(k);
          grid.push_back(c);
        }
      }
      break;
  }
  return grid;
}

std::string render_simulation(std::span<const SimReport> reports, OutputFormat format,
                              std::optional<TableId> table) {
  switch (format) {
    case OutputFormat::Json: {
      json meta{{"version", DUALIV_VERSION}};
      if (!reports.empty()) meta["seed"] = reports.front().config.seed;
      if (table) meta["table"] = std::string(table_name(*table));
      json list = json::array();
      for (const SimReport& r : reports) list.push_back(report_json(r));
      return json{{"meta", meta}, {"reports", list}}.dump(2) + "\n";
    }
    case OutputFormat::Csv: return simulation_csv(reports);
    case OutputFormat::Markdown: return simulation_markdown(reports, table);
  }
  return {};
}

std::string sim_report_to_json(const SimReport& report) { return report_json(report).dump(); }

SimReport sim_report_from_json(std::string_view text) {
  const json j = json::parse(text);
  SimReport r;
  const json& c = j.at("config");
  r.config.n = c.at("n").get<std::size_t>();
  r.config.reps = c.at("reps").get<std::size_t>();
  r.config.rho1 = c.at("rho1").get<double>();
  r.config.rho0 = c.at("rho0").get<double>();
  r.config.a1 = c.at("a1").get<double>();
  r.config.a0 = c.at("a0").get<double>();
  r.config.c = c.at("c").get<double>();
  r.config.p_z = c.at("p_z").get<double>();
  const double k = c.at("k").get<double>();
  r.config.design = c.at("design").get<std::string>() == "baseline" ? Design::baseline()
                                                                     : Design::threshold(k);
  r.config.design.k = k;
  r.config.seed = c.at("seed").get<std::uint64_t>();
  r.config.complier_shift1 = c.at("complier_shift1").get<double>();
  r.config.complier_shift0 = c.at("complier_shift0").get<double>();
  r.theta0 = j.at("theta0").get<double>();
  r.failed_reps = j.at("failed_reps").get<std::size_t>();
  const json& m = j.at("metrics");
  r.theta_zw = metrics_from(m.at("theta_zw"));
  r.theta_z = metrics_from(m.at("theta_z"));
  r.rho1_hat = metrics_from(m.at("rho1_hat"));
  r.rho0_hat = metrics_from(m.at("rho0_hat"));
  return r;
}

}  // namespace dualiv
