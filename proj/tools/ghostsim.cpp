// ghostsim: n-slit ghost-interference simulator.
//
// Commands
//   pattern         coincidence pattern exports (csv/json/svg)
//   duality         distinguishability/coherence report
//   sweep           vary one or two declared parameters, tabulate the report
//   oracle-compare  analytic pattern vs brute-force grid propagation
//
// Exit codes: 0 success, 1 invariant violation, 2 config error,
//             3 regime/resolution error.

#include <filesystem>
#include <iostream>
#include <optional>

#include <omp.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ghost/export.hpp"

namespace fs = std::filesystem;
using namespace ghost;

namespace {

struct CliArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int workers = 0;
};

DetectorGram build_detector(const RunConfig& cfg, const CliArgs& args) {
  return cfg.detector.build(cfg.geometry.n, args.seed);
}

DualityReport run_duality(const RunConfig& cfg, const CliArgs& args) {
  const DetectorGram det = build_detector(cfg, args);
  switch (cfg.envelopes.mode) {
    case EnvelopeSpec::Mode::pipeline:
      return pipeline_duality(cfg.source, cfg.geometry, det, cfg.phases,
                              cfg.z2_points());
    case EnvelopeSpec::Mode::equal: {
      const std::vector<double> env(cfg.geometry.n, 1.0);
      return duality_report(det, env, cfg.phases);
    }
    case EnvelopeSpec::Mode::values:
      return duality_report(det, cfg.envelopes.values, cfg.phases);
  }
  throw config_error("envelopes: unknown mode");
}

int cmd_pattern(const RunConfig& cfg, const CliArgs& args) {
  const DetectorGram det = build_detector(cfg, args);
  const std::vector<double> grid = cfg.z2_points();
  const PatternResult p =
      coincidence_pattern(cfg.source, cfg.geometry, det, grid, cfg.phases);
  const std::string hash = config_hash(cfg);
  const fs::path out(args.out_dir);
  if (cfg.wants("csv")) write_pattern_csv((out / "pattern.csv").string(), p);
  if (cfg.wants("json"))
    write_text((out / "pattern.json").string(), pattern_to_json(p, hash).dump(2) + "\n");
  if (cfg.wants("svg")) write_text((out / "pattern.svg").string(), pattern_svg(p));
  write_text((out / "config.json").string(), cfg.to_json().dump(2) + "\n");
  return 0;
}

int cmd_duality(const RunConfig& cfg, const CliArgs& args) {
  const DualityReport rep = run_duality(cfg, args);
  const fs::path out(args.out_dir);
  write_text((out / "duality.json").string(),
             report_to_json(rep, config_hash(cfg)).dump(2) + "\n");
  write_text((out / "config.json").string(), cfg.to_json().dump(2) + "\n");
  std::cout << "d_q1=" << rep.d_q1;
  if (rep.c2_matrix) std::cout << " c2_matrix=" << *rep.c2_matrix;
  if (rep.c2_pattern) std::cout << " c2_pattern=" << *rep.c2_pattern;
  std::cout << " sum=" << rep.sum << (rep.bound_violated ? "  [BOUND VIOLATED]" : "")
            << "\n";
  return rep.bound_violated ? 1 : 0;
}

int cmd_sweep(const RunConfig& cfg, const CliArgs& args) {
  if (!cfg.sweep) throw config_error("sweep: missing sweep block in config");
  const SweepAxis ax1 = *cfg.sweep;
  const std::optional<SweepAxis> ax2 = cfg.sweep2;
  const int n1 = ax1.steps;
  const int n2 = ax2 ? ax2->steps : 1;
  const int total = n1 * n2;

  struct Row {
    double p1 = 0.0, p2 = 0.0;
    DualityReport rep;
    bool ok = false;
    std::string error;
  };
  std::vector<Row> rows(total);

#pragma omp parallel for schedule(dynamic) if (args.workers != 1)
  for (int idx = 0; idx < total; ++idx) {
    const int i = idx / n2, j = idx % n2;
    Row& row = rows[idx];
    row.p1 = ax1.from + (ax1.to - ax1.from) * i / (n1 - 1);
    if (ax2) row.p2 = ax2->from + (ax2->to - ax2->from) * j / (n2 - 1);
    try {
      RunConfig point = cfg;
      apply_parameter(point, ax1.parameter, row.p1);
      if (ax2) apply_parameter(point, ax2->parameter, row.p2);
      row.rep = run_duality(point, args);
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }

  std::ostringstream csv;
  csv << ax1.parameter;
  if (ax2) csv << ',' << ax2->parameter;
  csv << ",d_q1,c2,sum\n";
  bool violated = false;
  json jrows = json::array();
  for (const Row& row : rows) {
    if (!row.ok) throw config_error("sweep point failed: " + row.error);
    const double c2 = row.rep.c2_matrix ? *row.rep.c2_matrix
                                        : row.rep.c2_pattern.value_or(0.0);
    csv << format_double(row.p1);
    if (ax2) csv << ',' << format_double(row.p2);
    csv << ',' << format_double(row.rep.d_q1) << ',' << format_double(c2) << ','
        << format_double(row.rep.sum) << '\n';
    json jr = report_to_json(row.rep, "");
    jr.erase("config_hash");
    jr["parameter"] = row.p1;
    if (ax2) jr["parameter2"] = row.p2;
    jrows.push_back(jr);
    violated = violated || row.rep.bound_violated;
  }
  const fs::path out(args.out_dir);
  write_text((out / "sweep.csv").string(), csv.str());
  json j;
  j["schema"] = 1;
  j["config_hash"] = config_hash(cfg);
  j["rows"] = jrows;
  write_text((out / "sweep.json").string(), j.dump(2) + "\n");
  write_text((out / "config.json").string(), cfg.to_json().dump(2) + "\n");
  std::cout << total << " sweep points written\n";
  return violated ? 1 : 0;
}

int cmd_oracle_compare(const RunConfig& cfg, const CliArgs& args) {
  if (!cfg.has_oracle) throw config_error("oracle: missing oracle block in config");
  const DetectorGram det = build_detector(cfg, args);
  const oracle::OracleResult ores = oracle::propagate_pair(
      cfg.source, cfg.geometry, det, cfg.phases, cfg.oracle_grid);
  const PatternResult analytic = coincidence_pattern(
      cfg.source, cfg.geometry, det, ores.pattern.z2, cfg.phases);
  const oracle::PatternComparison cmp =
      oracle::compare_patterns(analytic, ores.pattern);

  const std::string hash = config_hash(cfg);
  const fs::path out(args.out_dir);
  write_text((out / "oracle_compare.json").string(),
             comparison_to_json(cmp, ores.diag, hash).dump(2) + "\n");
  if (cfg.wants("csv")) {
    write_pattern_csv((out / "pattern_analytic.csv").string(), analytic);
    write_pattern_csv((out / "pattern_oracle.csv").string(), ores.pattern);
  }
  write_text((out / "config.json").string(), cfg.to_json().dump(2) + "\n");
  std::cout << "rel_l2=" << cmp.rel_l2 << " max_pointwise=" << cmp.max_pointwise
            << " fringe_offset=" << cmp.fringe_offset << "\n";
  return cmp.rel_l2 <= cfg.oracle_tolerance ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"n-slit ghost interference simulator"};
  app.require_subcommand(1);
  CliArgs args;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "path to the JSON run config")
        ->required();
    sub->add_option("--out", args.out_dir, "output directory (default .)");
    sub->add_option("--seed", args.seed, "override the random-detector seed");
    sub->add_option("--workers", args.workers, "worker thread count (0 = all cores)");
  };
  CLI::App* pattern = app.add_subcommand("pattern", "emit the coincidence pattern");
  CLI::App* duality = app.add_subcommand("duality", "emit a duality report");
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep table");
  CLI::App* oracle_cmp =
      app.add_subcommand("oracle-compare", "analytic vs grid-propagation comparison");
  for (CLI::App* sub : {pattern, duality, sweep, oracle_cmp}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (args.workers > 0) omp_set_num_threads(args.workers);
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    const RunConfig cfg = RunConfig::load(args.config_path);
    if (pattern->parsed()) return cmd_pattern(cfg, args);
    if (duality->parsed()) return cmd_duality(cfg, args);
    if (sweep->parsed()) return cmd_sweep(cfg, args);
    if (oracle_cmp->parsed()) return cmd_oracle_compare(cfg, args);
    return 2;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const regime_error& e) {
    std::cerr << "regime error: " << e.what() << "\n";
    return 3;
  } catch (const resolution_error& e) {
    std::cerr << "resolution error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
