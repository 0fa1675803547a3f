//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "leakaudit/audit/audit.hpp"
#include "leakaudit/chem/canon.hpp"
#include "leakaudit/chem/smiles.hpp"
#include "leakaudit/data/dataset.hpp"
#include "leakaudit/fp/fingerprint.hpp"
#include "leakaudit/screen/screen.hpp"
#include "leakaudit/simd/popcount.hpp"
#include "leakaudit/version.hpp"

namespace {

using namespace leakaudit;
using nlohmann::ordered_json;

constexpr int kExitClean = 0;
constexpr int kExitError = 1;
constexpr int kExitFindings = 3;

struct RunConfig {
  std::string command;
  std::string manifest;
  double tc_inter = 0.6;
  double tc_intra = 0.85;
  double mcs_intra = 0.9;
  int bits = 4096;
  int radius = 1;
  bool bits_set = false;
  bool radius_set = false;
  std::string tie_mode = "expected";
  bool no_mcs_prefilter = false;
  std::uint64_t mcs_budget = 1'000'000;
  std::string out = "leakaudit_out";
  std::uint64_t seed = 20240601;
  int threads = 1;
  audit::RolePolicy roles;
  std::vector<double> fractions = {0.01, 0.001};

  // metrics
  std::string scores;
  bool inflation = false;
  std::int64_t n = 61143;
  std::int64_t a = 136;
  std::int64_t k = 0;
  std::int64_t g = 1;
  std::size_t trials = 10000;

  ordered_json to_json() const {
    ordered_json j;
    j["command"] = command;
    j["tool_version"] = kToolVersion;
    if (command == "audit" || command == "baseline") {
      j["manifest"] = manifest;
      j["bits"] = bits_set ? ordered_json(bits) : ordered_json("manifest");
      j["radius"] = radius_set ? ordered_json(radius) : ordered_json("manifest");
    }
    if (command == "audit") {
      j["tc_inter"] = tc_inter;
      j["tc_intra"] = tc_intra;
      j["mcs_intra"] = mcs_intra;
      j["mcs_prefilter"] = !no_mcs_prefilter;
      j["mcs_budget"] = mcs_budget;
      j["roles"] = {{"active_vs_active", roles.active_vs_active},
                    {"inactive_vs_inactive", roles.inactive_vs_inactive},
                    {"query_vs_all", roles.query_vs_all},
                    {"cross_label", roles.cross_label},
                    {"analog_query", roles.analog_query},
                    {"analog_inactives", roles.analog_inactives},
                    {"intra_analog_actives", roles.intra_analog_actives},
                    {"intra_analog_inactives", roles.intra_analog_inactives}};
    }
    if (command == "baseline" || command == "metrics") {
      j["tie_mode"] = tie_mode;
      j["fractions"] = fractions;
    }
    if (command == "metrics") {
      if (inflation)
        j["inflation"] = {{"n", n}, {"a", a}, {"k", k}, {"g", g},
                          {"trials", trials}, {"seed", seed}};
      else
        j["scores"] = scores;
    }
    j["out"] = out;
    j["threads"] = threads;
    j["seed"] = seed;
    j["simd"] = simd::isa_name(simd::active_isa());
    return j;
  }
};

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw data::IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out)
    throw data::IoError("error while writing '" + path.string() + "'");
}

data::Benchmark load(const RunConfig &cfg) {
  data::ManifestOptions opts;
  if (cfg.bits_set)
    opts.n_bits = cfg.bits;
  if (cfg.radius_set)
    opts.radius = cfg.radius;
  opts.threads = cfg.threads;
  return data::load_manifest(cfg.manifest, opts);
}

int cmd_audit(const RunConfig &cfg) {
  audit::AuditConfig ac;
  ac.tc_inter = cfg.tc_inter;
  ac.tc_intra = cfg.tc_intra;
  ac.mcs_intra = cfg.mcs_intra;
  ac.mcs_prefilter = !cfg.no_mcs_prefilter;
  ac.mcs_budget = cfg.mcs_budget;
  ac.roles = cfg.roles;
  ac.threads = cfg.threads;
  ac.validate();

  const data::Benchmark bench = load(cfg);
  const audit::AuditSummary summary = audit::summarize(bench, ac);
  const std::string rc = cfg.to_json().dump();

  std::filesystem::create_directories(cfg.out);
  const std::string table = audit::report_table(summary);
  write_file(std::filesystem::path(cfg.out) / "audit.json",
             audit::report_json(summary, bench, rc));
  write_file(std::filesystem::path(cfg.out) / "audit.txt",
             "# run_config " + rc + "\n" + table);
  std::cout << table;
  return summary.finding_count() > 0 ? kExitFindings : kExitClean;
}

ordered_json ef_json(const screen::EnrichmentResult &r) {
  return {{"k", r.k}, {"hits", r.hits}, {"ef", r.ef}};
}

// EF for every tie mode at one fraction; the chosen mode is reported first.
ordered_json ef_all_modes(const screen::Ranking &ranking, double f,
                          screen::TieMode chosen, std::string &cell) {
  ordered_json j;
  j["fraction"] = f;
  const auto main = screen::enrichment_factor(ranking, f, chosen);
  j["k"] = main.k;
  j["tie_mode"] = screen::tie_mode_name(chosen);
  j["ef"] = main.ef;
  j["hits"] = main.hits;
  ordered_json modes;
  double lo = main.ef;
  double hi = main.ef;
  for (const auto m: {screen::TieMode::kExpected, screen::TieMode::kOptimistic,
                      screen::TieMode::kPessimistic}) {
    const auto r = screen::enrichment_factor(ranking, f, m);
    modes[std::string(screen::tie_mode_name(m))] = ef_json(r);
    lo = std::min(lo, r.ef);
    hi = std::max(hi, r.ef);
  }
  j["modes"] = std::move(modes);
  cell = fmt(main.ef, 2);
  if (hi - lo > 1e-9)
    cell += " [" + fmt(lo, 2) + "," + fmt(hi, 2) + "]";
  return j;
}

int cmd_baseline(const RunConfig &cfg) {
  const auto mode = screen::tie_mode_from_name(cfg.tie_mode);
  if (!mode)
    throw std::invalid_argument("unknown tie mode '" + cfg.tie_mode + "'");
  const data::Benchmark bench = load(cfg);
  const ordered_json rc = cfg.to_json();
  const std::filesystem::path out(cfg.out);
  std::filesystem::create_directories(out);

  ordered_json doc;
  doc["schema_version"] = 1;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  doc["run_config"] = rc;
  doc["fingerprint"] = {{"kind", "ecfp"},
                        {"radius", bench.params.radius},
                        {"n_bits", bench.params.n_bits}};
  ordered_json targets = ordered_json::array();
  std::vector<std::string> warnings = bench.warnings;

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"target", "N", "A", "leaked"};
  for (const double f: cfg.fractions)
    header.push_back("EF" + fmt(f * 100, f >= 0.01 ? 0 : 1) + "%");
  header.push_back("AUROC");
  header.push_back("model EF" + fmt(cfg.fractions.front() * 100, 0) + "%");

  for (const data::TargetDataset &t: bench.targets) {
    const screen::Ranking ranking = screen::rank_validation(t, cfg.threads);
    const screen::BaselineScorer scorer(t.role(data::SplitRole::kTrainActive),
                                        t.role(data::SplitRole::kTrainInactive),
                                        t.role(data::SplitRole::kQuery));
    for (const std::string &c: scorer.label_conflicts())
      warnings.push_back("target '" + t.name + "': " + c +
                         " is both a training active and inactive; scored as active");
    if (ranking.empty_group_entries > 0)
      warnings.push_back("target '" + t.name +
                         "': empty query or train-active group contributed 0.0 to " +
                         std::to_string(ranking.empty_group_entries) + " score(s)");

    std::size_t leaked = 0;
    std::size_t unparsed = 0;
    for (const screen::RankEntry &e: ranking.entries) {
      leaked += e.active && e.provenance == screen::Provenance::kExactActive ? 1 : 0;
      unparsed += e.provenance == screen::Provenance::kUnparsed ? 1 : 0;
    }
    write_file(out / (t.name + ".scores.tsv"),
               "# run_config " + rc.dump() + "\n" + screen::scores_tsv(ranking));

    ordered_json tj;
    tj["name"] = t.name;
    tj["n"] = ranking.n;
    tj["actives"] = ranking.actives;
    tj["leaked_actives"] = leaked;
    tj["unparsed"] = unparsed;
    tj["scores_file"] = t.name + ".scores.tsv";
    std::vector<std::string> row = {t.name, std::to_string(ranking.n),
                                    std::to_string(ranking.actives), std::to_string(leaked)};
    ordered_json efs = ordered_json::array();
    for (const double f: cfg.fractions) {
      std::string cell;
      try {
        efs.push_back(ef_all_modes(ranking, f, *mode, cell));
      } catch (const screen::DegenerateInput &e) {
        efs.push_back({{"fraction", f}, {"error", e.what()}});
        cell = "n/a";
      }
      row.push_back(cell);
    }
    tj["enrichment"] = std::move(efs);
    try {
      const double auc = screen::auroc(ranking);
      tj["auroc"] = auc;
      row.push_back(fmt(auc, 3));
    } catch (const screen::DegenerateInput &e) {
      tj["auroc"] = nullptr;
      row.push_back("n/a");
    }
    // Leak model: the exact-match actives are guaranteed hits.
    try {
      const auto k = static_cast<std::int64_t>(screen::top_k(cfg.fractions.front(), ranking.n));
      const screen::InflationParams p {static_cast<std::int64_t>(ranking.n),
                                       static_cast<std::int64_t>(ranking.actives), k,
                                       std::min<std::int64_t>(static_cast<std::int64_t>(leaked), k)};
      const double model = screen::analytic_inflated_ef(p);
      tj["leak_model"] = {{"fraction", cfg.fractions.front()}, {"g", p.g}, {"ef", model},
                          {"ef_without_leak", 1.0}};
      row.push_back(fmt(model, 2));
    } catch (const std::exception &) {
      row.push_back("n/a");
    }
    targets.push_back(std::move(tj));
    rows.push_back(std::move(row));
  }
  doc["targets"] = std::move(targets);
  doc["warnings"] = warnings;
  write_file(out / "baseline.json", doc.dump(2) + "\n");

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto &r: rows)
      width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream table;
  table << kToolName << ' ' << kToolVersion << " memorization baseline (tie mode "
        << cfg.tie_mode << ")\n\n";
  auto emit = [&](const std::vector<std::string> &r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c == 0)
        table << r[c] << std::string(width[c] - r[c].size(), ' ');
      else
        table << std::string(width[c] - r[c].size(), ' ') << r[c];
      table << (c + 1 < r.size() ? "  " : "\n");
    }
  };
  emit(header);
  for (const auto &r: rows)
    emit(r);
  table << "\nleaked = validation actives whose canonical SMILES is a training active;"
           " model EF = analytic expectation with those as guaranteed hits (1.00 without leaks)\n";
  for (const std::string &w: warnings)
    table << "warning: " << w << "\n";
  write_file(out / "baseline.txt", "# run_config " + rc.dump() + "\n" + table.str());
  std::cout << table.str();
  return kExitClean;
}

int cmd_metrics(const RunConfig &cfg) {
  const ordered_json rc = cfg.to_json();
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  doc["run_config"] = rc;
  std::ostringstream text;

  if (cfg.inflation) {
    screen::InflationParams p {cfg.n, cfg.a, cfg.k, cfg.g};
    if (p.k == 0)
      p.k = static_cast<std::int64_t>(
          screen::top_k(cfg.fractions.back(), static_cast<std::size_t>(cfg.n)));
    const double analytic = screen::analytic_inflated_ef(p);
    const double baseline = screen::analytic_inflated_ef({p.n, p.a, p.k, 0});
    doc["inflation"] = {{"n", p.n}, {"a", p.a}, {"k", p.k}, {"g", p.g},
                        {"analytic_ef", analytic}, {"ef_without_leak", baseline}};
    text << "N=" << p.n << " A=" << p.a << " k=" << p.k << " g=" << p.g << "\n";
    text << "analytic EF: " << fmt(analytic, 6) << " (without leak " << fmt(baseline, 6)
         << ")\n";
    if (cfg.trials > 0) {
      const auto sim = screen::simulate_leak_ef(p, cfg.trials, cfg.seed);
      doc["simulation"] = {{"trials", sim.trials},   {"seed", cfg.seed},
                           {"mean", sim.mean},       {"stddev", sim.stddev},
                           {"stderr", sim.stderr_mean}, {"ci95", {sim.ci_low, sim.ci_high}}};
      text << "simulated EF (" << sim.trials << " trials): " << fmt(sim.mean, 4)
           << " 95% CI [" << fmt(sim.ci_low, 4) << ", " << fmt(sim.ci_high, 4) << "]\n";
    }
  } else {
    if (cfg.scores.empty())
      throw std::invalid_argument("metrics needs --scores FILE or --inflation");
    std::ifstream in(cfg.scores, std::ios::binary);
    if (!in)
      throw data::IoError("cannot read scores file '" + cfg.scores + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const screen::Ranking ranking = screen::read_scores_tsv(buf.str());
    const auto mode = screen::tie_mode_from_name(cfg.tie_mode);
    if (!mode)
      throw std::invalid_argument("unknown tie mode '" + cfg.tie_mode + "'");
    doc["n"] = ranking.n;
    doc["actives"] = ranking.actives;
    text << "N=" << ranking.n << " A=" << ranking.actives << "\n";
    ordered_json efs = ordered_json::array();
    for (const double f: cfg.fractions) {
      std::string cell;
      efs.push_back(ef_all_modes(ranking, f, *mode, cell));
      text << "EF" << fmt(f * 100, f >= 0.01 ? 0 : 1) << "%: " << cell << "\n";
    }
    doc["enrichment"] = std::move(efs);
    const double auc = screen::auroc(ranking);
    doc["auroc"] = auc;
    text << "AUROC: " << fmt(auc, 6) << "\n";
  }
  std::filesystem::create_directories(cfg.out);
  write_file(std::filesystem::path(cfg.out) / "metrics.json", doc.dump(2) + "\n");
  std::cout << text.str();
  return kExitClean;
}

int cmd_canonicalize(const std::vector<std::string> &smiles, const std::string &file) {
  int status = kExitClean;
  auto one = [&](const std::string &text, const std::string &where,
                 const std::string &suffix) {
    try {
      std::cout << chem::canonical_smiles(chem::parse_smiles(text)).text << suffix << "\n";
    } catch (const chem::ParseError &e) {
      std::cerr << "error: " << where << "offset " << e.offset() << ": " << e.reason()
                << "\n";
      status = kExitError;
    }
  };
  for (const std::string &s: smiles)
    one(s, "", "");
  if (!file.empty()) {
    std::ifstream in(file, std::ios::binary);
    if (!in)
      throw data::IoError("cannot read '" + file + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::istringstream ls(line);
      std::string smi;
      std::string id;
      if (!(ls >> smi) || smi.front() == '#')
        continue;
      ls >> id;
      one(smi, "line " + std::to_string(lineno) + " ", id.empty() ? "" : "\t" + id);
    }
  }
  return status;
}

int cmd_fp(const std::string &smiles, const RunConfig &cfg) {
  fp::FingerprintParams params;
  params.radius = cfg.radius;
  params.n_bits = cfg.bits;
  params.validate();
  try {
    const fp::Fingerprint f = fp::ecfp(chem::parse_smiles(smiles), params);
    std::cout << "popcount " << f.popcount() << "\n";
    const auto bits = f.set_bits();
    for (std::size_t i = 0; i < bits.size(); ++i)
      std::cout << bits[i] << (i + 1 < bits.size() ? " " : "\n");
    return kExitClean;
  } catch (const chem::ParseError &e) {
    std::cerr << "error: offset " << e.offset() << ": " << e.reason() << "\n";
    return kExitError;
  }
}

void add_fp_options(CLI::App *app, RunConfig &cfg) {
  app->add_option("--bits", cfg.bits, "fingerprint width (power of two)")
      ->each([&](const std::string &) { cfg.bits_set = true; });
  app->add_option("--radius", cfg.radius, "ECFP radius (1 = ECFP2)")
      ->each([&](const std::string &) { cfg.radius_set = true; });
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app {"Benchmark integrity audit for ligand-based virtual screening"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  RunConfig cfg;
  std::vector<std::string> smiles;
  std::string file;

  auto common = [&](CLI::App *sub) {
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    sub->add_option("--seed", cfg.seed, "seed for randomized simulations");
  };

  CLI::App *audit_cmd = app.add_subcommand("audit", "run the four integrity detectors");
  audit_cmd->add_option("--manifest", cfg.manifest, "benchmark manifest (JSON)")->required();
  audit_cmd->add_option("--tc-inter", cfg.tc_inter, "inter-set analog Tanimoto threshold");
  audit_cmd->add_option("--tc-intra", cfg.tc_intra, "intra-set analog Tanimoto threshold");
  audit_cmd->add_option("--mcs-intra", cfg.mcs_intra, "intra-set analog MCS ratio threshold");
  audit_cmd->add_option("--mcs-budget", cfg.mcs_budget, "MCS search node budget");
  audit_cmd->add_flag("--no-mcs-prefilter", cfg.no_mcs_prefilter,
                      "run MCS on every intra-set pair");
  audit_cmd->add_flag("!--no-active-vs-active", cfg.roles.active_vs_active,
                      "skip train/val active comparisons");
  audit_cmd->add_flag("!--no-inactive-vs-inactive", cfg.roles.inactive_vs_inactive,
                      "skip train/val inactive identity");
  audit_cmd->add_flag("--query-vs-all", cfg.roles.query_vs_all,
                      "also compare queries with inactives");
  audit_cmd->add_flag("--cross-label", cfg.roles.cross_label,
                      "report molecules shared between active and inactive roles");
  audit_cmd->add_flag("--analog-query", cfg.roles.analog_query,
                      "inter-set analogs between queries and actives");
  audit_cmd->add_flag("--analog-inactives", cfg.roles.analog_inactives,
                      "inter-set analogs between train and val inactives");
  audit_cmd->add_flag("--intra-analog-actives", cfg.roles.intra_analog_actives,
                      "intra-set analogs within train and val actives");
  audit_cmd->add_flag("--intra-analog-inactives", cfg.roles.intra_analog_inactives,
                      "intra-set analogs within train and val inactives");
  add_fp_options(audit_cmd, cfg);
  common(audit_cmd);

  CLI::App *base_cmd = app.add_subcommand("baseline", "score validation sets by memorization");
  base_cmd->add_option("--manifest", cfg.manifest, "benchmark manifest (JSON)")->required();
  base_cmd->add_option("--tie-mode", cfg.tie_mode, "expected, optimistic or pessimistic");
  base_cmd->add_option("--fractions", cfg.fractions, "EF fractions")->delimiter(',');
  add_fp_options(base_cmd, cfg);
  common(base_cmd);

  CLI::App *metrics_cmd = app.add_subcommand("metrics", "EF/AUROC of a score file or the leak model");
  metrics_cmd->add_option("--scores", cfg.scores, "score file (record_id, score, [provenance], label)");
  metrics_cmd->add_option("--tie-mode", cfg.tie_mode, "expected, optimistic or pessimistic");
  metrics_cmd->add_option("--fractions", cfg.fractions, "EF fractions")->delimiter(',');
  metrics_cmd->add_flag("--inflation", cfg.inflation, "evaluate the leak-inflation model");
  metrics_cmd->add_option("--n", cfg.n, "molecules in the ranking");
  metrics_cmd->add_option("--actives", cfg.a, "actives in the ranking");
  metrics_cmd->add_option("--k", cfg.k, "top-k cutoff (default floor(f*N) of the last fraction)");
  metrics_cmd->add_option("--leaked", cfg.g, "guaranteed leaked hits");
  metrics_cmd->add_option("--trials", cfg.trials, "Monte Carlo trials (0 = analytic only)");
  common(metrics_cmd);

  CLI::App *canon_cmd = app.add_subcommand("canonicalize", "print canonical SMILES");
  canon_cmd->add_option("smiles", smiles, "SMILES strings");
  canon_cmd->add_option("--file", file, "molecule file (SMILES [ID] per line)");

  CLI::App *fp_cmd = app.add_subcommand("fp", "print fingerprint bits");
  std::string fp_smiles;
  fp_cmd->add_option("smiles", fp_smiles, "SMILES string")->required();
  add_fp_options(fp_cmd, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*audit_cmd) {
      cfg.command = "audit";
      return cmd_audit(cfg);
    }
    if (*base_cmd) {
      cfg.command = "baseline";
      return cmd_baseline(cfg);
    }
    if (*metrics_cmd) {
      cfg.command = "metrics";
      return cmd_metrics(cfg);
    }
    if (*canon_cmd)
      return cmd_canonicalize(smiles, file);
    if (*fp_cmd)
      return cmd_fp(fp_smiles, cfg);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
