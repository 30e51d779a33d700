#include "samgsr/report.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "samgsr/error.hpp"
#include "samgsr/io.hpp"
#include "samgsr/random.hpp"
#include "samgsr/sam.hpp"

#ifndef SAMGSR_VERSION
#define SAMGSR_VERSION "0.0.0"
#endif

namespace samgsr {

using nlohmann::json;

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReductionTrace, set_name, ordered_genes, ordered_statistic, c_values, stop_k, core,
                                   exhausted, tied_pairs)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SignatureGene, gene, statistic, source_sets, ranks)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Signature, genes, config_fingerprint)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SetPValue, set_name, size, observed, p_value, permutations)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SetPValueTable, rows)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SamgsrResult, signature, traces, pvalues, screened_sets, positive_class, s0,
                                   exhaustive_plan, permutations_used, warnings)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PosteriorMatrix, classes, sample_ids, values)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TuningResult, grid, misclassified, cv_error, mean_signature_size,
                                   empty_signature_folds, chosen_index, chosen_c_star, folds, fold_fingerprint,
                                   stratification_degraded, cv_posterior)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LinearClassifier, genes, coefficients, intercept, calibration_slope,
                                   calibration_offset, negative_class, positive_class, iterations)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EvalReport, error_rate, gbs, bcm, aupr, n_samples, classes, warnings)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StabilityReport, rand_gene, rand_pathway, k)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PlantedGene, gene, coefficient, degree_quantile, sets)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MethodSummary, method, signature_sizes, chosen_c_star, planted_hits, test_reports,
                                   rand_gene)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReplicateSummary, replicates, planted, planted_degrees, planted_weights, methods)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GraphBuildReport, input_pairs, duplicate_edges, self_loops, dropped_edges)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(WeightVector, gene_ids, values)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(NamedEval, name, report)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunConfig, command, expression_path, labels_path, gmt_path, ppi_path, ppi_header,
                                   model_path, stage_model_path, report_paths, weighted, alpha, c_star, grid, permutations, folds, seed, s0,
                                   normalization, positive_class, lambda, replicates, n_train, n_test, universe,
                                   label_model)

namespace {

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& value) {
  j[key] = value ? json(*value) : json(nullptr);
}

template <typename T>
void get_optional(const json& j, const char* key, std::optional<T>& value) {
  const auto& node = j.at(key);
  if (node.is_null()) {
    value.reset();
  } else {
    value = node.get<T>();
  }
}

}  // namespace

void to_json(json& j, const WeightsReport& w) {
  j = json{{"normalization", w.normalization}, {"graph", w.graph},
           {"missing_genes", w.missing_genes}, {"raw", w.raw},
           {"normalized", w.normalized}};
  put_optional(j, "setcount_spearman", w.setcount_spearman);
}

void from_json(const json& j, WeightsReport& w) {
  j.at("normalization").get_to(w.normalization);
  j.at("graph").get_to(w.graph);
  j.at("missing_genes").get_to(w.missing_genes);
  j.at("raw").get_to(w.raw);
  j.at("normalized").get_to(w.normalized);
  get_optional(j, "setcount_spearman", w.setcount_spearman);
}

// Fixed conventions of this implementation, written for auditability.
json method_conventions() {
  return json{{"statistic_weighting", "multiplicative: d_w = w * d"},
              {"s0", "recomputed for every permutation"},
              {"pvalue", "(1 + #{null >= observed}) / (1 + B)"},
              {"stopping_rule", "first k with c_k > c_star"},
              {"signature", "union of cores"}};
}

void to_json(json& j, const RunReport& r) {
  j = json{{"command", r.command},
           {"software_version", r.software_version},
           {"created_at", r.created_at},
           {"config_fingerprint", r.config_fingerprint},
           {"config", r.config},
           {"method", method_conventions()},
           {"evaluations", r.evaluations},
           {"warnings", r.warnings}};
  put_optional(j, "pvalues", r.pvalues);
  put_optional(j, "selection", r.selection);
  put_optional(j, "tuning", r.tuning);
  put_optional(j, "model", r.model);
  put_optional(j, "stability", r.stability);
  put_optional(j, "simulation", r.simulation);
  put_optional(j, "weights", r.weights);
}

void from_json(const json& j, RunReport& r) {
  j.at("command").get_to(r.command);
  j.at("software_version").get_to(r.software_version);
  j.at("created_at").get_to(r.created_at);
  j.at("config_fingerprint").get_to(r.config_fingerprint);
  j.at("config").get_to(r.config);
  j.at("evaluations").get_to(r.evaluations);
  j.at("warnings").get_to(r.warnings);
  get_optional(j, "pvalues", r.pvalues);
  get_optional(j, "selection", r.selection);
  get_optional(j, "tuning", r.tuning);
  get_optional(j, "model", r.model);
  get_optional(j, "stability", r.stability);
  get_optional(j, "simulation", r.simulation);
  get_optional(j, "weights", r.weights);
}

std::string software_version() { return SAMGSR_VERSION; }

void RunConfig::validate() const {
  static const std::vector<std::string> dataset_commands = {"screen", "reduce", "cv", "evaluate"};
  const bool needs_dataset = std::find(dataset_commands.begin(), dataset_commands.end(), command) != dataset_commands.end();
  const bool needs_sets = command == "screen" || command == "reduce" || command == "cv";

  if (weighted && ppi_path.empty() && command != "simulate") {
    throw ConfigError("--weighted needs a PPI edge list (--ppi)");
  }
  if (needs_dataset && (expression_path.empty() || labels_path.empty())) {
    throw ConfigError(command + " needs --expression and --labels");
  }
  if (needs_sets && gmt_path.empty()) throw ConfigError(command + " needs a gene set file (--gmt)");
  if (command == "evaluate" && model_path.empty()) throw ConfigError("evaluate needs a saved run report (--model)");
  if (command == "weights" && ppi_path.empty()) throw ConfigError("weights needs a PPI edge list (--ppi)");
  if (command == "stability" && report_paths.size() < 2) throw ConfigError("stability needs at least two run reports");

  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("--alpha must lie in (0, 1]");
  if (!(c_star > 0.0 && c_star <= 1.0)) throw ConfigError("--c-star must lie in (0, 1]");
  for (const double c : grid) {
    if (!(c > 0.0 && c <= 1.0)) throw ConfigError("--grid values must lie in (0, 1]");
  }
  if (permutations < 1) throw ConfigError("--permutations must be at least 1");
  if (folds < 2) throw ConfigError("--folds must be at least 2");
  if (!(lambda >= 0.0)) throw ConfigError("--lambda must be non-negative");
  if (replicates < 1) throw ConfigError("--replicates must be at least 1");
  try {
    (void)parse_s0_method(s0);
    (void)parse_weight_normalization(normalization);
    (void)parse_label_model(label_model);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }

  if (!stage_model_path.empty() && model_path.empty()) throw ConfigError("--stage-model needs --model");
  std::vector<std::string> paths = {expression_path, labels_path, gmt_path, ppi_path, model_path, stage_model_path};
  paths.insert(paths.end(), report_paths.begin(), report_paths.end());
  for (const auto& path : paths) {
    if (!path.empty() && !std::filesystem::is_regular_file(path)) {
      throw ConfigError("input file '" + path + "' does not exist");
    }
  }
}

std::string RunConfig::fingerprint() const {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(json(*this).dump())));
  return hex;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string to_json(const RunReport& report) { return json(report).dump(2) + "\n"; }

RunReport report_from_json(const std::string& text) {
  try {
    return json::parse(text).get<RunReport>();
  } catch (const json::exception& e) {
    throw ParseError("<report>", 0, 0, e.what());
  }
}

void save_report(const std::string& path, const RunReport& report) { write_text(path, to_json(report)); }

RunReport load_report(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text).get<RunReport>();
  } catch (const json::exception& e) {
    throw ParseError(path, 0, 0, std::string("not a run report: ") + e.what());
  }
}

namespace {

std::string fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

std::string sci(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.4g", value);
  return buffer;
}

// First column left-aligned, the rest right-aligned.
std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < width.size(); ++c) {
      const std::string& cell = c < cells.size() ? cells[c] : std::string();
      const std::string pad(width[c] - cell.size(), ' ');
      if (c > 0) out += "  ";
      out += c == 0 ? cell + pad : pad + cell;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(header);
  std::size_t total = 0;
  for (const auto w : width) total += w;
  out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
  for (const auto& row : rows) out += line(row);
  return out;
}

std::string join(const std::vector<std::string>& items, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string eval_table(const std::vector<NamedEval>& evaluations) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : evaluations) {
    rows.push_back({e.name, std::to_string(e.report.n_samples), fixed(100.0 * e.report.error_rate, 1),
                    fixed(e.report.gbs, 3), fixed(e.report.bcm, 3), fixed(e.report.aupr, 3)});
  }
  return table({"data", "n", "error(%)", "GBS", "BCM", "AUPR"}, rows);
}

}  // namespace

std::string render_simulation_table(const ReplicateSummary& summary) {
  std::vector<std::string> header = {"method (size)"};
  for (const auto& p : summary.planted) header.push_back(p.gene + "(%)");
  for (const char* h : {"error(%)", "GBS", "BCM", "AUPR"}) header.push_back(h);
  std::vector<std::vector<std::string>> rows;
  for (const auto& m : summary.methods) {
    const std::string name = m.method == "weighted" ? "weighted SAMGSR" : "SAMGSR";
    std::vector<std::string> row = {name + " (" + fixed(m.mean_signature_size(), 2) + ")"};
    for (std::size_t k = 0; k < summary.planted.size(); ++k) row.push_back(fixed(m.selection_percent(k), 0));
    const EvalReport mean = m.mean_test_report();
    row.push_back(fixed(100.0 * mean.error_rate, 1));
    row.push_back(fixed(mean.gbs, 3));
    row.push_back(fixed(mean.bcm, 3));
    row.push_back(fixed(mean.aupr, 3));
    rows.push_back(std::move(row));
  }
  std::string out = table(header, rows);
  out += "replicates: " + std::to_string(summary.replicates) + "\n";
  for (std::size_t k = 0; k < summary.planted.size(); ++k) {
    out += summary.planted[k].gene + ": coefficient " + fixed(summary.planted[k].coefficient, 2) + ", degree " +
           std::to_string(summary.planted_degrees[k]) + ", normalized weight " +
           fixed(summary.planted_weights[k], 3) + "\n";
  }
  return out;
}

std::string render_text(const RunReport& report) {
  std::string out = "samgsr " + report.software_version + "  " + report.command + "  config " +
                    report.config_fingerprint + "\n";

  if (report.pvalues) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : report.pvalues->rows) {
      rows.push_back({r.set_name, std::to_string(r.size), sci(r.observed), fixed(r.p_value, 4)});
    }
    out += "\nGene set p-values\n" + table({"set", "size", "SAMGS", "p"}, rows);
  }
  if (report.tuning) {
    const auto& t = *report.tuning;
    std::vector<std::vector<std::string>> rows;
    for (std::size_t g = 0; g < t.grid.size(); ++g) {
      rows.push_back({fixed(t.grid[g], 2), std::to_string(t.misclassified[g]), fixed(100.0 * t.cv_error[g], 1),
                      fixed(t.mean_signature_size[g], 2), std::to_string(t.empty_signature_folds[g]),
                      g == t.chosen_index ? "*" : ""});
    }
    out += "\nThreshold tuning (" + std::to_string(t.folds) + "-fold)\n" +
           table({"c*", "errors", "error(%)", "mean size", "empty folds", "chosen"}, rows);
  }
  if (report.selection) {
    const auto& s = *report.selection;
    std::vector<std::vector<std::string>> traces;
    for (const auto& t : s.traces) {
      std::vector<std::string> cs;
      for (const double c : t.c_values) cs.push_back(fixed(c, 3));
      traces.push_back({t.set_name, std::to_string(t.ordered_genes.size()), std::to_string(t.core.size()),
                        t.exhausted ? "yes" : "no", join(cs, " ")});
    }
    out += "\nReductions (screened sets)\n" + table({"set", "size", "core", "exhausted", "c_k"}, traces);
    std::vector<std::vector<std::string>> genes;
    for (const auto& g : s.signature.genes) {
      genes.push_back({g.gene, fixed(g.statistic, 4), join(g.source_sets)});
    }
    out += "\nSignature (" + std::to_string(s.signature.size()) + " genes)\n" +
           table({"gene", "statistic", "sets"}, genes);
  }
  if (report.model) {
    const auto& m = *report.model;
    out += "\nModel: " + std::to_string(m.genes.size()) + " genes, positive class '" + m.positive_class +
           "', intercept " + fixed(m.intercept, 4) + ", calibration (" + fixed(m.calibration_slope, 4) + ", " +
           fixed(m.calibration_offset, 4) + ")\n";
  }
  if (!report.evaluations.empty()) out += "\nPerformance\n" + eval_table(report.evaluations);
  if (report.stability) {
    out += "\nStability over " + std::to_string(report.stability->k) + " runs\n" +
           table({"level", "rand index"}, {{"gene", fixed(report.stability->rand_gene, 4)},
                                           {"pathway", fixed(report.stability->rand_pathway, 4)}});
  }
  if (report.simulation) out += "\nReplicate study\n" + render_simulation_table(*report.simulation);
  if (report.weights) {
    const auto& w = *report.weights;
    out += "\nConnectivity weights (" + w.normalization + ")\n";
    out += "edges read " + std::to_string(w.graph.input_pairs) + ", duplicates " +
           std::to_string(w.graph.duplicate_edges) + ", self-loops " + std::to_string(w.graph.self_loops) +
           ", outside universe " + std::to_string(w.graph.dropped_edges) + "\n";
    if (w.setcount_spearman) {
      out += "Spearman(set count, weight) = " + fixed(*w.setcount_spearman, 4) + "\n";
    }
    std::vector<std::size_t> order(w.raw.gene_ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return w.raw.values[a] > w.raw.values[b]; });
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < order.size() && i < 20; ++i) {
      rows.push_back({w.raw.gene_ids[order[i]], fixed(w.raw.values[order[i]], 0),
                      fixed(w.normalized.values[order[i]], 4)});
    }
    out += table({"gene", "w", "normalized"}, rows);
    if (order.size() > 20) out += "(top 20 of " + std::to_string(order.size()) + "; full list in the JSON report)\n";
  }
  if (!report.warnings.empty()) {
    out += "\nWarnings\n";
    for (const auto& w : report.warnings) out += "- " + w + "\n";
  }
  return out;
}

}  // namespace samgsr
