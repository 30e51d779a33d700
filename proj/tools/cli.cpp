#include "cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "samgsr/classifier.hpp"
#include "samgsr/connectivity.hpp"
#include "samgsr/error.hpp"
#include "samgsr/io.hpp"
#include "samgsr/metrics.hpp"
#include "samgsr/parallel.hpp"
#include "samgsr/permutation.hpp"
#include "samgsr/pipeline.hpp"
#include "samgsr/random.hpp"
#include "samgsr/reduction.hpp"
#include "samgsr/report.hpp"
#include "samgsr/simgen.hpp"

namespace samgsr::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  RunConfig config;
  std::string out_dir = "samgsr-out";
  std::size_t threads = 0;
  bool quiet = false;
  bool write_design = false;
};

struct Inputs {
  ExpressionDataset dataset;
  GeneSetCollection collection;
  std::optional<ConnectivityGraph> graph;
  std::vector<std::string> warnings;
};

class ThreadScope {
 public:
  explicit ThreadScope(std::size_t threads) { set_default_threads(threads); }
  ~ThreadScope() { set_default_threads(0); }
  ThreadScope(const ThreadScope&) = delete;
  ThreadScope& operator=(const ThreadScope&) = delete;
};

SamgsrConfig samgsr_config(const RunConfig& c) {
  SamgsrConfig s;
  s.weighted = c.weighted;
  s.alpha = c.alpha;
  s.c_star = c.c_star;
  s.permutations = c.permutations;
  s.seed = c.seed;
  s.s0 = parse_s0_method(c.s0);
  s.normalization = parse_weight_normalization(c.normalization);
  s.positive_class = c.positive_class;
  return s;
}

TuningConfig tuning_config(const RunConfig& c) {
  TuningConfig t;
  if (!c.grid.empty()) t.grid = c.grid;
  t.folds = c.folds;
  t.seed = c.seed;
  t.samgsr = samgsr_config(c);
  t.classifier.lambda = c.lambda;
  return t;
}

std::string describe(const GraphBuildReport& g) {
  return "PPI: " + std::to_string(g.input_pairs) + " pairs read, " + std::to_string(g.duplicate_edges) +
         " duplicates merged, " + std::to_string(g.self_loops) + " self-loops dropped, " +
         std::to_string(g.dropped_edges) + " edges outside the gene universe dropped";
}

Inputs load_inputs(const RunConfig& c, bool with_sets) {
  Inputs in;
  in.dataset = parse_expression(c.expression_path, c.labels_path);
  if (with_sets) {
    GmtParse gmt = parse_gmt(c.gmt_path);
    in.warnings = std::move(gmt.warnings);
    RestrictedCollection restricted = restrict_collection(gmt.collection, in.dataset);
    for (const auto& name : restricted.dropped_sets) {
      in.warnings.push_back("gene set '" + name + "' has no genes in the expression data; dropped");
    }
    in.collection = std::move(restricted.collection);
  }
  if (!c.ppi_path.empty()) {
    const auto edges = parse_edges(c.ppi_path, c.ppi_header);
    GraphBuild built = build_graph(edges, in.dataset.gene_ids());
    in.warnings.push_back(describe(built.report));
    in.graph = std::move(built.graph);
  }
  return in;
}

const ConnectivityGraph* graph_for(const RunConfig& c, const Inputs& in) {
  return c.weighted && in.graph ? &*in.graph : nullptr;
}

RunReport start_report(const RunConfig& c) {
  RunReport r;
  r.command = c.command;
  r.software_version = software_version();
  r.created_at = utc_timestamp();
  r.config = c;
  r.config_fingerprint = c.fingerprint();
  return r;
}

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

RunReport run_screen(const RunConfig& c) {
  RunReport r = start_report(c);
  Inputs in = load_inputs(c, true);
  append(r.warnings, in.warnings);
  const SamgsrConfig s = samgsr_config(c);
  StatConfig stat;
  stat.positive_class = s.positive_class;
  stat.s0 = s.s0;
  stat.weighted = s.weighted;
  if (s.weighted) stat.weights = dataset_weights(in.dataset, *in.graph, s.normalization);
  const PermutationPlan plan = build_plan(in.dataset.labels(), s.permutations, s.seed);
  r.pvalues = set_pvalues(in.dataset, in.collection, plan, stat);
  const auto screened = screen_sets(*r.pvalues, s.alpha);
  r.warnings.push_back(std::to_string(screened.size()) + " of " + std::to_string(r.pvalues->rows.size()) +
                       " sets have p <= " + format_number(s.alpha));
  return r;
}

RunReport run_reduce(const RunConfig& c) {
  RunReport r = start_report(c);
  Inputs in = load_inputs(c, true);
  append(r.warnings, in.warnings);
  const SamgsrConfig s = samgsr_config(c);
  SamgsrResult result = run_samgsr(in.dataset, in.collection, graph_for(c, in), s);
  ClassifierOptions options;
  options.lambda = c.lambda;
  r.model = fit_signature_model(in.dataset, result.signature, result.positive_class, options);
  append(r.warnings, result.warnings);
  r.selection = std::move(result);
  return r;
}

RunReport run_cv(const RunConfig& c) {
  RunReport r = start_report(c);
  Inputs in = load_inputs(c, true);
  append(r.warnings, in.warnings);
  PipelineRun run = run_pipeline(in.dataset, in.collection, graph_for(c, in), tuning_config(c));
  r.evaluations.push_back({"cross-validation", evaluate(run.tuning.cv_posterior, in.dataset.labels())});
  append(r.warnings, run.selection.warnings);
  r.tuning = std::move(run.tuning);
  r.selection = std::move(run.selection);
  r.model = std::move(run.model);
  return r;
}

LinearClassifier saved_model(const std::string& path) {
  RunReport saved = load_report(path);
  if (!saved.model) throw InvalidInput("run report '" + path + "' holds no fitted model");
  return *saved.model;
}

std::string posterior_tsv(const PosteriorMatrix& p) {
  std::string text = "sample";
  for (const auto& c : p.classes) text += "\t" + c;
  text += "\n";
  char buffer[32];
  for (std::size_t i = 0; i < p.rows(); ++i) {
    text += p.sample_ids[i];
    for (const double v : p.row(i)) {
      std::snprintf(buffer, sizeof buffer, "\t%.6f", v);
      text += buffer;
    }
    text += "\n";
  }
  return text;
}

RunReport run_evaluate(const RunConfig& c, const Options& o) {
  RunReport r = start_report(c);
  const ExpressionDataset test = parse_expression(c.expression_path, c.labels_path);
  const LinearClassifier model = saved_model(c.model_path);
  PosteriorMatrix posterior = predict(model, test);
  if (!c.stage_model_path.empty()) {
    posterior = composite_four_class(posterior, predict(saved_model(c.stage_model_path), test));
    posterior.validate();
  }
  r.evaluations.push_back({"test", evaluate(posterior, test.labels())});
  append(r.warnings, r.evaluations.back().report.warnings);
  r.model = model;
  write_text((fs::path(o.out_dir) / "posteriors.tsv").string(), posterior_tsv(posterior));
  return r;
}

StudyConfig study_config(const RunConfig& c) {
  StudyConfig study;
  study.replicates = c.replicates;
  study.sim.n_train = c.n_train;
  study.sim.n_test = c.n_test;
  study.sim.universe = c.universe;
  study.sim.seed = c.seed;
  study.sim.label_model = parse_label_model(c.label_model);
  study.tuning = tuning_config(c);
  return study;
}

RunReport run_simulate(const RunConfig& c, const Options& o) {
  RunReport r = start_report(c);
  const StudyConfig study = study_config(c);
  if (o.write_design) {
    const SyntheticDesign design = synthetic_design(study.sim);
    write_gmt((fs::path(o.out_dir) / "design.gmt").string(), design.collection);
    write_edges((fs::path(o.out_dir) / "design_edges.tsv").string(), design.edges);
    const SimulatedData first =
        simulate_dataset(study.sim, design.gene_ids, derive_seed(study.sim.seed, "replicate-data", 0));
    write_expression((fs::path(o.out_dir) / "replicate1_train.tsv").string(),
                     (fs::path(o.out_dir) / "replicate1_train_labels.tsv").string(), first.train);
    write_expression((fs::path(o.out_dir) / "replicate1_test.tsv").string(),
                     (fs::path(o.out_dir) / "replicate1_test_labels.tsv").string(), first.test);
  }
  r.simulation = replicate_study(study);
  return r;
}

RunReport run_stability(const RunConfig& c) {
  RunReport r = start_report(c);
  std::vector<std::vector<std::string>> genes, pathways;
  for (const auto& path : c.report_paths) {
    const RunReport prior = load_report(path);
    if (!prior.selection) throw InvalidInput("run report '" + path + "' holds no gene selection");
    genes.push_back(prior.selection->signature.gene_names());
    pathways.push_back(prior.selection->screened_sets);
  }
  r.stability = stability(genes, pathways);
  return r;
}

RunReport run_weights(const RunConfig& c) {
  RunReport r = start_report(c);
  const auto edges = parse_edges(c.ppi_path, c.ppi_header);
  std::optional<GeneSetCollection> collection;
  std::vector<std::string> universe;
  if (!c.gmt_path.empty()) {
    GmtParse gmt = parse_gmt(c.gmt_path);
    append(r.warnings, gmt.warnings);
    collection = std::move(gmt.collection);
    universe = collection->gene_universe();
  }
  if (!c.expression_path.empty()) {
    const ExpressionDataset dataset = parse_expression(c.expression_path, c.labels_path);
    universe = dataset.gene_ids();
  }
  if (universe.empty()) {
    std::unordered_set<std::string> seen;
    for (const auto& [a, b] : edges) {
      for (const auto* g : {&a, &b}) {
        if (seen.insert(*g).second) universe.push_back(*g);
      }
    }
  }
  const GraphBuild built = build_graph(edges, universe);
  WeightsReport w;
  w.normalization = c.normalization;
  w.graph = built.report;
  w.raw = connectivity_weights(built.graph);
  w.normalized = normalize_weights(w.raw, parse_weight_normalization(c.normalization));
  for (const auto& g : universe) {
    const auto node = built.graph.index_of(g);
    if (!node || built.graph.degree(*node) == 0) ++w.missing_genes;
  }
  if (collection) w.setcount_spearman = setcount_vs_connectivity(*collection, w.raw);
  r.warnings.push_back(describe(built.report));
  r.warnings.push_back(std::to_string(w.missing_genes) + " genes have no interaction partner (w = 1)");
  r.weights = std::move(w);
  return r;
}

int exit_code(std::string_view kind) {
  if (kind == "usage") return 2;
  if (kind == "config") return 3;
  if (kind == "invalid_input") return 4;
  if (kind == "parse") return 5;
  return 1;
}

int report_error(std::string_view kind, const std::string& message, const std::string& out_dir, std::ostream& err) {
  const nlohmann::json record = {{"error", {{"kind", kind}, {"message", message}}}};
  err << record.dump() << "\n";
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!ec) {
      try {
        write_text((fs::path(out_dir) / "error.json").string(), record.dump(2) + "\n");
      } catch (const Error&) {
      }
    }
  }
  return exit_code(kind);
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out_dir, "Output directory for report.json and report.txt")->capture_default_str();
  sub->add_option("--threads", o.threads, "Worker threads (0: SAMGSR_THREADS or all cores)")->capture_default_str();
  sub->add_option("--seed", o.config.seed, "Top-level random seed")->capture_default_str();
  sub->add_flag("--quiet", o.quiet, "Do not print the text report");
}

void add_data(CLI::App* sub, Options& o) {
  sub->add_option("--expression", o.config.expression_path, "Genes x samples TSV");
  sub->add_option("--labels", o.config.labels_path, "Sample/label TSV");
  sub->add_option("--positive-class", o.config.positive_class, "Label of the positive group (default: last sorted)");
}

void add_selection(CLI::App* sub, Options& o) {
  auto& c = o.config;
  sub->add_option("--gmt", c.gmt_path, "Gene sets in GMT format");
  sub->add_option("--ppi", c.ppi_path, "Two-column PPI edge list");
  sub->add_flag("--ppi-header", c.ppi_header, "The edge list starts with a header line");
  sub->add_flag("--weighted", c.weighted, "Use connectivity-weighted statistics");
  sub->add_option("--permutations,-B", c.permutations, "Label permutations")->capture_default_str();
  sub->add_option("--s0", c.s0, "Fudge factor: median, fixed:<v> or percentile:<q>")->capture_default_str();
  sub->add_option("--normalization", c.normalization, "Weight normalization: mean-one, max-one, sqrt-mean-one")
      ->capture_default_str();
  sub->add_option("--alpha", c.alpha, "Gene set significance level (simulate: 0.5)")->capture_default_str();
}

void add_classifier(CLI::App* sub, Options& o) {
  sub->add_option("--lambda", o.config.lambda, "Classifier ridge penalty")->capture_default_str();
}

void add_tuning(CLI::App* sub, Options& o) {
  sub->add_option("--grid", o.config.grid, "Candidate c* values (comma separated)")->delimiter(',');
  sub->add_option("--folds,-K", o.config.folds, "Cross-validation folds")->capture_default_str();
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  auto& c = o.config;
  CLI::App app{"Gene set screening and reduction with optional connectivity weights", "samgsr"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", software_version());

  auto* screen = app.add_subcommand("screen", "Permutation p-values of every gene set");
  add_common(screen, o);
  add_data(screen, o);
  add_selection(screen, o);

  auto* reduce = app.add_subcommand("reduce", "Screen gene sets, reduce each to its core and fit a classifier");
  add_common(reduce, o);
  add_data(reduce, o);
  add_selection(reduce, o);
  add_classifier(reduce, o);
  reduce->add_option("--c-star", c.c_star, "Reduction threshold")->capture_default_str();

  auto* cv = app.add_subcommand("cv", "Tune c* by cross-validation, then select and fit on all samples");
  add_common(cv, o);
  add_data(cv, o);
  add_selection(cv, o);
  add_classifier(cv, o);
  add_tuning(cv, o);

  auto* eval = app.add_subcommand("evaluate", "Apply a saved model to new data and score it");
  add_common(eval, o);
  add_data(eval, o);
  eval->add_option("--model", c.model_path, "Run report holding the model (from reduce or cv)");
  eval->add_option("--stage-model", c.stage_model_path,
                   "Second binary model; predictions are combined into four composite classes");

  auto* simulate = app.add_subcommand("simulate", "Replicate study on synthetic data, weighted vs unweighted");
  add_common(simulate, o);
  add_selection(simulate, o);
  add_classifier(simulate, o);
  add_tuning(simulate, o);
  simulate->add_option("--replicates,-R", c.replicates, "Replicates")->capture_default_str();
  simulate->add_option("--n-train", c.n_train, "Training samples per replicate")->capture_default_str();
  simulate->add_option("--n-test", c.n_test, "Test samples per replicate")->capture_default_str();
  simulate->add_option("--universe", c.universe, "Synthetic gene universe size")->capture_default_str();
  simulate->add_option("--label-model", c.label_model, "bernoulli or threshold")->capture_default_str();
  simulate->add_flag("--write-design", o.write_design, "Also write the synthetic design and first replicate's data");

  auto* stab = app.add_subcommand("stability", "Rand index of signatures and screened sets over run reports");
  add_common(stab, o);
  stab->add_option("reports", c.report_paths, "Run reports (at least two)")->required();

  auto* weights = app.add_subcommand("weights", "Connectivity weights and their correlation with set membership");
  add_common(weights, o);
  weights->add_option("--ppi", c.ppi_path, "Two-column PPI edge list");
  weights->add_flag("--ppi-header", c.ppi_header, "The edge list starts with a header line");
  weights->add_option("--gmt", c.gmt_path, "Gene sets; restricts the universe and adds the membership correlation");
  add_data(weights, o);
  weights->add_option("--normalization", c.normalization, "mean-one, max-one or sqrt-mean-one")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    for (auto* sub : app.get_subcommands()) out << sub->help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::Success&) {
    out << software_version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << app.help();
    return report_error("usage", e.what(), {}, err);
  }

  CLI::App* chosen = app.get_subcommands().front();
  c.command = chosen->get_name();
  if (c.command == "simulate") {
    const TuningConfig defaults = default_study_tuning();
    if (chosen->count("--alpha") == 0) c.alpha = defaults.samgsr.alpha;
    if (chosen->count("--permutations") == 0) c.permutations = defaults.samgsr.permutations;
  }

  try {
    c.validate();
    fs::create_directories(o.out_dir);
    const ThreadScope threads(o.threads);
    RunReport report;
    if (c.command == "screen") report = run_screen(c);
    else if (c.command == "reduce") report = run_reduce(c);
    else if (c.command == "cv") report = run_cv(c);
    else if (c.command == "evaluate") report = run_evaluate(c, o);
    else if (c.command == "simulate") report = run_simulate(c, o);
    else if (c.command == "stability") report = run_stability(c);
    else report = run_weights(c);

    save_report((fs::path(o.out_dir) / "report.json").string(), report);
    const std::string text = render_text(report);
    write_text((fs::path(o.out_dir) / "report.txt").string(), text);
    if (report.weights) {
      std::string tsv = "gene\tw\tnormalized\n";
      char buffer[64];
      for (std::size_t i = 0; i < report.weights->raw.gene_ids.size(); ++i) {
        std::snprintf(buffer, sizeof buffer, "\t%.0f\t%.10g\n", report.weights->raw.values[i],
                      report.weights->normalized.values[i]);
        tsv += report.weights->raw.gene_ids[i] + buffer;
      }
      write_text((fs::path(o.out_dir) / "weights.tsv").string(), tsv);
    }
    if (!o.quiet) out << text;
    return 0;
  } catch (const Error& e) {
    return report_error(e.kind(), e.what(), o.out_dir, err);
  } catch (const fs::filesystem_error& e) {
    return report_error("io", e.what(), {}, err);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), o.out_dir, err);
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("samgsr");
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace samgsr::cli
