#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mlink/aggregate.hpp"
#include "mlink/crosslayer.hpp"
#include "mlink/error.hpp"
#include "mlink/eval.hpp"
#include "mlink/io.hpp"
#include "mlink/pipeline.hpp"
#include "mlink/synthgen.hpp"

namespace mlink::cli {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<Metric> parse_metrics(const std::string& text) {
  if (text == "all") return {kAllMetrics.begin(), kAllMetrics.end()};
  std::vector<Metric> out;
  for (const auto& name : split_list(text)) {
    auto m = parse_metric(name);
    if (!m) throw ParameterError("unknown metric '" + name + "' (expected cn,jc,pa,aa,ra,pr,ipd,pcf)");
    out.push_back(*m);
  }
  if (out.empty()) throw ParameterError("empty metric list");
  return out;
}

NeighborMode parse_mode(const std::string& text) {
  if (text == "undirected") return NeighborMode::kUndirected;
  if (text == "out") return NeighborMode::kOut;
  if (text == "in") return NeighborMode::kIn;
  throw ParameterError("unknown neighbour mode '" + text + "'");
}

std::string file_safe(std::string name) {
  for (auto& c : name)
    if (c == ':' || c == '/') c = '-';
  return name;
}

std::string fixed4(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << v;
  return s.str();
}

/// Flags shared by predict and evaluate.
struct SpecFlags {
  std::size_t T = 3;
  double theta = 0.4;
  std::string metrics = "all";
  std::string candidates = "active-nodes-only";
  std::string mode = "undirected";
  std::string path_cost = "weight";
  std::string reweight_scope = "window";
  std::size_t pair_budget = 20'000'000;
  std::uint64_t seed = 0;

  void add_to(CLI::App& app) {
    app.add_option("--T", T, "Window length T (snapshots t-T..t-1)")->capture_default_str();
    app.add_option("--theta", theta, "Decay smoothing weight in [0,1]")->capture_default_str();
    app.add_option("--metrics", metrics, "Comma-separated metrics (cn,jc,pa,aa,ra,pr,ipd,pcf) or 'all'")
        ->capture_default_str();
    app.add_option("--candidates", candidates,
                   "Candidate policy: all-non-edges, active-nodes-only or explicit")
        ->capture_default_str();
    app.add_option("--mode", mode, "Neighbourhood: undirected, out or in")->capture_default_str();
    app.add_option("--path-cost", path_cost, "Path cost for ipd: weight or inverse-weight")
        ->capture_default_str();
    app.add_option("--reweight-scope", reweight_scope,
                   "Likelihood model per window or per snapshot (hybrid only)")
        ->capture_default_str();
    app.add_option("--pair-budget", pair_budget, "Maximum number of candidate pairs")
        ->capture_default_str();
    app.add_option("--seed", seed, "Seed for every random choice")->capture_default_str();
  }

  PredictorSpec base(unsigned threads) const {
    PredictorSpec spec;
    spec.decay.window = T;
    spec.decay.theta = theta;
    spec.decay.validate();
    spec.metrics = parse_metrics(metrics);
    auto policy = parse_policy(candidates);
    if (!policy) throw ParameterError("unknown candidate policy '" + candidates + "'");
    spec.policy = *policy;
    spec.metric_options.mode = parse_mode(mode);
    if (path_cost == "weight") {
      spec.metric_options.path_cost = PathCost::kWeight;
    } else if (path_cost == "inverse-weight") {
      spec.metric_options.path_cost = PathCost::kInverseWeight;
    } else {
      throw ParameterError("unknown path cost '" + path_cost + "'");
    }
    if (reweight_scope == "window") {
      spec.reweight_scope = ReweightScope::kWindow;
    } else if (reweight_scope == "snapshot") {
      spec.reweight_scope = ReweightScope::kSnapshot;
    } else {
      throw ParameterError("unknown reweight scope '" + reweight_scope + "'");
    }
    spec.pair_budget = pair_budget;
    spec.seed = seed;
    spec.metric_options.threads = threads;
    return spec;
  }
};

std::vector<PairKey> read_pairs(const std::string& path, const LabelDictionary& labels) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::vector<PairKey> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#' || (line_no == 1 && line == "src,dst")) continue;
    auto fields = split_list(line);
    if (fields.size() != 2) throw InputError("expected 'src,dst'", line_no);
    auto a = labels.find(fields[0]);
    auto b = labels.find(fields[1]);
    if (!a || !b) throw InputError("unknown node label in pair file", line_no);
    pairs.push_back({*a, *b});
  }
  return pairs;
}

void print_summary(std::ostream& out, const IngestSummary& s) {
  out << "layer,nodes,edges,snapshots\n";
  for (const auto& l : s.layers)
    out << l.layer << ',' << l.nodes << ',' << l.edges << ',' << l.active_snapshots << '\n';
  out << "# total nodes=" << s.nodes << " snapshots=" << s.snapshots << " rows=" << s.rows
      << " merged_duplicates=" << s.merged_duplicates << " dropped_self_loops=" << s.dropped_self_loops
      << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multilayer link prediction: ingest, predict, evaluate, generate"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = machine parallelism); outputs do not depend on it");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a CSV edge list and write the canonical dataset");
  std::string ingest_in, ingest_out;
  ingest_cmd->add_option("--input", ingest_in, "Input CSV (t,layer,src,dst[,weight])")->required();
  ingest_cmd->add_option("--out", ingest_out, "Canonical CSV output")->required();

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Rank candidate links of a target layer at snapshot t");
  std::string pred_data, pred_variant = "hybrid", pred_out, pred_tally, pred_likelihoods, pred_pairs;
  LayerId pred_target = 0;
  SnapshotId pred_t = 0;
  std::size_t pred_top = 0;
  SpecFlags pred_flags;
  predict_cmd->add_option("--data", pred_data, "Dataset CSV")->required();
  predict_cmd->add_option("--target", pred_target, "Target layer")->required();
  predict_cmd->add_option("--t", pred_t, "Snapshot to predict (uses t-T..t-1)")->required();
  predict_cmd->add_option("--variant", pred_variant,
                          "hybrid, likelihood+rank, decay+rank, likelihood-only, rank-only, single:<m>, "
                          "average-agg, entropy-agg, multilayer:<m>, oracle, random")
      ->capture_default_str();
  predict_cmd->add_option("--out", pred_out, "Ranked predictions CSV (src,dst,score)")->required();
  predict_cmd->add_option("--tally", pred_tally, "Also write the Borda tally CSV");
  predict_cmd->add_option("--likelihoods", pred_likelihoods, "Also write the layer likelihood CSV");
  predict_cmd->add_option("--pairs", pred_pairs, "Explicit candidate pairs CSV (src,dst)");
  predict_cmd->add_option("--top", pred_top, "Keep only the best K rows (0 = all)");
  pred_flags.add_to(*predict_cmd);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Moving-window AUROC evaluation of one or more variants");
  std::string eval_data, eval_variants = "hybrid", eval_out;
  LayerId eval_target = 0;
  double eval_negative_ratio = 1.0;
  bool eval_roc = false;
  SpecFlags eval_flags;
  eval_cmd->add_option("--data", eval_data, "Dataset CSV")->required();
  eval_cmd->add_option("--target", eval_target, "Target layer")->required();
  eval_cmd->add_option("--variants", eval_variants, "Comma-separated variants, or 'table' for every row")
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_out, "Output directory")->required();
  eval_cmd->add_option("--negative-ratio", eval_negative_ratio,
                       "Fraction of negatives kept per snapshot (1 = all)")
      ->capture_default_str();
  eval_cmd->add_flag("--roc", eval_roc, "Write per-snapshot ROC curves");
  eval_flags.add_to(*eval_cmd);

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic coevolving multiplex series");
  GenParams gen;
  std::string gen_out;
  gen_cmd->add_option("--n", gen.nodes, "Nodes")->capture_default_str();
  gen_cmd->add_option("--layers", gen.layers, "Layers")->capture_default_str();
  gen_cmd->add_option("--snapshots", gen.snapshots, "Snapshots")->capture_default_str();
  gen_cmd->add_option("--edges", gen.edges_per_snapshot, "Edge draws per layer per snapshot")
      ->capture_default_str();
  gen_cmd->add_option("--rho", gen.rho, "Cross-layer copy probability in [0,1]")->capture_default_str();
  gen_cmd->add_option("--gamma", gen.gamma, "Attachment exponent >= 0")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--memory", gen.memory, "Earlier snapshots counted in degree (0 = all history)")
      ->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output CSV")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  }

  try {
    if (*ingest_cmd) {
      const auto result = ingest_file(ingest_in);
      auto file = open_output(ingest_out);
      write_canonical(file, result.series);
      print_summary(out, result.summary);
      return kOk;
    }

    if (*gen_cmd) {
      const auto series = generate(gen);
      auto file = open_output(gen_out);
      write_canonical(file, series);
      print_summary(out, summarize(series));
      return kOk;
    }

    if (*predict_cmd) {
      const auto data = ingest_file(pred_data);
      const auto& series = data.series;
      if (pred_target >= series.layer_count())
        throw ParameterError("target layer " + std::to_string(pred_target) + " not in dataset (" +
                             std::to_string(series.layer_count()) + " layers)");
      auto spec = PredictorSpec::from_name(pred_variant, pred_flags.base(threads));
      if (!pred_pairs.empty()) {
        spec.explicit_pairs = read_pairs(pred_pairs, series.labels());
        spec.policy = CandidatePolicy::kExplicit;
      } else if (spec.policy == CandidatePolicy::kExplicit) {
        throw ParameterError("--candidates explicit needs --pairs");
      }
      const auto prediction = predict(series, pred_target, pred_t, spec);

      RankedList ranked = prediction.ranked;
      if (pred_top > 0 && ranked.order.size() > pred_top) {
        ranked.order.resize(pred_top);
        ranked.scores.resize(pred_top);
      }
      auto file = open_output(pred_out);
      write_manifest(file, run_manifest(spec, pred_target, pred_t, dataset_hash(series)));
      write_scores(file, ranked, series.labels());

      if (!pred_tally.empty()) {
        if (!prediction.borda) throw ParameterError("variant '" + spec.name() + "' has no Borda tally");
        auto tally = open_output(pred_tally);
        write_tally(tally, *prediction.borda, series.labels());
      }
      if (!pred_likelihoods.empty()) {
        auto lk = open_output(pred_likelihoods);
        if (prediction.likelihoods) {
          write_likelihoods(lk, *prediction.likelihoods);
        } else {
          write_likelihoods(lk, layer_likelihoods(series, pred_target, prediction.window));
        }
      }
      out << "wrote " << ranked.order.size() << " of " << prediction.candidates.size()
          << " candidates to " << pred_out << '\n';
      return kOk;
    }

    if (*eval_cmd) {
      const auto data = ingest_file(eval_data);
      const auto& series = data.series;
      if (eval_target >= series.layer_count())
        throw ParameterError("target layer " + std::to_string(eval_target) + " not in dataset (" +
                             std::to_string(series.layer_count()) + " layers)");
      const auto base = eval_flags.base(threads);
      if (base.policy == CandidatePolicy::kExplicit)
        throw ParameterError("evaluate does not take explicit candidates");
      std::vector<PredictorSpec> specs;
      if (eval_variants == "table") {
        specs = comparison_rows(base);
      } else {
        for (const auto& name : split_list(eval_variants)) specs.push_back(PredictorSpec::from_name(name, base));
      }
      if (specs.empty()) throw ParameterError("no variants given");

      EvalOptions options;
      options.negative_sample_ratio = eval_negative_ratio;
      options.seed = base.seed;
      options.threads = threads;
      options.keep_roc = eval_roc;
      if (!(eval_negative_ratio > 0.0)) throw ParameterError("--negative-ratio must be > 0");
      const auto reports = evaluate_variants(series, eval_target, specs, options);

      namespace fs = std::filesystem;
      std::error_code ec;
      fs::create_directories(eval_out, ec);
      if (ec) throw InputError("cannot create '" + eval_out + "': " + ec.message());
      const fs::path dir(eval_out);
      const auto hash = dataset_hash(series);

      for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        const auto stem = file_safe(r.variant);
        auto json = open_output((dir / (stem + ".json")).string());
        write_report_json(json, r, run_manifest(specs[i], eval_target, std::nullopt, hash));
        if (eval_roc) {
          for (const auto& s : r.snapshots) {
            auto roc = open_output((dir / (stem + "_roc_t" + std::to_string(s.t) + ".csv")).string());
            write_roc_csv(roc, s.roc);
          }
        }
      }
      const Window whole{0, static_cast<SnapshotId>(series.snapshot_count() == 0 ? 0 : series.snapshot_count() - 1)};
      if (series.snapshot_count() > 0) {
        auto ov = open_output((dir / "overlap.csv").string());
        write_overlap_csv(ov, overlap_matrix(series, whole));
      }
      {
        auto ia = open_output((dir / "interactions.csv").string());
        const auto groups = interaction_stats(series, eval_target);
        write_interaction_csv(ia, groups);
      }

      // Comparison table: first variant against each of the others.
      auto tsv = open_output((dir / "summary.tsv").string());
      const std::string first = reports.front().variant;
      tsv << "variant\tmean\tstd\tstd_error\tsnapshots\tt_vs_first\tp_vs_first\n";
      out << std::left << std::setw(18) << "variant" << std::setw(20) << "AUROC (mean ± std)"
          << std::setw(10) << "s.e." << std::setw(6) << "n" << "p vs " << first << '\n';
      for (const auto& r : reports) {
        std::string t_text = "-", p_text = "-";
        if (&r != &reports.front()) {
          try {
            const auto a = reports.front().aurocs();
            const auto b = r.aurocs();
            const auto test = paired_ttest(a, b);
            t_text = format_double(test.t);
            p_text = format_double(test.p);
          } catch (const ParameterError&) {
            // too few snapshots or constant differences
          }
        }
        tsv << r.variant << '\t' << format_double(r.mean) << '\t' << format_double(r.std_dev) << '\t'
            << format_double(r.std_error) << '\t' << r.snapshots.size() << '\t' << t_text << '\t'
            << p_text << '\n';
        out << std::left << std::setw(18) << r.variant << std::setw(20)
            << (fixed4(r.mean) + " ± " + fixed4(r.std_dev)) << std::setw(10) << fixed4(r.std_error)
            << std::setw(6) << r.snapshots.size() << (p_text == "-" ? p_text : fixed4(std::stod(p_text)))
            << '\n';
      }
      return kOk;
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kParameterError;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  } catch (const ConvergenceError& e) {
    err << "did not converge: " << e.what() << '\n';
    return kInternalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kOk;
}

}  // namespace mlink::cli
