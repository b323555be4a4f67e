#include "mlink/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "mlink/crosslayer.hpp"
#include "mlink/error.hpp"
#include "mlink/hash.hpp"
#include "mlink/io.hpp"
#include "mlink/parallel.hpp"

namespace mlink {

namespace {

std::vector<std::size_t> sorted_by_score(std::span<const LabeledScore> scores, bool descending) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return descending ? scores[a].score > scores[b].score : scores[a].score < scores[b].score;
  });
  return idx;
}

void check_scores(std::span<const LabeledScore> scores) {
  std::size_t pos = 0;
  for (const auto& s : scores) {
    if (!std::isfinite(s.score)) throw ParameterError("AUROC needs finite scores");
    pos += s.positive ? 1 : 0;
  }
  if (pos == 0 || pos == scores.size())
    throw ParameterError("AUROC needs at least one positive and one negative");
}

void summarize(EvalReport& report) {
  const auto values = report.aurocs();
  const double n = static_cast<double>(values.size());
  report.mean = report.std_dev = report.std_error = 0.0;
  if (values.empty()) return;
  report.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - report.mean) * (v - report.mean);
    report.std_dev = std::sqrt(ss / (n - 1.0));
    report.std_error = report.std_dev / std::sqrt(n);
  }
}

struct SnapshotTask {
  SnapshotId t = 0;
  Window window;
  CandidateSet candidates;
  std::vector<char> positive;
  std::vector<char> keep;  // sampled-in candidates
  bool skip = false;
};

SnapshotTask prepare(const MultiplexSeries& series, LayerId target, SnapshotId t, std::size_t T,
                     CandidatePolicy policy, const EvalOptions& options) {
  SnapshotTask task;
  task.t = t;
  task.window = prediction_window(series, t, T);
  task.candidates = candidate_pairs(series, target, task.window, policy);
  const auto& truth = series.snapshot(target, t);
  const auto pairs = task.candidates.pairs();
  task.positive.resize(pairs.size());
  task.keep.resize(pairs.size(), 1);
  const std::uint64_t base = hash_combine(options.seed ^ 0x5eed5eedULL, t);
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const bool p = truth.has_edge(pairs[i].src, pairs[i].dst) || truth.has_edge(pairs[i].dst, pairs[i].src);
    task.positive[i] = p;
    if (!p && options.negative_sample_ratio < 1.0) {
      const double u = unit_interval(hash_combine(base, (std::uint64_t{pairs[i].src} << 32) | pairs[i].dst));
      task.keep[i] = u < options.negative_sample_ratio;
    }
    if (task.keep[i]) (p ? pos : neg) += 1;
  }
  task.skip = pos == 0 || neg == 0;
  return task;
}

SnapshotEval evaluate_scores(const SnapshotTask& task, std::span<const double> scores,
                             bool keep_roc) {
  if (scores.size() != task.candidates.size())
    throw InvariantError("scorer returned the wrong number of scores");
  std::vector<LabeledScore> labeled;
  labeled.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (task.keep[i]) labeled.push_back({scores[i], task.positive[i] != 0});
  SnapshotEval e;
  e.t = task.t;
  for (const auto& l : labeled) (l.positive ? e.positives : e.negatives) += 1;
  e.auroc = auroc(labeled);
  if (keep_roc) e.roc = roc_curve(labeled);
  return e;
}

std::vector<SnapshotId> eval_snapshots(const MultiplexSeries& series, std::size_t T) {
  if (T < 1) throw ParameterError("window length T must be at least 1");
  if (series.snapshot_count() <= T + 1)
    throw ParameterError("moving-window evaluation needs more than T + 1 snapshots");
  std::vector<SnapshotId> ts;
  for (std::size_t t = T + 1; t < series.snapshot_count(); ++t) ts.push_back(static_cast<SnapshotId>(t));
  return ts;
}

}  // namespace

double auroc(std::span<const LabeledScore> scores) {
  check_scores(scores);
  const auto idx = sorted_by_score(scores, false);
  // Twice the mid-rank keeps the rank sum in exact integer arithmetic.
  std::int64_t rank_sum2 = 0;
  std::int64_t n_pos = 0;
  const std::int64_t n = static_cast<std::int64_t>(idx.size());
  std::int64_t a = 0;
  while (a < n) {
    std::int64_t b = a + 1;
    while (b < n && scores[idx[b]].score == scores[idx[a]].score) ++b;
    const std::int64_t mid2 = (a + 1) + b;
    for (std::int64_t i = a; i < b; ++i)
      if (scores[idx[i]].positive) {
        rank_sum2 += mid2;
        ++n_pos;
      }
    a = b;
  }
  const std::int64_t n_neg = n - n_pos;
  const double u2 = static_cast<double>(rank_sum2 - n_pos * (n_pos + 1));
  return u2 / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::vector<RocPoint> roc_curve(std::span<const LabeledScore> scores) {
  check_scores(scores);
  const auto idx = sorted_by_score(scores, true);
  double pos = 0.0, neg = 0.0;
  for (const auto& s : scores) (s.positive ? pos : neg) += 1.0;
  std::vector<RocPoint> roc{{0.0, 0.0}};
  double tp = 0.0, fp = 0.0;
  std::size_t a = 0;
  while (a < idx.size()) {
    std::size_t b = a;
    while (b < idx.size() && scores[idx[b]].score == scores[idx[a]].score) {
      (scores[idx[b]].positive ? tp : fp) += 1.0;
      ++b;
    }
    roc.push_back({fp / neg, tp / pos});
    a = b;
  }
  return roc;
}

std::vector<double> EvalReport::aurocs() const {
  std::vector<double> v;
  v.reserve(snapshots.size());
  for (const auto& s : snapshots) v.push_back(s.auroc);
  return v;
}

EvalReport moving_window_eval(const MultiplexSeries& series, LayerId target,
                              const PredictorSpec& spec, const EvalOptions& options) {
  std::vector<PredictorSpec> one{spec};
  return evaluate_variants(series, target, one, options).front();
}

EvalReport moving_window_eval(const MultiplexSeries& series, LayerId target, std::size_t T,
                              CandidatePolicy policy, const std::string& name,
                              const Scorer& scorer, const EvalOptions& options) {
  if (target >= series.layer_count()) throw ParameterError("target layer out of range");
  const auto ts = eval_snapshots(series, T);
  std::vector<std::optional<SnapshotEval>> results(ts.size());
  parallel_for(ts.size(), options.threads, [&](std::size_t i) {
    const auto task = prepare(series, target, ts[i], T, policy, options);
    if (task.skip) return;
    const auto scores = scorer(task.t, task.window, task.candidates);
    results[i] = evaluate_scores(task, scores, options.keep_roc);
  });
  EvalReport report;
  report.variant = name;
  report.target = target;
  report.T = T;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (results[i]) {
      report.snapshots.push_back(std::move(*results[i]));
    } else {
      report.skipped.push_back(ts[i]);
    }
  }
  summarize(report);
  return report;
}

std::vector<EvalReport> evaluate_variants(const MultiplexSeries& series, LayerId target,
                                          std::span<const PredictorSpec> specs,
                                          const EvalOptions& options) {
  if (specs.empty()) throw ParameterError("no variants to evaluate");
  if (target >= series.layer_count()) throw ParameterError("target layer out of range");
  const std::size_t T = specs.front().decay.window;
  const CandidatePolicy policy = specs.front().policy;
  for (const auto& s : specs) {
    s.validate();
    if (s.decay.window != T || s.policy != policy)
      throw ParameterError("variants evaluated together must share T and the candidate policy");
    if (s.policy == CandidatePolicy::kExplicit)
      throw ParameterError("moving-window evaluation derives candidates per snapshot");
  }
  const auto ts = eval_snapshots(series, T);
  std::vector<std::vector<std::optional<SnapshotEval>>> results(
      specs.size(), std::vector<std::optional<SnapshotEval>>(ts.size()));
  const bool parallel_snapshots = ts.size() > 1;
  parallel_for(ts.size(), parallel_snapshots ? options.threads : 1u, [&](std::size_t i) {
    const auto task = prepare(series, target, ts[i], T, policy, options);
    if (task.skip) return;
    for (std::size_t v = 0; v < specs.size(); ++v) {
      auto spec = specs[v];
      spec.metric_options.threads = parallel_snapshots ? 1u : options.threads;
      const auto prediction = predict(series, target, task.t, spec, task.candidates);
      const auto scores = prediction.scores.dense(task.candidates.pairs());
      results[v][i] = evaluate_scores(task, scores, options.keep_roc);
    }
  });

  std::vector<EvalReport> reports;
  for (std::size_t v = 0; v < specs.size(); ++v) {
    EvalReport report;
    report.variant = specs[v].name();
    report.target = target;
    report.T = T;
    report.theta = specs[v].decay.theta;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (results[v][i]) {
        report.snapshots.push_back(std::move(*results[v][i]));
      } else {
        report.skipped.push_back(ts[i]);
      }
    }
    summarize(report);
    reports.push_back(std::move(report));
  }
  return reports;
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ParameterError("paired t-test needs equal-length samples");
  if (a.size() < 2) throw ParameterError("paired t-test needs at least two pairs");
  const double n = static_cast<double>(a.size());
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  TTestResult r;
  r.df = a.size() - 1;
  if (sd == 0.0) {
    if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) return r;
    throw ParameterError("paired t-test is degenerate: differences have zero variance");
  }
  r.t = mean / (sd / std::sqrt(n));
  const boost::math::students_t dist(static_cast<double>(r.df));
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  return r;
}

OverlapMatrix overlap_matrix(const MultiplexSeries& series, Window window) {
  check_window(series, window);
  OverlapMatrix m;
  m.layers = series.layer_count();
  std::vector<std::vector<std::uint64_t>> sets;
  for (LayerId l = 0; l < m.layers; ++l) sets.push_back(distinct_pairs(series, l, window));
  m.counts.assign(m.layers * m.layers, 0);
  m.ratios.assign(m.layers * m.layers, 0.0);
  for (LayerId i = 0; i < m.layers; ++i)
    for (LayerId j = 0; j < m.layers; ++j) {
      std::vector<std::uint64_t> common;
      std::set_intersection(sets[i].begin(), sets[i].end(), sets[j].begin(), sets[j].end(),
                            std::back_inserter(common));
      m.counts[i * m.layers + j] = common.size();
      m.ratios[i * m.layers + j] =
          sets[i].empty() ? 0.0 : static_cast<double>(common.size()) / static_cast<double>(sets[i].size());
    }
  return m;
}

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ParameterError("quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<InteractionGroup> interaction_stats(const MultiplexSeries& series, LayerId target) {
  if (target >= series.layer_count()) throw ParameterError("target layer out of range");
  std::vector<InteractionGroup> out;
  if (series.snapshot_count() == 0) return out;
  const Window all{0, static_cast<SnapshotId>(series.snapshot_count() - 1)};
  std::vector<std::vector<std::uint64_t>> sets;
  for (LayerId l = 0; l < series.layer_count(); ++l) sets.push_back(distinct_pairs(series, l, all));
  const auto weights = window_union(series, target, all).edges();

  std::vector<double> on_all, fewer;
  for (const auto& e : weights) {
    const auto key = pack_pair(e.src, e.dst);
    bool everywhere = true;
    for (const auto& s : sets) everywhere = everywhere && std::binary_search(s.begin(), s.end(), key);
    (everywhere ? on_all : fewer).push_back(e.weight);
  }
  auto group = [&](const char* name, std::vector<double>& v) {
    if (v.empty()) return;
    std::sort(v.begin(), v.end());
    out.push_back({name, v.size(), v.front(), quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75),
                   v.back()});
  };
  group("all_layers", on_all);
  group("fewer_layers", fewer);
  return out;
}

void write_report_json(std::ostream& out, const EvalReport& report, const Manifest& manifest) {
  nlohmann::ordered_json j;
  j["variant"] = report.variant;
  j["target_layer"] = report.target;
  j["T"] = report.T;
  j["theta"] = report.theta;
  auto per = nlohmann::ordered_json::array();
  auto detail = nlohmann::ordered_json::array();
  for (const auto& s : report.snapshots) {
    per.push_back(s.auroc);
    detail.push_back({{"t", s.t}, {"auroc", s.auroc}, {"positives", s.positives}, {"negatives", s.negatives}});
  }
  j["per_snapshot_auroc"] = per;
  j["mean"] = report.mean;
  j["std"] = report.std_dev;
  j["std_error"] = report.std_error;
  j["skipped"] = report.skipped;
  j["snapshots"] = detail;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : manifest) m[k] = v;
  j["manifest"] = m;
  out << j.dump(2) << '\n';
}

void write_roc_csv(std::ostream& out, std::span<const RocPoint> roc) {
  out << "fpr,tpr\n";
  for (const auto& p : roc) out << format_double(p.fpr) << ',' << format_double(p.tpr) << '\n';
}

void write_overlap_csv(std::ostream& out, const OverlapMatrix& matrix) {
  out << "layer_i,layer_j,overlap_count,ratio\n";
  for (LayerId i = 0; i < matrix.layers; ++i)
    for (LayerId j = 0; j < matrix.layers; ++j)
      out << i << ',' << j << ',' << matrix.count(i, j) << ',' << format_double(matrix.ratio(i, j)) << '\n';
}

void write_interaction_csv(std::ostream& out, std::span<const InteractionGroup> groups) {
  out << "group,count,min,q1,median,q3,max\n";
  for (const auto& g : groups)
    out << g.group << ',' << g.count << ',' << format_double(g.min) << ',' << format_double(g.q1) << ','
        << format_double(g.median) << ',' << format_double(g.q3) << ',' << format_double(g.max) << '\n';
}

}  // namespace mlink
