#include "mlink/pipeline.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "mlink/error.hpp"
#include "mlink/hash.hpp"
#include "mlink/io.hpp"
#include "mlink/parallel.hpp"

namespace mlink {

namespace {

constexpr std::pair<Variant, std::string_view> kVariantNames[] = {
    {Variant::kHybrid, "hybrid"},
    {Variant::kLikelihoodRank, "likelihood+rank"},
    {Variant::kDecayRank, "decay+rank"},
    {Variant::kLikelihoodOnly, "likelihood-only"},
    {Variant::kRankOnly, "rank-only"},
    {Variant::kSingleMetric, "single"},
    {Variant::kAverageAggregation, "average-agg"},
    {Variant::kEntropyAggregation, "entropy-agg"},
    {Variant::kMultilayerMetric, "multilayer"},
    {Variant::kOracle, "oracle"},
    {Variant::kRandom, "random"},
};

std::string_view variant_base_name(Variant v) {
  for (const auto& [variant, name] : kVariantNames)
    if (variant == v) return name;
  return "?";
}

bool is_multilayer_metric(Metric m) {
  return m == Metric::kCommonNeighbors || m == Metric::kJaccard ||
         m == Metric::kPreferentialAttachment || m == Metric::kAdamicAdar;
}

/// Scores every (graph, metric) combination; result[g][m].
std::vector<std::vector<ScoreMatrix>> score_grid(const std::vector<SnapshotGraph>& graphs,
                                                 const std::vector<Provenance>& provenance,
                                                 const CandidateSet& candidates,
                                                 const PredictorSpec& spec) {
  const std::size_t metrics = spec.metrics.size();
  const std::size_t tasks = graphs.size() * metrics;
  std::vector<std::vector<ScoreMatrix>> out(graphs.size(), std::vector<ScoreMatrix>(metrics));
  MetricOptions inner = spec.metric_options;
  const unsigned threads = spec.metric_options.threads;
  // Parallelise across tasks when there are several, across pairs otherwise.
  if (tasks > 1) inner.threads = 1;
  parallel_for(tasks, tasks > 1 ? threads : 1u, [&](std::size_t i) {
    const std::size_t g = i / metrics, m = i % metrics;
    out[g][m] = score(spec.metrics[m], graphs[g], candidates, inner, provenance[g]);
  });
  return out;
}

BordaResult borda_of(const std::vector<ScoreMatrix>& matrices, const CandidateSet& candidates) {
  return borda(std::span<const ScoreMatrix>(matrices), candidates);
}

ScoreMatrix borda_scores(const BordaResult& result, Provenance prov) {
  std::vector<ScoredPair> entries;
  entries.reserve(result.tally.keys.size());
  for (std::size_t i = 0; i < result.tally.keys.size(); ++i)
    if (result.tally.half_points[i] != 0)
      entries.push_back({result.tally.keys[i], static_cast<double>(result.tally.half_points[i]) / 2.0});
  return ScoreMatrix("borda", std::move(entries), prov);
}

}  // namespace

void PredictorSpec::validate() const {
  decay.validate();
  metric_options.pagerank.validate();
  const bool uses_metric_list = variant == Variant::kHybrid || variant == Variant::kLikelihoodRank ||
                                variant == Variant::kDecayRank || variant == Variant::kRankOnly ||
                                variant == Variant::kAverageAggregation ||
                                variant == Variant::kEntropyAggregation;
  if (uses_metric_list && metrics.empty()) throw ParameterError("variant needs at least one metric");
  auto sorted = metrics;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ParameterError("duplicate metric in metric list");
  if (variant == Variant::kMultilayerMetric && !is_multilayer_metric(metric))
    throw ParameterError("multilayer variants support cn, jc, pa and aa only");
  if (policy == CandidatePolicy::kExplicit && explicit_pairs.empty())
    throw ParameterError("explicit candidate policy needs pairs");
}

std::string PredictorSpec::name() const {
  std::string base(variant_base_name(variant));
  if (variant == Variant::kSingleMetric || variant == Variant::kMultilayerMetric)
    base += ":" + std::string(metric_name(metric));
  return base;
}

PredictorSpec PredictorSpec::from_name(std::string_view name) { return from_name(name, PredictorSpec{}); }

PredictorSpec PredictorSpec::from_name(std::string_view name, const PredictorSpec& base) {
  PredictorSpec spec = base;
  std::string_view head = name;
  std::string_view tail;
  if (auto colon = name.find(':'); colon != std::string_view::npos) {
    head = name.substr(0, colon);
    tail = name.substr(colon + 1);
  }
  bool found = false;
  for (const auto& [variant, vname] : kVariantNames)
    if (vname == head) {
      spec.variant = variant;
      found = true;
    }
  if (!found) throw ParameterError("unknown variant '" + std::string(name) + "'");
  const bool needs_metric =
      spec.variant == Variant::kSingleMetric || spec.variant == Variant::kMultilayerMetric;
  if (needs_metric) {
    auto m = parse_metric(tail);
    if (!m) throw ParameterError("variant '" + std::string(name) + "' needs a metric, e.g. single:cn");
    spec.metric = *m;
  } else if (!tail.empty()) {
    throw ParameterError("variant '" + std::string(head) + "' takes no metric");
  }
  return spec;
}

std::vector<PredictorSpec> comparison_rows(const PredictorSpec& base) {
  std::vector<PredictorSpec> rows;
  for (auto v : {Variant::kHybrid, Variant::kLikelihoodRank, Variant::kDecayRank,
                 Variant::kLikelihoodOnly, Variant::kRankOnly}) {
    auto s = base;
    s.variant = v;
    rows.push_back(s);
  }
  for (auto m : kAllMetrics) {
    auto s = base;
    s.variant = Variant::kSingleMetric;
    s.metric = m;
    rows.push_back(s);
  }
  for (auto v : {Variant::kAverageAggregation, Variant::kEntropyAggregation}) {
    auto s = base;
    s.variant = v;
    rows.push_back(s);
  }
  for (auto m : {Metric::kCommonNeighbors, Metric::kJaccard, Metric::kPreferentialAttachment,
                 Metric::kAdamicAdar}) {
    auto s = base;
    s.variant = Variant::kMultilayerMetric;
    s.metric = m;
    rows.push_back(s);
  }
  return rows;
}

Window prediction_window(const MultiplexSeries& series, SnapshotId t, std::size_t T) {
  if (T < 1) throw ParameterError("window length T must be at least 1");
  if (t < T) throw ParameterError("window extends before snapshot 0");
  if (t > series.snapshot_count()) throw ParameterError("snapshot t is past the end of the series");
  return {static_cast<SnapshotId>(t - T), static_cast<SnapshotId>(t - 1)};
}

CandidateSet candidate_pairs(const MultiplexSeries& series, LayerId target, Window window,
                             CandidatePolicy policy, std::span<const PairKey> pairs,
                             std::size_t budget) {
  if (target >= series.layer_count()) throw ParameterError("target layer out of range");
  check_window(series, window);
  if (policy == CandidatePolicy::kExplicit) {
    auto c = CandidateSet::from_pairs({pairs.begin(), pairs.end()});
    for (const auto& p : c.pairs())
      if (p.dst >= series.node_count()) throw ParameterError("explicit pair refers to an unknown node");
    if (c.size() > budget) throw ParameterError("explicit candidate set exceeds the pair budget");
    return c;
  }

  const auto existing = window_union(series, target, window);
  std::vector<NodeId> nodes;
  if (policy == CandidatePolicy::kActiveNodesOnly) {
    std::vector<char> active(series.node_count(), 0);
    for (LayerId l = 0; l < series.layer_count(); ++l)
      for (SnapshotId t = window.from; t <= window.to; ++t)
        for (const auto& e : series.snapshot(l, t).edges()) active[e.src] = active[e.dst] = 1;
    for (NodeId x = 0; x < series.node_count(); ++x)
      if (active[x]) nodes.push_back(x);
  } else {
    nodes.resize(series.node_count());
    for (NodeId x = 0; x < series.node_count(); ++x) nodes[x] = x;
  }
  const std::size_t k = nodes.size();
  if (k > 1 && k * (k - 1) / 2 > budget + existing.edge_count())
    throw ParameterError("candidate set of " + std::to_string(k * (k - 1) / 2) +
                         " pairs exceeds the pair budget of " + std::to_string(budget) +
                         "; use the active-nodes-only or explicit candidate policy");

  std::vector<PairKey> out;
  out.reserve(k > 1 ? k * (k - 1) / 2 : 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const NodeId x = nodes[i], y = nodes[j];
      if (existing.has_edge(x, y) || existing.has_edge(y, x)) continue;
      out.push_back({x, y});
    }
  if (out.size() > budget)
    throw ParameterError("candidate set exceeds the pair budget; use the explicit candidate policy");
  return CandidateSet::from_pairs(std::move(out));
}

Prediction predict(const MultiplexSeries& series, LayerId target, SnapshotId t,
                   const PredictorSpec& spec) {
  spec.validate();
  const Window window = prediction_window(series, t, spec.decay.window);
  auto candidates = candidate_pairs(series, target, window, spec.policy, spec.explicit_pairs,
                                    spec.pair_budget);
  return predict(series, target, t, spec, candidates);
}

Prediction predict(const MultiplexSeries& series, LayerId target, SnapshotId t,
                   const PredictorSpec& spec, const CandidateSet& candidates) {
  spec.validate();
  if (target >= series.layer_count()) throw ParameterError("target layer out of range");
  const Window window = prediction_window(series, t, spec.decay.window);
  if (candidates.empty()) throw ParameterError("empty candidate set");

  Prediction out;
  out.window = window;
  out.candidates = candidates;
  const Provenance prov{target, window};

  auto finish_borda = [&](const std::vector<ScoreMatrix>& per_metric) {
    auto result = borda_of(per_metric, candidates);
    out.scores = borda_scores(result, prov);
    out.ranked = result.ranked;
    out.borda = std::move(result);
  };
  auto decay_all = [&](const std::vector<std::vector<ScoreMatrix>>& grid) {
    std::vector<ScoreMatrix> per_metric;
    for (std::size_t m = 0; m < spec.metrics.size(); ++m) {
      std::vector<ScoreMatrix> series_m;
      for (const auto& row : grid) series_m.push_back(row[m]);
      per_metric.push_back(decay_aggregate(series_m, spec.decay.theta));
    }
    return per_metric;
  };

  switch (spec.variant) {
    case Variant::kHybrid: {
      std::vector<SnapshotGraph> graphs;
      std::vector<Provenance> provs;
      std::optional<CrossLayerModel> shared;
      if (spec.reweight_scope == ReweightScope::kWindow) shared.emplace(series, target, window);
      for (SnapshotId s = window.from; s <= window.to; ++s) {
        const auto model = shared ? *shared : CrossLayerModel(series, target, Window{s, s});
        graphs.push_back(model.reweight(series.snapshot(target, s)));
        provs.push_back({target, Window{s, s}});
      }
      if (shared) out.likelihoods = shared->likelihoods();
      finish_borda(decay_all(score_grid(graphs, provs, candidates, spec)));
      break;
    }
    case Variant::kLikelihoodRank: {
      const CrossLayerModel model(series, target, window);
      out.likelihoods = model.likelihoods();
      std::vector<SnapshotGraph> graphs{model.reweight(window_union(series, target, window))};
      finish_borda(score_grid(graphs, {prov}, candidates, spec).front());
      break;
    }
    case Variant::kDecayRank: {
      std::vector<SnapshotGraph> graphs;
      std::vector<Provenance> provs;
      for (SnapshotId s = window.from; s <= window.to; ++s) {
        graphs.push_back(series.snapshot(target, s));
        provs.push_back({target, Window{s, s}});
      }
      finish_borda(decay_all(score_grid(graphs, provs, candidates, spec)));
      break;
    }
    case Variant::kRankOnly: {
      std::vector<SnapshotGraph> graphs{window_union(series, target, window)};
      finish_borda(score_grid(graphs, {prov}, candidates, spec).front());
      break;
    }
    case Variant::kLikelihoodOnly: {
      const CrossLayerModel model(series, target, window);
      out.likelihoods = model.likelihoods();
      out.scores = likelihood_scores(model, candidates, spec.metric_options.mode);
      out.ranked = rank(out.scores, candidates);
      break;
    }
    case Variant::kSingleMetric: {
      const Window history{0, window.to};
      const auto g = binarize(window_union(series, target, history), spec.metric_options.mode);
      out.scores = score(spec.metric, g, candidates, spec.metric_options, {target, history});
      out.ranked = rank(out.scores, candidates);
      break;
    }
    case Variant::kAverageAggregation:
    case Variant::kEntropyAggregation: {
      const Window history{0, window.to};
      std::vector<SnapshotGraph> graphs;
      std::vector<Provenance> provs;
      for (LayerId l = 0; l < series.layer_count(); ++l) {
        graphs.push_back(binarize(window_union(series, l, history), spec.metric_options.mode));
        provs.push_back({l, history});
      }
      auto grid = score_grid(graphs, provs, candidates, spec);
      std::vector<ScoreMatrix> per_metric;
      for (std::size_t m = 0; m < spec.metrics.size(); ++m) {
        std::vector<ScoreMatrix> layers;
        for (const auto& row : grid) layers.push_back(row[m]);
        per_metric.push_back(spec.variant == Variant::kAverageAggregation ? average_aggregate(layers)
                                                                          : entropy_aggregate(layers));
      }
      finish_borda(per_metric);
      break;
    }
    case Variant::kMultilayerMetric: {
      const Window history{0, window.to};
      out.scores =
          multilayer_core_metric(series, history, spec.metric, candidates, spec.metric_options);
      out.ranked = rank(out.scores, candidates);
      break;
    }
    case Variant::kOracle: {
      if (t >= series.snapshot_count()) throw ParameterError("oracle needs snapshot t in the series");
      const auto& truth = series.snapshot(target, t);
      std::vector<ScoredPair> entries;
      for (const auto& p : candidates.pairs())
        if (truth.has_edge(p.src, p.dst) || truth.has_edge(p.dst, p.src)) entries.push_back({p, 1.0});
      out.scores = ScoreMatrix("oracle", std::move(entries), prov);
      out.ranked = rank(out.scores, candidates);
      break;
    }
    case Variant::kRandom: {
      std::vector<ScoredPair> entries;
      const std::uint64_t base = hash_combine(spec.seed, t);
      for (const auto& p : candidates.pairs()) {
        const double s =
            unit_interval(hash_combine(base, (std::uint64_t{p.src} << 32) | p.dst));
        if (s != 0.0) entries.push_back({p, s});
      }
      out.scores = ScoreMatrix("random", std::move(entries), prov);
      out.ranked = rank(out.scores, candidates);
      break;
    }
  }
  return out;
}

std::string_view policy_name(CandidatePolicy policy) {
  switch (policy) {
    case CandidatePolicy::kAllNonEdges:
      return "all-non-edges";
    case CandidatePolicy::kActiveNodesOnly:
      return "active-nodes-only";
    case CandidatePolicy::kExplicit:
      return "explicit";
  }
  return "?";
}

std::optional<CandidatePolicy> parse_policy(std::string_view name) {
  for (auto p : {CandidatePolicy::kAllNonEdges, CandidatePolicy::kActiveNodesOnly,
                 CandidatePolicy::kExplicit})
    if (policy_name(p) == name) return p;
  return std::nullopt;
}

Manifest run_manifest(const PredictorSpec& spec, LayerId target, std::optional<SnapshotId> t,
                      const std::string& dataset_hash) {
  Manifest m;
  m.emplace_back("variant", spec.name());
  m.emplace_back("target", std::to_string(target));
  if (t) {
    m.emplace_back("t", std::to_string(*t));
    if (*t >= spec.decay.window)
      m.emplace_back("window", std::to_string(*t - spec.decay.window) + ".." + std::to_string(*t - 1));
  }
  m.emplace_back("T", std::to_string(spec.decay.window));
  m.emplace_back("theta", format_double(spec.decay.theta));
  std::string metrics;
  for (auto metric : spec.metrics) {
    if (!metrics.empty()) metrics += ',';
    metrics += metric_name(metric);
  }
  m.emplace_back("metrics", metrics);
  m.emplace_back("candidates", std::string(policy_name(spec.policy)));
  m.emplace_back("neighbor_mode", spec.metric_options.mode == NeighborMode::kUndirected ? "undirected"
                                  : spec.metric_options.mode == NeighborMode::kOut      ? "out"
                                                                                        : "in");
  m.emplace_back("path_cost",
                 spec.metric_options.path_cost == PathCost::kWeight ? "weight" : "inverse-weight");
  m.emplace_back("reweight_scope",
                 spec.reweight_scope == ReweightScope::kWindow ? "window" : "snapshot");
  m.emplace_back("seed", std::to_string(spec.seed));
  m.emplace_back("dataset_hash", dataset_hash);
  return m;
}

void write_manifest(std::ostream& out, const Manifest& manifest) {
  for (const auto& [k, v] : manifest) out << "# " << k << '=' << v << '\n';
}

}  // namespace mlink
