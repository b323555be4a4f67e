#include "mlink/metrics.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "mlink/error.hpp"
#include "mlink/parallel.hpp"

namespace mlink {

namespace {

template <typename PairFn>
ScoreMatrix score_pairs(std::string tag, const CandidateSet& pairs, unsigned threads,
                        PairFn&& fn) {
  auto keys = pairs.pairs();
  std::vector<std::vector<ScoredPair>> chunks(chunk_count(keys.size(), threads));
  parallel_chunks(keys.size(), threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& out = chunks[c];
    for (std::size_t i = begin; i < end; ++i) {
      const double s = fn(keys[i]);
      if (s != 0.0) out.push_back({keys[i], s});
    }
  });
  std::vector<ScoredPair> entries;
  for (auto& c : chunks) entries.insert(entries.end(), c.begin(), c.end());
  return ScoreMatrix(std::move(tag), std::move(entries));
}

/// Calls fn(z, w(x,z), w(y,z)) for every common neighbour z.
template <typename Fn>
void for_common(const NeighborIndex& idx, NodeId x, NodeId y, Fn&& fn) {
  auto a = idx.of(x);
  auto b = idx.of(y);
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].node < b[j].node) {
      ++i;
    } else if (b[j].node < a[i].node) {
      ++j;
    } else {
      fn(a[i].node, a[i].weight, b[j].weight);
      ++i;
      ++j;
    }
  }
}

void check_pairs(const SnapshotGraph& g, const CandidateSet& pairs) {
  for (const auto& p : pairs.pairs())
    if (p.src >= g.node_count() || p.dst >= g.node_count())
      throw ParameterError("candidate pair refers to a node outside the graph");
}

}  // namespace

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::kCommonNeighbors:
      return "cn";
    case Metric::kJaccard:
      return "jc";
    case Metric::kPreferentialAttachment:
      return "pa";
    case Metric::kAdamicAdar:
      return "aa";
    case Metric::kResourceAllocation:
      return "ra";
    case Metric::kPageRank:
      return "pr";
    case Metric::kInversePathDistance:
      return "ipd";
    case Metric::kClusteringProduct:
      return "pcf";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (auto m : kAllMetrics)
    if (metric_name(m) == name) return m;
  return std::nullopt;
}

void PageRankParams::validate() const {
  if (!(damping > 0.0 && damping < 1.0)) throw ParameterError("PageRank damping must be in (0,1)");
  if (!(tolerance > 0.0)) throw ParameterError("PageRank tolerance must be positive");
  if (max_iterations == 0) throw ParameterError("PageRank needs at least one iteration");
}

ScoreMatrix common_neighbors(const SnapshotGraph& g, const CandidateSet& pairs,
                             const MetricOptions& options) {
  check_pairs(g, pairs);
  const NeighborIndex idx(g, options.mode);
  return score_pairs("cn", pairs, options.threads, [&](PairKey p) {
    double s = 0.0;
    for_common(idx, p.src, p.dst, [&](NodeId, double wx, double wy) { s += wx + wy; });
    return s;
  });
}

ScoreMatrix jaccard(const SnapshotGraph& g, const CandidateSet& pairs,
                    const MetricOptions& options) {
  check_pairs(g, pairs);
  const NeighborIndex idx(g, options.mode);
  return score_pairs("jc", pairs, options.threads, [&](PairKey p) {
    const double denom = idx.strength(p.src) + idx.strength(p.dst);
    if (denom == 0.0) return 0.0;
    double s = 0.0;
    for_common(idx, p.src, p.dst, [&](NodeId, double wx, double wy) { s += wx + wy; });
    return s / denom;
  });
}

ScoreMatrix preferential_attachment(const SnapshotGraph& g, const CandidateSet& pairs,
                                    const MetricOptions& options) {
  check_pairs(g, pairs);
  const NeighborIndex idx(g, options.mode);
  return score_pairs("pa", pairs, options.threads,
                     [&](PairKey p) { return idx.strength(p.src) * idx.strength(p.dst); });
}

ScoreMatrix adamic_adar(const SnapshotGraph& g, const CandidateSet& pairs,
                        const MetricOptions& options) {
  check_pairs(g, pairs);
  if (options.adamic_adar_log_base != 0.0 &&
      !(options.adamic_adar_log_base > 0.0 && options.adamic_adar_log_base != 1.0))
    throw ParameterError("Adamic-Adar log base must be positive and != 1");
  const double scale =
      options.adamic_adar_log_base == 0.0 ? 1.0 : std::log(options.adamic_adar_log_base);
  const NeighborIndex idx(g, options.mode);
  return score_pairs("aa", pairs, options.threads, [&](PairKey p) {
    double s = 0.0;
    for_common(idx, p.src, p.dst, [&](NodeId z, double wx, double wy) {
      // in the directed modes z may have no neighbours of its own; such terms are dropped
      if (idx.strength(z) > 0.0) s += (wx + wy) / (std::log(1.0 + idx.strength(z)) / scale);
    });
    return s;
  });
}

ScoreMatrix resource_allocation(const SnapshotGraph& g, const CandidateSet& pairs,
                                const MetricOptions& options) {
  check_pairs(g, pairs);
  const NeighborIndex idx(g, options.mode);
  return score_pairs("ra", pairs, options.threads, [&](PairKey p) {
    double s = 0.0;
    for_common(idx, p.src, p.dst,
               [&](NodeId z, double wx, double wy) {
                 if (idx.strength(z) > 0.0) s += (wx + wy) / idx.strength(z);
               });
    return s;
  });
}

std::vector<double> weighted_pagerank(const SnapshotGraph& g, const PageRankParams& params,
                                      NeighborMode mode) {
  params.validate();
  const std::size_t n = g.node_count();
  if (n == 0) return {};
  const NeighborIndex out(g, mode);

  std::vector<double> teleport(n);
  const double total = 2.0 * g.total_weight();
  for (NodeId x = 0; x < n; ++x)
    teleport[x] = total > 0.0 ? (g.out_strength(x) + g.in_strength(x)) / total : 1.0 / n;

  const double alpha = params.damping;
  std::vector<double> pr(teleport);
  std::vector<double> next(n);
  double residual = 0.0;
  for (std::size_t iter = 0; iter < params.max_iterations; ++iter) {
    double dangling = 0.0;
    for (NodeId k = 0; k < n; ++k)
      if (out.strength(k) == 0.0) dangling += pr[k];
    for (NodeId x = 0; x < n; ++x) next[x] = (1.0 - alpha) * teleport[x] + alpha * dangling / n;
    for (NodeId k = 0; k < n; ++k) {
      const double lk = out.strength(k);
      if (lk == 0.0) continue;
      const double share = alpha * pr[k] / lk;
      for (const auto& nb : out.of(k)) next[nb.node] += share * nb.weight;
    }
    residual = 0.0;
    for (NodeId x = 0; x < n; ++x) residual += std::abs(next[x] - pr[x]);
    pr.swap(next);
    if (residual < params.tolerance) {
      double sum = 0.0;
      for (double v : pr) sum += v;
      for (double& v : pr) v /= sum;
      return pr;
    }
  }
  throw ConvergenceError("PageRank did not converge in " + std::to_string(params.max_iterations) +
                             " iterations",
                         pr, residual);
}

ScoreMatrix pagerank_product(const SnapshotGraph& g, const CandidateSet& pairs,
                             const MetricOptions& options) {
  check_pairs(g, pairs);
  const auto pr = weighted_pagerank(g, options.pagerank, options.mode);
  return score_pairs("pr", pairs, options.threads,
                     [&](PairKey p) { return pr[p.src] * pr[p.dst]; });
}

ScoreMatrix inverse_path_distance(const SnapshotGraph& g, const CandidateSet& pairs,
                                  const MetricOptions& options) {
  check_pairs(g, pairs);
  const NeighborIndex idx(g, options.mode);
  const std::size_t n = g.node_count();
  auto keys = pairs.pairs();

  // Keys are sorted, so each source's targets are contiguous.
  std::vector<std::size_t> group_start;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (i == 0 || keys[i].src != keys[i - 1].src) group_start.push_back(i);
  group_start.push_back(keys.size());
  const std::size_t groups = group_start.size() - 1;

  std::vector<std::vector<ScoredPair>> chunks(chunk_count(groups, options.threads));
  parallel_chunks(groups, options.threads, [&](std::size_t c, std::size_t gbegin, std::size_t gend) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    std::vector<char> is_target(n, 0);
    std::vector<NodeId> touched;
    using Item = std::pair<double, NodeId>;
    for (std::size_t gi = gbegin; gi < gend; ++gi) {
      const std::size_t begin = group_start[gi], end = group_start[gi + 1];
      const NodeId source = keys[begin].src;
      std::size_t remaining = 0;
      for (std::size_t i = begin; i < end; ++i)
        if (!is_target[keys[i].dst]) {
          is_target[keys[i].dst] = 1;
          ++remaining;
        }
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      dist[source] = 0.0;
      touched.push_back(source);
      heap.push({0.0, source});
      while (!heap.empty() && remaining > 0) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        if (is_target[u] == 1) {
          is_target[u] = 2;
          --remaining;
        }
        for (const auto& nb : idx.of(u)) {
          const double cost =
              options.path_cost == PathCost::kWeight ? nb.weight : 1.0 / nb.weight;
          const double nd = d + cost;
          if (nd < dist[nb.node]) {
            if (dist[nb.node] == kInf) touched.push_back(nb.node);
            dist[nb.node] = nd;
            heap.push({nd, nb.node});
          }
        }
      }
      for (std::size_t i = begin; i < end; ++i) {
        const double d = dist[keys[i].dst];
        if (d < kInf && d > 0.0) chunks[c].push_back({keys[i], 1.0 / d});
      }
      for (auto v : touched) dist[v] = kInf;
      touched.clear();
      for (std::size_t i = begin; i < end; ++i) is_target[keys[i].dst] = 0;
    }
  });
  std::vector<ScoredPair> entries;
  for (auto& c : chunks) entries.insert(entries.end(), c.begin(), c.end());
  return ScoreMatrix("ipd", std::move(entries));
}

std::vector<double> clustering_coefficients(const SnapshotGraph& g, NeighborMode mode) {
  const std::size_t n = g.node_count();
  const NeighborIndex idx(g, mode);
  const NeighborIndex skeleton(g, NeighborMode::kUndirected);
  std::vector<double> cc(n, 0.0);
  std::vector<char> mark(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    const auto row = idx.of(v);
    const double d = static_cast<double>(row.size());
    if (row.size() <= 1) continue;
    for (const auto& nb : row) mark[nb.node] = 1;
    std::size_t links = 0;
    for (const auto& u : row)
      for (const auto& w : skeleton.of(u.node))
        if (w.node > u.node && mark[w.node]) ++links;
    for (const auto& nb : row) mark[nb.node] = 0;
    cc[v] = 2.0 * static_cast<double>(links) / (d * (d - 1.0));
  }
  return cc;
}

ScoreMatrix clustering_product(const SnapshotGraph& g, const CandidateSet& pairs,
                               const MetricOptions& options) {
  check_pairs(g, pairs);
  const auto cc = clustering_coefficients(g, options.mode);
  return score_pairs("pcf", pairs, options.threads,
                     [&](PairKey p) { return cc[p.src] * cc[p.dst]; });
}

ScoreMatrix score(Metric metric, const SnapshotGraph& g, const CandidateSet& pairs,
                  const MetricOptions& options, Provenance provenance) {
  ScoreMatrix m;
  switch (metric) {
    case Metric::kCommonNeighbors:
      m = common_neighbors(g, pairs, options);
      break;
    case Metric::kJaccard:
      m = jaccard(g, pairs, options);
      break;
    case Metric::kPreferentialAttachment:
      m = preferential_attachment(g, pairs, options);
      break;
    case Metric::kAdamicAdar:
      m = adamic_adar(g, pairs, options);
      break;
    case Metric::kResourceAllocation:
      m = resource_allocation(g, pairs, options);
      break;
    case Metric::kPageRank:
      m = pagerank_product(g, pairs, options);
      break;
    case Metric::kInversePathDistance:
      m = inverse_path_distance(g, pairs, options);
      break;
    case Metric::kClusteringProduct:
      m = clustering_product(g, pairs, options);
      break;
  }
  m.set_provenance(provenance);
  return m;
}

}  // namespace mlink
