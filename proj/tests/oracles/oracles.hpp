#pragma once

// Brute-force references. Each one is a direct transcription of a formula
// over dense matrices or full enumerations, sharing no code with the library
// beyond the graph and series containers used as input.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "mlink/graph.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

/// W[x][y] = weight of y as a neighbour of x under `mode`.
inline Dense adjacency(const mlink::SnapshotGraph& g, mlink::NeighborMode mode) {
  const std::size_t n = g.node_count();
  Dense w(n, std::vector<double>(n, 0.0));
  for (const auto& e : g.edges()) {
    if (mode != mlink::NeighborMode::kIn) w[e.src][e.dst] += e.weight;
    if (mode != mlink::NeighborMode::kOut) w[e.dst][e.src] += e.weight;
  }
  return w;
}

inline double strength(const Dense& w, std::size_t x) {
  double s = 0.0;
  for (double v : w[x]) s += v;
  return s;
}

inline double cn(const Dense& w, std::size_t x, std::size_t y) {
  double s = 0.0;
  for (std::size_t z = 0; z < w.size(); ++z)
    if (w[x][z] > 0 && w[y][z] > 0) s += w[x][z] + w[y][z];
  return s;
}

inline double jc(const Dense& w, std::size_t x, std::size_t y) {
  const double denom = strength(w, x) + strength(w, y);
  return denom == 0.0 ? 0.0 : cn(w, x, y) / denom;
}

inline double pa(const Dense& w, std::size_t x, std::size_t y) {
  return strength(w, x) * strength(w, y);
}

inline double aa(const Dense& w, std::size_t x, std::size_t y, double base = 0.0) {
  double s = 0.0;
  for (std::size_t z = 0; z < w.size(); ++z)
    if (w[x][z] > 0 && w[y][z] > 0 && strength(w, z) > 0) {
      double lg = std::log(1.0 + strength(w, z));
      if (base != 0.0) lg /= std::log(base);
      s += (w[x][z] + w[y][z]) / lg;
    }
  return s;
}

inline double ra(const Dense& w, std::size_t x, std::size_t y) {
  double s = 0.0;
  for (std::size_t z = 0; z < w.size(); ++z)
    if (w[x][z] > 0 && w[y][z] > 0 && strength(w, z) > 0) s += (w[x][z] + w[y][z]) / strength(w, z);
  return s;
}

/// Dense power iteration of
///   PR(x) = (1-a)·τ(x) + a·Σ_k PR(k)·W[k][x]/L(k) + a·(dangling mass)/n
/// with τ(x) = incident weight / (2·total weight), run to a fixed point.
inline std::vector<double> pagerank(const mlink::SnapshotGraph& g, mlink::NeighborMode mode,
                                    double alpha = 0.85) {
  const std::size_t n = g.node_count();
  const Dense w = adjacency(g, mode);
  Dense raw = adjacency(g, mlink::NeighborMode::kUndirected);
  double total = 0.0;
  for (const auto& e : g.edges()) total += e.weight;
  std::vector<double> tau(n);
  for (std::size_t x = 0; x < n; ++x)
    tau[x] = total > 0 ? strength(raw, x) / (2.0 * total) : 1.0 / static_cast<double>(n);
  std::vector<double> pr = tau;
  for (int iter = 0; iter < 100000; ++iter) {
    std::vector<double> next(n, 0.0);
    double dangling = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (strength(w, k) == 0.0) dangling += pr[k];
    for (std::size_t x = 0; x < n; ++x) {
      double in = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double lk = strength(w, k);
        if (lk > 0) in += pr[k] * w[k][x] / lk;
      }
      next[x] = (1 - alpha) * tau[x] + alpha * in + alpha * dangling / static_cast<double>(n);
    }
    double diff = 0.0;
    for (std::size_t x = 0; x < n; ++x) diff += std::abs(next[x] - pr[x]);
    pr = next;
    if (diff < 1e-15) break;
  }
  double sum = 0.0;
  for (double v : pr) sum += v;
  for (double& v : pr) v /= sum;
  return pr;
}

/// Floyd-Warshall over edge costs; cost = weight or 1/weight.
inline Dense shortest_paths(const Dense& w, bool inverse_cost = false) {
  const std::size_t n = w.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  Dense d(n, std::vector<double>(n, inf));
  for (std::size_t x = 0; x < n; ++x) {
    d[x][x] = 0.0;
    for (std::size_t y = 0; y < n; ++y)
      if (w[x][y] > 0) d[x][y] = inverse_cost ? 1.0 / w[x][y] : w[x][y];
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

inline double ipd_from(const Dense& dist, std::size_t x, std::size_t y) {
  const double d = dist[x][y];
  return std::isinf(d) ? 0.0 : 1.0 / d;
}

/// Minimum cost over every simple path from x to y. Exponential: tiny graphs only.
inline double ipd_all_paths(const Dense& w, std::size_t x, std::size_t y) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> seen(w.size(), 0);
  std::function<void(std::size_t, double)> walk = [&](std::size_t u, double cost) {
    if (u == y) {
      best = std::min(best, cost);
      return;
    }
    seen[u] = 1;
    for (std::size_t v = 0; v < w.size(); ++v)
      if (w[u][v] > 0 && !seen[v]) walk(v, cost + w[u][v]);
    seen[u] = 0;
  };
  walk(x, 0.0);
  return std::isinf(best) ? 0.0 : 1.0 / best;
}

/// 2·(linked neighbour pairs) / (d(d-1)); neighbours from `w`, links from the
/// undirected skeleton `skel`.
inline double clustering(const Dense& w, const Dense& skel, std::size_t v) {
  std::vector<std::size_t> nb;
  for (std::size_t u = 0; u < w.size(); ++u)
    if (w[v][u] > 0) nb.push_back(u);
  const double d = static_cast<double>(nb.size());
  if (nb.size() <= 1) return 0.0;
  std::size_t links = 0;
  for (std::size_t i = 0; i < nb.size(); ++i)
    for (std::size_t j = i + 1; j < nb.size(); ++j)
      if (skel[nb[i]][nb[j]] > 0) ++links;
  return 2.0 * static_cast<double>(links) / (d * (d - 1.0));
}

/// Borda in half points from pairwise comparisons: in each list, item i gets
/// 2 per item scored strictly lower and 1 per other item scored equally.
inline std::vector<std::int64_t> borda_half_points(const std::vector<std::vector<double>>& lists) {
  const std::size_t n = lists.empty() ? 0 : lists.front().size();
  std::vector<std::int64_t> half(n, 0);
  for (const auto& s : lists)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        if (s[i] > s[j]) half[i] += 2;
        else if (s[i] == s[j]) half[i] += 1;
      }
  return half;
}

/// Fraction of (positive, negative) pairs ordered correctly, ties 1/2.
inline double auroc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0.0;
  for (double p : pos)
    for (double q : neg) wins += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
  return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

/// Σ_{k=1..T} θ^(T-k) · v_k, oldest first.
inline double decay(const std::vector<double>& values, double theta) {
  const std::size_t T = values.size();
  double s = 0.0;
  for (std::size_t k = 1; k <= T; ++k) {
    const double e = static_cast<double>(T - k);
    s += (e == 0.0 ? 1.0 : std::pow(theta, e)) * values[k - 1];
  }
  return s;
}

// Likelihood assignment and edge weighting, step by step in exact arithmetic.

using Rational = boost::rational<std::int64_t>;

struct Alg1 {
  std::map<mlink::LayerId, Rational> likelihood;  ///< per other layer
  std::vector<Rational> rate;                     ///< per node
  std::map<std::pair<mlink::NodeId, mlink::NodeId>, Rational> weight;  ///< target edges
  std::map<std::pair<mlink::NodeId, mlink::NodeId>, double> weight_fp;  ///< same, in doubles
};

inline Alg1 alg1(const mlink::MultiplexSeries& series, mlink::LayerId target, mlink::Window window) {
  using Pair = std::pair<mlink::NodeId, mlink::NodeId>;
  const std::size_t M = series.layer_count();
  std::vector<std::set<Pair>> edges(M);
  for (const auto& r : series.records())
    if (r.t >= window.from && r.t <= window.to) edges[r.layer].insert({r.src, r.dst});

  Alg1 out;
  std::map<mlink::LayerId, double> likelihood_fp;
  // layer weights: w_i = Likelihood(link in target | link in layer i)
  for (mlink::LayerId i = 0; i < M; ++i) {
    if (i == target) continue;
    std::int64_t both = 0;
    for (const auto& e : edges[i]) both += edges[target].count(e);
    const auto others = static_cast<std::int64_t>(edges[i].size());
    out.likelihood[i] = others == 0 ? Rational(0) : Rational(both, others);
    likelihood_fp[i] = others == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(others);
  }
  // rate: mean out-degree over the window's snapshots
  const auto T = static_cast<std::int64_t>(window.size());
  out.rate.assign(series.node_count(), Rational(0));
  std::vector<double> rate_fp(series.node_count(), 0.0);
  for (mlink::NodeId x = 0; x < series.node_count(); ++x) {
    std::int64_t sum = 0;
    for (mlink::SnapshotId t = window.from; t <= window.to; ++t) {
      std::set<mlink::NodeId> outs;
      for (const auto& r : series.records())
        if (r.t == t && r.layer == target && r.src == x) outs.insert(r.dst);
      sum += static_cast<std::int64_t>(outs.size());
    }
    out.rate[x] = Rational(sum, T);
    rate_fp[x] = static_cast<double>(sum) / static_cast<double>(T);
  }
  // edge weights: w_e = rate + Σ_i w_i · linkExist(e, i)
  for (const auto& e : edges[target]) {
    Rational w = out.rate[e.first];
    double cross = 0.0;
    for (mlink::LayerId i = 0; i < M; ++i) {
      if (i == target || !edges[i].count(e)) continue;
      w += out.likelihood[i];
      cross += likelihood_fp[i];
    }
    out.weight[e] = w;
    out.weight_fp[e] = rate_fp[e.first] + cross;
  }
  return out;
}

}  // namespace oracle
