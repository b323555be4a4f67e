#include "mlink/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mlink/error.hpp"
#include "mlink/hash.hpp"

namespace mlink {

namespace {

// Only the engine's raw output is used: std distributions are not
// bit-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double uniform() { return unit_interval(engine_()); }

  std::size_t below(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

  /// Knuth's multiplication method; fine for small lambda.
  unsigned poisson(double lambda) {
    const double limit = std::exp(-lambda);
    unsigned k = 0;
    double p = uniform();
    while (p > limit) {
      ++k;
      p *= uniform();
    }
    return k;
  }

 private:
  std::mt19937_64 engine_;
};

/// Fenwick tree over non-negative node weights with proportional sampling.
class WeightedSampler {
 public:
  explicit WeightedSampler(std::size_t n) : tree_(n + 1, 0.0), weight_(n, 0.0) {}

  void set(std::size_t i, double w) {
    const double delta = w - weight_[i];
    weight_[i] = w;
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
  }

  double total() const {
    double s = 0.0;
    for (std::size_t k = tree_.size() - 1; k > 0; k -= k & (~k + 1)) s += tree_[k];
    return s;
  }

  std::size_t sample(double u) const {
    double target = u * total();
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    // Guard against round-off landing on a zero-weight tail.
    while (pos < weight_.size() && weight_[pos] == 0.0) ++pos;
    return std::min(pos, weight_.size() - 1);
  }

 private:
  std::vector<double> tree_;
  std::vector<double> weight_;
};

}  // namespace

void GenParams::validate() const {
  if (nodes < 2) throw ParameterError("generator needs at least 2 nodes");
  if (layers < 1) throw ParameterError("generator needs at least 1 layer");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ParameterError("gamma must be >= 0");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho must be in [0, 1]");
}

MultiplexSeries generate(const GenParams& params) {
  params.validate();
  Rng rng(params.seed);
  const std::size_t n = params.nodes;

  std::vector<std::vector<std::size_t>> degree(params.layers, std::vector<std::size_t>(n, 0));
  // per layer, per snapshot edge endpoints, to expire old degree
  std::vector<std::vector<std::vector<NodeId>>> touched(params.layers);
  std::vector<WeightedSampler> samplers;
  for (std::size_t l = 0; l < params.layers; ++l) {
    samplers.emplace_back(n);
    for (std::size_t x = 0; x < n; ++x) samplers[l].set(x, 1.0);
  }
  auto set_weight = [&](std::size_t l, NodeId x) {
    samplers[l].set(x, std::pow(static_cast<double>(degree[l][x]) + 1.0, params.gamma));
  };
  auto bump = [&](std::size_t l, NodeId x) {
    ++degree[l][x];
    set_weight(l, x);
    if (params.memory > 0) touched[l].back().push_back(x);
  };

  std::vector<EdgeRecord> records;
  using Pair = std::pair<NodeId, NodeId>;
  std::vector<std::vector<Pair>> previous(params.layers), current(params.layers);

  for (std::size_t t = 0; t < params.snapshots; ++t) {
    for (std::size_t l = 0; l < params.layers; ++l) {
      touched[l].emplace_back();
      if (params.memory > 0 && t > params.memory) {
        for (NodeId x : touched[l][t - params.memory - 1]) {
          --degree[l][x];
          set_weight(l, x);
        }
        touched[l][t - params.memory - 1].clear();
      }
    }
    for (std::size_t l = 0; l < params.layers; ++l) {
      current[l].clear();
      for (std::size_t k = 0; k < params.edges_per_snapshot; ++k) {
        Pair edge{0, 0};
        bool copied = false;
        if (params.layers > 1 && t > 0 && rng.uniform() < params.rho) {
          std::size_t other = rng.below(params.layers - 1);
          if (other >= l) ++other;
          const auto& pool = previous[other];
          if (!pool.empty()) {
            edge = pool[rng.below(pool.size())];
            copied = true;
          }
        }
        if (!copied) {
          const auto src = static_cast<NodeId>(samplers[l].sample(rng.uniform()));
          NodeId dst = src;
          while (dst == src) dst = static_cast<NodeId>(samplers[l].sample(rng.uniform()));
          edge = {src, dst};
        }
        const double weight = static_cast<double>(rng.poisson(2.0)) + 1.0;
        records.push_back({static_cast<SnapshotId>(t), static_cast<LayerId>(l), edge.first,
                           edge.second, weight});
        current[l].push_back(edge);
        bump(l, edge.first);
        bump(l, edge.second);
      }
    }
    for (std::size_t l = 0; l < params.layers; ++l) {
      auto& pool = current[l];
      std::sort(pool.begin(), pool.end());
      pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
      previous[l].swap(pool);
    }
  }
  return MultiplexSeries(LabelDictionary::numeric(n), params.layers, params.snapshots, records);
}

}  // namespace mlink
