#include "mlink/crosslayer.hpp"

#include <algorithm>
#include <iterator>
#include <ostream>

#include "mlink/error.hpp"
#include "mlink/io.hpp"

namespace mlink {

std::vector<std::uint64_t> distinct_pairs(const MultiplexSeries& series, LayerId layer,
                                          Window window) {
  check_window(series, window);
  std::vector<std::uint64_t> out;
  for (SnapshotId t = window.from; t <= window.to; ++t) {
    const auto& g = series.snapshot(layer, t);
    for (NodeId x = 0; x < g.node_count(); ++x)
      for (const auto& nb : g.out_edges(x)) out.push_back(pack_pair(x, nb.node));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::size_t intersection_size(const std::vector<std::uint64_t>& a,
                              const std::vector<std::uint64_t>& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

LayerLikelihood make_likelihood(LayerId other, const std::vector<std::uint64_t>& target_pairs,
                                const std::vector<std::uint64_t>& other_pairs) {
  LayerLikelihood l;
  l.other = other;
  l.other_count = other_pairs.size();
  l.overlap_count = intersection_size(target_pairs, other_pairs);
  l.likelihood = l.other_count == 0 ? 0.0
                                    : static_cast<double>(l.overlap_count) /
                                          static_cast<double>(l.other_count);
  return l;
}

void check_layer(const MultiplexSeries& series, LayerId layer) {
  if (layer >= series.layer_count()) throw ParameterError("layer out of range");
}

}  // namespace

LayerLikelihood layer_likelihood(const MultiplexSeries& series, LayerId target, LayerId other,
                                 Window window) {
  check_layer(series, target);
  check_layer(series, other);
  if (target == other) throw ParameterError("likelihood needs two distinct layers");
  return make_likelihood(other, distinct_pairs(series, target, window),
                         distinct_pairs(series, other, window));
}

LayerLikelihoods layer_likelihoods(const MultiplexSeries& series, LayerId target, Window window) {
  return CrossLayerModel(series, target, window).likelihoods();
}

double node_rate(const MultiplexSeries& series, LayerId target, NodeId x, Window window) {
  check_layer(series, target);
  check_window(series, window);
  if (x >= series.node_count()) throw ParameterError("node id out of range");
  double sum = 0.0;
  for (SnapshotId t = window.from; t <= window.to; ++t)
    sum += static_cast<double>(series.snapshot(target, t).out_degree(x));
  return sum / static_cast<double>(window.size());
}

std::vector<double> node_rates(const MultiplexSeries& series, LayerId target, Window window) {
  check_layer(series, target);
  check_window(series, window);
  std::vector<double> sums(series.node_count(), 0.0);
  for (SnapshotId t = window.from; t <= window.to; ++t) {
    const auto& g = series.snapshot(target, t);
    for (NodeId x = 0; x < g.node_count(); ++x) sums[x] += static_cast<double>(g.out_degree(x));
  }
  for (auto& s : sums) s /= static_cast<double>(window.size());
  return sums;
}

CrossLayerModel::CrossLayerModel(const MultiplexSeries& series, LayerId target, Window window) {
  check_layer(series, target);
  check_window(series, window);
  likelihoods_.target = target;
  likelihoods_.window = window;
  pairs_.resize(series.layer_count());
  for (LayerId l = 0; l < series.layer_count(); ++l) pairs_[l] = distinct_pairs(series, l, window);
  for (LayerId l = 0; l < series.layer_count(); ++l)
    if (l != target) likelihoods_.others.push_back(make_likelihood(l, pairs_[target], pairs_[l]));
  rates_ = node_rates(series, target, window);
}

bool CrossLayerModel::link_exists(NodeId src, NodeId dst, LayerId layer) const {
  const auto& set = pairs_.at(layer);
  return std::binary_search(set.begin(), set.end(), pack_pair(src, dst));
}

double CrossLayerModel::cross_layer_term(NodeId src, NodeId dst) const {
  double sum = 0.0;
  for (const auto& l : likelihoods_.others)
    if (link_exists(src, dst, l.other)) sum += l.likelihood;
  return sum;
}

double CrossLayerModel::edge_weight(NodeId src, NodeId dst) const {
  const double w = rates_.at(src) + cross_layer_term(src, dst);
  return w == 0.0 ? kReweightFloor : w;
}

SnapshotGraph CrossLayerModel::reweight(const SnapshotGraph& edges) const {
  auto list = edges.edges();
  for (auto& e : list) e.weight = edge_weight(e.src, e.dst);
  return SnapshotGraph(edges.node_count(), std::move(list));
}

double CrossLayerModel::pair_score(PairKey pair, NeighborMode mode) const {
  const double forward = rates_.at(pair.src) + cross_layer_term(pair.src, pair.dst);
  switch (mode) {
    case NeighborMode::kOut:
      return forward;
    case NeighborMode::kIn:
      return rates_.at(pair.dst) + cross_layer_term(pair.dst, pair.src);
    case NeighborMode::kUndirected:
      break;
  }
  return std::max(forward, rates_.at(pair.dst) + cross_layer_term(pair.dst, pair.src));
}

SnapshotGraph reweight_target_layer(const MultiplexSeries& series, LayerId target, Window window) {
  const CrossLayerModel model(series, target, window);
  return model.reweight(window_union(series, target, window));
}

SnapshotGraph reweight_snapshot(const MultiplexSeries& series, LayerId target, SnapshotId t,
                                Window window) {
  const CrossLayerModel model(series, target, window);
  return model.reweight(series.snapshot(target, t));
}

ScoreMatrix likelihood_scores(const CrossLayerModel& model, const CandidateSet& candidates,
                              NeighborMode mode) {
  std::vector<ScoredPair> entries;
  entries.reserve(candidates.size());
  for (const auto& p : candidates.pairs()) {
    const double s = model.pair_score(p, mode);
    if (s != 0.0) entries.push_back({p, s});
  }
  return ScoreMatrix("likelihood", std::move(entries),
                     {model.likelihoods().target, model.likelihoods().window});
}

void write_likelihoods(std::ostream& out, const LayerLikelihoods& likelihoods) {
  out << "target_layer,other_layer,likelihood,overlap_count,other_count\n";
  for (const auto& l : likelihoods.others)
    out << likelihoods.target << ',' << l.other << ',' << format_double(l.likelihood) << ','
        << l.overlap_count << ',' << l.other_count << '\n';
}

}  // namespace mlink
