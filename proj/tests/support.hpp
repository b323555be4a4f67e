#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "mlink/graph.hpp"
#include "mlink/score.hpp"

namespace fixture {

// a..e = 0..4; a-b 1, a-c 2, b-c 1, c-d 3; e isolated.
inline mlink::SnapshotGraph g1() {
  return mlink::SnapshotGraph(5, {{0, 1, 1.0}, {0, 2, 2.0}, {1, 2, 1.0}, {2, 3, 3.0}});
}

inline mlink::CandidateSet all_pairs(std::size_t n) {
  std::vector<mlink::PairKey> pairs;
  for (mlink::NodeId x = 0; x < n; ++x)
    for (mlink::NodeId y = x + 1; y < n; ++y) pairs.push_back({x, y});
  return mlink::CandidateSet::from_pairs(std::move(pairs));
}

/// Directed graph with each ordered pair present with probability p and
/// integer weights 1..5.
inline mlink::SnapshotGraph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> w(1, 5);
  std::vector<mlink::WeightedEdge> edges;
  for (mlink::NodeId x = 0; x < n; ++x)
    for (mlink::NodeId y = 0; y < n; ++y)
      if (x != y && u(rng) < p) edges.push_back({x, y, static_cast<double>(w(rng))});
  return mlink::SnapshotGraph(n, std::move(edges));
}

/// Random multiplex series with integer weights.
inline mlink::MultiplexSeries random_series(std::mt19937_64& rng, std::size_t n, std::size_t layers,
                                            std::size_t snapshots, double p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> w(1, 4);
  std::vector<mlink::EdgeRecord> records;
  for (mlink::SnapshotId t = 0; t < snapshots; ++t)
    for (mlink::LayerId l = 0; l < layers; ++l)
      for (mlink::NodeId x = 0; x < n; ++x)
        for (mlink::NodeId y = 0; y < n; ++y)
          if (x != y && u(rng) < p) records.push_back({t, l, x, y, static_cast<double>(w(rng))});
  return mlink::MultiplexSeries(mlink::LabelDictionary::numeric(n), layers, snapshots, records);
}

/// Series over numeric labels from a record list.
inline mlink::MultiplexSeries series(std::size_t n, std::size_t layers, std::size_t snapshots,
                                     std::vector<mlink::EdgeRecord> records) {
  return mlink::MultiplexSeries(mlink::LabelDictionary::numeric(n), layers, snapshots, records);
}

/// Relative closeness, absolute near zero.
inline bool close(double a, double b, double rel) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= rel * scale;
}

}  // namespace fixture
