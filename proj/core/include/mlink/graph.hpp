#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mlink {

using NodeId = std::uint32_t;
using LayerId = std::uint32_t;
using SnapshotId = std::uint32_t;

/// One interaction row: snapshot, layer, endpoints and a positive weight.
struct EdgeRecord {
  SnapshotId t = 0;
  LayerId layer = 0;
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct WeightedEdge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

struct Neighbor {
  NodeId node = 0;
  double weight = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// How Γ(x) is read off a directed snapshot.
///  - kUndirected: union of out- and in-neighbours, reciprocal weights summed.
///  - kOut / kIn: the directed neighbourhoods.
enum class NeighborMode { kUndirected, kOut, kIn };

/// Inclusive range of snapshot indices.
struct Window {
  SnapshotId from = 0;
  SnapshotId to = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(to) - from + 1; }
  friend bool operator==(const Window&, const Window&) = default;
};

/// Immutable weighted directed graph over a fixed node universe, stored as
/// two CSR arrays (out and in) with neighbour lists sorted by node id.
class SnapshotGraph {
 public:
  SnapshotGraph() = default;
  explicit SnapshotGraph(std::size_t node_count);

  /// Duplicate (src, dst) entries are merged by summing weights.
  /// Throws ParameterError on self loops, out-of-range ids or weights <= 0.
  SnapshotGraph(std::size_t node_count, std::vector<WeightedEdge> edges);

  std::size_t node_count() const noexcept { return out_strength_.size(); }
  std::size_t edge_count() const noexcept { return out_.size(); }
  bool empty() const noexcept { return out_.empty(); }

  std::span<const Neighbor> out_edges(NodeId x) const;
  std::span<const Neighbor> in_edges(NodeId x) const;

  double out_strength(NodeId x) const { return out_strength_.at(x); }
  double in_strength(NodeId x) const { return in_strength_.at(x); }
  std::size_t out_degree(NodeId x) const { return out_edges(x).size(); }
  std::size_t in_degree(NodeId x) const { return in_edges(x).size(); }
  double total_weight() const noexcept { return total_weight_; }

  /// Weight of src -> dst, 0 when absent.
  double weight(NodeId src, NodeId dst) const;
  bool has_edge(NodeId src, NodeId dst) const { return weight(src, dst) > 0.0; }

  /// All edges sorted by (src, dst).
  std::vector<WeightedEdge> edges() const;

 private:
  std::vector<std::size_t> out_offsets_{0};
  std::vector<Neighbor> out_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<Neighbor> in_;
  std::vector<double> out_strength_;
  std::vector<double> in_strength_;
  double total_weight_ = 0.0;
};

/// Γ(x) with weights, sorted by node id. Never contains x itself.
std::vector<Neighbor> neighbors(const SnapshotGraph& g, NodeId x, NeighborMode mode);

/// CSR view of Γ(·) for every node under one NeighborMode, plus the weighted
/// strength Σ_{z∈Γ(x)} w(x,z). Metrics build one of these per graph.
class NeighborIndex {
 public:
  NeighborIndex(const SnapshotGraph& g, NeighborMode mode);

  std::size_t node_count() const noexcept { return strength_.size(); }
  std::span<const Neighbor> of(NodeId x) const {
    return {entries_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
  }
  double strength(NodeId x) const { return strength_[x]; }
  std::size_t degree(NodeId x) const { return offsets_[x + 1] - offsets_[x]; }
  double weight(NodeId x, NodeId y) const;
  NeighborMode mode() const noexcept { return mode_; }

 private:
  NeighborMode mode_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> entries_;
  std::vector<double> strength_;
};

/// Bijection between external node labels and dense ids 0..n-1. Ids follow
/// the canonical label order: numeric labels first in numeric order, then the
/// rest lexicographically. This makes export/re-ingest byte-stable.
class LabelDictionary {
 public:
  LabelDictionary() = default;
  explicit LabelDictionary(std::vector<std::string> labels);

  /// Labels "0".."n-1".
  static LabelDictionary numeric(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(NodeId id) const { return labels_.at(id); }
  std::optional<NodeId> find(std::string_view label) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  static bool canonical_less(std::string_view a, std::string_view b);

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

/// G_t = <V, E_t^1..E_t^M> for t in 0..T-1. Every (layer, snapshot) cell
/// exists; missing cells are empty graphs over the shared node universe.
class MultiplexSeries {
 public:
  MultiplexSeries() = default;

  /// Records are merged per (t, layer, src, dst) by summing weights.
  MultiplexSeries(LabelDictionary labels, std::size_t layers, std::size_t snapshots,
                  std::span<const EdgeRecord> records);

  std::size_t layer_count() const noexcept { return layers_; }
  std::size_t snapshot_count() const noexcept { return snapshots_; }
  std::size_t node_count() const noexcept { return labels_.size(); }
  const LabelDictionary& labels() const noexcept { return labels_; }

  const SnapshotGraph& snapshot(LayerId layer, SnapshotId t) const;

  /// All edges, sorted by (t, layer, src, dst).
  std::vector<EdgeRecord> records() const;

 private:
  LabelDictionary labels_;
  std::size_t layers_ = 0;
  std::size_t snapshots_ = 0;
  std::vector<SnapshotGraph> grid_;  // layer-major
};

/// Throws ParameterError unless the window lies inside the series.
void check_window(const MultiplexSeries& series, Window window);

/// Edge-wise union of one layer over a window, weights summed.
SnapshotGraph window_union(const MultiplexSeries& series, LayerId layer, Window window);

/// Union over all layers and the window, binarized as below.
SnapshotGraph binary_multilayer_union(const MultiplexSeries& series, Window window,
                                      NeighborMode mode = NeighborMode::kUndirected);

/// Unit weights. For the undirected mode a reciprocal pair collapses to one
/// edge (src < dst) so each neighbour counts once.
SnapshotGraph binarize(const SnapshotGraph& g, NeighborMode mode = NeighborMode::kUndirected);

}  // namespace mlink
