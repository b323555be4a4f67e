#include "mlink/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "mlink/error.hpp"

namespace mlink {

namespace {

void build_csr(std::size_t n, const std::vector<WeightedEdge>& edges, bool transpose,
               std::vector<std::size_t>& offsets, std::vector<Neighbor>& entries,
               std::vector<double>& strength) {
  offsets.assign(n + 1, 0);
  strength.assign(n, 0.0);
  for (const auto& e : edges) ++offsets[(transpose ? e.dst : e.src) + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  entries.resize(edges.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  // edges are sorted by (src, dst); for the transpose the per-row order
  // comes out sorted by src because rows are filled in edge order.
  for (const auto& e : edges) {
    const NodeId row = transpose ? e.dst : e.src;
    const NodeId col = transpose ? e.src : e.dst;
    entries[cursor[row]++] = {col, e.weight};
  }
  for (std::size_t x = 0; x < n; ++x) {
    double s = 0.0;
    for (std::size_t i = offsets[x]; i < offsets[x + 1]; ++i) s += entries[i].weight;
    strength[x] = s;
  }
}

double lookup(std::span<const Neighbor> row, NodeId y) {
  auto it = std::lower_bound(row.begin(), row.end(), y,
                             [](const Neighbor& nb, NodeId v) { return nb.node < v; });
  return (it != row.end() && it->node == y) ? it->weight : 0.0;
}

std::vector<Neighbor> merge_rows(std::span<const Neighbor> a, std::span<const Neighbor> b) {
  std::vector<Neighbor> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].node < b[j].node)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].node < a[i].node) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].node, a[i].weight + b[j].weight});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

SnapshotGraph::SnapshotGraph(std::size_t node_count)
    : out_offsets_(node_count + 1, 0),
      in_offsets_(node_count + 1, 0),
      out_strength_(node_count, 0.0),
      in_strength_(node_count, 0.0) {}

SnapshotGraph::SnapshotGraph(std::size_t node_count, std::vector<WeightedEdge> edges) {
  for (const auto& e : edges) {
    if (e.src >= node_count || e.dst >= node_count)
      throw ParameterError("edge endpoint out of range");
    if (e.src == e.dst) throw ParameterError("self loops are not allowed");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw ParameterError("edge weights must be positive and finite");
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  std::vector<WeightedEdge> merged;
  merged.reserve(edges.size());
  for (const auto& e : edges) {
    if (!merged.empty() && merged.back().src == e.src && merged.back().dst == e.dst) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }
  build_csr(node_count, merged, false, out_offsets_, out_, out_strength_);
  build_csr(node_count, merged, true, in_offsets_, in_, in_strength_);
  for (const auto& e : merged) total_weight_ += e.weight;
}

std::span<const Neighbor> SnapshotGraph::out_edges(NodeId x) const {
  if (x >= node_count()) throw ParameterError("node id out of range");
  return {out_.data() + out_offsets_[x], out_offsets_[x + 1] - out_offsets_[x]};
}

std::span<const Neighbor> SnapshotGraph::in_edges(NodeId x) const {
  if (x >= node_count()) throw ParameterError("node id out of range");
  return {in_.data() + in_offsets_[x], in_offsets_[x + 1] - in_offsets_[x]};
}

double SnapshotGraph::weight(NodeId src, NodeId dst) const {
  return lookup(out_edges(src), dst);
}

std::vector<WeightedEdge> SnapshotGraph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(out_.size());
  for (NodeId x = 0; x < node_count(); ++x)
    for (const auto& nb : out_edges(x)) out.push_back({x, nb.node, nb.weight});
  return out;
}

std::vector<Neighbor> neighbors(const SnapshotGraph& g, NodeId x, NeighborMode mode) {
  switch (mode) {
    case NeighborMode::kOut: {
      auto row = g.out_edges(x);
      return {row.begin(), row.end()};
    }
    case NeighborMode::kIn: {
      auto row = g.in_edges(x);
      return {row.begin(), row.end()};
    }
    case NeighborMode::kUndirected:
      break;
  }
  return merge_rows(g.out_edges(x), g.in_edges(x));
}

NeighborIndex::NeighborIndex(const SnapshotGraph& g, NeighborMode mode) : mode_(mode) {
  const std::size_t n = g.node_count();
  offsets_.assign(n + 1, 0);
  strength_.assign(n, 0.0);
  entries_.reserve(mode == NeighborMode::kUndirected ? 2 * g.edge_count() : g.edge_count());
  for (NodeId x = 0; x < n; ++x) {
    auto row = neighbors(g, x, mode);
    double s = 0.0;
    for (const auto& nb : row) s += nb.weight;
    strength_[x] = s;
    entries_.insert(entries_.end(), row.begin(), row.end());
    offsets_[x + 1] = entries_.size();
  }
}

double NeighborIndex::weight(NodeId x, NodeId y) const { return lookup(of(x), y); }

namespace {

std::optional<unsigned long long> as_number(std::string_view s) {
  if (s.empty() || s.size() > 19) return std::nullopt;
  unsigned long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  // "007" and "7" must stay distinct labels; only plain decimal forms count.
  if (s.size() > 1 && s.front() == '0') return std::nullopt;
  return v;
}

}  // namespace

bool LabelDictionary::canonical_less(std::string_view a, std::string_view b) {
  const auto na = as_number(a);
  const auto nb = as_number(b);
  if (na && nb) return *na < *nb;
  if (na != nb) return na.has_value();
  return a < b;
}

LabelDictionary::LabelDictionary(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end(), canonical_less);
  if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
    throw ParameterError("duplicate node label");
  index_.reserve(labels_.size());
  for (NodeId i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], i);
}

LabelDictionary LabelDictionary::numeric(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return LabelDictionary(std::move(labels));
}

std::optional<NodeId> LabelDictionary::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

MultiplexSeries::MultiplexSeries(LabelDictionary labels, std::size_t layers,
                                 std::size_t snapshots, std::span<const EdgeRecord> records)
    : labels_(std::move(labels)), layers_(layers), snapshots_(snapshots) {
  std::vector<std::vector<WeightedEdge>> cells(layers * snapshots);
  for (const auto& r : records) {
    if (r.layer >= layers || r.t >= snapshots)
      throw ParameterError("edge record outside the layer/snapshot grid");
    cells[static_cast<std::size_t>(r.layer) * snapshots + r.t].push_back({r.src, r.dst, r.weight});
  }
  grid_.reserve(cells.size());
  for (auto& cell : cells) grid_.emplace_back(labels_.size(), std::move(cell));
}

const SnapshotGraph& MultiplexSeries::snapshot(LayerId layer, SnapshotId t) const {
  if (layer >= layers_ || t >= snapshots_) throw ParameterError("layer or snapshot out of range");
  return grid_[static_cast<std::size_t>(layer) * snapshots_ + t];
}

std::vector<EdgeRecord> MultiplexSeries::records() const {
  std::vector<EdgeRecord> out;
  for (SnapshotId t = 0; t < snapshots_; ++t)
    for (LayerId l = 0; l < layers_; ++l)
      for (const auto& e : snapshot(l, t).edges()) out.push_back({t, l, e.src, e.dst, e.weight});
  return out;
}

void check_window(const MultiplexSeries& series, Window window) {
  if (window.from > window.to) throw ParameterError("empty window");
  if (window.to >= series.snapshot_count()) throw ParameterError("window exceeds the series");
}

SnapshotGraph window_union(const MultiplexSeries& series, LayerId layer, Window window) {
  check_window(series, window);
  std::vector<WeightedEdge> edges;
  for (SnapshotId t = window.from; t <= window.to; ++t) {
    auto cell = series.snapshot(layer, t).edges();
    edges.insert(edges.end(), cell.begin(), cell.end());
  }
  return SnapshotGraph(series.node_count(), std::move(edges));
}

namespace {

SnapshotGraph unit_graph(std::size_t nodes, std::vector<WeightedEdge> edges, NeighborMode mode) {
  for (auto& e : edges) {
    e.weight = 1.0;
    if (mode == NeighborMode::kUndirected && e.src > e.dst) std::swap(e.src, e.dst);
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const WeightedEdge& a, const WeightedEdge& b) {
                            return a.src == b.src && a.dst == b.dst;
                          }),
              edges.end());
  return SnapshotGraph(nodes, std::move(edges));
}

}  // namespace

SnapshotGraph binarize(const SnapshotGraph& g, NeighborMode mode) {
  return unit_graph(g.node_count(), g.edges(), mode);
}

SnapshotGraph binary_multilayer_union(const MultiplexSeries& series, Window window, NeighborMode mode) {
  check_window(series, window);
  std::vector<WeightedEdge> edges;
  for (LayerId l = 0; l < series.layer_count(); ++l)
    for (SnapshotId t = window.from; t <= window.to; ++t)
      for (const auto& e : series.snapshot(l, t).edges()) edges.push_back(e);
  return unit_graph(series.node_count(), std::move(edges), mode);
}

}  // namespace mlink
