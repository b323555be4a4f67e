#include "mlink/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "mlink/error.hpp"
#include "mlink/io.hpp"

namespace mlink {

namespace {

std::size_t index_of(const std::vector<PairKey>& keys, PairKey key) {
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) throw ParameterError("pair is not part of the tally");
  return static_cast<std::size_t>(it - keys.begin());
}

std::string half_points_text(std::int64_t half) {
  std::string s = std::to_string(half / 2);
  if (half % 2 != 0) s += ".5";
  return s;
}

/// Merges sorted sparse matrices; fn(key, values-per-layer) -> optional score.
template <typename Fn>
std::vector<ScoredPair> merge_layers(std::span<const ScoreMatrix> layers, Fn&& fn) {
  std::vector<std::size_t> pos(layers.size(), 0);
  std::vector<double> values(layers.size());
  std::vector<ScoredPair> out;
  while (true) {
    bool any = false;
    PairKey next{};
    for (std::size_t l = 0; l < layers.size(); ++l) {
      auto entries = layers[l].entries();
      if (pos[l] < entries.size() && (!any || entries[pos[l]].key < next)) {
        next = entries[pos[l]].key;
        any = true;
      }
    }
    if (!any) break;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      auto entries = layers[l].entries();
      if (pos[l] < entries.size() && entries[pos[l]].key == next) {
        values[l] = entries[pos[l]].score;
        ++pos[l];
      } else {
        values[l] = 0.0;
      }
    }
    out.push_back({next, fn(values)});
  }
  return out;
}

BordaResult tally_result(std::vector<PairKey> keys, std::vector<std::int64_t> half) {
  std::vector<std::size_t> idx(keys.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return half[x] != half[y] ? half[x] > half[y] : keys[x] < keys[y];
  });
  BordaResult result;
  result.ranked.tag = "borda";
  result.ranked.order.reserve(keys.size());
  result.ranked.scores.reserve(keys.size());
  for (auto i : idx) {
    result.ranked.order.push_back(keys[i]);
    result.ranked.scores.push_back(static_cast<double>(half[i]) / 2.0);
  }
  result.tally.keys = std::move(keys);
  result.tally.half_points = std::move(half);
  return result;
}

}  // namespace

double BordaTally::points(PairKey key) const {
  return static_cast<double>(half_points_of(key)) / 2.0;
}

std::int64_t BordaTally::half_points_of(PairKey key) const {
  return half_points[index_of(keys, key)];
}

BordaResult borda(std::span<const RankedList> lists) {
  if (lists.empty()) throw ParameterError("borda needs at least one list");
  std::vector<PairKey> keys = lists.front().order;
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
    throw ParameterError("borda: duplicate pair in a ranked list");
  for (const auto& list : lists) {
    if (!list.scores.empty() && list.scores.size() != list.order.size())
      throw ParameterError("borda: scores and order differ in length");
    if (&list == &lists.front()) continue;
    auto other = list.order;
    std::sort(other.begin(), other.end());
    if (other != keys) throw ParameterError("borda: ranked lists have different key sets");
  }

  const std::int64_t n = static_cast<std::int64_t>(keys.size());
  std::vector<std::int64_t> half(keys.size(), 0);
  for (const auto& list : lists) {
    std::int64_t a = 0;
    while (a < n) {
      std::int64_t b = a + 1;
      if (!list.scores.empty())
        while (b < n && list.scores[static_cast<std::size_t>(b)] == list.scores[static_cast<std::size_t>(a)]) ++b;
      // Positions a..b-1 have n-1-p items below; twice their mean:
      const std::int64_t shared = 2 * (n - 1) - (a + b - 1);
      for (std::int64_t p = a; p < b; ++p)
        half[index_of(keys, list.order[static_cast<std::size_t>(p)])] += shared;
      a = b;
    }
  }

  return tally_result(std::move(keys), std::move(half));
}

BordaResult borda(std::span<const ScoreMatrix> matrices, const CandidateSet& candidates) {
  if (matrices.empty()) throw ParameterError("borda needs at least one list");
  const auto keys = candidates.pairs();
  const std::int64_t n = static_cast<std::int64_t>(keys.size());
  std::vector<std::int64_t> half(keys.size(), 0);
  std::vector<std::pair<double, std::size_t>> nonzero;
  for (const auto& m : matrices) {
    // Keep the candidate entries, indexed into keys.
    nonzero.clear();
    std::size_t k = 0;
    for (const auto& e : m.entries()) {
      while (k < keys.size() && keys[k] < e.key) ++k;
      if (k == keys.size()) break;
      if (keys[k] != e.key) continue;
      if (e.score < 0.0) {
        std::vector<RankedList> lists;
        for (const auto& mm : matrices) lists.push_back(rank(mm, candidates));
        return borda(lists);
      }
      nonzero.push_back({e.score, k});
    }
    std::sort(nonzero.begin(), nonzero.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    const std::int64_t nz = static_cast<std::int64_t>(nonzero.size());
    // The zero scores tie at positions nz..n-1.
    const std::int64_t bottom = 2 * (n - 1) - (nz + n - 1);
    for (auto& h : half) h += bottom;
    std::int64_t a = 0;
    while (a < nz) {
      std::int64_t b = a + 1;
      while (b < nz && nonzero[static_cast<std::size_t>(b)].first == nonzero[static_cast<std::size_t>(a)].first) ++b;
      const std::int64_t shared = 2 * (n - 1) - (a + b - 1);
      for (std::int64_t p = a; p < b; ++p) half[nonzero[static_cast<std::size_t>(p)].second] += shared - bottom;
      a = b;
    }
  }
  return tally_result({keys.begin(), keys.end()}, std::move(half));
}

ScoreMatrix average_aggregate(std::span<const ScoreMatrix> per_layer) {
  if (per_layer.empty()) throw ParameterError("average_aggregate needs at least one layer");
  const double m = static_cast<double>(per_layer.size());
  auto entries = merge_layers(per_layer, [m](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / m;
  });
  return ScoreMatrix(per_layer.front().tag(), std::move(entries), per_layer.front().provenance());
}

ScoreMatrix entropy_aggregate(std::span<const ScoreMatrix> per_layer) {
  if (per_layer.empty()) throw ParameterError("entropy_aggregate needs at least one layer");
  auto entries = merge_layers(per_layer, [](const std::vector<double>& v) {
    double total = 0.0;
    for (double x : v) total += x;
    if (total == 0.0) return 0.0;
    double h = 0.0;
    for (double x : v) {
      if (x == 0.0) continue;
      const double p = x / total;
      h -= p * std::log(p);
    }
    return h;
  });
  entries.erase(std::remove_if(entries.begin(), entries.end(),
                               [](const ScoredPair& e) { return e.score == 0.0; }),
                entries.end());
  return ScoreMatrix(per_layer.front().tag(), std::move(entries), per_layer.front().provenance());
}

ScoreMatrix multilayer_core_metric(const MultiplexSeries& series, Window window, Metric metric,
                                   const CandidateSet& candidates, const MetricOptions& options) {
  switch (metric) {
    case Metric::kCommonNeighbors:
    case Metric::kJaccard:
    case Metric::kPreferentialAttachment:
    case Metric::kAdamicAdar:
      break;
    default:
      throw ParameterError("multilayer core metrics support cn, jc, pa and aa only");
  }
  const auto g = binary_multilayer_union(series, window, options.mode);
  auto m = score(metric, g, candidates, options, {0, window});
  auto entries = m.entries();
  return ScoreMatrix("ml-" + m.tag(), {entries.begin(), entries.end()}, m.provenance());
}

void write_tally(std::ostream& out, const BordaResult& result, const LabelDictionary& labels) {
  out << "src,dst,borda_score,final_rank\n";
  const auto& order = result.ranked.order;
  for (std::size_t i = 0; i < order.size(); ++i)
    out << labels.label(order[i].src) << ',' << labels.label(order[i].dst) << ','
        << half_points_text(result.tally.half_points_of(order[i])) << ',' << (i + 1) << '\n';
}

}  // namespace mlink
