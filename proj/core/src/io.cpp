#include "mlink/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string_view>
#include <tuple>

#include "mlink/error.hpp"

namespace mlink {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

bool skippable(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

std::uint32_t parse_index(std::string_view field, const char* column, std::size_t line) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
    throw InputError(std::string("column '") + column + "' is not a non-negative integer: '" +
                         std::string(field) + "'",
                     line);
  return v;
}

double parse_weight(std::string_view field, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v))
    throw InputError("column 'weight' is not a number: '" + std::string(field) + "'", line);
  if (v < 0.0) throw InputError("negative weight", line);
  if (v == 0.0) throw InputError("zero weight", line);
  return v;
}

struct RawRow {
  SnapshotId t;
  LayerId layer;
  std::string src;
  std::string dst;
  double weight;
  std::size_t line;
};

template <typename NextLine>
IngestResult ingest_impl(NextLine next_line) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::array<int, 5> column{-1, -1, -1, -1, -1};  // t, layer, src, dst, weight
  static constexpr std::array<std::string_view, 5> kNames{"t", "layer", "src", "dst", "weight"};
  std::size_t width = 0;
  std::vector<RawRow> rows;

  while (next_line(line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto fields = split(line);
    if (!have_header) {
      std::string_view unknown;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        auto it = std::find(kNames.begin(), kNames.end(), fields[i]);
        if (it == kNames.end()) {
          if (unknown.empty()) unknown = fields[i];
          continue;
        }
        auto& slot = column[static_cast<std::size_t>(it - kNames.begin())];
        if (slot >= 0) throw InputError("duplicate column '" + std::string(*it) + "'", line_no);
        slot = static_cast<int>(i);
      }
      for (std::size_t c = 0; c < 4; ++c)
        if (column[c] < 0)
          throw InputError("missing column '" + std::string(kNames[c]) + "' in header", line_no);
      if (!unknown.empty())
        throw InputError("unknown column '" + std::string(unknown) + "' in header", line_no);
      width = fields.size();
      have_header = true;
      continue;
    }
    if (fields.size() != width)
      throw InputError("expected " + std::to_string(width) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    RawRow row;
    row.t = parse_index(fields[column[0]], "t", line_no);
    row.layer = parse_index(fields[column[1]], "layer", line_no);
    row.src = std::string(fields[column[2]]);
    row.dst = std::string(fields[column[3]]);
    if (row.src.empty() || row.dst.empty()) throw InputError("empty node label", line_no);
    row.weight = column[4] >= 0 ? parse_weight(fields[column[4]], line_no) : 1.0;
    row.line = line_no;
    rows.push_back(std::move(row));
  }

  IngestSummary summary;
  summary.rows = rows.size();
  if (!have_header) return {MultiplexSeries{}, summary};

  std::set<std::string, std::less<>> label_set;
  std::size_t layers = 0, snapshots = 0;
  for (const auto& r : rows) {
    if (r.src == r.dst) continue;
    label_set.insert(r.src);
    label_set.insert(r.dst);
    layers = std::max<std::size_t>(layers, std::size_t{r.layer} + 1);
    snapshots = std::max<std::size_t>(snapshots, std::size_t{r.t} + 1);
  }
  LabelDictionary labels(std::vector<std::string>(label_set.begin(), label_set.end()));

  std::vector<EdgeRecord> records;
  records.reserve(rows.size());
  std::set<std::tuple<SnapshotId, LayerId, NodeId, NodeId>> seen;
  for (const auto& r : rows) {
    if (r.src == r.dst) {
      ++summary.dropped_self_loops;
      continue;
    }
    EdgeRecord rec{r.t, r.layer, *labels.find(r.src), *labels.find(r.dst), r.weight};
    if (!seen.emplace(rec.t, rec.layer, rec.src, rec.dst).second) ++summary.merged_duplicates;
    records.push_back(rec);
  }
  MultiplexSeries series(std::move(labels), layers, snapshots, records);
  auto full = summarize(series);
  full.rows = summary.rows;
  full.merged_duplicates = summary.merged_duplicates;
  full.dropped_self_loops = summary.dropped_self_loops;
  return {std::move(series), std::move(full)};
}

}  // namespace

IngestResult ingest(std::istream& in) {
  return ingest_impl([&in](std::string& line) { return static_cast<bool>(std::getline(in, line)); });
}

IngestResult ingest_rows(std::span<const std::string> rows) {
  std::size_t i = 0;
  return ingest_impl([&](std::string& line) {
    if (i == rows.size()) return false;
    line = rows[i++];
    return true;
  });
}

IngestResult ingest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return ingest(in);
}

IngestSummary summarize(const MultiplexSeries& series) {
  IngestSummary s;
  s.nodes = series.node_count();
  s.snapshots = series.snapshot_count();
  for (LayerId l = 0; l < series.layer_count(); ++l) {
    LayerSummary ls;
    ls.layer = l;
    std::vector<bool> touched(series.node_count(), false);
    for (SnapshotId t = 0; t < series.snapshot_count(); ++t) {
      const auto& g = series.snapshot(l, t);
      ls.edges += g.edge_count();
      if (!g.empty()) ++ls.active_snapshots;
      for (const auto& e : g.edges()) touched[e.src] = touched[e.dst] = true;
    }
    ls.nodes = static_cast<std::size_t>(std::count(touched.begin(), touched.end(), true));
    s.rows += ls.edges;
    s.layers.push_back(ls);
  }
  return s;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw InvariantError("cannot format double");
  return {buf.data(), ptr};
}

void write_canonical(std::ostream& out, const MultiplexSeries& series) {
  out << "t,layer,src,dst,weight\n";
  const auto& labels = series.labels();
  for (const auto& r : series.records())
    out << r.t << ',' << r.layer << ',' << labels.label(r.src) << ',' << labels.label(r.dst) << ','
        << format_double(r.weight) << '\n';
}

std::string canonical_csv(const MultiplexSeries& series) {
  std::ostringstream out;
  write_canonical(out, series);
  return out.str();
}

std::string dataset_hash(const MultiplexSeries& series) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_csv(series)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
  return out;
}

}  // namespace mlink
