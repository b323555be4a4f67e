#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mlink/graph.hpp"

namespace mlink {

struct LayerSummary {
  LayerId layer = 0;
  std::size_t nodes = 0;          ///< distinct endpoints over all snapshots
  std::size_t edges = 0;          ///< Σ_t |E_t^layer| after deduplication
  std::size_t active_snapshots = 0;
};

struct IngestSummary {
  std::size_t rows = 0;
  std::size_t merged_duplicates = 0;
  std::size_t dropped_self_loops = 0;
  std::size_t nodes = 0;
  std::size_t snapshots = 0;
  std::vector<LayerSummary> layers;
};

struct IngestResult {
  MultiplexSeries series;
  IngestSummary summary;
};

/// Parses `t,layer,src,dst[,weight]` CSV. The header row is mandatory; the
/// weight column is optional (1.0 when absent). Blank lines and lines starting
/// with '#' are skipped. Throws InputError naming the line on bad rows.
IngestResult ingest(std::istream& in);
IngestResult ingest_rows(std::span<const std::string> rows);
IngestResult ingest_file(const std::string& path);

IngestSummary summarize(const MultiplexSeries& series);

/// Canonical export: header `t,layer,src,dst,weight`, rows sorted by
/// (t, layer, src, dst), weights in shortest round-trip form.
void write_canonical(std::ostream& out, const MultiplexSeries& series);
std::string canonical_csv(const MultiplexSeries& series);

/// FNV-1a 64 of the canonical export, as 16 hex digits.
std::string dataset_hash(const MultiplexSeries& series);

/// Shortest decimal form that round-trips (std::to_chars).
std::string format_double(double value);

}  // namespace mlink
