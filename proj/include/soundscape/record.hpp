#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "soundscape/config.hpp"
#include "soundscape/metrics.hpp"

namespace soundscape {

/// Per-segment metrics. The frequency axis is implicit through
/// (sample_rate, nfft), echoed once per file in the header record.
struct SpectralResult {
  WelchVector welch;
  double spl_db = 0.0;               // may be -inf for silent segments
  std::optional<TolVector> tol_db;   // absent when TOL is disabled
};

/// One output row: a segment of one file with its absolute timestamp
/// (file start + segment_index * segment_duration).
struct MetricRecord {
  std::string file;
  std::int64_t segment_index = 0;
  Instant timestamp;
  SpectralResult result;
};

/// Leading per-file output line: decode parameters plus the shared
/// frequency-axis and band metadata for the records that follow.
struct FileHeader {
  AudioFileDescriptor source;
  SegmentationConfig segmentation;
  double frequency_step = 0.0;
  Eigen::Index spectrum_bins = 0;
  std::optional<TolBandSet> bands;
};

/// Serializes one header / record as a single NDJSON line (no trailing
/// newline). Doubles use the shortest decimal form that round-trips;
/// non-finite values become null plus a `quality` flag.
std::string to_ndjson(const FileHeader& header);
std::string to_ndjson(const MetricRecord& record);

/// Writes `to_ndjson(record)` plus newline to the sink.
void emit_record(const MetricRecord& record, std::ostream& sink);

/// Flattened wide-CSV alternative. The column row is derived from the first
/// file's dimensions; rows from files with other dimensions are rejected by
/// the output writer.
std::string csv_column_row(const FileHeader& header);
std::string to_csv_row(const MetricRecord& record);

}  // namespace soundscape
