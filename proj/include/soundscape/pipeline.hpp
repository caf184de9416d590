#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "soundscape/record.hpp"

namespace soundscape {

struct RunSummary {
  std::uint64_t files_listed = 0;
  std::uint64_t files_processed = 0;
  std::uint64_t files_skipped = 0;
  std::uint64_t records_emitted = 0;
  std::uint64_t segments_skipped = 0;
  /// (filename, reason), in CSV row order.
  std::vector<std::pair<std::string, std::string>> skips;

  /// 0 clean run, 2 completed with skipped files or nothing emitted.
  /// Fatal errors surface as exceptions, which the CLI maps to 1.
  int exit_code() const {
    return files_skipped > 0 || records_emitted == 0 ? 2 : 0;
  }
};

/// Runs the whole workflow: CSV-driven file iteration, per-file streaming
/// decode/calibrate/segment/analyze, and ordered record serialization.
/// Output is a pure function of (config, corpus bytes): records appear in
/// (CSV row, segment_index) order whatever worker_count says. Files listed
/// but unreadable are skipped and counted; files on disk but not listed are
/// never touched. Throws on fatal errors (unreadable metadata or output).
RunSummary run(const PipelineConfig& config);

}  // namespace soundscape
