#pragma once

#include <filesystem>
#include <string_view>

#include "soundscape/segmentation.hpp"

namespace soundscape {

enum class OutputFormat { ndjson, csv };

const char* to_string(OutputFormat format);
OutputFormat parse_output_format(std::string_view name);

/// Everything one run needs. Values come from (highest precedence first)
/// CLI flags, the key=value config file, and built-in defaults.
struct PipelineConfig {
  std::filesystem::path metadata_path;
  std::filesystem::path audio_dir;
  std::filesystem::path output_path;

  double sensitivity_db = 0.0;     // scalar hydrophone sensitivity S
  double segment_duration = 0.0;   // seconds, required
  Eigen::Index window_size = 0;    // samples, required
  Eigen::Index window_overlap = 0;
  Eigen::Index nfft = 0;           // 0 = default to window_size
  WindowKind window_kind = WindowKind::hamming_periodic;

  bool tol_enabled = false;
  double tol_low_freq = 1.0;
  double tol_high_freq = 0.0;

  unsigned worker_count = 0;       // 0 = hardware concurrency
  OutputFormat format = OutputFormat::ndjson;

  SegmentationConfig segmentation() const;

  /// Fills derived defaults (nfft, worker_count) and throws ConfigError on
  /// anything missing or inconsistent.
  void finalize();
};

/// Parses the key=value config text. Unknown keys are rejected so typos
/// fail loudly; `#` lines are comments. Does not finalize.
void apply_config_text(PipelineConfig& config, std::string_view text);

/// Reads and applies a config file on top of `config`.
void apply_config_file(PipelineConfig& config, const std::filesystem::path& path);

}  // namespace soundscape
