#include <charconv>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "soundscape/config.hpp"
#include "soundscape/errors.hpp"
#include "soundscape/pipeline.hpp"

namespace {

double parse_frequency(std::string_view text, const char* side) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw soundscape::ConfigError(std::string("--tol: cannot parse ") + side +
                                  " frequency '" + std::string(text) + "'");
  return value;
}

void apply_tol_range(soundscape::PipelineConfig& config, const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw soundscape::ConfigError("--tol expects LOW:HIGH in Hz, got '" + text + "'");
  config.tol_enabled = true;
  config.tol_low_freq = parse_frequency(std::string_view(text).substr(0, colon), "low");
  config.tol_high_freq =
      parse_frequency(std::string_view(text).substr(colon + 1), "high");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Standardized soundscape metrics (Welch spectra, third-octave "
               "levels, broadband SPL) from calibrated WAV recordings"};
  app.require_subcommand(1);

  auto* run_cmd =
      app.add_subcommand("run", "Process the recording campaign listed in a "
                                "metadata CSV and write one metrics row per "
                                "segment");

  std::string config_path;
  run_cmd->add_option("--config", config_path, "key=value parameter file")
      ->required()
      ->check(CLI::ExistingFile);

  std::optional<std::string> metadata;
  std::optional<std::string> audio_dir;
  std::optional<std::string> out_path;
  std::optional<unsigned> workers;
  std::optional<std::string> format_name;
  std::optional<std::string> tol_range;
  std::optional<double> sensitivity;
  std::optional<double> segment_duration;
  std::optional<long long> window_size;
  std::optional<long long> window_overlap;
  std::optional<long long> nfft;
  std::optional<std::string> window_name;

  run_cmd->add_option("--metadata", metadata,
                      "campaign CSV with filename and start_date columns");
  run_cmd->add_option("--audio-dir", audio_dir, "directory holding the WAV files");
  run_cmd->add_option("--out", out_path, "output file path");
  run_cmd->add_option("--workers", workers,
                      "worker thread count (default: hardware concurrency)");
  run_cmd->add_option("--format", format_name, "output format: ndjson or csv");
  run_cmd->add_option("--tol", tol_range,
                      "enable third-octave levels over LOW:HIGH Hz");
  run_cmd->add_option("--sensitivity", sensitivity, "hydrophone sensitivity S, dB");
  run_cmd->add_option("--segment-duration", segment_duration,
                      "integration segment length, seconds");
  run_cmd->add_option("--window-size", window_size,
                      "analysis window length, samples");
  run_cmd->add_option("--window-overlap", window_overlap,
                      "overlap between adjacent windows, samples");
  run_cmd->add_option("--nfft", nfft, "FFT length (default: window size)");
  run_cmd->add_option("--window", window_name,
                      "window function: hamming_periodic or rectangular");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    soundscape::PipelineConfig config;
    soundscape::apply_config_file(config, config_path);

    if (metadata) config.metadata_path = *metadata;
    if (audio_dir) config.audio_dir = *audio_dir;
    if (out_path) config.output_path = *out_path;
    if (workers) config.worker_count = *workers;
    if (format_name) config.format = soundscape::parse_output_format(*format_name);
    if (sensitivity) config.sensitivity_db = *sensitivity;
    if (segment_duration) config.segment_duration = *segment_duration;
    if (window_size) config.window_size = *window_size;
    if (window_overlap) config.window_overlap = *window_overlap;
    if (nfft) config.nfft = *nfft;
    if (window_name) config.window_kind = soundscape::parse_window_kind(*window_name);
    if (tol_range) apply_tol_range(config, *tol_range);

    const soundscape::RunSummary summary = soundscape::run(config);

    std::cout << "files listed      " << summary.files_listed << '\n'
              << "files processed   " << summary.files_processed << '\n'
              << "files skipped     " << summary.files_skipped << '\n'
              << "records emitted   " << summary.records_emitted << '\n'
              << "segments dropped  " << summary.segments_skipped << '\n';
    return summary.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "soundscape-metrics: error: " << e.what() << '\n';
    return 1;
  }
}
