#include "soundscape/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include "soundscape/errors.hpp"

namespace soundscape {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError("config key " + std::string(key) + ": \"" + std::string(value) +
                      "\" is not a number");
  return out;
}

std::int64_t parse_int(std::string_view key, std::string_view value) {
  std::int64_t out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError("config key " + std::string(key) + ": \"" + std::string(value) +
                      "\" is not an integer");
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("config key " + std::string(key) + ": expected true or false, got \"" +
                    std::string(value) + "\"");
}

}  // namespace

const char* to_string(OutputFormat format) {
  return format == OutputFormat::ndjson ? "ndjson" : "csv";
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "ndjson") return OutputFormat::ndjson;
  if (name == "csv") return OutputFormat::csv;
  throw ConfigError("unknown output format \"" + std::string(name) +
                    "\" (expected ndjson or csv)");
}

SegmentationConfig PipelineConfig::segmentation() const {
  return {segment_duration, window_size, window_overlap, nfft, window_kind};
}

void PipelineConfig::finalize() {
  if (metadata_path.empty()) throw ConfigError("metadata_path is required");
  if (audio_dir.empty()) throw ConfigError("audio_dir is required");
  if (output_path.empty()) throw ConfigError("output_path is required");
  if (segment_duration <= 0.0)
    throw ConfigError("segment_duration must be set to a positive number of seconds");
  if (window_size < 1) throw ConfigError("window_size must be set to a positive sample count");
  if (nfft == 0) nfft = window_size;
  if (worker_count == 0) {
    worker_count = std::thread::hardware_concurrency();
    if (worker_count == 0) worker_count = 1;
  }
  segmentation().validate();
  if (tol_enabled) {
    if (tol_low_freq < 1.0)
      throw TolConfigError("Incorrect lowFreq for TOL, it should be higher than 1.0.");
    if (tol_high_freq <= tol_low_freq)
      throw TolConfigError(
          "Incorrect lowFreq,highFreq for TOL, lowFreq is higher than highFreq.");
    // Third-octave analysis needs one-second windows, so no zero-padding.
    if (nfft != window_size)
      throw TolConfigError(
          "Incorrect windowFunction for TOL, it should be of size sampleRate.");
  }
}

void apply_config_text(PipelineConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (end == text.size() && line.empty()) break;
    if (line.empty() || line.front() == '#') continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "metadata_path") config.metadata_path = std::string(value);
    else if (key == "audio_dir") config.audio_dir = std::string(value);
    else if (key == "output_path") config.output_path = std::string(value);
    else if (key == "sensitivity_db") config.sensitivity_db = parse_double(key, value);
    else if (key == "segment_duration") config.segment_duration = parse_double(key, value);
    else if (key == "window_size") config.window_size = parse_int(key, value);
    else if (key == "window_overlap") config.window_overlap = parse_int(key, value);
    else if (key == "nfft") config.nfft = parse_int(key, value);
    else if (key == "window_kind") config.window_kind = parse_window_kind(value);
    else if (key == "tol_enabled") config.tol_enabled = parse_bool(key, value);
    else if (key == "tol_low_freq") config.tol_low_freq = parse_double(key, value);
    else if (key == "tol_high_freq") config.tol_high_freq = parse_double(key, value);
    else if (key == "worker_count") {
      const auto n = parse_int(key, value);
      if (n < 1) throw ConfigError("worker_count must be positive");
      config.worker_count = static_cast<unsigned>(n);
    } else if (key == "format") {
      config.format = parse_output_format(value);
    } else {
      throw ConfigError("unknown config key \"" + std::string(key) + "\"");
    }
  }
}

void apply_config_file(PipelineConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(config, buffer.str());
}

}  // namespace soundscape
