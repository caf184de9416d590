// Acceptance suite: ten numbered checks against independent oracles (direct
// DFT sums, closed-form levels, brute-force frame enumeration, and a
// from-scratch metrics reimplementation). Prints one line per criterion and
// exits with the number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>

#include "json.hpp"
#include "soundscape/audio.hpp"
#include "soundscape/config.hpp"
#include "soundscape/log.hpp"
#include "soundscape/metrics.hpp"
#include "soundscape/pipeline.hpp"
#include "soundscape/segmentation.hpp"
#include "soundscape/spectral.hpp"
#include "support/reference_dsp.hpp"
#include "support/wav_builder.hpp"

using nlohmann::json;
using namespace soundscape;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", index,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename Fn>
void criterion(int index, const std::string& name, Fn&& fn) {
  try {
    auto [ok, detail] = fn();
    report(index, name, ok, detail);
  } catch (const std::exception& e) {
    report(index, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::vector<double> random_frame(std::mt19937& rng, std::size_t n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = dist(rng);
  return x;
}

std::vector<double> sine_wave(std::size_t n, double fs, double freq, double amp) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amp * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / fs);
  return x;
}

Eigen::ArrayXd to_eigen(const std::vector<double>& x) {
  return Eigen::Map<const Eigen::ArrayXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<json> parse_ndjson(const std::string& text) {
  std::vector<json> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(json::parse(line));
  return lines;
}

// ---- criterion bodies ------------------------------------------------------

std::pair<bool, std::string> dft_matches_direct_sum() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(101);
  const std::size_t sizes[] = {4, 7, 64, 256};
  double worst = 0.0;
  int frames = 0;
  while (frames < 200) {
    for (const std::size_t n : sizes) {
      if (frames >= 200) break;
      ++frames;
      const auto x = random_frame(rng, n);
      for (const std::size_t nfft : {n, 2 * n, n + 1}) {
        const auto got = one_sided_dft(to_eigen(x), static_cast<Eigen::Index>(nfft));
        const auto want = testsupport::naive_one_sided_dft(x, nfft);
        double scale = 0.0;
        for (const auto& v : want) scale = std::max(scale, std::abs(v));
        for (Eigen::Index k = 0; k < got.values.size(); ++k)
          worst = std::max(worst, std::abs(got.values[k] -
                                           want[static_cast<std::size_t>(k)]) /
                                      scale);
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = worst < 1e-10 && seconds < 5.0;
  return {ok, "200 frames x 3 fft lengths, max rel err " + fmt(worst) + ", " +
                  fmt(seconds) + " s"};
}

std::pair<bool, std::string> parseval_energy_identity() {
  std::mt19937 rng(103);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n =
        2 * std::uniform_int_distribution<std::size_t>(2, 256)(rng);
    const auto x = random_frame(rng, n);
    const auto p = power_spectrum(one_sided_dft(to_eigen(x), static_cast<Eigen::Index>(n)));
    double sumsq = 0.0;
    for (const double v : x) sumsq += v * v;
    const double rhs = static_cast<double>(n) * sumsq;
    worst = std::max(worst, std::abs(p.sum() - rhs) / rhs);
  }
  return {worst < 1e-12, "100 trials, max rel err " + fmt(worst)};
}

std::pair<bool, std::string> hamming_bandwidth_in_range() {
  double lo = 1e9, hi = 0.0;
  for (const Eigen::Index n : {512, 1500, 4096}) {
    const double b = noise_power_bandwidth(make_window(WindowKind::hamming_periodic, n));
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  return {lo >= 1.35 && hi <= 1.37,
          "bandwidth range [" + fmt(lo) + ", " + fmt(hi) + "] bins"};
}

// Shared analysis for criteria 4 and 6: a 10 s, 100 Hz sine at 1500 Hz,
// rectangular one-second windows, unit sensitivity.
struct SineAnalysis {
  double spl_db = 0.0;
  TolVector tol_db;
  TolBandSet bands;
};

SineAnalysis analyze_reference_sine(double amplitude) {
  const double fs = 1500.0;
  const Eigen::Index n = 1500;
  const auto signal = to_eigen(sine_wave(15000, fs, 100.0, amplitude));
  const auto window = make_window(WindowKind::rectangular, n);
  const auto frames = apply_window(frame_segment(signal, n, 0), window);
  const auto psds = psd_matrix(frames, window, n, fs);
  SineAnalysis out;
  out.bands = tol_bands(fs, n, 1.0, 750.0);
  out.spl_db = spl(welch(psds));
  out.tol_db = tol(psds, out.bands);
  return out;
}

std::pair<bool, std::string> sine_level_closed_form() {
  const double amplitude = 0.8;
  const auto analysis = analyze_reference_sine(amplitude);
  const double want = 10.0 * std::log10(amplitude * amplitude / 2.0);
  const double diff = std::abs(analysis.spl_db - want);
  return {diff < 0.05, "broadband " + fmt(analysis.spl_db) + " dB vs closed form " +
                           fmt(want) + " dB, |diff| " + fmt(diff) + " dB"};
}

std::pair<bool, std::string> band_layout_structure() {
  const auto bands = tol_bands(1500.0, 1500, 1.0, 750.0);
  if (bands.size() != 29)
    return {false, "expected 29 bands, got " + std::to_string(bands.size())};
  const double ratio = std::pow(10.0, 0.1);
  double worst = 0.0;
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const auto [lower, upper] = bands.band_bounds[b];
    worst = std::max(worst, std::abs(upper / lower - ratio) / ratio);
  }
  bool disjoint = true;
  for (std::size_t b = 1; b < bands.size(); ++b)
    disjoint = disjoint && bands.bin_ranges[b - 1].second <= bands.bin_ranges[b].first;
  const bool ok = worst < 1e-12 && disjoint;
  return {ok, "29 bands, edge ratio rel err " + fmt(worst) +
                  (disjoint ? ", bin ranges disjoint" : ", bin ranges OVERLAP")};
}

std::pair<bool, std::string> band_dominance_for_pure_tone() {
  const auto analysis = analyze_reference_sine(0.8);
  double total = 0.0, in_band = 0.0;
  Eigen::Index band_100 = -1;
  for (std::size_t b = 0; b < analysis.bands.size(); ++b)
    if (analysis.bands.band_indices[b] == 20) band_100 = static_cast<Eigen::Index>(b);
  for (Eigen::Index b = 0; b < analysis.tol_db.size(); ++b) {
    if (!std::isfinite(analysis.tol_db[b])) continue;
    const double linear = std::pow(10.0, analysis.tol_db[b] / 10.0);
    total += linear;
    if (b == band_100) in_band += linear;
  }
  const double share = in_band / total;
  const double diff = std::abs(analysis.tol_db[band_100] - analysis.spl_db);
  const bool ok = band_100 >= 0 && share >= 0.99 && diff < 0.05;
  return {ok, "100 Hz band holds " + fmt(100.0 * share) + "% of band power, band vs "
                  "broadband |diff| " + fmt(diff) + " dB"};
}

std::pair<bool, std::string> cli_end_to_end(const std::string& cli) {
  if (cli.empty()) return {false, "no cli binary path supplied"};
  testsupport::TempDir dir("accept-cli");

  // 3587 samples at 1500 Hz: two whole one-second segments, 587 dropped.
  std::mt19937 rng(107);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  std::vector<double> x(3587);
  for (double& v : x) v = dist(rng);
  testsupport::write_file(dir.path() / "rec.wav",
                          testsupport::wav_bytes({.sample_rate = 1500},
                                                 testsupport::pcm16_from_unit(x)));
  write_text(dir.path() / "meta.csv",
             "filename,start_date\nrec.wav,2010-01-01T00:00:00Z\n");
  write_text(dir.path() / "run.conf",
             "metadata_path = " + (dir.path() / "meta.csv").string() + "\n" +
                 "audio_dir = " + dir.path().string() + "\n" +
                 "output_path = " + (dir.path() / "out.ndjson").string() + "\n" +
                 "segment_duration = 1.0\nwindow_size = 500\n");

  const std::string command = "\"" + cli + "\" run --config \"" +
                              (dir.path() / "run.conf").string() + "\" > \"" +
                              (dir.path() / "cli.log").string() + "\" 2>&1";
  const int status = std::system(command.c_str());
  const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (exit_code != 0) return {false, "cli exit code " + std::to_string(exit_code)};

  const auto lines = parse_ndjson(slurp(dir.path() / "out.ndjson"));
  std::vector<std::string> stamps;
  for (const auto& line : lines)
    if (line["type"] == "record")
      stamps.push_back(line["timestamp"].get<std::string>());
  const bool ok = lines.size() == 3 && stamps.size() == 2 &&
                  stamps[0] == "2010-01-01T00:00:00Z" &&
                  stamps[1] == "2010-01-01T00:00:01Z";
  std::string detail = std::to_string(stamps.size()) + " records";
  for (const auto& s : stamps) detail += " " + s;
  return {ok, detail + " (587-sample tail dropped)"};
}

std::pair<bool, std::string> output_independent_of_workers() {
  testsupport::TempDir dir("accept-det");
  std::mt19937 rng(109);
  std::string csv = "filename,start_date\n";
  for (int i = 0; i < 20; ++i) {
    const std::string name = "n" + std::to_string(i) + ".wav";
    const std::size_t samples = 300 + 50 * static_cast<std::size_t>(rng() % 12);
    std::uniform_real_distribution<double> dist(-0.4, 0.4);
    std::vector<double> x(samples);
    for (double& v : x) v = dist(rng);
    testsupport::write_file(dir.path() / name,
                            testsupport::wav_bytes({.sample_rate = 150},
                                                   testsupport::pcm16_from_unit(x)));
    char when[40];
    std::snprintf(when, sizeof(when), "2010-01-01T%02d:00:00Z", i);
    csv += name + "," + when + "\n";
  }
  write_text(dir.path() / "meta.csv", csv);

  PipelineConfig config;
  config.metadata_path = dir.path() / "meta.csv";
  config.audio_dir = dir.path();
  config.segment_duration = 1.0;
  config.window_size = 50;
  config.window_overlap = 25;

  config.output_path = dir.path() / "w1.ndjson";
  config.worker_count = 1;
  run(config);
  config.output_path = dir.path() / "wN.ndjson";
  config.worker_count = std::max(4u, std::thread::hardware_concurrency());
  run(config);

  const std::string a = slurp(dir.path() / "w1.ndjson");
  const std::string b = slurp(dir.path() / "wN.ndjson");
  const bool ok = !a.empty() && a == b;
  return {ok, "20 files, 1 vs " + std::to_string(config.worker_count) +
                  " workers: " + (ok ? "byte-identical" : "outputs differ")};
}

std::pair<bool, std::string> pipeline_matches_brute_force() {
  testsupport::TempDir dir("accept-ref");
  const double fs = 1500.0;
  const std::size_t n = 4500;  // 3 s
  const double sensitivity = -3.2;

  // Integer sample values generated once; oracle and pipeline both start
  // from value / 2^15.
  std::mt19937 rng(113);
  std::uniform_int_distribution<int> dist(-16000, 16000);
  std::vector<int> values(n);
  for (int& v : values) v = dist(rng);
  testsupport::write_file(
      dir.path() / "noise.wav",
      testsupport::wav_bytes({.sample_rate = 1500}, testsupport::pcm16_data(values)));
  write_text(dir.path() / "meta.csv",
             "filename,start_date\nnoise.wav,2010-01-01T00:00:00Z\n");

  PipelineConfig config;
  config.metadata_path = dir.path() / "meta.csv";
  config.audio_dir = dir.path();
  config.output_path = dir.path() / "out.ndjson";
  config.segment_duration = 1.0;
  config.window_size = 1500;
  config.sensitivity_db = sensitivity;
  config.tol_enabled = true;
  config.tol_low_freq = 1.0;
  config.tol_high_freq = 750.0;
  config.worker_count = 1;
  run(config);

  const auto lines = parse_ndjson(slurp(config.output_path));
  std::vector<json> records;
  for (const auto& line : lines)
    if (line["type"] == "record") records.push_back(line);
  // One-second windows make one-second segments collapse into a single
  // whole-file record averaging three windows.
  if (records.size() != 1)
    return {false, "expected 1 record, got " + std::to_string(records.size())};

  // Brute-force reference from first principles.
  const double gain = std::pow(10.0, sensitivity / 20.0);
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) samples[i] = values[i] / 32768.0 / gain;
  const auto window = testsupport::hamming_periodic(1500);

  double err_sq = 0.0;
  std::size_t err_n = 0;
  auto accumulate = [&](double got, double want) {
    const double scale = std::max(std::abs(want), 1e-300);
    const double rel = (got - want) / scale;
    err_sq += rel * rel;
    ++err_n;
  };

  const auto psd_frames = testsupport::naive_psd_frames(samples, window, 0, 1500, fs);
  if (psd_frames.size() != 3)
    return {false, "reference framing expected 3 windows"};
  const auto welch_ref = testsupport::naive_welch(psd_frames);
  const auto tol_ref = testsupport::naive_tol(psd_frames, fs, 1500, 1.0, 750.0);
  const double spl_ref = testsupport::naive_spl(welch_ref);

  const auto& rec = records[0];
  const auto welch_got = rec["welch"].get<std::vector<double>>();
  if (welch_got.size() != welch_ref.size()) return {false, "welch length mismatch"};
  for (std::size_t k = 0; k < welch_ref.size(); ++k)
    accumulate(welch_got[k], welch_ref[k]);
  accumulate(rec["spl_db"].get<double>(), spl_ref);
  const auto tol_got = rec["tol"].get<std::vector<json>>();
  if (tol_got.size() != tol_ref.size()) return {false, "band count mismatch"};
  for (std::size_t b = 0; b < tol_ref.size(); ++b) {
    // Bands whose bin range is empty at this resolution are -inf on both
    // sides; the JSON side spells that null.
    if (tol_got[b].is_null()) {
      if (std::isfinite(tol_ref[b])) return {false, "null band with finite reference"};
      continue;
    }
    accumulate(tol_got[b].get<double>(), tol_ref[b]);
  }
  const double rms = std::sqrt(err_sq / static_cast<double>(err_n));
  return {rms < 1e-12, "rms rel err " + fmt(rms) + " over " + std::to_string(err_n) +
                           " values (welch + spl + 29 bands, 3 windows averaged)"};
}

std::pair<bool, std::string> frame_counts_match_enumeration() {
  std::mt19937 rng(127);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index window = std::uniform_int_distribution<Eigen::Index>(1, 512)(rng);
    const Eigen::Index overlap =
        std::uniform_int_distribution<Eigen::Index>(0, window - 1)(rng);
    const Eigen::Index length =
        std::uniform_int_distribution<Eigen::Index>(0, 4096)(rng);
    Eigen::Index want = 0;
    for (Eigen::Index start = 0; start + window <= length; start += window - overlap)
      ++want;
    if (frame_count(length, window, overlap) != want)
      return {false, "mismatch at length " + std::to_string(length) + " window " +
                         std::to_string(window) + " overlap " + std::to_string(overlap)};
    ++checked;
  }
  return {true, std::to_string(checked) + " random shapes, all counts equal"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  // Keep the per-criterion report clean; expected advisories are not under test.
  soundscape::log::set_handler([](soundscape::log::Level, const std::string&) {});

  criterion(1, "one-sided dft equals the direct dft sum",
            [] { return dft_matches_direct_sum(); });
  criterion(2, "one-sided power preserves total energy",
            [] { return parseval_energy_identity(); });
  criterion(3, "hamming noise power bandwidth near 1.36 bins",
            [] { return hamming_bandwidth_in_range(); });
  criterion(4, "bin-centered sine hits its closed-form broadband level",
            [] { return sine_level_closed_form(); });
  criterion(5, "third-octave band layout (count, edges, bins)",
            [] { return band_layout_structure(); });
  criterion(6, "pure tone concentrates in its third-octave band",
            [] { return band_dominance_for_pure_tone(); });
  criterion(7, "cli segments a real recording with stepped timestamps",
            [&] { return cli_end_to_end(cli); });
  criterion(8, "output bytes independent of worker count",
            [] { return output_independent_of_workers(); });
  criterion(9, "pipeline matches a brute-force reference analysis",
            [] { return pipeline_matches_brute_force(); });
  criterion(10, "frame counts match exhaustive enumeration",
            [] { return frame_counts_match_enumeration(); });

  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures;
}
