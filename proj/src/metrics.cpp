#include "soundscape/metrics.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "soundscape/errors.hpp"

namespace soundscape {

namespace {

constexpr int kCandidateBands = 60;
const double kEdgeFactor = std::pow(10.0, 0.05);

}  // namespace

TolBandSet tol_bands(double sample_rate, Eigen::Index nfft, double low_freq,
                     double high_freq) {
  if (nfft != static_cast<Eigen::Index>(std::llround(sample_rate)))
    throw TolConfigError(
        "Incorrect windowFunction for TOL, it should be of size sampleRate.");
  if (low_freq < 1.0)
    throw TolConfigError("Incorrect lowFreq for TOL, it should be higher than 1.0.");
  if (high_freq > sample_rate / 2.0)
    throw TolConfigError(
        "Incorrect highFreq for TOL, it should be lower than sampleRate/2.");
  if (low_freq > high_freq)
    throw TolConfigError(
        "Incorrect lowFreq,highFreq for TOL, lowFreq is higher than highFreq.");

  TolBandSet set;
  set.sample_rate = sample_rate;
  set.nfft = nfft;

  std::vector<double> centers;
  const double nyquist = sample_rate / 2.0;
  for (int i = 0; i < kCandidateBands; ++i) {
    const double center = std::pow(10.0, 0.1 * i);
    const double lower = center / kEdgeFactor;
    const double upper = center * kEdgeFactor;
    if (!(upper < nyquist && low_freq <= upper && lower < high_freq)) continue;

    set.band_indices.push_back(i);
    centers.push_back(center);
    set.band_bounds.emplace_back(lower, upper);
    const double bins_per_hz = static_cast<double>(nfft) / sample_rate;
    set.bin_ranges.emplace_back(
        static_cast<Eigen::Index>(std::floor(lower * bins_per_hz)),
        static_cast<Eigen::Index>(std::floor(upper * bins_per_hz)));
  }
  set.band_centers =
      Eigen::Map<const Eigen::ArrayXd>(centers.data(), static_cast<Eigen::Index>(centers.size()));
  return set;
}

void check_tol_signal_length(std::uint64_t n_samples, double sample_rate) {
  if (n_samples < static_cast<std::uint64_t>(std::llround(sample_rate)))
    throw TolConfigError(
        "Signal incompatible with TOL computation, it should be longer than a second.");
}

TolVector tol(const Eigen::Ref<const Eigen::ArrayXXd>& psd_frames,
              const TolBandSet& bands) {
  const Eigen::Index m = psd_frames.rows();
  const Eigen::Index k = psd_frames.cols();
  if (m < 1) throw EmptySegmentError("no frames for TOL");
  if (k != spectrum_size(bands.nfft))
    throw ShapeError("PSD has " + std::to_string(k) + " bins but band set expects " +
                     std::to_string(spectrum_size(bands.nfft)));

  TolVector levels(static_cast<Eigen::Index>(bands.size()));
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const auto [lo, hi] = bands.bin_ranges[b];
    double sum = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
      sum += psd_frames.row(i).segment(lo, hi - lo).sum();
    // Linear mean over frames, then dB re 1 uPa^2 (p_ref = 1).
    levels[static_cast<Eigen::Index>(b)] =
        10.0 * std::log10(sum / static_cast<double>(m));
  }
  return levels;
}

double spl(const WelchVector& welch_vector) {
  if (welch_vector.values.size() == 0)
    throw ShapeError("SPL requires a non-empty Welch vector");
  return 10.0 * std::log10(welch_vector.values.sum());
}

std::string nominal_band_label(int band_index) {
  // ISO nominal mantissas for one decade of third-octaves.
  static constexpr std::array<double, 10> kMantissa = {1.0, 1.25, 1.6,  2.0, 2.5,
                                                       3.15, 4.0,  5.0, 6.3, 8.0};
  const double value =
      kMantissa[static_cast<std::size_t>(band_index % 10)] *
      std::pow(10.0, band_index / 10);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g Hz", value);
  return buf;
}

}  // namespace soundscape
