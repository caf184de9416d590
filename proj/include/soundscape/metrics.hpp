#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "soundscape/spectral.hpp"

namespace soundscape {

/// Third-octave band layout for one (sample_rate, nfft) pair. Centers are
/// the base-ten exact values 10^(0.1 i); band edges sit at center * 10^-0.05
/// and center * 10^0.05, and each band maps to a half-open PSD bin range
/// [floor(lower * nfft / fs), floor(upper * nfft / fs)).
struct TolBandSet {
  std::vector<int> band_indices;  // the retained i values
  Eigen::ArrayXd band_centers;    // exact center frequencies, Hz
  std::vector<std::pair<double, double>> band_bounds;         // (lower, upper) Hz
  std::vector<std::pair<Eigen::Index, Eigen::Index>> bin_ranges;  // half-open
  double sample_rate = 0.0;
  Eigen::Index nfft = 0;

  std::size_t size() const { return bin_ranges.size(); }
};

/// Per-band levels in dB re 1 uPa^2; -inf where a band's power is zero.
using TolVector = Eigen::ArrayXd;

/// Builds the retained band set from the 60 candidate centers i = 0..59.
/// A band survives when its upper edge is below Nyquist, at or above
/// low_freq, and its lower edge is below high_freq. Analysis windows must be
/// one second long (nfft == round(sample_rate)) and the requested range must
/// satisfy 1.0 <= low_freq < high_freq <= sample_rate / 2; violations raise
/// TolConfigError.
TolBandSet tol_bands(double sample_rate, Eigen::Index nfft, double low_freq,
                     double high_freq);

/// Raises TolConfigError when a signal is too short for third-octave
/// analysis (shorter than one second of samples).
void check_tol_signal_length(std::uint64_t n_samples, double sample_rate);

/// Third-octave levels from per-frame PSDs: band power is summed over the
/// band's bins per frame, averaged over frames in linear space, then taken
/// to dB.
TolVector tol(const Eigen::Ref<const Eigen::ArrayXXd>& psd_frames,
              const TolBandSet& bands);

/// Broadband SPL in dB re 1 uPa: 10 log10 of the summed Welch PSD bins.
double spl(const WelchVector& welch_vector);

/// Conventional nominal label for third-octave band i ("100 Hz" for i=20).
/// Exact centers stay authoritative; labels are for readability only.
std::string nominal_band_label(int band_index);

}  // namespace soundscape
