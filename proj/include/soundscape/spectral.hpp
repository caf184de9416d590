#pragma once

#include <Eigen/Dense>

namespace soundscape {

/// One-sided DFT of a single windowed frame. K = nfft/2 + 1 bins for even
/// nfft, (nfft+1)/2 for odd.
struct Spectrum {
  Eigen::ArrayXcd values;
  Eigen::Index nfft = 0;
  double sample_rate = 0.0;
};

/// Density-normalized power spectrum of one frame, uPa^2/Hz, linear.
struct PsdVector {
  Eigen::ArrayXd values;
  double frequency_step = 0.0;  // sample_rate / nfft, Hz
};

/// Per-segment linear average of M frame PSDs.
struct WelchVector {
  Eigen::ArrayXd values;
  Eigen::Index n_frames_averaged = 0;
};

/// Number of one-sided spectrum bins for a given FFT length.
Eigen::Index spectrum_size(Eigen::Index nfft);

/// DFT of the frame zero-padded to nfft, negative-frequency bins discarded.
/// Matches the direct DFT sum to full double precision.
Spectrum one_sided_dft(const Eigen::Ref<const Eigen::ArrayXd>& frame,
                       Eigen::Index nfft, double sample_rate = 0.0);

/// |X[k]|^2 with all bins doubled except DC and, for even nfft, Nyquist, so
/// one-sided energy matches the two-sided total.
Eigen::ArrayXd power_spectrum(const Spectrum& spectrum);

/// Normalizes an unnormalized one-sided power spectrum to a density:
/// psd[k] = power[k] / (fs * sum(w^2)). Algebraically this is the
/// P/(B*df) form with the window's coherent gain cancelled, so no separate
/// amplitude correction is ever applied to the samples. nfft only sets the
/// frequency_step metadata (fs/nfft); the normalization uses the N window
/// samples even when zero-padded.
PsdVector psd(const Eigen::Ref<const Eigen::ArrayXd>& power, double sample_rate,
              const Eigen::Ref<const Eigen::ArrayXd>& window, Eigen::Index nfft);

/// All per-frame PSDs of a windowed frame matrix, one row per frame.
Eigen::ArrayXXd psd_matrix(const Eigen::Ref<const Eigen::ArrayXXd>& windowed_frames,
                           const Eigen::Ref<const Eigen::ArrayXd>& window,
                           Eigen::Index nfft, double sample_rate);

/// Elementwise arithmetic mean over frame PSDs, in linear space, with a
/// fixed row order so parallel and serial runs agree bit for bit.
WelchVector welch(const Eigen::Ref<const Eigen::ArrayXXd>& psd_frames);

}  // namespace soundscape
