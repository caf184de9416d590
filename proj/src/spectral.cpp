#include "soundscape/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include "soundscape/errors.hpp"

namespace soundscape {

Eigen::Index spectrum_size(Eigen::Index nfft) { return nfft / 2 + 1; }

Spectrum one_sided_dft(const Eigen::Ref<const Eigen::ArrayXd>& frame,
                       Eigen::Index nfft, double sample_rate) {
  if (nfft < 1)
    throw ConfigError("nfft must be at least 1, got " + std::to_string(nfft));
  if (nfft < frame.size())
    throw ConfigError("nfft " + std::to_string(nfft) + " is smaller than frame length " +
                      std::to_string(frame.size()));

  // The one-point transform is the plain sum; the FFT backend cannot plan it.
  if (nfft == 1) {
    Spectrum spectrum;
    spectrum.values = Eigen::ArrayXcd::Constant(1, std::complex<double>(frame.sum(), 0.0));
    spectrum.nfft = 1;
    spectrum.sample_rate = sample_rate;
    return spectrum;
  }

  // One cached plan set per thread; kissfft reuses twiddles per nfft.
  static thread_local Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);

  Eigen::VectorXd padded = Eigen::VectorXd::Zero(nfft);
  padded.head(frame.size()) = frame.matrix();
  Eigen::VectorXcd bins;
  fft.fwd(bins, padded);

  Spectrum spectrum;
  spectrum.values = bins.array();
  spectrum.nfft = nfft;
  spectrum.sample_rate = sample_rate;
  return spectrum;
}

Eigen::ArrayXd power_spectrum(const Spectrum& spectrum) {
  Eigen::ArrayXd p = spectrum.values.abs2();
  const Eigen::Index k = p.size();
  // Double everything except DC and, when nfft is even, the Nyquist bin.
  const Eigen::Index last = spectrum.nfft % 2 == 0 ? k - 1 : k;
  if (last > 1) p.segment(1, last - 1) *= 2.0;
  return p;
}

PsdVector psd(const Eigen::Ref<const Eigen::ArrayXd>& power, double sample_rate,
              const Eigen::Ref<const Eigen::ArrayXd>& window, Eigen::Index nfft) {
  const double denom = sample_rate * window.square().sum();
  if (denom == 0.0)
    throw ConfigError("PSD normalization requires a non-zero window and sample rate");
  PsdVector out;
  out.values = power / denom;
  out.frequency_step = sample_rate / static_cast<double>(nfft);
  return out;
}

Eigen::ArrayXXd psd_matrix(const Eigen::Ref<const Eigen::ArrayXXd>& windowed_frames,
                           const Eigen::Ref<const Eigen::ArrayXd>& window,
                           Eigen::Index nfft, double sample_rate) {
  const Eigen::Index m = windowed_frames.rows();
  const Eigen::Index k = spectrum_size(nfft);
  Eigen::ArrayXXd rows(m, k);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::ArrayXd frame = windowed_frames.row(i).transpose();
    const Spectrum spectrum = one_sided_dft(frame, nfft, sample_rate);
    rows.row(i) =
        psd(power_spectrum(spectrum), sample_rate, window, nfft).values.transpose();
  }
  return rows;
}

WelchVector welch(const Eigen::Ref<const Eigen::ArrayXXd>& psd_frames) {
  const Eigen::Index m = psd_frames.rows();
  if (m == 0) throw EmptySegmentError("no frames to average");

  Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(psd_frames.cols());
  for (Eigen::Index i = 0; i < m; ++i) sum += psd_frames.row(i).transpose();

  WelchVector out;
  out.values = sum / static_cast<double>(m);
  out.n_frames_averaged = m;
  return out;
}

}  // namespace soundscape
