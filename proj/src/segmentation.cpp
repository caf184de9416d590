#include "soundscape/segmentation.hpp"

#include <cmath>
#include <numbers>

#include "soundscape/errors.hpp"

namespace soundscape {

const char* to_string(WindowKind kind) {
  return kind == WindowKind::hamming_periodic ? "hamming_periodic" : "rectangular";
}

WindowKind parse_window_kind(std::string_view name) {
  if (name == "hamming_periodic") return WindowKind::hamming_periodic;
  if (name == "rectangular") return WindowKind::rectangular;
  throw ConfigError("unknown window kind \"" + std::string(name) +
                    "\" (expected hamming_periodic or rectangular)");
}

void SegmentationConfig::validate() const {
  if (segment_duration <= 0.0)
    throw ConfigError("segment_duration must be positive");
  if (window_size < 1) throw ConfigError("window_size must be at least 1");
  if (window_overlap < 0 || window_overlap >= window_size)
    throw ConfigError("window_overlap must satisfy 0 <= overlap < window_size");
  if (nfft < window_size) throw ConfigError("nfft must be >= window_size");
}

Eigen::Index segment_size_for(double segment_duration, double sample_rate) {
  return static_cast<Eigen::Index>(std::floor(segment_duration * sample_rate));
}

std::vector<Segment> split_segments(const CalibratedSignal& signal,
                                    double segment_duration) {
  if (segment_duration <= 0.0)
    throw ConfigError("segment_duration must be positive");
  const Eigen::Index size = segment_size_for(segment_duration, signal.sample_rate);
  if (size <= 0)
    throw ConfigError("segment_duration * sample_rate yields an empty segment");

  const Eigen::Index count = signal.samples.size() / size;
  std::vector<Segment> segments;
  segments.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index s = 0; s < count; ++s)
    segments.push_back({s, signal.samples.segment(s * size, size)});
  return segments;
}

Eigen::Index frame_count(Eigen::Index segment_length, Eigen::Index window_size,
                         Eigen::Index overlap) {
  if (segment_length < window_size) return 0;
  return (segment_length - overlap) / (window_size - overlap);
}

Eigen::ArrayXXd frame_segment(const Eigen::Ref<const Eigen::ArrayXd>& segment,
                              Eigen::Index window_size, Eigen::Index overlap) {
  if (window_size < 1) throw ConfigError("window_size must be at least 1");
  if (overlap < 0 || overlap >= window_size)
    throw ConfigError("window_overlap must satisfy 0 <= overlap < window_size");

  const Eigen::Index hop = window_size - overlap;
  const Eigen::Index m = frame_count(segment.size(), window_size, overlap);
  Eigen::ArrayXXd frames(m, window_size);
  for (Eigen::Index i = 0; i < m; ++i)
    frames.row(i) = segment.segment(i * hop, window_size).transpose();
  return frames;
}

Eigen::ArrayXd make_window(WindowKind kind, Eigen::Index size) {
  if (size < 1) throw ConfigError("window size must be at least 1");
  Eigen::ArrayXd w(size);
  switch (kind) {
    case WindowKind::hamming_periodic:
      for (Eigen::Index n = 0; n < size; ++n)
        w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                      static_cast<double>(size));
      break;
    case WindowKind::rectangular:
      w.setOnes();
      break;
  }
  return w;
}

Eigen::ArrayXXd apply_window(const Eigen::Ref<const Eigen::ArrayXXd>& frames,
                             const Eigen::Ref<const Eigen::ArrayXd>& window) {
  if (frames.cols() != window.size())
    throw ShapeError("frame length " + std::to_string(frames.cols()) +
                     " does not match window length " + std::to_string(window.size()));
  return frames.rowwise() * window.transpose();
}

double noise_power_bandwidth(const Eigen::Ref<const Eigen::ArrayXd>& window) {
  const double sum = window.sum();
  const double sumsq = window.square().sum();
  if (sumsq == 0.0) throw ConfigError("window is identically zero");
  return static_cast<double>(window.size()) * sumsq / (sum * sum);
}

FrameSet make_frame_set(const Eigen::Ref<const Eigen::ArrayXd>& segment_samples,
                        Eigen::Index segment_index, const SegmentationConfig& config,
                        const Eigen::Ref<const Eigen::ArrayXd>& window) {
  FrameSet set;
  set.frames = apply_window(
      frame_segment(segment_samples, config.window_size, config.window_overlap),
      window);
  set.window = window;
  set.segment_index = segment_index;
  set.config = config;
  return set;
}

}  // namespace soundscape
