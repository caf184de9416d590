#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <utility>
#include <vector>

#include "soundscape/audio.hpp"

namespace soundscape {

enum class WindowKind { hamming_periodic, rectangular };

const char* to_string(WindowKind kind);
WindowKind parse_window_kind(std::string_view name);

struct SegmentationConfig {
  double segment_duration = 0.0;   // seconds per integration segment
  Eigen::Index window_size = 0;    // analysis window length N, samples
  Eigen::Index window_overlap = 0; // samples shared between adjacent windows
  Eigen::Index nfft = 0;           // FFT length, >= window_size
  WindowKind window_kind = WindowKind::hamming_periodic;

  Eigen::Index hop() const { return window_size - window_overlap; }

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// The windowed analysis frames of one segment, one frame per row. Frames
/// that would run past the end of the segment are never included.
struct FrameSet {
  Eigen::ArrayXXd frames;  // M x N, already multiplied by `window`
  Eigen::ArrayXd window;
  Eigen::Index segment_index = 0;
  SegmentationConfig config;
};

struct Segment {
  Eigen::Index index = 0;
  Eigen::ArrayXd samples;
};

/// floor(segment_duration * sample_rate), the integration segment length in
/// samples.
Eigen::Index segment_size_for(double segment_duration, double sample_rate);

/// Cuts the signal into contiguous, non-overlapping segments of
/// floor(segment_duration * fs) samples; the truncated tail is discarded.
/// Callers wanting the whole file as a single segment (the
/// segment_size <= window_size case) skip this and frame the file directly.
std::vector<Segment> split_segments(const CalibratedSignal& signal,
                                    double segment_duration);

/// Lays out M = floor((L - overlap) / (N - overlap)) full windows of length
/// N starting every hop samples, one per row. L < N yields an empty matrix.
Eigen::ArrayXXd frame_segment(const Eigen::Ref<const Eigen::ArrayXd>& segment,
                              Eigen::Index window_size, Eigen::Index overlap);

/// Number of full windows frame_segment would produce, without building them.
Eigen::Index frame_count(Eigen::Index segment_length, Eigen::Index window_size,
                         Eigen::Index overlap);

/// hamming_periodic: w[n] = 0.54 - 0.46 cos(2 pi n / N); rectangular: ones.
Eigen::ArrayXd make_window(WindowKind kind, Eigen::Index size);

/// Elementwise frame[m][n] * w[n]. The amplitude correction alpha is never
/// applied to samples; it cancels inside the PSD normalization.
Eigen::ArrayXXd apply_window(const Eigen::Ref<const Eigen::ArrayXXd>& frames,
                             const Eigen::Ref<const Eigen::ArrayXd>& window);

/// Noise power bandwidth B = N sum(w^2) / (sum w)^2 in bins; ~1.36 for a
/// Hamming window, exactly 1 for rectangular.
double noise_power_bandwidth(const Eigen::Ref<const Eigen::ArrayXd>& window);

/// Frames and windows one segment in a single step.
FrameSet make_frame_set(const Eigen::Ref<const Eigen::ArrayXd>& segment_samples,
                        Eigen::Index segment_index, const SegmentationConfig& config,
                        const Eigen::Ref<const Eigen::ArrayXd>& window);

}  // namespace soundscape
