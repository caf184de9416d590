#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "soundscape/metadata.hpp"

namespace soundscape {

/// Decoded waveform, channel 1 only, normalized to [-1, 1) for integer PCM
/// sources (sample / 2^(B-1), 8-bit unsigned offset removed).
struct RawAudio {
  Eigen::ArrayXd samples;
  double sample_rate = 0.0;
  int channel_count = 1;
};

/// Pressure waveform in linear uPa-referenced units after applying the
/// scalar hydrophone sensitivity.
struct CalibratedSignal {
  Eigen::ArrayXd samples;
  double sample_rate = 0.0;
  AudioFileDescriptor source;
};

struct WavInfo {
  double sample_rate = 0.0;
  int bit_depth = 0;
  int n_channels = 0;
  std::uint64_t n_frames = 0;
  bool ieee_float = false;
};

/// Streaming RIFF/WAVE decoder. Accepts PCM format code 1 (8/16/24/32-bit
/// integer) and code 3 (IEEE float32); everything else is rejected. Only the
/// first channel is decoded; a warning is logged for multichannel input.
class WavReader {
 public:
  explicit WavReader(const std::filesystem::path& path);

  const WavInfo& info() const { return info_; }

  /// Decodes up to out.size() frames into `out`, returning the count
  /// actually read (short only at end of data).
  Eigen::Index read(Eigen::Ref<Eigen::ArrayXd> out);

  std::uint64_t frames_remaining() const { return info_.n_frames - frames_read_; }

  /// Copies sample_rate / bit_depth / n_samples / n_channels from the WAV
  /// header into a descriptor; headers are authoritative over the CSV.
  void describe(AudioFileDescriptor& descriptor) const;

 private:
  std::ifstream stream_;
  std::string display_name_;
  WavInfo info_;
  std::uint64_t frames_read_ = 0;
  std::size_t block_align_ = 0;
  std::size_t bytes_per_sample_ = 0;
  std::vector<unsigned char> buffer_;
};

/// Decodes a whole file at once. Convenience wrapper over WavReader for
/// corpus-scale work prefer the streaming interface.
RawAudio read_wav(const std::filesystem::path& path);

/// Applies the scalar sensitivity S (dB re 1 V/uPa): every sample is divided
/// by 10^(S/20). Keeping with the reference numeric path, samples stay on
/// the [-1, 1) normalized scale and S absorbs the bit-scale constant.
CalibratedSignal calibrate(const RawAudio& raw, double sensitivity_db,
                           AudioFileDescriptor source = {});

/// Same operation on a bare chunk, for streaming use.
Eigen::ArrayXd apply_sensitivity(const Eigen::Ref<const Eigen::ArrayXd>& samples,
                                 double sensitivity_db);

}  // namespace soundscape
