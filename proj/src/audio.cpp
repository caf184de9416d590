#include "soundscape/audio.hpp"

#include <cmath>
#include <cstring>

#include "soundscape/errors.hpp"
#include "soundscape/log.hpp"

namespace soundscape {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 |
         static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

double decode_sample(const unsigned char* p, int bit_depth, bool ieee_float) {
  if (ieee_float) {
    float f;
    std::memcpy(&f, p, 4);
    return static_cast<double>(f);
  }
  switch (bit_depth) {
    case 8:
      // Unsigned convention with midpoint 128.
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16: {
      auto v = static_cast<std::int16_t>(p[0] | p[1] << 8);
      return v / 32768.0;
    }
    case 24: {
      std::int32_t v = p[0] | p[1] << 8 | p[2] << 16;
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32: {
      std::int32_t v;
      std::memcpy(&v, p, 4);
      return v / 2147483648.0;
    }
    default:
      return 0.0;  // unreachable, formats vetted at open
  }
}

}  // namespace

WavReader::WavReader(const std::filesystem::path& path)
    : stream_(path, std::ios::binary), display_name_(path.filename().string()) {
  if (!stream_)
    throw CorruptFileError(display_name_ + ": cannot open file");

  unsigned char hdr[12];
  if (!stream_.read(reinterpret_cast<char*>(hdr), 12) ||
      std::memcmp(hdr, "RIFF", 4) != 0 || std::memcmp(hdr + 8, "WAVE", 4) != 0)
    throw CorruptFileError(display_name_ + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  std::uint64_t data_offset = 0;
  std::uint64_t data_size = 0;
  std::uint16_t format_code = 0;

  unsigned char chunk[8];
  while (stream_.read(reinterpret_cast<char*>(chunk), 8)) {
    const std::uint32_t size = le32(chunk + 4);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16)
        throw CorruptFileError(display_name_ + ": fmt chunk too small");
      unsigned char fmt[16];
      if (!stream_.read(reinterpret_cast<char*>(fmt), 16))
        throw CorruptFileError(display_name_ + ": truncated fmt chunk");
      format_code = le16(fmt);
      info_.n_channels = le16(fmt + 2);
      info_.sample_rate = static_cast<double>(le32(fmt + 4));
      block_align_ = le16(fmt + 12);
      info_.bit_depth = le16(fmt + 14);
      stream_.seekg(size - 16 + (size & 1), std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt)
        throw CorruptFileError(display_name_ + ": data chunk precedes fmt chunk");
      data_offset = static_cast<std::uint64_t>(stream_.tellg());
      data_size = size;
      break;
    } else {
      stream_.seekg(size + (size & 1), std::ios::cur);
    }
  }
  if (!have_fmt || data_offset == 0)
    throw CorruptFileError(display_name_ + ": missing fmt or data chunk");

  if (format_code == kFormatIeeeFloat) {
    if (info_.bit_depth != 32)
      throw UnsupportedFormatError(display_name_ + ": only 32-bit IEEE float is supported, got " +
                                   std::to_string(info_.bit_depth) + "-bit");
    info_.ieee_float = true;
  } else if (format_code == kFormatPcm) {
    if (info_.bit_depth != 8 && info_.bit_depth != 16 && info_.bit_depth != 24 &&
        info_.bit_depth != 32)
      throw UnsupportedFormatError(display_name_ + ": unsupported PCM bit depth " +
                                   std::to_string(info_.bit_depth));
  } else {
    throw UnsupportedFormatError(display_name_ + ": unsupported format code " +
                                 std::to_string(format_code));
  }
  if (info_.n_channels < 1)
    throw CorruptFileError(display_name_ + ": channel count 0");
  if (info_.sample_rate <= 0)
    throw CorruptFileError(display_name_ + ": sample rate 0");

  bytes_per_sample_ = static_cast<std::size_t>(info_.bit_depth) / 8;
  const std::size_t expected_align = bytes_per_sample_ * info_.n_channels;
  if (block_align_ != expected_align) {
    // Some writers leave block_align stale; trust depth * channels.
    block_align_ = expected_align;
  }

  stream_.seekg(0, std::ios::end);
  const std::uint64_t available = static_cast<std::uint64_t>(stream_.tellg()) - data_offset;
  if (available < data_size)
    throw CorruptFileError(display_name_ + ": truncated data chunk, expected " +
                           std::to_string(data_size) + " bytes, found " +
                           std::to_string(available));
  if (data_size % block_align_ != 0)
    throw CorruptFileError(display_name_ + ": data chunk size " +
                           std::to_string(data_size) +
                           " is not a whole number of frames (frame size " +
                           std::to_string(block_align_) + ")");

  info_.n_frames = data_size / block_align_;
  stream_.clear();
  stream_.seekg(static_cast<std::streamoff>(data_offset));

  if (info_.n_channels > 1)
    log::warn(display_name_ + ": " + std::to_string(info_.n_channels) +
              " channels, decoding channel 1 only");
}

Eigen::Index WavReader::read(Eigen::Ref<Eigen::ArrayXd> out) {
  const std::uint64_t want =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(out.size()), frames_remaining());
  if (want == 0) return 0;

  buffer_.resize(want * block_align_);
  if (!stream_.read(reinterpret_cast<char*>(buffer_.data()),
                    static_cast<std::streamsize>(buffer_.size())))
    throw CorruptFileError(display_name_ + ": read failed inside data chunk");

  const unsigned char* p = buffer_.data();
  for (std::uint64_t i = 0; i < want; ++i, p += block_align_)
    out[static_cast<Eigen::Index>(i)] = decode_sample(p, info_.bit_depth, info_.ieee_float);

  frames_read_ += want;
  return static_cast<Eigen::Index>(want);
}

void WavReader::describe(AudioFileDescriptor& descriptor) const {
  descriptor.sample_rate = info_.sample_rate;
  descriptor.bit_depth = info_.bit_depth;
  descriptor.n_samples = info_.n_frames;
  descriptor.n_channels = info_.n_channels;
}

RawAudio read_wav(const std::filesystem::path& path) {
  WavReader reader(path);
  RawAudio raw;
  raw.sample_rate = reader.info().sample_rate;
  raw.channel_count = reader.info().n_channels;
  raw.samples.resize(static_cast<Eigen::Index>(reader.info().n_frames));
  const Eigen::Index got = reader.read(raw.samples);
  raw.samples.conservativeResize(got);
  return raw;
}

Eigen::ArrayXd apply_sensitivity(const Eigen::Ref<const Eigen::ArrayXd>& samples,
                                 double sensitivity_db) {
  if (!std::isfinite(sensitivity_db))
    throw ConfigError("sensitivity must be finite, got " +
                      std::to_string(sensitivity_db));
  const double factor = std::pow(10.0, sensitivity_db / 20.0);
  return samples / factor;
}

CalibratedSignal calibrate(const RawAudio& raw, double sensitivity_db,
                           AudioFileDescriptor source) {
  CalibratedSignal out;
  out.samples = apply_sensitivity(raw.samples, sensitivity_db);
  out.sample_rate = raw.sample_rate;
  out.source = std::move(source);
  return out;
}

}  // namespace soundscape
