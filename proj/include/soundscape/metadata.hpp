#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "soundscape/instant.hpp"

namespace soundscape {

/// One row of the campaign CSV plus the audio properties read back from the
/// WAV header at decode time. The CSV is only authoritative for `name` and
/// `start_instant`; everything else stays zero until a decoder fills it in.
struct AudioFileDescriptor {
  std::string name;        // WAV filename, treated as an opaque key
  Instant start_instant;   // absolute time of the first sample

  double sample_rate = 0.0;
  int bit_depth = 0;
  std::uint64_t n_samples = 0;
  int n_channels = 0;
};

/// Parses the campaign CSV (UTF-8, comma separated, first row header) into
/// descriptors, preserving row order. Requires `filename` and `start_date`
/// columns, matched case-sensitively; extra columns are ignored. Rows naming
/// the same file twice are rejected. Only files listed here are ever
/// processed.
std::vector<AudioFileDescriptor> parse_metadata(std::string_view csv_text);

}  // namespace soundscape
