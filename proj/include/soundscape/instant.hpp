#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace soundscape {

/// An absolute UTC instant with millisecond resolution.
class Instant {
 public:
  Instant() = default;

  static Instant from_unix_millis(std::int64_t millis) { return Instant(millis); }

  std::int64_t unix_millis() const { return millis_; }
  std::int64_t unix_seconds() const;

  /// This instant shifted by a (possibly fractional) number of seconds,
  /// rounded to the nearest millisecond.
  Instant plus_seconds(double seconds) const;

  friend auto operator<=>(const Instant&, const Instant&) = default;

 private:
  explicit Instant(std::int64_t millis) : millis_(millis) {}

  std::int64_t millis_ = 0;
};

/// Parses an ISO-8601 timestamp with an explicit zone designator
/// ("2010-01-01T00:00:00Z", "2010-01-01T01:00:00+01:00"). Offsets are
/// normalized to UTC. Naive (zoneless) timestamps are rejected with
/// TimestampFormatError rather than guessed at.
Instant parse_timestamp(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ", appending ".mmm" only when the
/// instant has a sub-second component. Inverse of parse_timestamp.
std::string format_iso8601(const Instant& instant);

}  // namespace soundscape
