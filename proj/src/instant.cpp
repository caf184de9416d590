#include "soundscape/instant.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "soundscape/errors.hpp"

namespace soundscape {

namespace {

// Civil-calendar <-> day-count conversions (proleptic Gregorian, day 0 =
// 1970-01-01). Standard constant-time algorithms.
std::int64_t days_from_civil(std::int64_t y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const int yoe = static_cast<int>(y - era * 400);
  const int doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const int doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const int doe = static_cast<int>(z - era * 146097);
  const int yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yc = yoe + era * 400;
  const int doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const int mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = yc + (m <= 2);
}

bool is_leap(std::int64_t y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

int days_in_month(std::int64_t y, int m) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

[[noreturn]] void fail(std::string_view text, const char* why) {
  throw TimestampFormatError("bad timestamp \"" + std::string(text) + "\": " + why);
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  char take() { return s_[pos_++]; }

  bool take_if(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  // Reads exactly `width` decimal digits.
  bool fixed_int(int width, int& out) {
    out = 0;
    for (int i = 0; i < width; ++i) {
      if (done() || s_[pos_] < '0' || s_[pos_] > '9') return false;
      out = out * 10 + (s_[pos_++] - '0');
    }
    return true;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::int64_t Instant::unix_seconds() const {
  // Floor division so pre-epoch instants round toward the past.
  std::int64_t q = millis_ / 1000;
  if (millis_ % 1000 < 0) --q;
  return q;
}

Instant Instant::plus_seconds(double seconds) const {
  return Instant(millis_ + std::llround(seconds * 1000.0));
}

Instant parse_timestamp(std::string_view text) {
  Cursor c(text);
  int year, month, day, hour, minute, second;
  if (!c.fixed_int(4, year) || !c.take_if('-') || !c.fixed_int(2, month) ||
      !c.take_if('-') || !c.fixed_int(2, day))
    fail(text, "expected YYYY-MM-DD");
  if (!c.take_if('T')) fail(text, "expected 'T' date/time separator");
  if (!c.fixed_int(2, hour) || !c.take_if(':') || !c.fixed_int(2, minute) ||
      !c.take_if(':') || !c.fixed_int(2, second))
    fail(text, "expected HH:MM:SS");

  if (month < 1 || month > 12) fail(text, "month out of range");
  if (day < 1 || day > days_in_month(year, month)) fail(text, "day out of range");
  if (hour > 23 || minute > 59 || second > 59) fail(text, "time out of range");

  // Optional fraction; kept to millisecond resolution, extra digits dropped.
  std::int64_t frac_millis = 0;
  if (c.take_if('.')) {
    int digits = 0;
    while (c.peek() >= '0' && c.peek() <= '9') {
      int v = c.take() - '0';
      if (digits < 3) frac_millis = frac_millis * 10 + v;
      ++digits;
    }
    if (digits == 0) fail(text, "empty fractional second");
    while (digits < 3) {
      frac_millis *= 10;
      ++digits;
    }
  }

  // Mandatory zone designator: 'Z' or a numeric offset.
  std::int64_t offset_minutes = 0;
  if (c.take_if('Z')) {
    // UTC
  } else if (c.peek() == '+' || c.peek() == '-') {
    const int sign = c.take() == '-' ? -1 : 1;
    int oh = 0, om = 0;
    if (!c.fixed_int(2, oh)) fail(text, "expected offset hours");
    if (c.take_if(':')) {
      if (!c.fixed_int(2, om)) fail(text, "expected offset minutes");
    } else if (c.peek() >= '0' && c.peek() <= '9') {
      if (!c.fixed_int(2, om)) fail(text, "expected offset minutes");
    }
    if (oh > 23 || om > 59) fail(text, "offset out of range");
    offset_minutes = sign * (oh * 60 + om);
  } else {
    fail(text, "missing timezone designator (naive timestamps are rejected)");
  }
  if (!c.done()) fail(text, "trailing characters");

  const std::int64_t days = days_from_civil(year, month, day);
  const std::int64_t secs =
      days * 86400 + hour * 3600 + minute * 60 + second - offset_minutes * 60;
  return Instant::from_unix_millis(secs * 1000 + frac_millis);
}

std::string format_iso8601(const Instant& instant) {
  const std::int64_t secs = instant.unix_seconds();
  const std::int64_t millis = instant.unix_millis() - secs * 1000;
  std::int64_t days = secs / 86400;
  std::int64_t sod = secs % 86400;
  if (sod < 0) {
    sod += 86400;
    --days;
  }
  std::int64_t year;
  int month, day;
  civil_from_days(days, year, month, day);
  const int hour = static_cast<int>(sod / 3600);
  const int minute = static_cast<int>(sod % 3600 / 60);
  const int second = static_cast<int>(sod % 60);

  char buf[72];
  if (millis != 0) {
    std::snprintf(buf, sizeof(buf), "%04lld-%02d-%02dT%02d:%02d:%02d.%03lldZ",
                  static_cast<long long>(year), month, day, hour, minute, second,
                  static_cast<long long>(millis));
  } else {
    std::snprintf(buf, sizeof(buf), "%04lld-%02d-%02dT%02d:%02d:%02dZ",
                  static_cast<long long>(year), month, day, hour, minute, second);
  }
  return buf;
}

}  // namespace soundscape
