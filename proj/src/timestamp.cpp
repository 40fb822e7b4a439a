#include "afrrcast/timestamp.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "afrrcast/errors.hpp"

namespace afrrcast {

namespace {

// Howard Hinnant's days-from-civil algorithm.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yr + (m <= 2));
}

// UTC instant of the last Sunday of `month` at 01:00 UTC.
UnixSeconds last_sunday_01utc(int year, int month) {
  // March and October both have 31 days.
  std::int64_t days = days_from_civil(year, month, 31);
  // weekday: days since epoch; 1970-01-01 was a Thursday (weekday 3, Monday=0).
  const int wd = static_cast<int>(((days % 7) + 7 + 3) % 7);
  const int back = (wd == 6) ? 0 : wd + 1;  // steps back to the previous Sunday
  days -= back;
  return days * 86400 + 3600;
}

int parse_int(const std::string& s, std::size_t pos, std::size_t len) {
  if (pos + len > s.size()) throw DataError("timestamp truncated: '" + s + "'");
  int value = 0;
  const auto res = std::from_chars(s.data() + pos, s.data() + pos + len, value);
  if (res.ec != std::errc() || res.ptr != s.data() + pos + len)
    throw DataError("bad timestamp field in '" + s + "'");
  return value;
}

}  // namespace

UnixSeconds civil_to_unix(const CivilTime& c) {
  return days_from_civil(c.year, c.month, c.day) * 86400 + c.hour * 3600 + c.minute * 60 +
         c.second;
}

CivilTime unix_to_civil(UnixSeconds t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  CivilTime c;
  civil_from_days(days, c.year, c.month, c.day);
  c.hour = static_cast<int>(rem / 3600);
  c.minute = static_cast<int>((rem % 3600) / 60);
  c.second = static_cast<int>(rem % 60);
  return c;
}

int weekday_of(UnixSeconds t) {
  std::int64_t days = t / 86400;
  if (t % 86400 < 0) days -= 1;
  return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

UnixSeconds parse_utc(const std::string& text) {
  // Minimal shapes: 2019-07-01T00:15, :SS optional, trailing Z/+00:00 optional.
  if (text.size() < 16) throw DataError("timestamp too short: '" + text + "'");
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':')
    throw DataError("unrecognized timestamp format: '" + text + "'");
  CivilTime c;
  c.year = parse_int(text, 0, 4);
  c.month = parse_int(text, 5, 2);
  c.day = parse_int(text, 8, 2);
  c.hour = parse_int(text, 11, 2);
  c.minute = parse_int(text, 14, 2);
  std::size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    c.second = parse_int(text, pos + 1, 2);
    pos += 3;
  }
  const std::string tail = text.substr(pos);
  if (!(tail.empty() || tail == "Z" || tail == "+00:00" || tail == "+0000"))
    throw DataError("timestamp is not UTC: '" + text + "'");
  if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > 31 || c.hour > 23 || c.minute > 59 ||
      c.second > 59)
    throw DataError("timestamp out of range: '" + text + "'");
  return civil_to_unix(c);
}

std::string format_utc(UnixSeconds t) {
  const CivilTime c = unix_to_civil(t);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day,
                c.hour, c.minute, c.second);
  return buf;
}

bool on_quarter_hour_grid(UnixSeconds t) {
  std::int64_t rem = t % kSlotSeconds;
  if (rem < 0) rem += kSlotSeconds;
  return rem == 0;
}

int TimeZoneRule::offset_minutes_at(UnixSeconds t) const {
  if (!eu_dst) return standard_offset_minutes;
  const CivilTime utc = unix_to_civil(t);
  const UnixSeconds dst_start = last_sunday_01utc(utc.year, 3);
  const UnixSeconds dst_end = last_sunday_01utc(utc.year, 10);
  const bool summer = t >= dst_start && t < dst_end;
  return standard_offset_minutes + (summer ? 60 : 0);
}

CivilTime TimeZoneRule::to_local(UnixSeconds t) const {
  return unix_to_civil(t + static_cast<std::int64_t>(offset_minutes_at(t)) * 60);
}

}  // namespace afrrcast
