#pragma once

#include <cstdint>
#include <string>

namespace afrrcast {

/// Seconds since the Unix epoch, always UTC.
using UnixSeconds = std::int64_t;

constexpr std::int64_t kSlotSeconds = 15 * 60;
constexpr int kSlotsPerDay = 96;

struct CivilTime {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;
  int minute = 0;
  int second = 0;
};

/// Civil <-> epoch conversion without any time-zone database dependence.
UnixSeconds civil_to_unix(const CivilTime& c);
CivilTime unix_to_civil(UnixSeconds t);

/// 0 = Monday .. 6 = Sunday.
int weekday_of(UnixSeconds t);

/// Parses "YYYY-MM-DD[T ]HH:MM[:SS][Z|+00:00]". Anything but UTC is rejected.
UnixSeconds parse_utc(const std::string& text);

/// "YYYY-MM-DDTHH:MM:SSZ".
std::string format_utc(UnixSeconds t);

/// True iff minute in {0,15,30,45} and second == 0.
bool on_quarter_hour_grid(UnixSeconds t);

/// Civil time-zone rule: fixed standard offset plus the EU summer-time rule
/// (last Sunday of March 01:00 UTC to last Sunday of October 01:00 UTC,
/// +1 h). Default is Central European Time.
struct TimeZoneRule {
  int standard_offset_minutes = 60;
  bool eu_dst = true;

  int offset_minutes_at(UnixSeconds t) const;
  CivilTime to_local(UnixSeconds t) const;
};

}  // namespace afrrcast
