#pragma once

// Timezone-naive wall-clock timestamps. Values are held as std::chrono
// sys_time purely as a calendar arithmetic device; no zone is implied.

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace kdigo {

using Timestamp = std::chrono::sys_seconds;
using HourStamp = std::chrono::sys_time<std::chrono::hours>;

inline HourStamp floor_hour(Timestamp t) { return std::chrono::floor<std::chrono::hours>(t); }

namespace detail {

inline bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

} // namespace detail

/// Parses `YYYY-MM-DDTHH:MM:SS` (a space separator, a missing seconds field and
/// a date-only form are tolerated).
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    int y = 0, mo = 0, d = 0, hh = 0, mm = 0, ss = 0;
    if (!detail::read_int(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || s[7] != '-' ||
        !detail::read_int(s, 5, 2, mo) || !detail::read_int(s, 8, 2, d))
        return std::nullopt;
    if (s.size() > 10) {
        if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
        if (!detail::read_int(s, 11, 2, hh) || s.size() < 16 || s[13] != ':' ||
            !detail::read_int(s, 14, 2, mm))
            return std::nullopt;
        if (s.size() > 16) {
            if (s.size() != 19 || s[16] != ':' || !detail::read_int(s, 17, 2, ss)) return std::nullopt;
        }
    }
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) return std::nullopt;
    return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
}

inline std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    auto day_point = floor<days>(t);
    year_month_day ymd{day_point};
    hh_mm_ss hms{t - day_point};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

inline std::string format_timestamp(HourStamp t) { return format_timestamp(Timestamp{t}); }

} // namespace kdigo
