#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

namespace kdigo {

/// KDIGO stage. `unknown` marks hours where a criterion cannot be evaluated
/// and orders below stage 0.
enum class Stage : std::int8_t {
    unknown = -1,
    s0 = 0,
    s1 = 1,
    s2 = 2,
    s3 = 3,
};

constexpr int to_int(Stage s) { return static_cast<int>(s); }

constexpr bool is_known(Stage s) { return s != Stage::unknown; }

constexpr bool is_aki(Stage s) { return to_int(s) >= 1; }

constexpr Stage stage_from_int(int v) {
    return (v >= 0 && v <= 3) ? static_cast<Stage>(v) : Stage::unknown;
}

constexpr Stage max_stage(Stage a, Stage b) { return to_int(a) >= to_int(b) ? a : b; }

/// Overall stage: ordered maximum of the four pathways, unknown lowest.
constexpr Stage merge_stages(Stage uo, Stage abs_scr, Stage rel_scr, Stage dialysis) {
    return max_stage(max_stage(uo, abs_scr), max_stage(rel_scr, dialysis));
}

/// "" for unknown, otherwise the stage digit.
inline std::string to_string(Stage s) {
    return is_known(s) ? std::string(1, static_cast<char>('0' + to_int(s))) : std::string();
}

/// Accepts "", "0".."3" (and "0.0".."3.0" as written by some dataframe tools).
inline std::optional<Stage> parse_stage(std::string_view text) {
    if (text.empty()) return Stage::unknown;
    if (text.size() >= 1 && text[0] >= '0' && text[0] <= '3') {
        if (text.size() == 1 || text.substr(1) == ".0") return static_cast<Stage>(text[0] - '0');
    }
    return std::nullopt;
}

} // namespace kdigo
