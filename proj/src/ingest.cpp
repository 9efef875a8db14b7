#include "goaltime/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "goaltime/errors.hpp"

namespace goaltime {

namespace {

constexpr std::string_view kEventHeader = "year,match_id,minute,period,goal_kind";
constexpr std::string_view kTalliedHeader = "minute,count";

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

template <typename Int>
Int parse_int(std::string_view field, std::size_t line, const char* name) {
    Int value{};
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc{} || ptr != end)
        throw ParseError(line, std::string("invalid ") + name + " '" + std::string(field) + "'");
    return value;
}

Period parse_period(std::string_view s, std::size_t line) {
    if (s == "regular") return Period::regular;
    if (s == "additional") return Period::additional;
    if (s == "extra") return Period::extra;
    throw ParseError(line, "unknown period '" + std::string(s) + "'");
}

GoalKind parse_kind(std::string_view s, std::size_t line) {
    if (s == "goal") return GoalKind::goal;
    if (s == "penalty") return GoalKind::penalty;
    if (s == "own_goal") return GoalKind::own_goal;
    throw ParseError(line, "unknown goal_kind '" + std::string(s) + "'");
}

// Reads one line, dropping a trailing CR. Returns false at end of stream.
bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

void expect_header(std::istream& in, std::string_view header) {
    std::string line;
    if (!next_line(in, line)) throw ParseError(1, "missing header");
    // tolerate a UTF-8 byte order mark
    if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (line != header)
        throw ParseError(1, "expected header '" + std::string(header) + "', got '" + line + "'");
}

} // namespace

std::string_view to_string(Period p) {
    switch (p) {
    case Period::regular: return "regular";
    case Period::additional: return "additional";
    case Period::extra: return "extra";
    }
    return "?";
}

std::string_view to_string(GoalKind k) {
    switch (k) {
    case GoalKind::goal: return "goal";
    case GoalKind::penalty: return "penalty";
    case GoalKind::own_goal: return "own_goal";
    }
    return "?";
}

MinuteCounts::MinuteCounts(const Storage& counts) : counts_(counts) {
    if ((counts_.array() < 0).any()) throw DataError("minute counts must be non-negative");
}

std::int64_t MinuteCounts::at(int minute) const {
    if (minute < 1 || minute > kMinutes)
        throw std::out_of_range("minute " + std::to_string(minute) + " outside 1..90");
    return counts_(minute - 1);
}

Events parse_dataset(std::istream& in) {
    expect_header(in, kEventHeader);
    Events events;
    std::string line;
    std::size_t lineno = 1;
    while (next_line(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 5)
            throw ParseError(lineno, "expected 5 fields, got " + std::to_string(fields.size()));
        GoalEvent ev;
        ev.year = parse_int<int>(fields[0], lineno, "year");
        if (fields[1].empty()) throw ParseError(lineno, "empty match_id");
        ev.match_id = std::string(fields[1]);
        ev.minute = parse_int<int>(fields[2], lineno, "minute");
        if (ev.minute < 1) throw ParseError(lineno, "minute must be >= 1");
        ev.period = parse_period(fields[3], lineno);
        ev.goal_kind = parse_kind(fields[4], lineno);
        if (ev.period == Period::regular && ev.minute > kMinutes)
            throw ParseError(lineno, "regular-time goal after minute 90");
        if (ev.period == Period::extra && ev.minute <= kMinutes)
            throw ParseError(lineno, "extra-time goal at or before minute 90");
        events.push_back(std::move(ev));
    }
    return events;
}

void write_dataset(std::ostream& out, const Events& events) {
    out << kEventHeader << '\n';
    for (const auto& ev : events) {
        out << ev.year << ',' << ev.match_id << ',' << ev.minute << ',' << to_string(ev.period)
            << ',' << to_string(ev.goal_kind) << '\n';
    }
}

MinuteCounts parse_tallied(std::istream& in) {
    expect_header(in, kTalliedHeader);
    MinuteCounts::Storage counts = MinuteCounts::Storage::Zero();
    std::array<bool, kMinutes> seen{};
    std::string line;
    std::size_t lineno = 1;
    while (next_line(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 2)
            throw ParseError(lineno, "expected 2 fields, got " + std::to_string(fields.size()));
        const int minute = parse_int<int>(fields[0], lineno, "minute");
        const auto count = parse_int<std::int64_t>(fields[1], lineno, "count");
        if (minute < 1 || minute > kMinutes) throw ParseError(lineno, "minute outside 1..90");
        if (count < 0) throw ParseError(lineno, "negative count");
        if (seen[minute - 1]) throw ParseError(lineno, "duplicate minute " + std::to_string(minute));
        seen[minute - 1] = true;
        counts(minute - 1) = count;
    }
    const auto missing = std::find(seen.begin(), seen.end(), false);
    if (missing != seen.end())
        throw ParseError(lineno, "minute " + std::to_string(missing - seen.begin() + 1) + " missing");
    return MinuteCounts(counts);
}

void write_tallied(std::ostream& out, const MinuteCounts& counts) {
    out << kTalliedHeader << '\n';
    for (int m = 1; m <= kMinutes; ++m) out << m << ',' << counts.at(m) << '\n';
}

Events filter_regular(const Events& events) {
    Events out;
    std::copy_if(events.begin(), events.end(), std::back_inserter(out),
                 [](const GoalEvent& ev) { return ev.period == Period::regular; });
    return out;
}

MinuteCounts tally(const Events& events) {
    MinuteCounts result;
    for (const auto& ev : events) {
        if (ev.period != Period::regular)
            throw DataError("tally expects regular-time events only; got period '" +
                            std::string(to_string(ev.period)) + "' at minute " +
                            std::to_string(ev.minute));
        if (ev.minute < 1 || ev.minute > kMinutes)
            throw DataError("regular-time event at minute " + std::to_string(ev.minute));
        ++result.counts_(ev.minute - 1);
    }
    return result;
}

std::pair<double, double> half_means(const MinuteCounts& counts) {
    return {static_cast<double>(counts.total_first()) / kMinutesPerHalf,
            static_cast<double>(counts.total_second()) / kMinutesPerHalf};
}

} // namespace goaltime
