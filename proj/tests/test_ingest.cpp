#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "goaltime/errors.hpp"
#include "goaltime/ingest.hpp"

using namespace goaltime;

namespace {

const char* kHeader = "year,match_id,minute,period,goal_kind\n";

Events parse(const std::string& body) {
    std::istringstream in(kHeader + body);
    return parse_dataset(in);
}

GoalEvent ev(int minute, Period p = Period::regular) { return {2014, "M", minute, p, GoalKind::goal}; }

} // namespace

TEST_CASE("parse_dataset: header only gives no events") {
    CHECK(parse("").empty());
}

TEST_CASE("parse_dataset maps fields directly") {
    const auto events = parse("1930,M1,18,regular,goal\n");
    REQUIRE(events.size() == 1);
    CHECK(events[0] == GoalEvent{1930, "M1", 18, Period::regular, GoalKind::goal});
}

TEST_CASE("parse_dataset accepts CRLF line endings and every token") {
    const auto events = parse("1930,M1,18,regular,goal\r\n1954,M9,45,additional,penalty\r\n1970,M3,105,extra,own_goal\r\n");
    REQUIRE(events.size() == 3);
    CHECK(events[1].period == Period::additional);
    CHECK(events[1].goal_kind == GoalKind::penalty);
    CHECK(events[2].period == Period::extra);
    CHECK(events[2].goal_kind == GoalKind::own_goal);
}

TEST_CASE("parse_dataset rejects an unknown period and names it") {
    try {
        parse("1930,M1,18,regular,goal\n1930,M1,100,overtime,goal\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("overtime") != std::string::npos);
    }
}

TEST_CASE("parse_dataset error paths") {
    CHECK_THROWS_WITH_AS(parse("1930,M1,18,regular,header\n"), doctest::Contains("header"), ParseError);
    CHECK_THROWS_WITH_AS(parse("1930,M1,0,regular,goal\n"), doctest::Contains("minute"), ParseError);
    CHECK_THROWS_WITH_AS(parse("1930,M1,-3,regular,goal\n"), doctest::Contains("minute"), ParseError);
    CHECK_THROWS_WITH_AS(parse("1930,M1,18,regular\n"), doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_AS(parse("1930,M1,x,regular,goal\n"), ParseError);
    CHECK_THROWS_AS(parse("1930,M1,91,regular,goal\n"), ParseError);
    CHECK_THROWS_AS(parse("1930,M1,80,extra,goal\n"), ParseError);
    std::istringstream bad_header("year,minute\n");
    CHECK_THROWS_AS(parse_dataset(bad_header), ParseError);
}

TEST_CASE("write_dataset reproduces parsed rows field for field") {
    const std::string body = "1930,M1,18,regular,goal\n1930,M1,18,regular,goal\n1998,F-7,46,additional,penalty\n"
                             "2006,Q2,119,extra,own_goal\n";
    const auto events = parse(body);
    std::ostringstream out;
    write_dataset(out, events);
    CHECK(out.str() == std::string(kHeader) + body);
}

TEST_CASE("filter_regular keeps regular events in order") {
    const Events all_regular{ev(1), ev(50), ev(3)};
    CHECK(filter_regular(all_regular) == all_regular);
    CHECK(filter_regular({ev(10), ev(100, Period::extra)}) == Events{ev(10)});
    const Events mixed{ev(5), ev(45, Period::additional), ev(12), ev(95, Period::extra), ev(88)};
    CHECK(filter_regular(mixed) == Events{ev(5), ev(12), ev(88)});
}

TEST_CASE("tally counts goals per minute") {
    const auto empty = tally({});
    CHECK(empty.total() == 0);

    const auto c = tally({ev(7), ev(7), ev(90)});
    CHECK(c.at(7) == 2);
    CHECK(c.at(90) == 1);
    CHECK(c.total() == 3);
    CHECK(c.total_first() == 2);
    CHECK(c.total_second() == 1);

    CHECK_THROWS_AS(tally({ev(7), ev(46, Period::additional)}), DataError);
}

TEST_CASE("tally of filtered events is permutation invariant and conserves mass") {
    std::mt19937 gen(7);
    Events events;
    std::uniform_int_distribution<int> minute(1, 90), period(0, 5);
    int regular = 0;
    for (int i = 0; i < 500; ++i) {
        const int p = period(gen);
        if (p == 0) {
            events.push_back(ev(90 + minute(gen) % 30 + 1, Period::extra));
        } else if (p == 1) {
            events.push_back(ev(minute(gen), Period::additional));
        } else {
            events.push_back(ev(minute(gen)));
            ++regular;
        }
    }
    const auto reference = tally(filter_regular(events));
    CHECK(reference.total() == regular);
    CHECK(reference.total_first() + reference.total_second() == reference.total());
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(events.begin(), events.end(), gen);
        CHECK(tally(filter_regular(events)) == reference);
    }
}

TEST_CASE("half_means") {
    CHECK(half_means(MinuteCounts{}) == std::pair{0.0, 0.0});
    const MinuteCounts ones(MinuteCounts::Storage::Ones());
    CHECK(half_means(ones) == std::pair{1.0, 1.0});
    MinuteCounts::Storage s = MinuteCounts::Storage::Zero();
    s(0) = 45;
    s(89) = 90;
    CHECK(half_means(MinuteCounts(s)) == std::pair{1.0, 2.0});
}

TEST_CASE("parse_tallied reads 90 minutes and round-trips") {
    MinuteCounts::Storage s;
    for (int i = 0; i < kMinutes; ++i) s(i) = (i * 7) % 13;
    const MinuteCounts counts(s);
    std::ostringstream out;
    write_tallied(out, counts);
    std::istringstream in(out.str());
    CHECK(parse_tallied(in) == counts);
}

TEST_CASE("parse_tallied rejects missing, duplicate and negative rows") {
    std::string body = "minute,count\n";
    for (int m = 1; m <= 89; ++m) body += std::to_string(m) + ",1\n";
    std::istringstream missing(body);
    CHECK_THROWS_WITH_AS(parse_tallied(missing), doctest::Contains("minute 90 missing"), ParseError);
    std::istringstream dup(body + "89,1\n");
    CHECK_THROWS_WITH_AS(parse_tallied(dup), doctest::Contains("duplicate"), ParseError);
    std::istringstream neg(body + "90,-1\n");
    CHECK_THROWS_AS(parse_tallied(neg), ParseError);
    std::istringstream out_of_range(body + "91,1\n");
    CHECK_THROWS_AS(parse_tallied(out_of_range), ParseError);
}

TEST_CASE("MinuteCounts rejects negative entries and out-of-range minutes") {
    MinuteCounts::Storage s = MinuteCounts::Storage::Zero();
    s(3) = -1;
    CHECK_THROWS_AS(MinuteCounts{s}, DataError);
    CHECK_THROWS_AS(MinuteCounts{}.at(0), std::out_of_range);
    CHECK_THROWS_AS(MinuteCounts{}.at(91), std::out_of_range);
}
