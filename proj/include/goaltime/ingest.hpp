#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace goaltime {

inline constexpr int kMinutesPerHalf = 45;
inline constexpr int kMinutes = 90;

enum class Period { regular, additional, extra };
enum class GoalKind { goal, penalty, own_goal };

std::string_view to_string(Period p);
std::string_view to_string(GoalKind k);

struct GoalEvent {
    int year = 0;
    std::string match_id;
    int minute = 1;
    Period period = Period::regular;
    GoalKind goal_kind = GoalKind::goal;

    bool operator==(const GoalEvent&) const = default;
};

using Events = std::vector<GoalEvent>;

// Per-minute goal totals over regular time. Minutes are 1-based in the
// accessors; the underlying vector is 0-based.
class MinuteCounts {
public:
    using Storage = Eigen::Matrix<std::int64_t, kMinutes, 1>;

    MinuteCounts() : counts_(Storage::Zero()) {}
    // Throws DataError if any entry is negative.
    explicit MinuteCounts(const Storage& counts);

    std::int64_t at(int minute) const;
    const Storage& counts() const noexcept { return counts_; }

    std::int64_t total_first() const { return counts_.head<kMinutesPerHalf>().sum(); }
    std::int64_t total_second() const { return counts_.tail<kMinutesPerHalf>().sum(); }
    std::int64_t total() const { return counts_.sum(); }

    // Counts as reals, convenient for the statistical routines.
    Eigen::VectorXd as_real() const { return counts_.cast<double>(); }
    Eigen::VectorXd first_half() const { return counts_.head<kMinutesPerHalf>().cast<double>(); }
    Eigen::VectorXd second_half() const { return counts_.tail<kMinutesPerHalf>().cast<double>(); }

    bool operator==(const MinuteCounts& o) const { return counts_ == o.counts_; }

private:
    friend MinuteCounts tally(const Events& events);
    Storage counts_;
};

// Event CSV with header `year,match_id,minute,period,goal_kind`.
// Throws ParseError on malformed input.
Events parse_dataset(std::istream& in);

// Writes events in the same format parse_dataset reads.
void write_dataset(std::ostream& out, const Events& events);

// Pre-tallied CSV with header `minute,count`, 90 rows, every minute once.
MinuteCounts parse_tallied(std::istream& in);
void write_tallied(std::ostream& out, const MinuteCounts& counts);

Events filter_regular(const Events& events);

// Throws DataError on any event outside regular time.
MinuteCounts tally(const Events& events);

// (mean goals per minute in the first half, in the second half)
std::pair<double, double> half_means(const MinuteCounts& counts);

} // namespace goaltime
