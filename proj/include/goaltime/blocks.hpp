#pragma once

#include <set>
#include <vector>

#include "goaltime/ingest.hpp"
#include "goaltime/stats.hpp"

namespace goaltime {

enum class Half { first, second, full };
std::string_view to_string(Half h);

// Per-minute counts regrouped into consecutive blocks within each half.
struct BlockCounts {
    int block_size = 1;
    Half half = Half::full;
    Vector values;              // per-block mean of the member minutes
    std::vector<int> minutes;   // minutes that went into blocks, in order
    std::set<int> dropped_minutes;
};

bool valid_block_size(int block_size);

// Blocks start at the first minute of each half and never straddle minute
// 45/46. With block_size 2 the last minute of a half (45 or 90) is dropped.
// Throws std::invalid_argument unless block_size is 2, 3 or 5.
BlockCounts reshape_blocks(const MinuteCounts& counts, Half half, int block_size);

// Block probability = mean of the member minutes' probabilities,
// renormalized. `probs` is aligned with blocking.minutes.
Vector block_probs(const VectorRef& probs, const BlockCounts& blocking);

// Same, for consecutive groups of block_size entries.
Vector block_probs(const VectorRef& probs, int block_size);

} // namespace goaltime
