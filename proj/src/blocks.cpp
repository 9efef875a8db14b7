#include "goaltime/blocks.hpp"

#include <stdexcept>
#include <string>

namespace goaltime {

std::string_view to_string(Half h) {
    switch (h) {
    case Half::first: return "first";
    case Half::second: return "second";
    case Half::full: return "full";
    }
    return "?";
}

bool valid_block_size(int block_size) {
    return block_size == 2 || block_size == 3 || block_size == 5;
}

BlockCounts reshape_blocks(const MinuteCounts& counts, Half half, int block_size) {
    if (!valid_block_size(block_size))
        throw std::invalid_argument("block size must be 2, 3 or 5, got " + std::to_string(block_size));

    BlockCounts out;
    out.block_size = block_size;
    out.half = half;
    std::vector<double> values;

    auto add_half = [&](int first_minute) {
        const int usable = kMinutesPerHalf - kMinutesPerHalf % block_size;
        for (int start = 0; start < usable; start += block_size) {
            double sum = 0.0;
            for (int k = 0; k < block_size; ++k) {
                const int minute = first_minute + start + k;
                sum += static_cast<double>(counts.at(minute));
                out.minutes.push_back(minute);
            }
            values.push_back(sum / block_size);
        }
        for (int m = first_minute + usable; m < first_minute + kMinutesPerHalf; ++m)
            out.dropped_minutes.insert(m);
    };

    if (half != Half::second) add_half(1);
    if (half != Half::first) add_half(kMinutesPerHalf + 1);
    out.values = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
    return out;
}

Vector block_probs(const VectorRef& probs, int block_size) {
    if (block_size < 1) throw std::invalid_argument("block_probs: block size must be positive");
    if (probs.size() == 0 || probs.size() % block_size != 0)
        throw std::invalid_argument("block_probs: " + std::to_string(probs.size()) +
                                    " probabilities do not split into blocks of " +
                                    std::to_string(block_size));
    const auto blocks = probs.size() / block_size;
    Vector out = probs.reshaped(block_size, blocks).colwise().mean().transpose();
    const double total = out.sum();
    if (!(total > 0.0)) throw std::invalid_argument("block_probs: probabilities sum to zero");
    return out / total;
}

Vector block_probs(const VectorRef& probs, const BlockCounts& blocking) {
    if (probs.size() != static_cast<Eigen::Index>(blocking.minutes.size()))
        throw std::invalid_argument("block_probs: expected " + std::to_string(blocking.minutes.size()) +
                                    " probabilities, got " + std::to_string(probs.size()));
    if (blocking.values.size() * blocking.block_size != probs.size())
        throw std::invalid_argument("block_probs: blocking is inconsistent");
    return block_probs(probs, blocking.block_size);
}

} // namespace goaltime
