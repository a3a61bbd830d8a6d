#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace ordboost {

// Deterministic random stream "ordboost-rng-v1".
//
// std::mt19937_64's output sequence is fixed by the standard, but the
// distribution adaptors (uniform_int_distribution, shuffle) are not, so all
// derivations are hand-rolled here. Any change to these helpers is a format
// break and must bump the stream name.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform index in [0, n).
    std::size_t next_index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("Rng::next_index: n must be positive");
        return static_cast<std::size_t>(next_u64() % n);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Fisher-Yates using next_index.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = next_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    // Index drawn according to `probs` (assumed non-negative, summing to ~1).
    std::size_t next_weighted_index(const std::vector<double>& probs) {
        double u = next_unit();
        double cum = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            cum += probs[i];
            if (u < cum) return i;
        }
        return probs.size() - 1;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace ordboost
