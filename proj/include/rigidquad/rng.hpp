#pragma once

// Deterministic random stream. All sampling flows from one 64-bit seed; the
// bounded draws use rejection so results do not depend on the standard
// library's distribution implementations.

#include "rigidquad/numeric.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace rq {

class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("RandomStream::below(0)");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    // uniform in [0, n) for big integers
    Int below_big(const Int& n) {
        if (n <= 0) throw std::invalid_argument("RandomStream::below_big: n <= 0");
        if (n <= UINT64_MAX) return Int(below(static_cast<std::uint64_t>(n)));
        // rejection over a power-of-two envelope
        unsigned bits_needed = 0;
        Int t = n - 1;
        while (t > 0) {
            ++bits_needed;
            t >>= 1;
        }
        while (true) {
            Int x = 0;
            unsigned got = 0;
            while (got < bits_needed) {
                const unsigned take = std::min(64u, bits_needed - got);
                std::uint64_t w = gen_();
                if (take < 64) w &= (std::uint64_t(1) << take) - 1;
                x <<= take;
                x |= Int(w);
                got += take;
            }
            if (x < n) return x;
        }
    }

    // uniform k-subset of {0,...,n-1}, sorted (Floyd's algorithm)
    std::vector<std::uint64_t> subset(std::uint64_t n, std::uint64_t k) {
        if (k > n) throw std::invalid_argument("RandomStream::subset: k > n");
        std::vector<std::uint64_t> out;
        std::vector<char> used;
        used.assign(n, 0);
        for (std::uint64_t j = n - k; j < n; ++j) {
            const std::uint64_t t = below(j + 1);
            if (!used[t]) {
                used[t] = 1;
                out.push_back(t);
            } else {
                used[j] = 1;
                out.push_back(j);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    std::mt19937_64 gen_;
};

} // namespace rq
