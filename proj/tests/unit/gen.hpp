#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "switchmix/types.hpp"

namespace testgen {

// Small deterministic generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double symmetric(double half = 1.0) { return half * (2.0 * unit() - 1.0); }
    switchmix::Time between(switchmix::Time lo, switchmix::Time hi) {
        const auto span = static_cast<double>(hi - lo + 1);
        const auto v = lo + static_cast<switchmix::Time>(unit() * span);
        return v > hi ? hi : v;
    }

    std::vector<double> observations(std::size_t n, double half = 1.0) {
        std::vector<double> out(n);
        for (auto& x : out)
            x = symmetric(half);
        return out;
    }

    // Piecewise-constant data with noise, clamped.
    std::vector<double> piecewise(std::size_t n, std::size_t pieces, double noise) {
        std::vector<double> means(pieces);
        for (auto& m : means)
            m = symmetric(0.9);
        std::vector<double> out(n);
        for (std::size_t t = 0; t < n; ++t) {
            const double x = means[t * pieces / n] + symmetric(noise);
            out[t] = x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x);
        }
        return out;
    }

    // Sorted segment starts beginning with 1, `segments` in total.
    std::vector<switchmix::Time> starts(std::size_t segments, switchmix::Time horizon) {
        std::vector<switchmix::Time> pool;
        for (switchmix::Time t = 2; t <= horizon; ++t)
            pool.push_back(t);
        std::vector<switchmix::Time> out{1};
        for (std::size_t i = 0; i + 1 < segments; ++i) {
            const auto j = static_cast<std::size_t>(between(static_cast<switchmix::Time>(i),
                                                            static_cast<switchmix::Time>(pool.size()) - 1));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::mt19937_64 rng_;
};

} // namespace testgen
