#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ivelab {

// Seeded random source used everywhere randomness is needed.
//
// All draws are hand-rolled on top of std::mt19937_64 so that a given seed
// produces the same stream on every platform (the standard pins the engine's
// output, but not the distributions'). The algorithm identifier recorded in
// buffer metadata and manifests is "mt19937_64".
class Rng {
  public:
    static constexpr const char* kAlgorithm = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in {0, ..., n-1}.
    int uniform_int(int n) {
        int k = static_cast<int>(uniform() * n);
        return k < n ? k : n - 1;
    }

    // Standard normal via Box-Muller; draws are generated in pairs.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * kPi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Index draw from an unnormalized non-negative weight row.
    template <typename It>
    int categorical(It first, It last) {
        double total = 0.0;
        for (It it = first; it != last; ++it) total += *it;
        double x = uniform() * total;
        int index = 0;
        int size = static_cast<int>(last - first);
        for (It it = first; it != last; ++it, ++index) {
            x -= *it;
            if (x < 0.0) return index;
        }
        return size - 1;
    }

  private:
    static constexpr double kPi = 3.14159265358979323846;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace ivelab
