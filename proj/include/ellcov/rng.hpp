#pragma once

// Counter-based random numbers (Philox4x32-10).
//
// Every generated block is a pure function of (key, counter), so a stream
// is addressed rather than advanced: stream s of seed k serves sample s of
// run k, and parallel workers produce bit-identical output no matter how
// samples are scheduled across threads.

#include <array>
#include <cmath>
#include <cstdint>

namespace ellcov::mc {

struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static Counter block(Key key, Counter ctr) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

/// Sequential view of one Philox stream: (seed, stream) select the key and
/// the high counter words, draws walk the low counter words.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          base_{0u, 0u, static_cast<std::uint32_t>(stream),
                static_cast<std::uint32_t>(stream >> 32)} {}

    std::uint32_t next_u32() {
        if (word_ == 4) {
            if (++base_[0] == 0u) ++base_[1];
            word_ = 0;
            fresh_ = false;
        }
        if (!fresh_) {
            block_ = Philox4x32::block(key_, base_);
            fresh_ = true;
        }
        return block_[word_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1); never exactly zero.
    double uniform01_open() {
        double u = uniform01();
        while (u == 0.0) u = uniform01();
        return u;
    }

    /// Standard normal (Box-Muller, pair cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    Philox4x32::Key key_;
    Philox4x32::Counter base_;
    Philox4x32::Counter block_{};
    int word_ = 0;
    bool fresh_ = false;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Gamma(shape, scale 1) variate.  Marsaglia-Tsang for shape >= 1; the
/// shape < 1 range (needed down to the Nakagami bound m = 0.5) goes
/// through the boost Gamma(shape+1) * U^(1/shape).
double gamma_variate(CounterRng& rng, double shape);

}  // namespace ellcov::mc
