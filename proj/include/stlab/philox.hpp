// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace stlab {

// Philox4x64-10 counter-based generator. A stream is addressed by
// (seed, stream index); the pair forms the key and the counter enumerates
// blocks within the stream, so any sample can be regenerated independently
// of evaluation order or thread assignment.
//
// Block convention matches numpy.random.Philox(key=[seed, stream]): the
// 256-bit counter is incremented before each block, so the first emitted
// block is philox(counter=(1,0,0,0), key).
struct Philox4x64 {
    static constexpr uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
    static constexpr uint64_t kMul1 = 0xCA5A826395121157ULL;
    static constexpr uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

    static std::array<uint64_t, 4> block(std::array<uint64_t, 4> ctr,
                                         std::array<uint64_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const unsigned __int128 p0 = static_cast<unsigned __int128>(kMul0) * ctr[0];
            const unsigned __int128 p1 = static_cast<unsigned __int128>(kMul1) * ctr[2];
            const uint64_t hi0 = static_cast<uint64_t>(p0 >> 64);
            const uint64_t lo0 = static_cast<uint64_t>(p0);
            const uint64_t hi1 = static_cast<uint64_t>(p1 >> 64);
            const uint64_t lo1 = static_cast<uint64_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

class PhiloxStream {
  public:
    PhiloxStream(uint64_t seed, uint64_t stream) : key_{seed, stream} {}

    uint64_t next_u64() {
        if (pos_ == 4) {
            advance_counter();
            buf_ = Philox4x64::block(ctr_, key_);
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    // Uniform on (0,1): 53-bit mantissa offset by half an ulp, never 0 or 1.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; draws two uniforms per pair.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    void advance_counter() {
        for (int i = 0; i < 4; ++i)
            if (++ctr_[i] != 0) break;  // little-endian carry
    }

    std::array<uint64_t, 2> key_;
    std::array<uint64_t, 4> ctr_{0, 0, 0, 0};
    std::array<uint64_t, 4> buf_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace stlab
