#include "bandspec/rng.hpp"

#include <cmath>

namespace bandspec {

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    uint64_t p = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(p >> 32);
    lo = static_cast<uint32_t>(p);
}

inline std::array<uint32_t, 4> round_once(const std::array<uint32_t, 4>& c,
                                          const std::array<uint32_t, 2>& k) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<uint32_t, 4> Philox4x32::block(std::array<uint32_t, 4> ctr,
                                          std::array<uint32_t, 2> key) {
    ctr = round_once(ctr, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
        ctr = round_once(ctr, key);
    }
    return ctr;
}

RngStream::RngStream(uint64_t seed, uint32_t replica, uint32_t stream_id)
    : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
      stream_id_(stream_id),
      replica_(replica) {}

void RngStream::refill() {
    std::array<uint32_t, 4> ctr = {static_cast<uint32_t>(block_index_),
                                   static_cast<uint32_t>(block_index_ >> 32),
                                   stream_id_, replica_};
    buffer_ = Philox4x32::block(ctr, key_);
    ++block_index_;
    buffer_pos_ = 0;
}

uint32_t RngStream::next_u32() {
    if (buffer_pos_ >= 4) refill();
    return buffer_[buffer_pos_++];
}

uint64_t RngStream::next_u64() {
    uint64_t hi = next_u32();
    uint64_t lo = next_u32();
    return (hi << 32) | lo;
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform_open01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(angle);
    has_cached_normal_ = true;
    return r * std::cos(angle);
}

double RngStream::rademacher() {
    return (next_u32() & 1u) ? 1.0 : -1.0;
}

}  // namespace bandspec
