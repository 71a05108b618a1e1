#pragma once

#include <array>
#include <cstdint>

namespace bandspec {

// Philox-4x32-10 counter-based generator. A block cipher on a 128-bit
// counter under a 64-bit key: any (key, counter) pair can be evaluated
// independently, which makes keyed child streams and replica-parallel
// sampling order-independent and reproducible.
struct Philox4x32 {
    static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                         std::array<uint32_t, 2> key);
};

// One logical random stream keyed by (seed, replica, stream_id).
// Column k of replica r draws from stream (seed, r, k), so columns are
// independent by construction and replicas can be generated in any order.
class RngStream {
public:
    RngStream(uint64_t seed, uint32_t replica, uint32_t stream_id);

    uint32_t next_u32();
    uint64_t next_u64();

    double uniform01();       // [0, 1), 53-bit
    double uniform_open01();  // (0, 1]
    double normal();          // standard normal (Box-Muller, cached pair)
    double rademacher();      // +1 or -1, equiprobable

private:
    void refill();

    std::array<uint32_t, 2> key_;
    uint32_t stream_id_;
    uint32_t replica_;
    uint64_t block_index_ = 0;
    std::array<uint32_t, 4> buffer_{};
    int buffer_pos_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace bandspec
