#pragma once

// Bit-exact ".dstk" token stream container.
//
// Layout (little-endian):
//   magic "DSTK" | version u8 | sample_rate u32 | frame_rate_centi_hz u32 |
//   n_s u8 | n_a u8 | bits_per_token u8 | num_frames u32
// followed by the payload: frame-major tokens, semantic level first, then
// acoustic levels coarse to fine, 11 bits per token packed MSB-first, final
// byte zero-padded.

#include <cstdint>
#include <optional>
#include <vector>

#include "dss/tokens.hpp"

namespace dss::bitstream {

constexpr uint8_t kVersion = 1;
constexpr size_t kHeaderBytes = 20;

struct TokenBitstream {
  std::vector<uint8_t> bytes;
};

// Total encoded size for a stream of `frames` frames at `depth` token levels.
inline size_t encoded_size(int64_t frames, int depth) {
  return kHeaderBytes + size_t(ceil_div(frames * depth * kTokenBits, 8));
}

TokenBitstream pack(const std::optional<SemanticTokenSeq>& sem,
                    const AcousticTokenSeq& ac, const ConditioningSpec& spec);

struct UnpackResult {
  std::optional<SemanticTokenSeq> sem;
  AcousticTokenSeq ac;
  ConditioningSpec spec;
};

UnpackResult unpack(const std::vector<uint8_t>& bytes);

}  // namespace dss::bitstream
