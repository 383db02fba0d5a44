#include "dss/bitstream.hpp"

#include "dss/bitio.hpp"

namespace dss::bitstream {

TokenBitstream pack(const std::optional<SemanticTokenSeq>& sem,
                    const AcousticTokenSeq& ac, const ConditioningSpec& spec) {
  require(spec.n_s == (sem.has_value() ? 1 : 0),
          "pack: semantic sequence presence must match spec.n_s");
  require(ac.depth() == spec.n_a,
          "pack: acoustic depth " + std::to_string(ac.depth()) +
              " does not match spec.n_a " + std::to_string(spec.n_a));
  if (sem)
    require(sem->frames() == ac.frames(),
            "pack: semantic length " + std::to_string(sem->frames()) +
                " != acoustic length " + std::to_string(ac.frames()));

  const int64_t frames = ac.frames();
  auto check_id = [](int32_t id) {
    require(id >= 0 && id < kCodebookSize,
            "pack: token id " + std::to_string(id) + " out of range [0, " +
                std::to_string(kCodebookSize) + ")");
  };

  bitio::ByteWriter hdr;
  hdr.str("DSTK");
  hdr.u8(kVersion);
  hdr.u32(uint32_t(kSampleRate));
  hdr.u32(uint32_t(kFrameRateCentiHz));
  hdr.u8(uint8_t(spec.n_s));
  hdr.u8(uint8_t(spec.n_a));
  hdr.u8(uint8_t(kTokenBits));
  hdr.u32(uint32_t(frames));

  bitio::BitWriter bits;
  for (int64_t f = 0; f < frames; ++f) {
    if (sem) {
      check_id(sem->ids[size_t(f)]);
      bits.put(uint32_t(sem->ids[size_t(f)]), kTokenBits);
    }
    for (int level = 0; level < spec.n_a; ++level) {
      check_id(ac.ids(level, f));
      bits.put(uint32_t(ac.ids(level, f)), kTokenBits);
    }
  }

  TokenBitstream out;
  out.bytes = hdr.take();
  auto payload = bits.finish();
  out.bytes.insert(out.bytes.end(), payload.begin(), payload.end());
  return out;
}

UnpackResult unpack(const std::vector<uint8_t>& bytes) {
  bitio::ByteReader rd(bytes);
  if (rd.remaining() < kHeaderBytes)
    throw FormatError(FormatError::Code::truncated,
                      "stream shorter than the " +
                          std::to_string(kHeaderBytes) + "-byte header");
  if (rd.str(4) != "DSTK")
    throw FormatError(FormatError::Code::bad_magic, "bad magic, not a DSTK stream");
  const uint8_t version = rd.u8();
  if (version != kVersion)
    throw FormatError(FormatError::Code::bad_version,
                      "unsupported DSTK version " + std::to_string(version));
  const uint32_t sample_rate = rd.u32();
  const uint32_t frame_rate = rd.u32();
  const int n_s = rd.u8();
  const int n_a = rd.u8();
  const int bits_per_token = rd.u8();
  const int64_t frames = rd.u32();
  if (sample_rate != uint32_t(kSampleRate))
    throw FormatError(FormatError::Code::bad_field,
                      "unexpected sample rate " + std::to_string(sample_rate));
  if (frame_rate != uint32_t(kFrameRateCentiHz))
    throw FormatError(FormatError::Code::bad_field,
                      "unexpected frame rate " + std::to_string(frame_rate));
  if (bits_per_token != kTokenBits)
    throw FormatError(FormatError::Code::bad_field,
                      "unexpected bits/token " + std::to_string(bits_per_token));
  if (n_s > 1 || n_a < 1 || n_a > 8)
    throw FormatError(FormatError::Code::bad_field,
                      "invalid token layout n_s=" + std::to_string(n_s) +
                          " n_a=" + std::to_string(n_a));

  const size_t want = encoded_size(frames, n_s + n_a);
  if (bytes.size() < want)
    throw FormatError(FormatError::Code::truncated,
                      "truncated payload: file has " +
                          std::to_string(bytes.size()) + " bytes, expected " +
                          std::to_string(want) + " (missing " +
                          std::to_string(want - bytes.size()) + ")");

  UnpackResult out;
  out.spec = ConditioningSpec(n_s, n_a);
  if (n_s == 1) out.sem = SemanticTokenSeq{};
  out.ac.ids.resize(n_a, frames);

  bitio::BitReader bits(bytes.data() + kHeaderBytes,
                        bytes.size() - kHeaderBytes);
  for (int64_t f = 0; f < frames; ++f) {
    if (n_s == 1) out.sem->ids.push_back(int32_t(bits.get(kTokenBits)));
    for (int level = 0; level < n_a; ++level)
      out.ac.ids(level, f) = int32_t(bits.get(kTokenBits));
  }
  if (!bits.padding_is_zero())
    throw FormatError(FormatError::Code::nonzero_padding,
                      "nonzero padding bits after the token payload");
  return out;
}

}  // namespace dss::bitstream
