#include "dss/audio.hpp"

#include <algorithm>
#include <cmath>

#include "dss/bitio.hpp"

namespace dss::audio {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;

double sinc(double x) {
  if (std::abs(x) < 1e-9) return 1.0;
  return std::sin(M_PI * x) / (M_PI * x);
}

}  // namespace

WavData read_wav(const std::string& path) {
  auto bytes = bitio::read_file(path);
  bitio::ByteReader rd(bytes);
  if (rd.remaining() < 12 || rd.str(4) != "RIFF")
    throw FormatError(FormatError::Code::bad_magic, path + ": not a RIFF file");
  rd.u32();  // riff size
  if (rd.str(4) != "WAVE")
    throw FormatError(FormatError::Code::bad_magic, path + ": not a WAVE file");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  WavData out;

  while (rd.remaining() >= 8) {
    std::string id = rd.str(4);
    uint32_t size = rd.u32();
    if (id == "fmt ") {
      if (size < 16)
        throw FormatError(FormatError::Code::bad_field, path + ": short fmt chunk");
      format = rd.u16();
      channels = rd.u16();
      rate = rd.u32();
      rd.u32();  // byte rate
      rd.u16();  // block align
      bits = rd.u16();
      if (size > 16) rd.take(size - 16);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt)
        throw FormatError(FormatError::Code::bad_field,
                          path + ": data chunk before fmt");
      if (channels == 0)
        throw FormatError(FormatError::Code::bad_field, path + ": zero channels");
      size_t bytes_per_sample;
      if (format == kFormatPcm && bits == 16) {
        bytes_per_sample = 2;
      } else if (format == kFormatFloat && bits == 32) {
        bytes_per_sample = 4;
      } else {
        throw FormatError(FormatError::Code::bad_field,
                          path + ": unsupported format (want PCM16 or float32), got format=" +
                              std::to_string(format) + " bits=" + std::to_string(bits));
      }
      size_t avail = std::min(size_t(size), rd.remaining());
      int64_t n = int64_t(avail / (bytes_per_sample * channels));
      out.samples.resize(channels, n);
      for (int64_t i = 0; i < n; ++i) {
        for (int c = 0; c < channels; ++c) {
          if (bytes_per_sample == 2) {
            int16_t v = int16_t(rd.u16());
            out.samples(c, i) = float(v) / 32768.0f;
          } else {
            out.samples(c, i) = rd.f32();
          }
        }
      }
      out.sample_rate = int(rate);
      return out;
    } else {
      size_t skip = std::min(size_t(size) + (size & 1), rd.remaining());
      rd.take(skip);
    }
  }
  throw FormatError(FormatError::Code::truncated, path + ": no data chunk");
}

void write_wav(const std::string& path, const VecF& samples, int sample_rate,
               WavEncoding enc) {
  const bool pcm = enc == WavEncoding::pcm16;
  const uint32_t bytes_per = pcm ? 2 : 4;
  const uint32_t data_size = uint32_t(samples.size()) * bytes_per;

  bitio::ByteWriter w;
  w.str("RIFF");
  w.u32(36 + data_size);
  w.str("WAVE");
  w.str("fmt ");
  w.u32(16);
  w.u16(pcm ? kFormatPcm : kFormatFloat);
  w.u16(1);  // mono
  w.u32(uint32_t(sample_rate));
  w.u32(uint32_t(sample_rate) * bytes_per);
  w.u16(uint16_t(bytes_per));
  w.u16(uint16_t(bytes_per * 8));
  w.str("data");
  w.u32(data_size);
  for (int64_t i = 0; i < samples.size(); ++i) {
    if (pcm) {
      float v = std::clamp(samples(i), -1.0f, 1.0f);
      w.u16(uint16_t(int16_t(std::lrint(v * 32767.0f))));
    } else {
      w.f32(samples(i));
    }
  }
  bitio::write_file(path, w.data());
}

VecF resample(const VecF& x, int in_rate, int out_rate) {
  require(in_rate > 0 && out_rate > 0, "resample: rates must be positive");
  if (in_rate == out_rate || x.size() == 0) return x;

  const double ratio = double(in_rate) / out_rate;
  const double cutoff = std::min(1.0, double(out_rate) / in_rate);
  const int half_taps = 24;
  const int64_t out_len = int64_t(std::llround(double(x.size()) * out_rate / in_rate));

  VecF y(out_len);
  for (int64_t n = 0; n < out_len; ++n) {
    const double pos = n * ratio;
    const int64_t center = int64_t(std::floor(pos));
    double acc = 0.0;
    for (int64_t j = center - half_taps + 1; j <= center + half_taps; ++j) {
      if (j < 0 || j >= x.size()) continue;
      const double u = (pos - double(j)) / half_taps;
      const double win = 0.5 + 0.5 * std::cos(M_PI * u);  // Hann taper
      acc += double(x(j)) * sinc((pos - double(j)) * cutoff) * cutoff * win;
    }
    y(n) = float(acc);
  }
  return y;
}

Waveform standardize(const WavData& wav) {
  require(wav.sample_rate > 0, "standardize: missing sample rate");
  require(wav.samples.rows() >= 1, "standardize: no channels");
  VecF mono = wav.samples.colwise().mean().transpose();
  mono = resample(mono, wav.sample_rate, kSampleRate);
  float peak = mono.size() > 0 ? mono.cwiseAbs().maxCoeff() : 0.0f;
  if (peak > 0.0f) mono *= 0.95f / peak;
  Waveform out;
  out.samples = mono;
  return out;
}

}  // namespace dss::audio
