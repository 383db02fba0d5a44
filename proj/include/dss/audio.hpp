#pragma once

// WAV file IO (PCM16 and float32), sample-rate conversion, and ingestion
// normalization.

#include <string>

#include "dss/common.hpp"

namespace dss::audio {

struct WavData {
  MatF samples;  // channels x frames
  int sample_rate = 0;
};

WavData read_wav(const std::string& path);

enum class WavEncoding { pcm16, float32 };
void write_wav(const std::string& path, const VecF& samples, int sample_rate,
               WavEncoding enc = WavEncoding::pcm16);

// Windowed-sinc resampling to `out_rate`. Identity when rates match.
VecF resample(const VecF& x, int in_rate, int out_rate);

// Mixes to mono, resamples to 24 kHz, and peak-normalizes to 0.95.
Waveform standardize(const WavData& wav);

}  // namespace dss::audio
