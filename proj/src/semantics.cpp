#include "dss/semantics.hpp"

#include <cmath>

#include "dss/bitio.hpp"
#include "dss/dsp.hpp"

namespace dss::semantics {
namespace {

constexpr int kHop = kSampleRate / kFeatureRateHz;  // 480
constexpr int kWin = 2 * kHop;                      // 40 ms
constexpr int kPoolKernel = 8;
constexpr int kPoolStride = 4;

}  // namespace

LogMelProvider::LogMelProvider(int n_mels) : n_mels_(n_mels) {
  dsp::StftPlan<float> plan(kWin, kHop);
  basis_cos_ = plan.basis_cos;
  basis_sin_ = plan.basis_sin;
  mel_ = dsp::mel_filterbank<float>(n_mels_, plan.bins, kWin, kSampleRate);
}

FeatureSeq LogMelProvider::features(const Waveform& wave) const {
  require(wave.size() > 0, "LogMelProvider: empty waveform");
  const int64_t frames = ceil_div(wave.size(), kHop);
  // Frame f is centered at sample f*hop; edges replicate.
  MatF fr(kWin, frames);
  for (int64_t f = 0; f < frames; ++f) {
    const int64_t start = f * kHop - kHop / 2;
    for (int i = 0; i < kWin; ++i) {
      int64_t idx = std::clamp<int64_t>(start + i, 0, wave.size() - 1);
      fr(i, f) = wave.samples(idx);
    }
  }
  MatF re = basis_cos_ * fr;
  MatF im = basis_sin_ * fr;
  MatF power = re.array().square() + im.array().square();
  MatF mel = mel_ * power;
  return (mel.array() + 1e-6f).log().matrix();
}

FileFeatureProvider::FileFeatureProvider(std::string path)
    : path_(std::move(path)) {}

int FileFeatureProvider::dim() const {
  if (cached_dim_ < 0) cached_dim_ = int(load_features(path_).rows());
  return cached_dim_;
}

FeatureSeq FileFeatureProvider::features(const Waveform& wave) const {
  FeatureSeq f = load_features(path_);
  const int64_t want = ceil_div(wave.size(), kHop);
  if (std::abs(f.cols() - want) > 1)
    throw Error("feature file " + path_ + " has " + std::to_string(f.cols()) +
                " frames, waveform expects " + std::to_string(want));
  if (f.cols() > want) f = f.leftCols(want).eval();
  while (f.cols() < want) {
    f.conservativeResize(Eigen::NoChange, f.cols() + 1);
    f.col(f.cols() - 1) = f.col(f.cols() - 2);
  }
  return f;
}

void save_features(const FeatureSeq& feats, const std::string& path) {
  bitio::ByteWriter w;
  w.str("DSFT");
  w.u8(1);
  w.u32(uint32_t(feats.cols()));
  w.u32(uint32_t(feats.rows()));
  w.u32(uint32_t(kFeatureRateHz * 100));
  for (int64_t f = 0; f < feats.cols(); ++f)
    for (int64_t d = 0; d < feats.rows(); ++d) w.f32(feats(d, f));
  bitio::write_file(path, w.data());
}

FeatureSeq load_features(const std::string& path) {
  auto bytes = bitio::read_file(path);
  bitio::ByteReader rd(bytes);
  if (rd.remaining() < 17 || rd.str(4) != "DSFT")
    throw FormatError(FormatError::Code::bad_magic,
                      path + ": not a DSFT feature file");
  if (rd.u8() != 1)
    throw FormatError(FormatError::Code::bad_version,
                      path + ": unsupported DSFT version");
  uint32_t frames = rd.u32();
  uint32_t dim = rd.u32();
  uint32_t rate = rd.u32();
  if (rate != uint32_t(kFeatureRateHz * 100))
    throw FormatError(FormatError::Code::bad_field,
                      path + ": feature rate " + std::to_string(rate) +
                          " centi-Hz, expected 5000");
  FeatureSeq f(dim, frames);
  for (uint32_t i = 0; i < frames; ++i)
    for (uint32_t d = 0; d < dim; ++d) f(d, i) = rd.f32();
  return f;
}

FeatureSeq pool_features(const FeatureSeq& feats) {
  require(feats.cols() > 0, "pool_features: empty feature sequence");
  const int64_t in = feats.cols();
  const int64_t out = ceil_div(in, kPoolStride);
  const int64_t span = (out - 1) * kPoolStride + kPoolKernel;
  const int64_t pad_left = (span - in) / 2;

  FeatureSeq pooled = FeatureSeq::Zero(feats.rows(), out);
  for (int64_t o = 0; o < out; ++o) {
    for (int k = 0; k < kPoolKernel; ++k) {
      int64_t idx = o * kPoolStride + k - pad_left;
      idx = std::clamp<int64_t>(idx, 0, in - 1);
      pooled.col(o) += feats.col(idx);
    }
  }
  return pooled / float(kPoolKernel);
}

SemanticTokenSeq semantic_tokenize(const Waveform& wave,
                                   const FeatureProvider& provider,
                                   const quant::Codebook& cb) {
  require(provider.dim() == cb.dim(),
          "semantic_tokenize: provider dim " + std::to_string(provider.dim()) +
              " != codebook dim " + std::to_string(cb.dim()));
  FeatureSeq pooled = pool_features(provider.features(wave));
  SemanticTokenSeq out;
  out.ids.reserve(size_t(pooled.cols()));
  for (int64_t f = 0; f < pooled.cols(); ++f)
    out.ids.push_back(quant::vq_encode(pooled.col(f), cb));
  return out;
}

}  // namespace dss::semantics
