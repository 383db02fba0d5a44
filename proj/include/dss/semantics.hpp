#pragma once

// Semantic token extraction: 50 Hz SSL-style features from a pluggable
// provider, pooled to 12.5 Hz and quantized against a k-means codebook.

#include <memory>
#include <string>

#include "dss/quant.hpp"
#include "dss/tokens.hpp"

namespace dss::semantics {

constexpr int kFeatureRateHz = 50;

// Feature frames, one column per 50 Hz frame.
using FeatureSeq = MatF;

class FeatureProvider {
 public:
  virtual ~FeatureProvider() = default;
  virtual int dim() const = 0;
  // Must return ceil(duration_seconds * 50) frames, deterministically.
  virtual FeatureSeq features(const Waveform& wave) const = 0;
};

// Self-contained provider: 64-band log-mel filterbank at a 20 ms hop
// (= 50 Hz) and 40 ms analysis window.
class LogMelProvider : public FeatureProvider {
 public:
  explicit LogMelProvider(int n_mels = 64);
  int dim() const override { return n_mels_; }
  FeatureSeq features(const Waveform& wave) const override;

 private:
  int n_mels_;
  MatF basis_cos_, basis_sin_, mel_;
};

// Loads precomputed 50 Hz features from ".dsft" files, for setups where real
// SSL features were exported elsewhere.
class FileFeatureProvider : public FeatureProvider {
 public:
  // path resolves per request: features(wave) reads `path`.
  explicit FileFeatureProvider(std::string path);
  int dim() const override;
  FeatureSeq features(const Waveform& wave) const override;

 private:
  std::string path_;
  mutable int cached_dim_ = -1;
};

void save_features(const FeatureSeq& feats, const std::string& path);
FeatureSeq load_features(const std::string& path);

// Non-causal mean pooling, kernel 8, stride 4, replicated edges:
// 50 Hz -> 12.5 Hz.
FeatureSeq pool_features(const FeatureSeq& feats);

SemanticTokenSeq semantic_tokenize(const Waveform& wave,
                                   const FeatureProvider& provider,
                                   const quant::Codebook& cb);

}  // namespace dss::semantics
