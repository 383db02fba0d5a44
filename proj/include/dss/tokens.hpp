#pragma once

#include <cstdint>
#include <vector>

#include "dss/common.hpp"

namespace dss {

constexpr int kTokenBits = 11;          // 2048-entry codebooks
constexpr int kCodebookSize = 1 << kTokenBits;
constexpr int kFrameRateCentiHz = 1250;  // 12.5 Hz token frame rate

// Single-level semantic token ids at 12.5 Hz.
struct SemanticTokenSeq {
  std::vector<int32_t> ids;

  int64_t frames() const { return int64_t(ids.size()); }
};

// RVQ acoustic token grid at 12.5 Hz: one column per frame, rows ordered
// coarse to fine.
struct AcousticTokenSeq {
  Eigen::Matrix<int32_t, Eigen::Dynamic, Eigen::Dynamic> ids;

  int64_t frames() const { return ids.cols(); }
  int depth() const { return int(ids.rows()); }

  // First `d` levels of every frame.
  AcousticTokenSeq truncated(int d) const {
    require(d >= 1 && d <= depth(), "AcousticTokenSeq: bad truncation depth");
    AcousticTokenSeq out;
    out.ids = ids.topRows(d);
    return out;
  }
};

// Number of semantic (0 or 1) and acoustic (1-8) token levels consumed by a
// decoder.
struct ConditioningSpec {
  int n_s = 1;
  int n_a = 8;

  ConditioningSpec() = default;
  ConditioningSpec(int ns, int na) : n_s(ns), n_a(na) {
    require(n_s == 0 || n_s == 1, "ConditioningSpec: n_s must be 0 or 1");
    require(n_a >= 1 && n_a <= 8, "ConditioningSpec: n_a must lie in [1, 8]");
  }

  int depth() const { return n_s + n_a; }
  bool operator==(const ConditioningSpec&) const = default;
};

}  // namespace dss
