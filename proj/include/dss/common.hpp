#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dss {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S>
using RowVec = Eigen::Matrix<S, 1, Eigen::Dynamic>;

using MatF = Mat<float>;
using MatD = Mat<double>;
using VecF = Vec<float>;
using VecD = Vec<double>;

constexpr int kSampleRate = 24000;

// Mono 24 kHz waveform, amplitudes in [-1, 1].
struct Waveform {
  VecF samples;
  int sample_rate = kSampleRate;

  int64_t size() const { return samples.size(); }
  double seconds() const { return double(samples.size()) / sample_rate; }
};

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Binary container parsing failures. Each failure mode gets its own code so
// callers can distinguish a wrong file from a damaged one.
struct FormatError : Error {
  enum class Code {
    bad_magic,
    bad_version,
    truncated,
    nonzero_padding,
    bad_field,
  };
  Code code;
  FormatError(Code c, const std::string& msg) : Error(msg), code(c) {}
};

// Deterministic RNG used everywhere seeds appear in the public surface.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Derives an independent stream for (seed, stream_id); used to make
  // training steps reproducible after checkpoint resume.
  static Rng derived(uint64_t seed, uint64_t stream_id) {
    uint64_t h = seed;
    h ^= stream_id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 31;
    return Rng(h);
  }

  double uniform() { return uni_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() { return norm_(engine_); }
  // Uniform over {0, ..., n-1}.
  int64_t index(int64_t n) {
    return std::uniform_int_distribution<int64_t>(0, n - 1)(engine_);
  }

  template <typename S>
  Mat<S> normal_mat(Eigen::Index rows, Eigen::Index cols, double std = 1.0) {
    Mat<S> m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = S(normal() * std);
    return m;
  }

  template <typename S>
  Vec<S> normal_vec(Eigen::Index n, double std = 1.0) {
    Vec<S> v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = S(normal() * std);
    return v;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uni_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// ceil(a / b) for positive integers.
inline int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

}  // namespace dss
