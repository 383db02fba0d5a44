#include "dss/quant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dss/bitio.hpp"

namespace dss::quant {
namespace {

// Squared distances from every centroid (rows of E) to every sample (rows of
// X), returned as K x N. Uses the expansion |e|^2 - 2 e.x + |x|^2 without the
// sample term, which does not affect the argmin.
MatF centroid_scores(const MatF& centroids, const MatF& samples) {
  VecF sq = centroids.rowwise().squaredNorm();
  MatF scores = (-2.0f * centroids * samples.transpose()).colwise() + sq;
  return scores;
}

int argmin_first(const Eigen::Ref<const VecF>& v) {
  int best = 0;
  float best_val = v(0);
  for (int i = 1; i < v.size(); ++i) {
    if (v(i) < best_val) {
      best_val = v(i);
      best = i;
    }
  }
  return best;
}

}  // namespace

Codebook kmeans_fit(const MatF& features, int k, uint64_t seed,
                    const KmeansOptions& opts) {
  const int64_t n = features.rows();
  const int d = int(features.cols());
  require(k >= 1, "kmeans_fit: k must be positive");
  require(n >= k, "kmeans_fit: need at least k samples, got " +
                      std::to_string(n) + " < " + std::to_string(k));
  require(features.allFinite(), "kmeans_fit: non-finite feature values");

  Rng rng(seed);
  MatF centroids(k, d);

  // k-means++ seeding.
  centroids.row(0) = features.row(rng.index(n));
  VecF min_d2 =
      (features.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    double total = double(min_d2.sum());
    int64_t pick;
    if (total <= 0.0) {
      pick = rng.index(n);
    } else {
      double r = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (int64_t i = 0; i < n; ++i) {
        acc += double(min_d2(i));
        if (acc >= r) {
          pick = i;
          break;
        }
      }
    }
    centroids.row(c) = features.row(pick);
    min_d2 = min_d2.cwiseMin(
        (features.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }

  std::vector<int> assign(size_t(n), 0);
  const float scale = std::max(1e-12f, features.cwiseAbs().maxCoeff());
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    MatF scores = centroid_scores(centroids, features);
    for (int64_t i = 0; i < n; ++i) assign[size_t(i)] = argmin_first(scores.col(i));

    MatF sums = MatF::Zero(k, d);
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(k);
    for (int64_t i = 0; i < n; ++i) {
      sums.row(assign[size_t(i)]) += features.row(i);
      counts(assign[size_t(i)]) += 1;
    }

    float shift = 0.0f;
    for (int c = 0; c < k; ++c) {
      Eigen::RowVectorXf next;
      if (counts(c) > 0) {
        next = sums.row(c) / float(counts(c));
      } else {
        // Empty cluster: restart at the sample farthest from its centroid.
        VecF d2 = scores.colwise().minCoeff().transpose() +
                  features.rowwise().squaredNorm();
        Eigen::Index far = 0;
        d2.maxCoeff(&far);
        next = features.row(far);
      }
      shift = std::max(shift, (next - centroids.row(c)).norm());
      centroids.row(c) = next;
    }
    if (shift <= float(opts.shift_tolerance) * scale) break;
  }

  Codebook cb;
  cb.entries = centroids;
  return cb;
}

int vq_encode(const VecF& vec, const Codebook& cb) {
  require(vec.size() == cb.dim(),
          "vq_encode: vector dim " + std::to_string(vec.size()) +
              " != codebook dim " + std::to_string(cb.dim()));
  VecF d2 =
      (cb.entries.rowwise() - vec.transpose()).rowwise().squaredNorm();
  return argmin_first(d2);
}

std::vector<int> rvq_encode(const VecF& frame, const RvqStack& stack,
                            int depth) {
  require(depth >= 1 && depth <= stack.max_depth(),
          "rvq_encode: depth " + std::to_string(depth) +
              " outside [1, " + std::to_string(stack.max_depth()) + "]");
  std::vector<int> ids;
  ids.reserve(size_t(depth));
  VecF residual = frame;
  for (int level = 0; level < depth; ++level) {
    int id = vq_encode(residual, stack.codebooks[size_t(level)]);
    ids.push_back(id);
    residual -= stack.codebooks[size_t(level)].entry(id);
  }
  return ids;
}

VecF rvq_decode(const std::vector<int>& ids, const RvqStack& stack) {
  require(ids.size() <= size_t(stack.max_depth()),
          "rvq_decode: more ids than codebook levels");
  VecF out = VecF::Zero(stack.dim());
  for (size_t level = 0; level < ids.size(); ++level)
    out += stack.codebooks[level].entry(ids[level]);
  return out;
}

int sample_dropout_depth(Rng& rng, int max_depth) {
  require(max_depth >= 1, "sample_dropout_depth: max_depth must be >= 1");
  return int(rng.index(max_depth)) + 1;
}

void save_codebook(const Codebook& cb, const std::string& path) {
  bitio::ByteWriter w;
  w.str("DSCB");
  w.u8(1);
  w.u32(uint32_t(cb.size()));
  w.u32(uint32_t(cb.dim()));
  for (int i = 0; i < cb.size(); ++i)
    for (int j = 0; j < cb.dim(); ++j) w.f32(cb.entries(i, j));
  bitio::write_file(path, w.data());
}

Codebook load_codebook(const std::string& path) {
  auto bytes = bitio::read_file(path);
  bitio::ByteReader rd(bytes);
  if (rd.remaining() < 13 || rd.str(4) != "DSCB")
    throw FormatError(FormatError::Code::bad_magic,
                      path + ": not a DSCB codebook");
  uint8_t version = rd.u8();
  if (version != 1)
    throw FormatError(FormatError::Code::bad_version,
                      path + ": unsupported DSCB version");
  uint32_t k = rd.u32();
  uint32_t d = rd.u32();
  Codebook cb;
  cb.entries.resize(k, d);
  for (uint32_t i = 0; i < k; ++i)
    for (uint32_t j = 0; j < d; ++j) cb.entries(i, j) = rd.f32();
  return cb;
}

EmaCodebookTrainer::EmaCodebookTrainer(int k, int dim, double decay,
                                       int dead_steps)
    : decay_(decay), dead_steps_(dead_steps) {
  cb_.entries = MatF::Zero(k, dim);
  ema_counts_ = VecF::Zero(k);
  ema_sums_ = MatF::Zero(k, dim);
  unused_steps_ = Eigen::VectorXi::Zero(k);
  init_buffer_.resize(0, dim);
}

bool EmaCodebookTrainer::maybe_init(const MatF& samples, uint64_t seed) {
  if (initialized_) return true;
  const int64_t have = buffered_;
  init_buffer_.conservativeResize(have + samples.rows(), Eigen::NoChange);
  init_buffer_.middleRows(have, samples.rows()) = samples;
  buffered_ += samples.rows();
  if (buffered_ < cb_.size()) return false;
  cb_ = kmeans_fit(init_buffer_, cb_.size(), seed);
  ema_counts_.setOnes();
  ema_sums_ = cb_.entries;
  init_buffer_.resize(0, cb_.dim());
  buffered_ = 0;
  initialized_ = true;
  return true;
}

void EmaCodebookTrainer::update(const std::vector<int>& assignments,
                                const MatF& vectors, Rng& rng) {
  require(initialized_, "EmaCodebookTrainer: update before initialization");
  require(int64_t(assignments.size()) == vectors.cols(),
          "EmaCodebookTrainer: assignment/vector count mismatch");
  const int k = cb_.size();
  VecF batch_counts = VecF::Zero(k);
  MatF batch_sums = MatF::Zero(k, cb_.dim());
  for (size_t i = 0; i < assignments.size(); ++i) {
    batch_counts(assignments[i]) += 1.0f;
    batch_sums.row(assignments[i]) += vectors.col(Eigen::Index(i)).transpose();
  }
  const float g = float(decay_);
  ema_counts_ = g * ema_counts_ + (1.0f - g) * batch_counts;
  ema_sums_ = g * ema_sums_ + (1.0f - g) * batch_sums;

  // Laplace-smoothed means keep rarely used codewords finite.
  const float eps = 1e-5f;
  const float total = ema_counts_.sum();
  for (int c = 0; c < k; ++c) {
    float w = (ema_counts_(c) + eps) / (total + float(k) * eps) * total;
    cb_.entries.row(c) = ema_sums_.row(c) / w;
  }

  for (int c = 0; c < k; ++c) {
    if (batch_counts(c) > 0.0f) {
      unused_steps_(c) = 0;
    } else if (++unused_steps_(c) >= dead_steps_ && vectors.cols() > 0) {
      int64_t pick = rng.index(vectors.cols());
      cb_.entries.row(c) = vectors.col(pick).transpose();
      ema_sums_.row(c) = cb_.entries.row(c);
      ema_counts_(c) = 1.0f;
      unused_steps_(c) = 0;
    }
  }
}

double EmaCodebookTrainer::utilization() const {
  const float thresh = 1e-3f;
  return double((ema_counts_.array() > thresh).count()) / cb_.size();
}

}  // namespace dss::quant
