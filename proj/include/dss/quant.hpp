#pragma once

// Vector quantization primitives: k-means fitting, nearest-neighbor encoding,
// residual vector quantization, and EMA codebook updates used during codec
// training.

#include <string>
#include <vector>

#include "dss/common.hpp"

namespace dss::quant {

// K codewords of dimension D, one per row. Immutable after fitting.
struct Codebook {
  MatF entries;  // K x D

  int size() const { return int(entries.rows()); }
  int dim() const { return int(entries.cols()); }
  VecF entry(int id) const {
    require(id >= 0 && id < size(), "Codebook: id out of range");
    return entries.row(id).transpose();
  }
};

struct RvqStack {
  std::vector<Codebook> codebooks;  // coarse to fine, shared dimension
  int max_depth() const { return int(codebooks.size()); }
  int dim() const {
    return codebooks.empty() ? 0 : codebooks.front().dim();
  }
};

struct KmeansOptions {
  int max_iterations = 100;
  double shift_tolerance = 1e-6;  // relative centroid movement
};

// Lloyd's algorithm with k-means++ seeding. Deterministic given the seed.
// features: N x D, one sample per row.
Codebook kmeans_fit(const MatF& features, int k, uint64_t seed,
                    const KmeansOptions& opts = {});

// Index of the nearest codeword by squared Euclidean distance; ties broken
// by the lowest id.
int vq_encode(const VecF& vec, const Codebook& cb);

// Greedy residual quantization over the first `depth` levels, ids coarse to
// fine.
std::vector<int> rvq_encode(const VecF& frame, const RvqStack& stack,
                            int depth);

// Sum of the addressed codewords. An empty id list decodes to zero.
VecF rvq_decode(const std::vector<int>& ids, const RvqStack& stack);

// Uniform over {1, ..., max_depth}; drawn once per training example.
int sample_dropout_depth(Rng& rng, int max_depth);

void save_codebook(const Codebook& cb, const std::string& path);
Codebook load_codebook(const std::string& path);

// Exponential-moving-average codeword updates with dead-code replacement.
// One trainer owns one codebook level; straight-through gradients are the
// caller's concern.
class EmaCodebookTrainer {
 public:
  EmaCodebookTrainer(int k, int dim, double decay = 0.99,
                     int dead_steps = 200);

  bool initialized() const { return initialized_; }

  // Buffers samples until at least k are available, then k-means-seeds the
  // codebook. Returns true once initialized.
  bool maybe_init(const MatF& samples, uint64_t seed);

  // One EMA update from assigned residuals (one per column of `vectors`).
  // Codewords unused for `dead_steps` consecutive updates are reassigned to
  // random columns of `vectors`.
  void update(const std::vector<int>& assignments, const MatF& vectors,
              Rng& rng);

  const Codebook& codebook() const { return cb_; }
  Codebook& codebook() { return cb_; }
  // Fraction of codewords with non-negligible EMA mass.
  double utilization() const;

 private:
  Codebook cb_;
  VecF ema_counts_;
  MatF ema_sums_;  // K x D
  Eigen::VectorXi unused_steps_;
  double decay_;
  int dead_steps_;
  bool initialized_ = false;
  MatF init_buffer_;
  int64_t buffered_ = 0;
};

}  // namespace dss::quant
