#pragma once

// Spectral primitives built on dense Eigen products: windowed framing, real
// DFT via explicit basis matrices (fast enough at desk scale and trivially
// differentiable), mel filterbanks.

#include <cmath>
#include <vector>

#include "dss/common.hpp"

namespace dss::dsp {

template <typename S>
Vec<S> hann_window(int n) {
  Vec<S> w(n);
  for (int i = 0; i < n; ++i)
    w(i) = S(0.5 - 0.5 * std::cos(2.0 * M_PI * i / n));
  return w;
}

// Real DFT of a windowed frame as two GEMMs. Basis rows carry the analysis
// window so the adjoint is a plain transpose product.
template <typename S>
struct StftPlan {
  int win = 0;
  int hop = 0;
  int bins = 0;
  Mat<S> basis_cos;  // bins x win
  Mat<S> basis_sin;

  StftPlan() = default;
  StftPlan(int win_, int hop_) : win(win_), hop(hop_), bins(win_ / 2 + 1) {
    Vec<S> w = hann_window<S>(win);
    basis_cos.resize(bins, win);
    basis_sin.resize(bins, win);
    for (int k = 0; k < bins; ++k) {
      for (int n = 0; n < win; ++n) {
        double ang = 2.0 * M_PI * k * n / win;
        basis_cos(k, n) = S(std::cos(ang)) * w(n);
        basis_sin(k, n) = S(-std::sin(ang)) * w(n);
      }
    }
  }

  int64_t num_frames(int64_t T) const {
    int64_t eff = std::max<int64_t>(T, win);
    return 1 + (eff - win) / hop;
  }

  // win x frames matrix of raw signal windows; signals shorter than one
  // window are zero-padded on the right, the trailing partial hop is dropped.
  Mat<S> frames(const Vec<S>& x) const {
    const int64_t F = num_frames(x.size());
    Mat<S> fr = Mat<S>::Zero(win, F);
    for (int64_t f = 0; f < F; ++f) {
      int64_t start = f * hop;
      int64_t len = std::min<int64_t>(win, x.size() - start);
      if (len > 0) fr.col(f).head(len) = x.segment(start, len);
    }
    return fr;
  }

  // Overlap-add adjoint of frames().
  Vec<S> frames_adjoint(const Mat<S>& dfr, int64_t T) const {
    Vec<S> dx = Vec<S>::Zero(T);
    for (int64_t f = 0; f < dfr.cols(); ++f) {
      int64_t start = f * hop;
      int64_t len = std::min<int64_t>(win, T - start);
      if (len > 0) dx.segment(start, len) += dfr.col(f).head(len);
    }
    return dx;
  }
};

// Magnitude spectrogram with a reverse pass, for losses that reach back to
// the waveform.
template <typename S>
struct StftMag {
  const StftPlan<S>* plan = nullptr;
  Mat<S> re, im, mag;  // bins x frames
  int64_t T = 0;

  Mat<S> forward(const StftPlan<S>& p, const Vec<S>& x) {
    plan = &p;
    T = x.size();
    Mat<S> fr = p.frames(x);
    re = p.basis_cos * fr;
    im = p.basis_sin * fr;
    mag = (re.array().square() + im.array().square() + S(1e-12)).sqrt();
    return mag;
  }

  Vec<S> backward(const Mat<S>& dmag) const {
    Mat<S> dre = (dmag.array() * re.array() / mag.array()).matrix();
    Mat<S> dim = (dmag.array() * im.array() / mag.array()).matrix();
    Mat<S> dfr = plan->basis_cos.transpose() * dre +
                 plan->basis_sin.transpose() * dim;
    return plan->frames_adjoint(dfr, T);
  }
};

// Triangular mel filterbank, n_mels x bins.
template <typename S>
Mat<S> mel_filterbank(int n_mels, int bins, int win, double sample_rate,
                      double fmin = 0.0, double fmax = -1.0) {
  if (fmax <= 0.0) fmax = sample_rate / 2.0;
  auto hz_to_mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto mel_to_hz = [](double m) {
    return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0);
  };
  const double mlo = hz_to_mel(fmin), mhi = hz_to_mel(fmax);
  std::vector<double> centers(size_t(n_mels) + 2);
  for (int i = 0; i < n_mels + 2; ++i)
    centers[size_t(i)] = mel_to_hz(mlo + (mhi - mlo) * i / (n_mels + 1));

  Mat<S> fb = Mat<S>::Zero(n_mels, bins);
  for (int m = 0; m < n_mels; ++m) {
    double lo = centers[size_t(m)], mid = centers[size_t(m) + 1],
           hi = centers[size_t(m) + 2];
    for (int b = 0; b < bins; ++b) {
      double f = b * sample_rate / win;
      double v = 0.0;
      if (f > lo && f < mid)
        v = (f - lo) / std::max(1e-9, mid - lo);
      else if (f >= mid && f < hi)
        v = (hi - f) / std::max(1e-9, hi - mid);
      if (v > 0.0) fb(m, b) = S(v);
    }
  }
  return fb;
}

// Power spectrum across nfft bins of a Hann-windowed prefix; test oracle and
// sanity-check helper rather than a performance path.
template <typename S>
Vec<S> power_spectrum(const Vec<S>& x, int nfft) {
  Vec<S> seg = Vec<S>::Zero(nfft);
  int64_t len = std::min<int64_t>(nfft, x.size());
  seg.head(len) = x.head(len);
  Vec<S> w = hann_window<S>(nfft);
  seg = seg.cwiseProduct(w);
  Vec<S> pow(nfft / 2 + 1);
  for (int k = 0; k <= nfft / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (int n = 0; n < nfft; ++n) {
      double ang = 2.0 * M_PI * k * n / nfft;
      re += seg(n) * std::cos(ang);
      im -= seg(n) * std::sin(ang);
    }
    pow(k) = S(re * re + im * im);
  }
  return pow;
}

}  // namespace dss::dsp
