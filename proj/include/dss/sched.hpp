#pragma once

// Closed-form diffusion noise schedule and the v-parameterization algebra.
// All functions are pure; latent arrays are (dim x frames) matrices.

#include <cmath>
#include <optional>
#include <utility>

#include "dss/common.hpp"

namespace dss::sched {

// Trigonometric schedule a_t = cos(theta), b_t = sin(theta) with theta
// interpolating linearly between theta0 and theta1. The default endpoints
// arctan(e^-3) and arctan(e^3) give log-SNR +6 at t=0 and -6 at t=1.
struct Schedule {
  double theta0 = std::atan(std::exp(-3.0));
  double theta1 = std::atan(std::exp(3.0));

  Schedule() = default;
  Schedule(double th0, double th1) : theta0(th0), theta1(th1) {
    require(0.0 < theta0 && theta0 < theta1 && theta1 < M_PI / 2.0,
            "Schedule: need 0 < theta0 < theta1 < pi/2");
  }

  double angle(double t) const { return theta0 + (theta1 - theta0) * t; }
};

inline std::pair<double, double> alpha_sigma(const Schedule& sched, double t) {
  require(t >= 0.0 && t <= 1.0, "alpha_sigma: t must lie in [0, 1]");
  const double th = sched.angle(t);
  return {std::cos(th), std::sin(th)};
}

inline double log_snr(const Schedule& sched, double t) {
  const auto [a, b] = alpha_sigma(sched, t);
  return 2.0 * (std::log(a) - std::log(b));
}

template <typename S>
struct DiffusionState {
  Mat<S> z;   // noised latent, same shape as the clean latent
  double t;   // diffusion time in [0, 1]
  std::optional<Mat<S>> eps;  // noise draw used to create z, kept for losses
};

template <typename S>
DiffusionState<S> diffuse(const Mat<S>& x, const Mat<S>& eps, double t,
                          const Schedule& sched = {}) {
  require(x.rows() == eps.rows() && x.cols() == eps.cols(),
          "diffuse: x and eps shapes differ");
  const auto [a, b] = alpha_sigma(sched, t);
  DiffusionState<S> st;
  st.z = S(a) * x + S(b) * eps;
  st.t = t;
  st.eps = eps;
  return st;
}

template <typename S>
Mat<S> v_target(const Mat<S>& x, const Mat<S>& eps, double t,
                const Schedule& sched = {}) {
  require(x.rows() == eps.rows() && x.cols() == eps.cols(),
          "v_target: x and eps shapes differ");
  const auto [a, b] = alpha_sigma(sched, t);
  return S(a) * eps - S(b) * x;
}

// x_hat = a_t z - b_t v. Exact inverse of (diffuse, v_target) since
// a^2 + b^2 = 1.
template <typename S>
Mat<S> recover_x(const DiffusionState<S>& state, const Mat<S>& v,
                 const Schedule& sched = {}) {
  require(state.z.rows() == v.rows() && state.z.cols() == v.cols(),
          "recover_x: z and v shapes differ");
  const auto [a, b] = alpha_sigma(sched, state.t);
  return S(a) * state.z - S(b) * v;
}

// eps_hat = b_t z + a_t v, the companion identity used by the sampler.
template <typename S>
Mat<S> recover_eps(const DiffusionState<S>& state, const Mat<S>& v,
                   const Schedule& sched = {}) {
  require(state.z.rows() == v.rows() && state.z.cols() == v.cols(),
          "recover_eps: z and v shapes differ");
  const auto [a, b] = alpha_sigma(sched, state.t);
  return S(b) * state.z + S(a) * v;
}

}  // namespace dss::sched
