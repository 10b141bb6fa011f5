#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace hgen {

/// Cumulative noise schedule. alpha_bar has steps+1 entries with
/// alpha_bar[0] == 1, values in [0,1], strictly decreasing on (0, steps].
struct NoiseSchedule {
  int steps = 0;
  Eigen::ArrayXd alpha_bar;

  void validate() const {
    if (steps < 1 || alpha_bar.size() != steps + 1)
      throw std::invalid_argument("schedule: alpha_bar must have steps+1 entries");
    if (alpha_bar[0] != 1.0) throw std::invalid_argument("schedule: alpha_bar[0] must be 1");
    for (int t = 0; t <= steps; ++t) {
      if (!(alpha_bar[t] >= 0.0 && alpha_bar[t] <= 1.0))
        throw std::invalid_argument("schedule: alpha_bar out of [0,1]");
      if (t >= 2 && !(alpha_bar[t] < alpha_bar[t - 1]))
        throw std::invalid_argument("schedule: alpha_bar not strictly decreasing");
    }
    if (!(alpha_bar[1] < alpha_bar[0]))
      throw std::invalid_argument("schedule: alpha_bar not strictly decreasing");
  }

  static NoiseSchedule from_alpha_bar(Eigen::ArrayXd values) {
    NoiseSchedule s;
    s.steps = static_cast<int>(values.size()) - 1;
    s.alpha_bar = std::move(values);
    s.validate();
    return s;
  }

  /// Squared-cosine schedule (offset 0.008), the default for inference runs.
  static NoiseSchedule squared_cosine(int steps) {
    constexpr double kOffset = 0.008;
    Eigen::ArrayXd ab(steps + 1);
    const double f0 = std::cos(kOffset / (1.0 + kOffset) * M_PI / 2.0);
    for (int t = 0; t <= steps; ++t) {
      const double ft =
          std::cos((static_cast<double>(t) / steps + kOffset) / (1.0 + kOffset) * M_PI / 2.0);
      ab[t] = (ft * ft) / (f0 * f0);
    }
    ab[0] = 1.0;
    return from_alpha_bar(std::move(ab));
  }
};

/// Flat h*w*c grid of latent values, row-major pixels, channel fastest.
template <typename Scalar>
struct LatentGrid {
  int height = 0;
  int width = 0;
  int channels = 0;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> values;

  LatentGrid() = default;
  LatentGrid(int h, int w, int c)
      : height(h),
        width(w),
        channels(c),
        values(Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(
            static_cast<Eigen::Index>(h) * w * c)) {}

  bool same_shape(const LatentGrid& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
};

namespace detail {
template <typename Scalar>
void require_same_shape(const LatentGrid<Scalar>& a, const LatentGrid<Scalar>& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("latent grid shape mismatch");
}

inline void require_step(int t, const NoiseSchedule& sched) {
  if (t < 0 || t > sched.steps) throw std::invalid_argument("timestep out of range");
}
}  // namespace detail

/// Forward noising: sqrt(a_t) * y + sqrt(1 - a_t) * eps.
template <typename Scalar>
LatentGrid<Scalar> forward_noise(const LatentGrid<Scalar>& y, const LatentGrid<Scalar>& eps,
                                 int t, const NoiseSchedule& sched) {
  detail::require_same_shape(y, eps);
  detail::require_step(t, sched);
  const Scalar a = static_cast<Scalar>(std::sqrt(sched.alpha_bar[t]));
  const Scalar b = static_cast<Scalar>(std::sqrt(1.0 - sched.alpha_bar[t]));
  LatentGrid<Scalar> out = y;
  out.values = a * y.values + b * eps.values;
  return out;
}

/// Blended process: the clean target n takes the signal coefficient and the
/// conditioning grid x takes the noise coefficient.
template <typename Scalar>
LatentGrid<Scalar> blend(const LatentGrid<Scalar>& n, const LatentGrid<Scalar>& x, int t,
                         const NoiseSchedule& sched) {
  return forward_noise(n, x, t, sched);
}

/// v-prediction target: sqrt(a_t) * eps - sqrt(1 - a_t) * y.
template <typename Scalar>
LatentGrid<Scalar> v_target(const LatentGrid<Scalar>& y, const LatentGrid<Scalar>& eps, int t,
                            const NoiseSchedule& sched) {
  detail::require_same_shape(y, eps);
  detail::require_step(t, sched);
  const Scalar a = static_cast<Scalar>(std::sqrt(sched.alpha_bar[t]));
  const Scalar b = static_cast<Scalar>(std::sqrt(1.0 - sched.alpha_bar[t]));
  LatentGrid<Scalar> out = y;
  out.values = a * eps.values - b * y.values;
  return out;
}

/// Deterministic (eta = 0) DDIM update from t_from to t_to given the model's
/// clean-sample prediction: recover the implied noise direction at t_from and
/// recompose it at t_to.
template <typename Scalar>
LatentGrid<Scalar> ddim_step(const LatentGrid<Scalar>& current,
                             const LatentGrid<Scalar>& predicted_clean, int t_from, int t_to,
                             const NoiseSchedule& sched) {
  detail::require_same_shape(current, predicted_clean);
  detail::require_step(t_from, sched);
  detail::require_step(t_to, sched);
  if (t_to > t_from) throw std::invalid_argument("ddim_step: t_to must not exceed t_from");
  if (t_to == t_from) return current;

  const double a_from = sched.alpha_bar[t_from];
  const double a_to = sched.alpha_bar[t_to];
  // t_from >= 1 here, so 1 - a_from > 0 for any valid schedule.
  const Scalar inv_b_from = static_cast<Scalar>(1.0 / std::sqrt(1.0 - a_from));
  const Scalar sa_from = static_cast<Scalar>(std::sqrt(a_from));
  const Scalar sa_to = static_cast<Scalar>(std::sqrt(a_to));
  const Scalar b_to = static_cast<Scalar>(std::sqrt(1.0 - a_to));

  LatentGrid<Scalar> out = current;
  out.values = sa_to * predicted_clean.values +
               b_to * (current.values - sa_from * predicted_clean.values) * inv_b_from;
  return out;
}

}  // namespace hgen
