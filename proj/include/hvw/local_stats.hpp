#pragma once

#include <cstdint>
#include <stdexcept>
#include <type_traits>

#include <Eigen/Core>

#include "hvw/image.hpp"

namespace hvw {

namespace detail {

// Integer inputs accumulate exactly in int64; real inputs in double.
template <typename Scalar>
using AccumFor = std::conditional_t<std::is_integral_v<Scalar>, std::int64_t, double>;

template <typename Acc>
struct WindowSums {
  Plane<Acc> sum;    // (rows+1) x (cols+1) summed-area table of x
  Plane<Acc> sumsq;  // and of x^2

  struct Box {
    Acc n, s1, s2;
  };

  Box at(Index r, Index c, int half) const {
    const Index rows = sum.rows() - 1;
    const Index cols = sum.cols() - 1;
    const Index r0 = r - half < 0 ? 0 : r - half;
    const Index c0 = c - half < 0 ? 0 : c - half;
    const Index r1 = r + half + 1 > rows ? rows : r + half + 1;
    const Index c1 = c + half + 1 > cols ? cols : c + half + 1;
    auto rect = [&](const Plane<Acc>& t) {
      return t(r1, c1) - t(r0, c1) - t(r1, c0) + t(r0, c0);
    };
    return {static_cast<Acc>((r1 - r0) * (c1 - c0)), rect(sum), rect(sumsq)};
  }
};

template <typename Derived>
auto window_sums(const Eigen::ArrayBase<Derived>& x) {
  using Acc = AccumFor<typename Derived::Scalar>;
  WindowSums<Acc> t{Plane<Acc>::Zero(x.rows() + 1, x.cols() + 1),
                    Plane<Acc>::Zero(x.rows() + 1, x.cols() + 1)};
  for (Index r = 0; r < x.rows(); ++r) {
    for (Index c = 0; c < x.cols(); ++c) {
      const Acc v = static_cast<Acc>(x(r, c));
      t.sum(r + 1, c + 1) = v + t.sum(r, c + 1) + t.sum(r + 1, c) - t.sum(r, c);
      t.sumsq(r + 1, c + 1) = v * v + t.sumsq(r, c + 1) + t.sumsq(r + 1, c) - t.sumsq(r, c);
    }
  }
  return t;
}

inline void require_odd_window(int window) {
  if (window < 1 || window % 2 == 0) {
    throw std::invalid_argument("window must be an odd size >= 1, got " + std::to_string(window));
  }
}

}  // namespace detail

/// Mean over the window x window box centered at each pixel, truncated at borders.
template <typename Derived>
RealMap local_mean(const Eigen::ArrayBase<Derived>& x, int window) {
  detail::require_odd_window(window);
  const auto t = detail::window_sums(x);
  RealMap out(x.rows(), x.cols());
  for (Index r = 0; r < x.rows(); ++r) {
    for (Index c = 0; c < x.cols(); ++c) {
      const auto b = t.at(r, c, window / 2);
      out(r, c) = static_cast<double>(b.s1) / static_cast<double>(b.n);
    }
  }
  return out;
}

/// Population variance over the truncated window centered at each pixel.
template <typename Derived>
RealMap local_variance(const Eigen::ArrayBase<Derived>& x, int window) {
  detail::require_odd_window(window);
  const auto t = detail::window_sums(x);
  RealMap out(x.rows(), x.cols());
  for (Index r = 0; r < x.rows(); ++r) {
    for (Index c = 0; c < x.cols(); ++c) {
      const auto b = t.at(r, c, window / 2);
      // (n*S2 - S1^2) / n^2 is exact in the integer path up to the final division.
      const auto num = b.n * b.s2 - b.s1 * b.s1;
      const double v = static_cast<double>(num) / static_cast<double>(b.n * b.n);
      out(r, c) = v > 0.0 ? v : 0.0;
    }
  }
  return out;
}

}  // namespace hvw
