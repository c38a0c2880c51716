#pragma once

// Scalar-generic numerics behind key-pose interpolation and smoothing.

#include <algorithm>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "posepipe/keypoints.hpp"

namespace posepipe {

/// Pose at frame f on the straight line between key frame a (pose p) and key
/// frame b (pose q): ((b-f) p + (f-a) q) / (b-a). Each key's weight falls
/// linearly with distance from it. Requires a < b. The result is clamped to
/// the coefficient-wise envelope of p and q.
template <typename DerivedP, typename DerivedQ>
auto blend_key_poses(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q,
                     int a, int b, int f) {
  using Scalar = typename DerivedP::Scalar;
  const Scalar wp(b - f), wq(f - a), span(b - a);
  return ((wp * p + wq * q) / span).cwiseMax(p.cwiseMin(q)).cwiseMin(p.cwiseMax(q)).eval();
}

/// Unnormalized triangular weights h+1-|d| for d = -h..h, h = window/2.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> triangular_weights(int window) {
  const int half = window / 2;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> w(2 * half + 1);
  for (int d = -half; d <= half; ++d) w(d + half) = Scalar(half + 1 - std::abs(d));
  return w;
}

/// Triangular-kernel moving average over a sequence of same-shape Eigen
/// objects. Near the ends the window is truncated and renormalized. Computed
/// as x_t + sum_d w_d (x_{t+d} - x_t) / W; constant runs come back unchanged.
template <typename Matrix>
std::vector<Matrix> triangular_smooth(std::span<const Matrix> signal, int window) {
  using Scalar = typename Matrix::Scalar;
  const auto weights = triangular_weights<Scalar>(window);
  const int half = window / 2;
  const int n = static_cast<int>(signal.size());
  std::vector<Matrix> out(signal.begin(), signal.end());
  for (int t = 0; t < n; ++t) {
    const int lo = std::max(0, t - half);
    const int hi = std::min(n - 1, t + half);
    const Scalar total = weights.segment(lo - t + half, hi - lo + 1).sum();
    Matrix acc = Matrix::Zero(signal[0].rows(), signal[0].cols());
    for (int s = lo; s <= hi; ++s) {
      if (s == t) continue;
      acc += (weights(s - t + half) / total) * (signal[s] - signal[t]);
    }
    out[t] = signal[t] + acc;
  }
  return out;
}

/// Mouth centroid (x, y) of a frame.
template <typename Scalar>
Eigen::Matrix<Scalar, 1, 2> mouth_center(const KeypointFrameT<Scalar>& frame) {
  return frame.mouth().template leftCols<2>().colwise().mean();
}

/// Smooths every keypoint except the lips, whose centroid is smoothed instead;
/// each lip point is then placed at the smoothed centroid plus its original
/// offset from the raw centroid, so mouth shape is untouched. Lip confidences
/// are left as they are.
template <typename Scalar>
std::vector<KeypointFrameT<Scalar>> smooth_face_anchored(std::span<const KeypointFrameT<Scalar>> frames,
                                                         int window) {
  using Points = typename KeypointFrameT<Scalar>::Points;
  using Center = Eigen::Matrix<Scalar, 1, 2>;
  const std::size_t n = frames.size();
  std::vector<Points> points(n);
  std::vector<Center> centers(n);
  for (std::size_t t = 0; t < n; ++t) {
    points[t] = frames[t].points;
    centers[t] = mouth_center(frames[t]);
  }
  const auto smoothed = triangular_smooth<Points>(points, window);
  const auto smoothed_centers = triangular_smooth<Center>(centers, window);

  std::vector<KeypointFrameT<Scalar>> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    out[t].points = smoothed[t];
    auto mouth_xy = out[t].mouth().template leftCols<2>();
    const auto raw_xy = frames[t].mouth().template leftCols<2>();
    const Center shift = smoothed_centers[t] - centers[t];
    mouth_xy = raw_xy.rowwise() + shift;
    out[t].mouth().col(2) = frames[t].mouth().col(2);
  }
  return out;
}

}  // namespace posepipe
