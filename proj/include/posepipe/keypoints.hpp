#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace posepipe {

inline constexpr int kBodyPoints = 25;  // OpenPose BODY_25
inline constexpr int kFacePoints = 70;  // 68 landmarks + 2 pupils
inline constexpr int kNumPoints = kBodyPoints + kFacePoints;
inline constexpr int kMouthFirst = 48;  // face index of the first lip point
inline constexpr int kMouthPoints = 20;  // outer lip 48..59, inner lip 60..67

/// One frame of 2D keypoints. Rows are points (body first, then face);
/// columns are x, y and confidence. Confidence 0 marks a missing point.
template <typename Scalar>
struct KeypointFrameT {
  using Points = Eigen::Matrix<Scalar, kNumPoints, 3>;

  Points points = Points::Zero();

  auto body() { return points.template topRows<kBodyPoints>(); }
  auto body() const { return points.template topRows<kBodyPoints>(); }
  auto face() { return points.template bottomRows<kFacePoints>(); }
  auto face() const { return points.template bottomRows<kFacePoints>(); }
  auto mouth() { return points.template middleRows<kMouthPoints>(kBodyPoints + kMouthFirst); }
  auto mouth() const { return points.template middleRows<kMouthPoints>(kBodyPoints + kMouthFirst); }
  auto xy() { return points.template leftCols<2>(); }
  auto xy() const { return points.template leftCols<2>(); }

  Scalar mean_confidence() const { return points.col(2).mean(); }

  bool operator==(const KeypointFrameT& o) const { return points == o.points; }
};

using KeypointFrame = KeypointFrameT<double>;

/// Frames from one clip or snippet, all at the same rate.
struct PoseSequence {
  std::vector<KeypointFrame> frames;
  double fps = 25.0;

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
  double duration() const { return static_cast<double>(frames.size()) / fps; }
};

struct OpenPoseParse {
  KeypointFrame frame;
  std::vector<std::string> warnings;
};

/// One OpenPose per-frame JSON document; the first person is used.
/// Throws Error(Parse) when no person is present or array sizes are wrong.
OpenPoseParse parse_openpose_frame(std::string_view text);

/// Single-person OpenPose document holding `frame`.
std::string serialize_openpose_frame(const KeypointFrame& frame);

/// Every *.json file in `dir`, in filename order.
PoseSequence load_keypoint_dir(const std::string& dir, double fps);

/// Writes frame_%06d_keypoints.json files into `dir`, creating it if needed.
void write_keypoint_dir(const PoseSequence& seq, const std::string& dir);

}  // namespace posepipe
