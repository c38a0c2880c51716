#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "posepipe/keypoints.hpp"
#include "posepipe/synth.hpp"

namespace posepipe {

inline constexpr double kMinVisibleConfidence = 0.05;

enum class Part : std::uint8_t { Body, Face, Lips };

struct Edge {
  int from = 0;  // row in KeypointFrame::points
  int to = 0;
  Part part = Part::Body;
};

/// Which keypoints are joined by lines. Indices address the combined point
/// rows (body 0..24, face 25..94).
struct SkeletonTopology {
  std::vector<Edge> edges;

  /// BODY_25 limbs plus the 68-landmark face contours; lips and eyes closed.
  static SkeletonTopology openpose();
};

using Rgb = std::array<std::uint8_t, 3>;

struct Palette {
  Rgb background{0, 0, 0};
  Rgb body{255, 255, 255};
  Rgb face{128, 128, 128};
  Rgb lips{255, 0, 0};

  /// Fixed part colors for the downstream image-synthesis network.
  static Palette label_map() { return {}; }
  /// Colored stick figure for viewing.
  static Palette stick_figure() { return {{16, 16, 24}, {80, 200, 120}, {90, 170, 255}, {255, 210, 60}}; }

  const Rgb& color(Part part) const {
    return part == Part::Body ? body : part == Part::Face ? face : lips;
  }
};

struct RasterFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB

  RasterFrame(int w, int h, Rgb fill);

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
};

/// 1-px Bresenham lines for every edge whose endpoints both have confidence
/// >= kMinVisibleConfidence; segments are clipped to the canvas.
RasterFrame rasterize_frame(const KeypointFrame& frame, const SkeletonTopology& topo, int width, int height,
                            const Palette& palette = Palette::label_map());

/// Binary P6 PPM.
std::string encode_ppm(const RasterFrame& frame);
void write_ppm(const RasterFrame& frame, const std::string& path);

/// Writes frame_%06d.ppm for every frame into `dir` (created if absent) and
/// returns the number of files written. Throws Error(Io) naming the path.
std::size_t export_frames(const OutputSequence& seq, const std::string& dir, int width, int height,
                          const Palette& palette = Palette::label_map());

/// {"fps": f, "frames": [{"body": [75], "face": [210], "tag": "Copied"}]}
std::string export_pose_json(const OutputSequence& seq);
/// Throws Error(Parse).
OutputSequence parse_pose_json(std::string_view text);

}  // namespace posepipe
