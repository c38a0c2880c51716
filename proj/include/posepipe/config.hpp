#pragma once

#include <string>
#include <string_view>

namespace posepipe {

/// Synthesis knobs. Defaults target 25 fps video.
struct SynthConfig {
  int pose_width = 7;             // frames per dictionary snippet, odd
  int min_key_pose_distance = 4;  // empty frames required between kept key poses
  int smooth_window = 9;          // triangular smoothing window, odd
  double fps = 25.0;

  /// Throws Error(Usage) describing the first violated constraint.
  void validate() const;

  bool operator==(const SynthConfig&) const = default;
};

/// {"pose_width":7,"min_key_pose_distance":4,"smooth_window":9,"fps":25};
/// absent keys keep their defaults. Validates the result.
SynthConfig parse_config(std::string_view text);
std::string serialize_config(const SynthConfig& cfg);
SynthConfig load_config(const std::string& path);

}  // namespace posepipe
