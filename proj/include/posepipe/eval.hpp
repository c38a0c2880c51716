#pragma once

#include <string>
#include <vector>

#include "posepipe/synth.hpp"

namespace posepipe {

struct EvalReport {
  double jitter = 0.0;                // px, largest single-keypoint move between adjacent frames
  std::vector<double> timing_errors;  // frames, per kept key pose
  double coverage = 0.0;              // dictionary coverage of the language inventory
  bool model_timing = false;

  std::string to_json() const;
};

/// Largest per-keypoint (x, y) displacement between consecutive frames.
double max_jitter(const OutputSequence& seq);

/// Timing error of each kept key pose is |center_frame - exact phone midpoint|.
EvalReport eval_metrics(const OutputSequence& seq, const std::vector<KeyPoseEvent>& kept, double coverage,
                        bool model_timing = false);

}  // namespace posepipe
