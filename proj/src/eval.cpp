#include "posepipe/eval.hpp"

#include <cmath>

#include "json.hpp"

namespace posepipe {

double max_jitter(const OutputSequence& seq) {
  double worst = 0.0;
  for (std::size_t t = 1; t < seq.frames.size(); ++t) {
    const auto step = (seq.frames[t].xy() - seq.frames[t - 1].xy()).rowwise().norm();
    worst = std::max(worst, step.maxCoeff());
  }
  return worst;
}

EvalReport eval_metrics(const OutputSequence& seq, const std::vector<KeyPoseEvent>& kept, double coverage,
                        bool model_timing) {
  EvalReport report;
  report.jitter = max_jitter(seq);
  for (const auto& k : kept) report.timing_errors.push_back(std::abs(k.center_frame - k.exact_mid));
  report.coverage = coverage;
  report.model_timing = model_timing;
  return report;
}

std::string EvalReport::to_json() const {
  double worst = 0.0;
  for (double e : timing_errors) worst = std::max(worst, e);
  nlohmann::json doc = {{"jitter_px", jitter},
                        {"timing_errors_frames", timing_errors},
                        {"max_timing_error_frames", worst},
                        {"coverage", coverage},
                        {"timing", model_timing ? "model-based" : "aligned"}};
  return doc.dump(2) + "\n";
}

}  // namespace posepipe
