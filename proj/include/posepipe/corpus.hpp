#pragma once

#include <string>
#include <vector>

#include "posepipe/lexicon.hpp"
#include "posepipe/posedict.hpp"

namespace posepipe {

/// Deterministic stand-in for a keypoint-annotated speech recording: a
/// front-facing upper body whose lip opening and width follow the phone
/// being spoken, with slow head sway and varying detector confidence.
/// `phones` is timed with synthesize_durations after silence padding; the
/// video runs one frame past the audio.
Clip make_synthetic_clip(const std::string& id, const std::vector<PhoneUnit>& phones, double fps,
                         double speaking_rate = 1.0);

/// Lip opening/width scale factors for a unit; stressed vowels open wider.
struct MouthShape {
  double open = 0.0;
  double width = 1.0;
};
MouthShape mouth_shape(const PhoneUnit& unit);

/// 44 words spanning every English phone; all present in the bundled lexicon.
const std::vector<std::string>& english_training_words();

/// First-fit pass over `table`: keeps each syllable that contributes an
/// initial or final not yet seen.
std::vector<std::string> covering_pinyin_syllables(const std::vector<std::string>& table);

/// Reads a whitespace-separated syllable table, skipping '#' comment lines.
std::vector<std::string> load_pinyin_table(const std::string& path);

}  // namespace posepipe
