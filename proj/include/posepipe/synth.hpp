#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posepipe/alignment.hpp"
#include "posepipe/config.hpp"
#include "posepipe/keypoints.hpp"
#include "posepipe/lexicon.hpp"
#include "posepipe/posedict.hpp"

namespace posepipe {

enum class FrameSource : std::uint8_t { Copied, Interpolated, Held };

const char* to_string(FrameSource tag);
/// Throws Error(Parse) for anything but "Copied", "Interpolated", "Held".
FrameSource parse_frame_source(std::string_view name);

/// Final pose track, one tag per frame recording how it was produced.
struct OutputSequence {
  std::vector<KeypointFrame> frames;
  std::vector<FrameSource> tags;
  double fps = 25.0;

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
};

/// A dictionary snippet placed on the output timeline. `frames` holds the
/// part of the snippet that falls inside the output: frames[i] lands on
/// output frame start_frame + i and is snippet frame snippet_offset + i.
struct KeyPoseEvent {
  PhoneUnit phone;
  PhoneUnit resolved;  // dictionary key used, differs on stress fallback
  bool fallback = false;
  int center_frame = 0;
  int start_frame = 0;
  int end_frame = 0;  // inclusive
  int snippet_offset = 0;
  double exact_mid = 0.0;  // phone midpoint in fractional frames
  std::size_t timeline_index = 0;
  std::vector<KeypointFrame> frames;
};

/// One event per timeline event, centered on its mid frame and trimmed to
/// [0, total_frames). Events whose block misses the output entirely are
/// dropped. Result is sorted by center frame.
/// Throws Error(Usage) on a dictionary/config mismatch, Error(MissingPhone)
/// from lookup.
std::vector<KeyPoseEvent> place_key_poses(const FrameTimeline& timeline, const PhonemePoseDictionary& dict,
                                          const SynthConfig& cfg, int total_frames);

/// Greedy left-to-right skip rule. The first event is kept; each later event
/// is kept only if at least `min_dist` empty frames separate it from the
/// last kept block, otherwise it is skipped and the next one is tried.
std::vector<KeyPoseEvent> select_key_poses(const std::vector<KeyPoseEvent>& events, int min_dist);

/// Copies kept blocks verbatim, fills gaps between blocks by linear blending
/// of the facing edge frames, and holds the outer edge frames before the
/// first and after the last block. Throws Error(Invariant) on overlapping or
/// out-of-range blocks.
OutputSequence interpolate_gaps(const std::vector<KeyPoseEvent>& events, int total_frames);

/// Mouth-anchored triangular smoothing with cfg.smooth_window. Tags kept.
OutputSequence smooth_sequence(const OutputSequence& seq, const SynthConfig& cfg);

enum class InputLanguage : std::uint8_t { English, Mandarin };

struct SynthRequest {
  InputLanguage language = InputLanguage::English;
  std::string text;  // English text, or space-separated pinyin syllables
  double speaking_rate = 1.0;
};

struct SynthResult {
  OutputSequence sequence;     // smoothed
  OutputSequence unsmoothed;
  AlignmentTrack track;        // gap-filled, as used for timing
  FrameTimeline timeline;
  std::vector<KeyPoseEvent> placed;
  std::vector<KeyPoseEvent> kept;
  bool model_timing = false;   // true when durations came from the duration table
  std::vector<std::string> warnings;
};

/// Text to smoothed pose sequence. With no alignment the phones are padded
/// with leading and trailing silence and timed by synthesize_durations.
/// Errors carry the failing stage name ("lexicon", "alignment", "keypose",
/// "interpolate", "smooth").
SynthResult synthesize(const SynthRequest& request, const PhonemePoseDictionary& dict,
                       const PronouncingDictionary* lexicon, const std::optional<AlignmentTrack>& alignment,
                       const SynthConfig& cfg);

}  // namespace posepipe
