#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "posepipe/phone.hpp"

namespace posepipe {

struct PhoneInterval {
  PhoneUnit phone;
  double start = 0.0;  // seconds
  double end = 0.0;
  bool operator==(const PhoneInterval&) const = default;
};

/// Time-stamped phones for one utterance. Intervals are sorted and disjoint;
/// gaps between them count as silence.
struct AlignmentTrack {
  std::vector<PhoneInterval> intervals;
  double total_duration = 0.0;
  bool operator==(const AlignmentTrack&) const = default;
};

struct TimelineEvent {
  PhoneUnit phone;
  int start_frame = 0;
  int end_frame = 0;  // inclusive
  int mid_frame = 0;
  double exact_mid = 0.0;  // interval midpoint in fractional frames, before rounding
};

struct FrameTimeline {
  double fps = 25.0;
  std::vector<TimelineEvent> events;
};

/// Reads a long-format Praat TextGrid and returns the named interval tier.
/// Empty, "sp" and "sil" labels become silence. Throws Error(Parse).
AlignmentTrack parse_textgrid(std::string_view text, std::string_view tier_name);

/// Long-format TextGrid with one interval tier. Gaps are written as
/// empty-label intervals so the tier is contiguous.
std::string serialize_textgrid(const AlignmentTrack& track, std::string_view tier_name = "phone");

/// {"duration": s, "phones": [{"p": label, "s": start, "e": end}]}
AlignmentTrack parse_alignment_json(std::string_view text);
std::string serialize_alignment_json(const AlignmentTrack& track);

/// Per-class base durations in seconds, before speaking-rate scaling.
struct DurationTable {
  double vowel = 0.120;
  double consonant = 0.070;
  double silence = 0.200;
};

/// Contiguous intervals from t=0 using the duration table, each divided by
/// speaking_rate. Throws Error(Usage) if speaking_rate <= 0.
AlignmentTrack synthesize_durations(const std::vector<PhoneUnit>& phones, double speaking_rate,
                                    const DurationTable& table = {});

/// Inserts silence intervals into gaps, including before the first and after
/// the last interval, so the track covers [0, total_duration] contiguously.
AlignmentTrack fill_silence_gaps(const AlignmentTrack& track);

/// Snaps intervals to frame indices: start = floor(s*fps), end = ceil(e*fps)-1,
/// mid = round-half-up of the midpoint, clamped into [start, end].
FrameTimeline to_frame_timeline(const AlignmentTrack& track, double fps);

/// round(seconds * fps), half up.
int frame_count(double seconds, double fps);

/// Reads a .TextGrid or .json alignment file based on its extension.
AlignmentTrack load_alignment(const std::string& path, std::string_view tier_name = "phone");

}  // namespace posepipe
