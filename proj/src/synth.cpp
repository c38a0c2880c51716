#include "posepipe/synth.hpp"

#include <algorithm>
#include <cmath>

#include "posepipe/error.hpp"
#include "posepipe/kernels.hpp"

namespace posepipe {

const char* to_string(FrameSource tag) {
  switch (tag) {
    case FrameSource::Copied: return "Copied";
    case FrameSource::Interpolated: return "Interpolated";
    case FrameSource::Held: return "Held";
  }
  return "?";
}

FrameSource parse_frame_source(std::string_view name) {
  if (name == "Copied") return FrameSource::Copied;
  if (name == "Interpolated") return FrameSource::Interpolated;
  if (name == "Held") return FrameSource::Held;
  throw Error(ErrorKind::Parse, "unknown frame tag '" + std::string(name) + "'");
}

std::vector<KeyPoseEvent> place_key_poses(const FrameTimeline& timeline, const PhonemePoseDictionary& dict,
                                          const SynthConfig& cfg, int total_frames) {
  if (dict.width != cfg.pose_width) {
    throw Error(ErrorKind::Usage, "dictionary width " + std::to_string(dict.width) +
                                      " does not match pose_width " + std::to_string(cfg.pose_width));
  }
  if (std::abs(dict.fps - cfg.fps) > 1e-9 || std::abs(timeline.fps - cfg.fps) > 1e-9) {
    throw Error(ErrorKind::Usage, "dictionary, timeline and config disagree on fps");
  }
  const int half = cfg.pose_width / 2;
  std::vector<KeyPoseEvent> events;
  for (std::size_t i = 0; i < timeline.events.size(); ++i) {
    const auto& ev = timeline.events[i];
    const auto hit = lookup(dict, ev.phone);
    const int start = ev.mid_frame - half;
    const int end = ev.mid_frame + half;
    const int lo = std::max(start, 0);
    const int hi = std::min(end, total_frames - 1);
    if (lo > hi) continue;
    KeyPoseEvent k;
    k.phone = ev.phone;
    k.resolved = hit.resolved;
    k.fallback = hit.fallback;
    k.center_frame = ev.mid_frame;
    k.start_frame = lo;
    k.end_frame = hi;
    k.snippet_offset = lo - start;
    k.exact_mid = ev.exact_mid;
    k.timeline_index = i;
    const auto first = hit.snippet->frames.begin() + k.snippet_offset;
    k.frames.assign(first, first + (hi - lo + 1));
    events.push_back(std::move(k));
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const KeyPoseEvent& a, const KeyPoseEvent& b) { return a.center_frame < b.center_frame; });
  return events;
}

std::vector<KeyPoseEvent> select_key_poses(const std::vector<KeyPoseEvent>& events, int min_dist) {
  std::vector<KeyPoseEvent> kept;
  for (const auto& ev : events) {
    if (kept.empty() || ev.start_frame - kept.back().end_frame - 1 >= min_dist) kept.push_back(ev);
  }
  return kept;
}

OutputSequence interpolate_gaps(const std::vector<KeyPoseEvent>& events, int total_frames) {
  OutputSequence out;
  if (total_frames <= 0) return out;
  if (events.empty()) throw Error(ErrorKind::Invariant, "no key poses to fill " + std::to_string(total_frames) + " frames");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.start_frame < 0 || e.end_frame >= total_frames || e.start_frame > e.end_frame ||
        e.frames.size() != static_cast<std::size_t>(e.end_frame - e.start_frame + 1)) {
      throw Error(ErrorKind::Invariant, "key pose block " + std::to_string(i) + " is out of range");
    }
    if (i > 0 && e.start_frame <= events[i - 1].end_frame) {
      throw Error(ErrorKind::Invariant, "key pose blocks " + std::to_string(i - 1) + " and " +
                                            std::to_string(i) + " overlap");
    }
  }
  out.frames.resize(static_cast<std::size_t>(total_frames));
  out.tags.resize(static_cast<std::size_t>(total_frames));
  auto put = [&](int f, const KeypointFrame& frame, FrameSource tag) {
    out.frames[static_cast<std::size_t>(f)] = frame;
    out.tags[static_cast<std::size_t>(f)] = tag;
  };

  for (int f = 0; f < events.front().start_frame; ++f) put(f, events.front().frames.front(), FrameSource::Held);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    for (int f = e.start_frame; f <= e.end_frame; ++f) {
      put(f, e.frames[static_cast<std::size_t>(f - e.start_frame)], FrameSource::Copied);
    }
    if (i + 1 < events.size()) {
      const int a = e.end_frame;
      const int b = events[i + 1].start_frame;
      const auto& p = e.frames.back().points;
      const auto& q = events[i + 1].frames.front().points;
      for (int f = a + 1; f < b; ++f) {
        KeypointFrame frame;
        frame.points = blend_key_poses(p, q, a, b, f);
        put(f, frame, FrameSource::Interpolated);
      }
    }
  }
  for (int f = events.back().end_frame + 1; f < total_frames; ++f) {
    put(f, events.back().frames.back(), FrameSource::Held);
  }
  return out;
}

OutputSequence smooth_sequence(const OutputSequence& seq, const SynthConfig& cfg) {
  cfg.validate();
  OutputSequence out;
  out.fps = seq.fps;
  out.tags = seq.tags;
  out.frames = smooth_face_anchored<double>(seq.frames, cfg.smooth_window);
  return out;
}

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw e.tagged(name);
  }
}

// Leading and trailing pause, adjacent pauses merged.
std::vector<PhoneUnit> pad_with_silence(const std::vector<PhoneUnit>& phones) {
  std::vector<PhoneUnit> out{PhoneUnit::silence()};
  for (const auto& p : phones) {
    if (!(p.is_silence() && out.back().is_silence())) out.push_back(p);
  }
  if (!out.back().is_silence()) out.push_back(PhoneUnit::silence());
  return out;
}

std::vector<PhoneUnit> non_silent(const std::vector<PhoneUnit>& phones) {
  std::vector<PhoneUnit> out;
  std::copy_if(phones.begin(), phones.end(), std::back_inserter(out), [](const PhoneUnit& p) { return !p.is_silence(); });
  return out;
}

}  // namespace

SynthResult synthesize(const SynthRequest& request, const PhonemePoseDictionary& dict,
                       const PronouncingDictionary* lexicon, const std::optional<AlignmentTrack>& alignment,
                       const SynthConfig& cfg) {
  cfg.validate();
  SynthResult result;

  const auto phones = stage("lexicon", [&] {
    if (request.language == InputLanguage::Mandarin) return transcribe_pinyin(request.text);
    if (lexicon == nullptr) throw Error(ErrorKind::Usage, "English input needs a pronouncing dictionary");
    auto normalized = normalize_text(request.text);
    if (normalized.dropped_chars > 0) {
      result.warnings.push_back(std::to_string(normalized.dropped_chars) + " unsupported characters dropped");
    }
    return transcribe(normalized.tokens, *lexicon);
  });

  result.track = stage("alignment", [&] {
    if (alignment) {
      std::vector<PhoneUnit> aligned;
      for (const auto& iv : alignment->intervals) aligned.push_back(iv.phone);
      if (non_silent(aligned) != non_silent(phones)) {
        result.warnings.push_back("aligned phones differ from the transcription; using the alignment");
      }
      return fill_silence_gaps(*alignment);
    }
    result.model_timing = true;
    return synthesize_durations(pad_with_silence(phones), request.speaking_rate);
  });

  result.timeline = to_frame_timeline(result.track, cfg.fps);
  const int total_frames = frame_count(result.track.total_duration, cfg.fps);

  result.placed = stage("keypose", [&] { return place_key_poses(result.timeline, dict, cfg, total_frames); });
  for (const auto& e : result.placed) {
    if (e.fallback) {
      result.warnings.push_back("'" + to_label(e.phone) + "' rendered with '" + to_label(e.resolved) + "'");
    }
  }
  result.kept = select_key_poses(result.placed, cfg.min_key_pose_distance);
  result.unsmoothed = stage("interpolate", [&] {
    auto seq = interpolate_gaps(result.kept, total_frames);
    seq.fps = cfg.fps;
    return seq;
  });
  result.sequence = stage("smooth", [&] { return smooth_sequence(result.unsmoothed, cfg); });
  return result;
}

}  // namespace posepipe
