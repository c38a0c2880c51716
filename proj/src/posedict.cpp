#include "posepipe/posedict.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <tuple>

#include "json_frames.hpp"
#include "posepipe/error.hpp"

namespace posepipe {
using nlohmann::json;

namespace {

struct Candidate {
  const Clip* clip = nullptr;
  int center = 0;
  int span = 0;  // frames covered by the aligned interval; ranks silences
  double confidence = 0.0;
};

// True when `a` should replace `b` as the stored window for its unit.
bool better(const Candidate& a, const Candidate& b, bool silence) {
  if (silence && a.span != b.span) return a.span > b.span;
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  return std::tie(a.clip->id, a.center) < std::tie(b.clip->id, b.center);
}

}  // namespace

PhonemePoseDictionary build_dictionary(const std::vector<Clip>& clips, int width, double fps) {
  if (width < 1 || width % 2 == 0) {
    throw Error(ErrorKind::Usage, "pose width must be odd and >= 1, got " + std::to_string(width));
  }
  if (!(fps > 0)) throw Error(ErrorKind::Usage, "fps must be positive");
  const int half = width / 2;

  std::map<PhoneUnit, Candidate> best;
  for (const auto& clip : clips) {
    if (std::abs(clip.poses.fps - fps) > 1e-9) {
      throw Error(ErrorKind::Usage, "clip '" + clip.id + "' is at " + std::to_string(clip.poses.fps) +
                                        " fps, dictionary wants " + std::to_string(fps));
    }
    // one frame of slack between audio and video length
    if (clip.alignment.total_duration > clip.poses.duration() + 1.0 / fps + 1e-9) {
      throw Error(ErrorKind::Parse, "clip '" + clip.id + "': alignment (" +
                                        std::to_string(clip.alignment.total_duration) +
                                        " s) is longer than the video (" +
                                        std::to_string(clip.poses.duration()) + " s)");
    }
    const auto timeline = to_frame_timeline(fill_silence_gaps(clip.alignment), fps);
    const int n = static_cast<int>(clip.poses.size());
    for (const auto& ev : timeline.events) {
      const int lo = ev.mid_frame - half;
      const int hi = ev.mid_frame + half;
      if (lo < 0 || hi >= n) continue;
      double conf = 0.0;
      for (int f = lo; f <= hi; ++f) conf += clip.poses.frames[static_cast<std::size_t>(f)].mean_confidence();
      Candidate cand{&clip, ev.mid_frame, ev.end_frame - ev.start_frame + 1, conf / width};
      auto it = best.find(ev.phone);
      if (it == best.end()) {
        best.emplace(ev.phone, cand);
      } else if (better(cand, it->second, ev.phone.is_silence())) {
        it->second = cand;
      }
    }
  }
  if (!best.contains(PhoneUnit::silence())) {
    throw Error(ErrorKind::MissingPhone,
                "no silence interval with " + std::to_string(width) + " frames of video around it");
  }

  PhonemePoseDictionary dict;
  dict.width = width;
  dict.fps = fps;
  for (const auto& [unit, cand] : best) {
    PoseSequence snippet;
    snippet.fps = fps;
    const auto first = cand.clip->poses.frames.begin() + (cand.center - half);
    snippet.frames.assign(first, first + width);
    dict.snippets.emplace(unit, std::move(snippet));
    dict.provenance.emplace(unit, SnippetSource{cand.clip->id, cand.center, cand.confidence});
  }
  return dict;
}

LookupResult lookup(const PhonemePoseDictionary& dict, const PhoneUnit& phone) {
  if (auto it = dict.snippets.find(phone); it != dict.snippets.end()) {
    return {&it->second, phone, false};
  }
  if (phone.kind() == PhoneKind::ArpabetPhone && phone.stress()) {
    for (Stress s : {Stress::Primary, Stress::Secondary, Stress::Unstressed}) {
      const PhoneUnit alt = phone.with_stress(s);
      if (auto it = dict.snippets.find(alt); it != dict.snippets.end()) {
        return {&it->second, alt, true};
      }
    }
  }
  throw Error(ErrorKind::MissingPhone, "phone '" + to_label(phone) + "' is not in the phoneme-pose dictionary");
}

CoverageReport coverage_report(const PhonemePoseDictionary& dict, const std::vector<PhoneUnit>& inventory) {
  CoverageReport report;
  for (const auto& unit : inventory) {
    try {
      lookup(dict, unit);
      report.present.push_back(unit);
    } catch (const Error&) {
      report.missing.push_back(unit);
    }
  }
  // an empty inventory is vacuously covered
  report.fraction = inventory.empty() ? 1.0
                                      : static_cast<double>(report.present.size()) /
                                            static_cast<double>(inventory.size());
  return report;
}

std::string serialize_dictionary(const PhonemePoseDictionary& dict) {
  json snippets = json::object();
  json provenance = json::object();
  for (const auto& [unit, seq] : dict.snippets) {
    json frames = json::array();
    for (const auto& f : seq.frames) frames.push_back(detail::frame_to_json(f));
    snippets[to_label(unit)] = std::move(frames);
  }
  for (const auto& [unit, src] : dict.provenance) {
    provenance[to_label(unit)] = {{"clip", src.clip_id},
                                  {"center_frame", src.center_frame},
                                  {"mean_confidence", src.mean_confidence}};
  }
  json doc = {{"width", dict.width}, {"fps", dict.fps}, {"snippets", snippets}, {"provenance", provenance}};
  return doc.dump() + "\n";
}

PhonemePoseDictionary parse_dictionary(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("dictionary JSON: ") + e.what());
  }
  auto bad = [](const std::string& what) { return Error(ErrorKind::Parse, "dictionary JSON: " + what); };
  if (!doc.is_object() || !doc.contains("width") || !doc["width"].is_number_integer() ||
      !doc.contains("fps") || !doc["fps"].is_number() || !doc.contains("snippets") ||
      !doc["snippets"].is_object()) {
    throw bad("expected {\"width\": int, \"fps\": number, \"snippets\": {...}}");
  }
  PhonemePoseDictionary dict;
  dict.width = doc["width"].get<int>();
  dict.fps = doc["fps"].get<double>();
  if (dict.width < 1 || dict.width % 2 == 0) throw bad("width must be odd and >= 1");
  if (!(dict.fps > 0)) throw bad("fps must be positive");
  for (const auto& [label, frames] : doc["snippets"].items()) {
    try {
      const PhoneUnit unit = parse_phone_label(label);
      if (!frames.is_array() || frames.size() != static_cast<std::size_t>(dict.width)) {
        throw bad("snippet '" + label + "' must have exactly " + std::to_string(dict.width) + " frames");
      }
      PoseSequence seq;
      seq.fps = dict.fps;
      for (const auto& f : frames) seq.frames.push_back(detail::frame_from_json(f));
      dict.snippets.emplace(unit, std::move(seq));
    } catch (const Error& e) {
      throw e.tagged("dictionary JSON: snippet '" + label + "'");
    }
  }
  if (doc.contains("provenance") && doc["provenance"].is_object()) {
    for (const auto& [label, src] : doc["provenance"].items()) {
      if (!src.is_object() || !src.contains("clip") || !src.contains("center_frame") ||
          !src.contains("mean_confidence")) {
        throw bad("provenance '" + label + "' is incomplete");
      }
      dict.provenance.emplace(parse_phone_label(label),
                              SnippetSource{src["clip"].get<std::string>(), src["center_frame"].get<int>(),
                                            src["mean_confidence"].get<double>()});
    }
  }
  if (!dict.snippets.contains(PhoneUnit::silence())) throw bad("no silence snippet");
  return dict;
}

PhonemePoseDictionary load_dictionary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read dictionary " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_dictionary(ss.str());
  } catch (const Error& e) {
    throw e.tagged(path);
  }
}

void save_dictionary(const PhonemePoseDictionary& dict, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  out << serialize_dictionary(dict);
  if (!out) throw Error(ErrorKind::Io, "cannot write dictionary " + path);
}

}  // namespace posepipe
