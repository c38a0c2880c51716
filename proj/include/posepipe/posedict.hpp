#pragma once

#include <map>
#include <string>
#include <vector>

#include "posepipe/alignment.hpp"
#include "posepipe/keypoints.hpp"
#include "posepipe/phone.hpp"

namespace posepipe {

/// Training clip: keypoint frames plus the phone alignment of its audio.
struct Clip {
  std::string id;
  PoseSequence poses;
  AlignmentTrack alignment;
};

struct SnippetSource {
  std::string clip_id;
  int center_frame = 0;
  double mean_confidence = 0.0;
  bool operator==(const SnippetSource&) const = default;
};

/// Phone unit -> fixed-width pose snippet centered on one occurrence of the
/// phone in training video.
struct PhonemePoseDictionary {
  int width = 7;
  double fps = 25.0;
  std::map<PhoneUnit, PoseSequence> snippets;
  std::map<PhoneUnit, SnippetSource> provenance;
};

/// Extracts a `width`-frame window around every aligned occurrence and keeps,
/// per unit, the window with the highest mean keypoint confidence. Ties go to
/// the smaller clip id, then the earlier center frame. Silence prefers the
/// longest silent interval. Windows that would leave the clip are skipped.
///
/// Throws Error(Usage) for an even or non-positive width or mismatched fps,
/// Error(Parse) when an alignment outruns its clip, and Error(MissingPhone)
/// when no silence window can be extracted.
PhonemePoseDictionary build_dictionary(const std::vector<Clip>& clips, int width, double fps);

struct LookupResult {
  const PoseSequence* snippet = nullptr;
  PhoneUnit resolved;     // the key actually used
  bool fallback = false;  // true when a different stress level was substituted
};

/// Exact match, or for ARPABET vowels the same vowel at stress 1, 2, then 0.
/// Throws Error(MissingPhone) naming the unit.
LookupResult lookup(const PhonemePoseDictionary& dict, const PhoneUnit& phone);

struct CoverageReport {
  std::vector<PhoneUnit> present;
  std::vector<PhoneUnit> missing;
  double fraction = 0.0;
};

/// A unit counts as present when lookup() resolves it (stress fallback included).
CoverageReport coverage_report(const PhonemePoseDictionary& dict, const std::vector<PhoneUnit>& inventory);

std::string serialize_dictionary(const PhonemePoseDictionary& dict);
/// Throws Error(Parse) when the document does not match the dictionary layout.
PhonemePoseDictionary parse_dictionary(std::string_view text);

PhonemePoseDictionary load_dictionary(const std::string& path);
void save_dictionary(const PhonemePoseDictionary& dict, const std::string& path);

}  // namespace posepipe
