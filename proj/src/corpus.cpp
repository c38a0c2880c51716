#include "posepipe/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "posepipe/error.hpp"

namespace posepipe {
namespace {

constexpr double kPi = std::numbers::pi;

std::uint32_t fnv1a(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 16777619u;
  }
  return h;
}

// Per-unit offset in [-0.05, 0.05].
double unit_jitter(const PhoneUnit& unit) {
  return (static_cast<double>(fnv1a(to_label(unit)) % 1001) / 1000.0 - 0.5) * 0.1;
}

MouthShape arpabet_shape(std::string_view s) {
  if (s == "M" || s == "B" || s == "P") return {0.0, 0.95};
  if (s == "F" || s == "V") return {0.1, 1.0};
  if (s == "W" || s == "UW" || s == "UH") return {0.3, 0.72};
  if (s == "OW" || s == "OY" || s == "AO") return {0.55, 0.8};
  if (s == "AA" || s == "AE" || s == "AH" || s == "AW" || s == "AY") return {0.9, 1.05};
  if (s == "IY" || s == "IH" || s == "EY" || s == "Y") return {0.3, 1.2};
  if (s == "EH" || s == "ER") return {0.5, 1.1};
  if (s == "SH" || s == "ZH" || s == "CH" || s == "JH" || s == "R") return {0.25, 0.85};
  return {0.22, 1.0};
}

MouthShape pinyin_shape(const PhoneUnit& unit) {
  const std::string& s = unit.symbol();
  if (unit.kind() == PhoneKind::PinyinInitial) {
    if (s == "b" || s == "p" || s == "m") return {0.0, 0.95};
    if (s == "f") return {0.1, 1.0};
    return {0.22, 1.0};
  }
  // first vowel letter of the final decides the gesture
  for (char c : s) {
    switch (c) {
      case 'a': return {0.9, 1.05};
      case 'o': return {0.55, 0.8};
      case 'e': return {0.5, 1.05};
      case 'i': return {0.3, 1.2};
      case 'u':
      case 'v': return {0.3, 0.72};
      default: break;
    }
  }
  return {0.3, 1.0};
}

std::vector<PhoneUnit> pad_with_silence(const std::vector<PhoneUnit>& phones) {
  std::vector<PhoneUnit> out{PhoneUnit::silence()};
  for (const auto& p : phones) {
    if (!(p.is_silence() && out.back().is_silence())) out.push_back(p);
  }
  if (!out.back().is_silence()) out.push_back(PhoneUnit::silence());
  return out;
}

void set_point(KeypointFrame& f, int row, double x, double y, double c) {
  f.points.row(row) << x, y, c;
}

KeypointFrame render_pose(double t, int frame_index, const MouthShape& shape) {
  KeypointFrame f;
  const double s = 60.0;
  const double cx = 320.0 + 6.0 * std::sin(2 * kPi * t / 3.0);
  const double cy = 190.0 + 3.0 * std::sin(2 * kPi * t / 2.2);
  auto conf = [&](int row) {
    return std::clamp(0.85 + 0.1 * std::sin(0.7 * frame_index + 0.3 * row), 0.0, 1.0);
  };
  auto face = [&](int i, double x, double y) { set_point(f, kBodyPoints + i, x, y, conf(kBodyPoints + i)); };

  for (int k = 0; k <= 16; ++k) {  // jaw, chin drops with the mouth
    const double phi = kPi * k / 16.0;
    face(k, cx - s * std::cos(phi), cy + 0.2 * s + (1.1 + 0.15 * shape.open) * s * std::sin(phi));
  }
  for (int i = 0; i < 5; ++i) {
    const double lift = 0.1 * s * std::sin(kPi * i / 4.0);
    face(17 + i, cx - 0.8 * s + 0.15 * s * i, cy - 0.55 * s - lift);
    face(22 + i, cx + 0.2 * s + 0.15 * s * i, cy - 0.55 * s - lift);
  }
  for (int i = 0; i < 4; ++i) face(27 + i, cx, cy - 0.35 * s + 0.5 * s * i / 3.0);
  for (int i = 0; i < 5; ++i) face(31 + i, cx - 0.2 * s + 0.1 * s * i, cy + 0.3 * s);
  for (int side = 0; side < 2; ++side) {
    const double ex = cx + (side == 0 ? -0.45 : 0.45) * s;
    const double ey = cy - 0.3 * s;
    for (int i = 0; i < 6; ++i) {
      const double a = 2 * kPi * i / 6.0;
      face(36 + 6 * side + i, ex - 0.18 * s * std::cos(a), ey - 0.07 * s * std::sin(a));
    }
    face(68 + side, ex, ey);
  }
  const double mx = cx, my = cy + 0.7 * s;
  const double half_width = 0.45 * s * shape.width;
  for (int k = 0; k < 12; ++k) {
    const double a = 2 * kPi * k / 12.0;
    face(48 + k, mx - half_width * std::cos(a), my - (0.12 + 0.35 * shape.open) * s * std::sin(a));
  }
  for (int k = 0; k < 8; ++k) {
    const double a = 2 * kPi * k / 8.0;
    face(60 + k, mx - 0.8 * half_width * std::cos(a), my - (0.02 + 0.3 * shape.open) * s * std::sin(a));
  }

  // upper body; legs and feet stay missing
  auto body = [&](int i, double x, double y) { set_point(f, i, x, y, conf(i)); };
  const double sway = 0.3 * (cx - 320.0);
  body(0, cx, cy + 0.1 * s);
  body(1, 320.0 + sway, 300.0);
  body(2, 250.0 + sway, 310.0);
  body(3, 230.0, 400.0);
  body(4, 235.0, 470.0);
  body(5, 390.0 + sway, 310.0);
  body(6, 410.0, 400.0);
  body(7, 405.0, 470.0);
  body(8, 320.0, 470.0);
  body(9, 290.0, 470.0);
  body(12, 350.0, 470.0);
  body(15, cx - 0.45 * s, cy - 0.3 * s);
  body(16, cx + 0.45 * s, cy - 0.3 * s);
  body(17, cx - s, cy + 0.2 * s);
  body(18, cx + s, cy + 0.2 * s);
  return f;
}

}  // namespace

MouthShape mouth_shape(const PhoneUnit& unit) {
  MouthShape shape;
  switch (unit.kind()) {
    case PhoneKind::Silence: return {0.05, 1.0};
    case PhoneKind::ArpabetPhone: shape = arpabet_shape(unit.symbol()); break;
    default: shape = pinyin_shape(unit); break;
  }
  if (unit.stress()) {
    const Stress st = *unit.stress();
    shape.open *= st == Stress::Primary ? 1.15 : st == Stress::Secondary ? 1.05 : 0.9;
  }
  shape.open = std::max(0.0, shape.open + unit_jitter(unit));
  return shape;
}

Clip make_synthetic_clip(const std::string& id, const std::vector<PhoneUnit>& phones, double fps,
                         double speaking_rate) {
  Clip clip;
  clip.id = id;
  clip.alignment = synthesize_durations(pad_with_silence(phones), speaking_rate);
  clip.poses.fps = fps;
  const int n = frame_count(clip.alignment.total_duration, fps) + 1;
  std::size_t iv = 0;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / fps;
    while (iv + 1 < clip.alignment.intervals.size() && clip.alignment.intervals[iv].end <= t) ++iv;
    const PhoneUnit unit =
        clip.alignment.intervals.empty() ? PhoneUnit::silence() : clip.alignment.intervals[iv].phone;
    clip.poses.frames.push_back(render_pose(t, i, mouth_shape(unit)));
  }
  return clip;
}

const std::vector<std::string>& english_training_words() {
  static const std::vector<std::string> words = {
      "ME",    "SHE",   "HELLO", "WORLD", "THE",    "QUICK", "BROWN",   "FOX",   "JUMPS", "OVER",   "LAZY",
      "DOG",   "BOY",   "BOOK",  "HOW",   "MEASURE", "CHAIR", "SING",   "THIN",  "YES",   "CAT",    "HOT",
      "FATHER", "GOOD", "JUDGE", "READ",  "PERMIT", "VERY",  "TOY",     "TWO",   "THREE", "FOUR",   "FIVE",
      "SIX",   "SEVEN", "EIGHT", "NINE",  "TEN",    "ZERO",  "ONE",     "ABOUT", "IS",    "AND",    "THOUSAND"};
  return words;
}

std::vector<std::string> covering_pinyin_syllables(const std::vector<std::string>& table) {
  std::set<std::string> seen;
  std::vector<std::string> picked;
  for (const auto& syl : table) {
    const auto parts = segment_pinyin(syl);
    bool fresh = !seen.contains(parts.final_part);
    if (parts.initial) fresh = fresh || !seen.contains(*parts.initial);
    if (!fresh) continue;
    picked.push_back(syl);
    seen.insert(parts.final_part);
    if (parts.initial) seen.insert(*parts.initial);
  }
  return picked;
}

std::vector<std::string> load_pinyin_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read pinyin table " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) continue;
    std::istringstream words(line);
    for (std::string w; words >> w;) out.push_back(w);
  }
  return out;
}

}  // namespace posepipe
