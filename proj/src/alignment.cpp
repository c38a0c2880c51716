#include "posepipe/alignment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "posepipe/error.hpp"

namespace posepipe {
namespace {

// Tolerance for comparing interval boundaries and for snapping times that sit
// on a frame boundary up to floating-point noise (1.04 * 25 = 26.000000000000004).
constexpr double kTimeEps = 1e-9;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct RawInterval {
  double xmin = 0, xmax = 0;
  std::string text;
  std::size_t line = 0;
  bool has_xmin = false, has_xmax = false, has_text = false;
};

struct RawTier {
  std::string cls, name;
  double xmin = 0, xmax = 0;
  bool has_xmax = false;
  std::vector<RawInterval> intervals;
};

class TextGridReader {
public:
  explicit TextGridReader(std::string_view text) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      lines_.push_back(text.substr(pos, end - pos));
      pos = end + 1;
    }
  }

  std::vector<RawTier> read() {
    expect_header();
    std::vector<RawTier> tiers;
    RawTier* tier = nullptr;
    RawInterval* interval = nullptr;
    while (next_ < lines_.size()) {
      const std::size_t line_no = next_ + 1;
      std::string_view line = trim(lines_[next_++]);
      if (line.empty()) continue;
      if (line.starts_with("item [") && line.ends_with("]:") && line != "item []:") {
        tiers.emplace_back();
        tier = &tiers.back();
        interval = nullptr;
        continue;
      }
      if (line.starts_with("intervals [") || line.starts_with("points [")) {
        if (tier == nullptr) fail(line_no, "interval outside of a tier");
        tier->intervals.emplace_back();
        interval = &tier->intervals.back();
        interval->line = line_no;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) continue;  // "item []:", "tiers? <exists>"
      const std::string_view key = trim(line.substr(0, eq));
      std::string_view value = trim(line.substr(eq + 1));
      if (tier == nullptr) continue;  // file-level xmin/xmax/size
      if (interval != nullptr) {
        if (key == "xmin") {
          interval->xmin = number(value, line_no);
          interval->has_xmin = true;
        } else if (key == "xmax") {
          interval->xmax = number(value, line_no);
          interval->has_xmax = true;
        } else if (key == "text" || key == "mark") {
          interval->text = quoted(value, line_no);
          interval->has_text = true;
        } else if (key == "number") {
          interval->xmin = interval->xmax = number(value, line_no);
          interval->has_xmin = interval->has_xmax = true;
        }
      } else if (key == "class") {
        tier->cls = quoted(value, line_no);
      } else if (key == "name") {
        tier->name = quoted(value, line_no);
      } else if (key == "xmin") {
        tier->xmin = number(value, line_no);
      } else if (key == "xmax") {
        tier->xmax = number(value, line_no);
        tier->has_xmax = true;
      }
    }
    return tiers;
  }

private:
  [[noreturn]] static void fail(std::size_t line, const std::string& what) {
    throw Error(ErrorKind::Parse, "TextGrid line " + std::to_string(line) + ": " + what);
  }

  void expect_header() {
    std::vector<std::string_view> header;
    while (next_ < lines_.size() && header.size() < 3) {
      auto line = trim(lines_[next_++]);
      if (!line.empty()) header.push_back(line);
    }
    if (header.size() < 2 || header[0].find("ooTextFile") == std::string_view::npos ||
        header[1].find("TextGrid") == std::string_view::npos) {
      throw Error(ErrorKind::Parse, "not a Praat TextGrid (missing ooTextFile header)");
    }
    if (header.size() == 3 && !header[2].starts_with("xmin")) {
      throw Error(ErrorKind::Parse, "short-format TextGrid is not supported; save as long text");
    }
    if (header.size() == 3) --next_;  // re-read the xmin line in the main loop
  }

  double number(std::string_view value, std::size_t line) const {
    double v = 0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || !std::isfinite(v)) {
      fail(line, "expected a number, got '" + std::string(value) + "'");
    }
    return v;
  }

  // Quoted Praat string, "" escapes a quote; may continue over several lines.
  std::string quoted(std::string_view value, std::size_t line) {
    if (value.empty() || value.front() != '"') fail(line, "expected a quoted string");
    std::string out;
    std::string_view rest = value.substr(1);
    while (true) {
      for (std::size_t i = 0; i < rest.size(); ++i) {
        if (rest[i] != '"') {
          out += rest[i];
        } else if (i + 1 < rest.size() && rest[i + 1] == '"') {
          out += '"';
          ++i;
        } else {
          return out;
        }
      }
      if (next_ >= lines_.size()) fail(line, "unterminated string");
      out += '\n';
      rest = lines_[next_++];
      if (!rest.empty() && rest.back() == '\r') rest.remove_suffix(1);
    }
  }

  std::vector<std::string_view> lines_;
  std::size_t next_ = 0;
};

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  return out + "\"";
}

void check_track(const AlignmentTrack& track, const std::string& what) {
  for (std::size_t i = 0; i < track.intervals.size(); ++i) {
    const auto& iv = track.intervals[i];
    if (i > 0 && iv.start < track.intervals[i - 1].end - kTimeEps) {
      throw Error(ErrorKind::Parse, what + " " + std::to_string(i + 1) + ": overlaps previous");
    }
  }
  if (!track.intervals.empty() && track.intervals.back().end > track.total_duration + kTimeEps) {
    throw Error(ErrorKind::Parse, what + "s extend past the track duration");
  }
}

}  // namespace

AlignmentTrack parse_textgrid(std::string_view text, std::string_view tier_name) {
  const auto tiers = TextGridReader(text).read();
  const auto it = std::find_if(tiers.begin(), tiers.end(), [&](const RawTier& t) {
    return t.name == tier_name && t.cls == "IntervalTier";
  });
  if (it == tiers.end()) {
    throw Error(ErrorKind::Parse, "TextGrid has no interval tier named '" + std::string(tier_name) + "'");
  }
  AlignmentTrack track;
  track.total_duration = it->xmax;
  for (std::size_t k = 0; k < it->intervals.size(); ++k) {
    const auto& raw = it->intervals[k];
    const std::string where =
        "TextGrid line " + std::to_string(raw.line) + ": interval " + std::to_string(k + 1) + ": ";
    if (!raw.has_xmin || !raw.has_xmax || !raw.has_text) {
      throw Error(ErrorKind::Parse, where + "missing xmin, xmax or text");
    }
    if (raw.xmax < raw.xmin) throw Error(ErrorKind::Parse, where + "xmax<xmin");
    if (raw.xmax == raw.xmin) throw Error(ErrorKind::Parse, where + "xmax==xmin");
    if (k > 0 && raw.xmin < it->intervals[k - 1].xmax - kTimeEps) {
      throw Error(ErrorKind::Parse, where + "intervals not sorted (starts before previous ends)");
    }
    PhoneUnit phone;
    try {
      phone = parse_phone_label(trim(raw.text));
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, where + e.what());
    }
    track.intervals.push_back({phone, raw.xmin, raw.xmax});
  }
  if (!track.intervals.empty() && track.intervals.back().end > track.total_duration + kTimeEps) {
    throw Error(ErrorKind::Parse, "TextGrid tier '" + std::string(tier_name) + "': intervals extend past tier xmax");
  }
  return track;
}

std::string serialize_textgrid(const AlignmentTrack& track, std::string_view tier_name) {
  struct Row {
    double xmin, xmax;
    std::string text;
  };
  std::vector<Row> rows;
  double t = 0.0;
  for (const auto& iv : track.intervals) {
    if (iv.start > t + kTimeEps) rows.push_back({t, iv.start, ""});
    rows.push_back({iv.start, iv.end, to_label(iv.phone)});
    t = iv.end;
  }
  if (track.total_duration > t + kTimeEps) rows.push_back({t, track.total_duration, ""});

  const std::string dur = format_number(track.total_duration);
  std::ostringstream out;
  out << "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n";
  out << "xmin = 0 \nxmax = " << dur << " \ntiers? <exists> \nsize = 1 \nitem []: \n";
  out << "    item [1]:\n";
  out << "        class = \"IntervalTier\" \n";
  out << "        name = " << quote(tier_name) << " \n";
  out << "        xmin = 0 \n        xmax = " << dur << " \n";
  out << "        intervals: size = " << rows.size() << " \n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out << "        intervals [" << k + 1 << "]:\n";
    out << "            xmin = " << format_number(rows[k].xmin) << " \n";
    out << "            xmax = " << format_number(rows[k].xmax) << " \n";
    out << "            text = " << quote(rows[k].text) << " \n";
  }
  return out.str();
}

AlignmentTrack parse_alignment_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("alignment JSON: ") + e.what());
  }
  auto bad = [](const std::string& what) { return Error(ErrorKind::Parse, "alignment JSON: " + what); };
  if (!doc.is_object() || !doc.contains("duration") || !doc["duration"].is_number()) {
    throw bad("missing numeric \"duration\"");
  }
  if (!doc.contains("phones") || !doc["phones"].is_array()) throw bad("missing \"phones\" array");
  AlignmentTrack track;
  track.total_duration = doc["duration"].get<double>();
  if (track.total_duration < 0) throw bad("negative duration");
  const auto& phones = doc["phones"];
  for (std::size_t i = 0; i < phones.size(); ++i) {
    const auto& p = phones[i];
    const std::string where = "phones[" + std::to_string(i) + "]: ";
    if (!p.is_object() || !p.contains("p") || !p["p"].is_string() || !p.contains("s") ||
        !p["s"].is_number() || !p.contains("e") || !p["e"].is_number()) {
      throw bad(where + "expected {\"p\": string, \"s\": number, \"e\": number}");
    }
    PhoneInterval iv;
    try {
      iv.phone = parse_phone_label(p["p"].get<std::string>());
    } catch (const Error& e) {
      throw bad(where + e.what());
    }
    iv.start = p["s"].get<double>();
    iv.end = p["e"].get<double>();
    if (iv.start < 0) throw bad(where + "negative start");
    if (iv.end <= iv.start) throw bad(where + "end must be greater than start");
    track.intervals.push_back(iv);
  }
  try {
    check_track(track, "phone");
  } catch (const Error& e) {
    throw bad(e.what());
  }
  return track;
}

std::string serialize_alignment_json(const AlignmentTrack& track) {
  nlohmann::json phones = nlohmann::json::array();
  for (const auto& iv : track.intervals) {
    phones.push_back({{"p", to_label(iv.phone)}, {"s", iv.start}, {"e", iv.end}});
  }
  nlohmann::json doc = {{"duration", track.total_duration}, {"phones", phones}};
  return doc.dump(1) + "\n";
}

AlignmentTrack synthesize_durations(const std::vector<PhoneUnit>& phones, double speaking_rate,
                                    const DurationTable& table) {
  if (!(speaking_rate > 0)) throw Error(ErrorKind::Usage, "speaking rate must be positive");
  AlignmentTrack track;
  double base = 0.0;  // cumulative unscaled time
  for (const auto& p : phones) {
    const double d = p.is_silence() ? table.silence : is_vowel_like(p) ? table.vowel : table.consonant;
    track.intervals.push_back({p, base / speaking_rate, (base + d) / speaking_rate});
    base += d;
  }
  track.total_duration = base / speaking_rate;
  return track;
}

AlignmentTrack fill_silence_gaps(const AlignmentTrack& track) {
  AlignmentTrack out;
  out.total_duration = track.total_duration;
  double t = 0.0;
  for (const auto& iv : track.intervals) {
    if (iv.start > t + kTimeEps) out.intervals.push_back({PhoneUnit::silence(), t, iv.start});
    out.intervals.push_back(iv);
    t = iv.end;
  }
  if (track.total_duration > t + kTimeEps) {
    out.intervals.push_back({PhoneUnit::silence(), t, track.total_duration});
  }
  return out;
}

int frame_count(double seconds, double fps) {
  return static_cast<int>(std::floor(seconds * fps + 0.5 + kTimeEps));
}

FrameTimeline to_frame_timeline(const AlignmentTrack& track, double fps) {
  if (!(fps > 0)) throw Error(ErrorKind::Usage, "fps must be positive");
  FrameTimeline timeline;
  timeline.fps = fps;
  for (const auto& iv : track.intervals) {
    TimelineEvent ev;
    ev.phone = iv.phone;
    ev.start_frame = static_cast<int>(std::floor(iv.start * fps + kTimeEps));
    ev.end_frame = std::max(ev.start_frame, static_cast<int>(std::ceil(iv.end * fps - kTimeEps)) - 1);
    ev.exact_mid = 0.5 * (iv.start + iv.end) * fps;
    ev.mid_frame = std::clamp(static_cast<int>(std::floor(ev.exact_mid + 0.5 + kTimeEps)),
                              ev.start_frame, ev.end_frame);
    timeline.events.push_back(ev);
  }
  return timeline;
}

AlignmentTrack load_alignment(const std::string& path, std::string_view tier_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read alignment " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    if (path.ends_with(".json")) return parse_alignment_json(ss.str());
    return parse_textgrid(ss.str(), tier_name);
  } catch (const Error& e) {
    throw e.tagged(path);
  }
}

}  // namespace posepipe
