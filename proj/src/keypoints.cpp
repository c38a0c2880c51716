#include "posepipe/keypoints.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json_frames.hpp"
#include "posepipe/error.hpp"

namespace posepipe {
namespace fs = std::filesystem;
using nlohmann::json;

namespace detail {

void unpack_points(const json& arr, const char* key, int first_row, int rows, KeypointFrame& frame) {
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(rows) * 3) {
    throw Error(ErrorKind::Parse, std::string("\"") + key + "\" must hold " +
                                      std::to_string(rows * 3) + " numbers, got " +
                                      std::to_string(arr.is_array() ? arr.size() : 0));
  }
  for (int i = 0; i < rows; ++i) {
    for (int c = 0; c < 3; ++c) {
      const auto& v = arr[static_cast<std::size_t>(i * 3 + c)];
      if (!v.is_number()) throw Error(ErrorKind::Parse, std::string("\"") + key + "\" has a non-number");
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw Error(ErrorKind::Parse, std::string("\"") + key + "\" has a non-finite value");
      if (c == 2 && (d < 0.0 || d > 1.0)) {
        throw Error(ErrorKind::Parse, std::string("\"") + key + "\" confidence outside [0,1]");
      }
      frame.points(first_row + i, c) = d;
    }
  }
}

json pack_points(const KeypointFrame& frame, int first_row, int rows) {
  json arr = json::array();
  for (int i = 0; i < rows; ++i) {
    for (int c = 0; c < 3; ++c) arr.push_back(frame.points(first_row + i, c));
  }
  return arr;
}

json frame_to_json(const KeypointFrame& frame) {
  return {{"body", pack_points(frame, 0, kBodyPoints)},
          {"face", pack_points(frame, kBodyPoints, kFacePoints)}};
}

KeypointFrame frame_from_json(const json& obj) {
  if (!obj.is_object() || !obj.contains("body") || !obj.contains("face")) {
    throw Error(ErrorKind::Parse, "frame needs \"body\" and \"face\" arrays");
  }
  KeypointFrame frame;
  unpack_points(obj["body"], "body", 0, kBodyPoints, frame);
  unpack_points(obj["face"], "face", kBodyPoints, kFacePoints, frame);
  return frame;
}

}  // namespace detail

OpenPoseParse parse_openpose_frame(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("OpenPose JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("people") || !doc["people"].is_array()) {
    throw Error(ErrorKind::Parse, "OpenPose JSON: missing \"people\" array");
  }
  const auto& people = doc["people"];
  if (people.empty()) throw Error(ErrorKind::Parse, "no person detected");
  OpenPoseParse out;
  if (people.size() > 1) {
    out.warnings.push_back(std::to_string(people.size()) + " people detected, using the first");
  }
  const auto& person = people[0];
  if (!person.is_object() || !person.contains("pose_keypoints_2d") ||
      !person.contains("face_keypoints_2d")) {
    throw Error(ErrorKind::Parse, "person lacks pose_keypoints_2d or face_keypoints_2d");
  }
  detail::unpack_points(person["pose_keypoints_2d"], "pose_keypoints_2d", 0, kBodyPoints, out.frame);
  detail::unpack_points(person["face_keypoints_2d"], "face_keypoints_2d", kBodyPoints, kFacePoints, out.frame);
  return out;
}

std::string serialize_openpose_frame(const KeypointFrame& frame) {
  json person = {{"pose_keypoints_2d", detail::pack_points(frame, 0, kBodyPoints)},
                 {"face_keypoints_2d", detail::pack_points(frame, kBodyPoints, kFacePoints)}};
  json doc = {{"version", 1.3}, {"people", json::array({person})}};
  return doc.dump();
}

PoseSequence load_keypoint_dir(const std::string& dir, double fps) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorKind::Io, "not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorKind::Io, "cannot list " + dir + ": " + ec.message());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  PoseSequence seq;
  seq.fps = fps;
  seq.frames.reserve(files.size());
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + f.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      seq.frames.push_back(parse_openpose_frame(ss.str()).frame);
    } catch (const Error& e) {
      throw e.tagged(f.string());
    }
  }
  return seq;
}

void write_keypoint_dir(const PoseSequence& seq, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir + ": " + ec.message());
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "frame_%06zu_keypoints.json", i);
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    out << serialize_openpose_frame(seq.frames[i]);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  }
}

}  // namespace posepipe
