#include "posepipe/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "posepipe/error.hpp"

namespace posepipe {

void SynthConfig::validate() const {
  if (pose_width < 1 || pose_width % 2 == 0) {
    throw Error(ErrorKind::Usage, "pose_width must be odd and >= 1, got " + std::to_string(pose_width));
  }
  if (min_key_pose_distance < 0) {
    throw Error(ErrorKind::Usage, "min_key_pose_distance must be >= 0");
  }
  if (smooth_window < 1 || smooth_window % 2 == 0) {
    throw Error(ErrorKind::Usage, "smooth_window must be odd and >= 1, got " + std::to_string(smooth_window));
  }
  if (!(fps > 0)) throw Error(ErrorKind::Usage, "fps must be positive");
}

SynthConfig parse_config(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Usage, std::string("config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Usage, "config JSON: expected an object");
  SynthConfig cfg;
  auto read_int = [&](const char* key, int& field) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number_integer()) {
      throw Error(ErrorKind::Usage, std::string("config JSON: \"") + key + "\" must be an integer");
    }
    field = doc[key].get<int>();
  };
  read_int("pose_width", cfg.pose_width);
  read_int("min_key_pose_distance", cfg.min_key_pose_distance);
  read_int("smooth_window", cfg.smooth_window);
  if (doc.contains("fps")) {
    if (!doc["fps"].is_number()) throw Error(ErrorKind::Usage, "config JSON: \"fps\" must be a number");
    cfg.fps = doc["fps"].get<double>();
  }
  cfg.validate();
  return cfg;
}

std::string serialize_config(const SynthConfig& cfg) {
  nlohmann::json doc = {{"pose_width", cfg.pose_width},
                        {"min_key_pose_distance", cfg.min_key_pose_distance},
                        {"smooth_window", cfg.smooth_window},
                        {"fps", cfg.fps}};
  return doc.dump() + "\n";
}

SynthConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Usage, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const Error& e) {
    throw e.tagged(path);
  }
}

}  // namespace posepipe
