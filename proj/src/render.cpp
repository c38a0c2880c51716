#include "posepipe/render.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include "json_frames.hpp"
#include "posepipe/error.hpp"

namespace posepipe {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void add_polyline(std::vector<Edge>& edges, int first, int last, bool closed, Part part) {
  for (int i = first; i < last; ++i) edges.push_back({kBodyPoints + i, kBodyPoints + i + 1, part});
  if (closed) edges.push_back({kBodyPoints + last, kBodyPoints + first, part});
}

struct Segment {
  double x0, y0, x1, y1;
};

// Liang-Barsky against [0, w-1] x [0, h-1].
std::optional<Segment> clip(Segment s, double w, double h) {
  const double dx = s.x1 - s.x0, dy = s.y1 - s.y0;
  double t0 = 0.0, t1 = 1.0;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {s.x0, w - 1 - s.x0, s.y0, h - 1 - s.y0};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      if (r > t1) return std::nullopt;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return std::nullopt;
      t1 = std::min(t1, r);
    }
  }
  return Segment{s.x0 + t0 * dx, s.y0 + t0 * dy, s.x0 + t1 * dx, s.y0 + t1 * dy};
}

void draw_line(RasterFrame& img, int x0, int y0, int x1, int y1, Rgb c) {
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    img.set(x0, y0, c);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

}  // namespace

SkeletonTopology SkeletonTopology::openpose() {
  SkeletonTopology topo;
  constexpr int kBodyPairs[][2] = {{1, 8},   {1, 2},   {1, 5},   {2, 3},   {3, 4},   {5, 6},
                                   {6, 7},   {8, 9},   {9, 10},  {10, 11}, {8, 12},  {12, 13},
                                   {13, 14}, {1, 0},   {0, 15},  {15, 17}, {0, 16},  {16, 18},
                                   {14, 19}, {19, 20}, {14, 21}, {11, 22}, {22, 23}, {11, 24}};
  for (const auto& pair : kBodyPairs) topo.edges.push_back({pair[0], pair[1], Part::Body});
  add_polyline(topo.edges, 0, 16, false, Part::Face);   // jaw
  add_polyline(topo.edges, 17, 21, false, Part::Face);  // brows
  add_polyline(topo.edges, 22, 26, false, Part::Face);
  add_polyline(topo.edges, 27, 30, false, Part::Face);  // nose bridge
  add_polyline(topo.edges, 31, 35, false, Part::Face);  // nostrils
  add_polyline(topo.edges, 36, 41, true, Part::Face);   // eyes
  add_polyline(topo.edges, 42, 47, true, Part::Face);
  add_polyline(topo.edges, 48, 59, true, Part::Lips);   // outer lip
  add_polyline(topo.edges, 60, 67, true, Part::Lips);   // inner lip
  return topo;
}

RasterFrame::RasterFrame(int w, int h, Rgb fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw Error(ErrorKind::Usage, "canvas must be positive");
  pixels.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
  for (std::size_t i = 0; i < pixels.size(); i += 3) {
    pixels[i] = fill[0];
    pixels[i + 1] = fill[1];
    pixels[i + 2] = fill[2];
  }
}

Rgb RasterFrame::at(int x, int y) const {
  const auto i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
  return {pixels[i], pixels[i + 1], pixels[i + 2]};
}

void RasterFrame::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  const auto i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
  pixels[i] = c[0];
  pixels[i + 1] = c[1];
  pixels[i + 2] = c[2];
}

RasterFrame rasterize_frame(const KeypointFrame& frame, const SkeletonTopology& topo, int width, int height,
                            const Palette& palette) {
  RasterFrame img(width, height, palette.background);
  for (const auto& edge : topo.edges) {
    const auto a = frame.points.row(edge.from);
    const auto b = frame.points.row(edge.to);
    if (a(2) < kMinVisibleConfidence || b(2) < kMinVisibleConfidence) continue;
    const auto seg = clip({a(0), a(1), b(0), b(1)}, width, height);
    if (!seg) continue;
    draw_line(img, static_cast<int>(std::lround(seg->x0)), static_cast<int>(std::lround(seg->y0)),
              static_cast<int>(std::lround(seg->x1)), static_cast<int>(std::lround(seg->y1)),
              palette.color(edge.part));
  }
  return img;
}

std::string encode_ppm(const RasterFrame& frame) {
  std::string out = "P6\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(frame.pixels.data()), frame.pixels.size());
  return out;
}

void write_ppm(const RasterFrame& frame, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  out << encode_ppm(frame);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
}

std::size_t export_frames(const OutputSequence& seq, const std::string& dir, int width, int height,
                          const Palette& palette) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::Io, "cannot create directory " + dir);
  const auto topo = SkeletonTopology::openpose();
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%06zu.ppm", i);
    write_ppm(rasterize_frame(seq.frames[i], topo, width, height, palette), (fs::path(dir) / name).string());
  }
  return seq.frames.size();
}

std::string export_pose_json(const OutputSequence& seq) {
  json frames = json::array();
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    json f = detail::frame_to_json(seq.frames[i]);
    f["tag"] = to_string(seq.tags[i]);
    frames.push_back(std::move(f));
  }
  json doc = {{"fps", seq.fps}, {"frames", frames}};
  return doc.dump() + "\n";
}

OutputSequence parse_pose_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("pose JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("fps") || !doc["fps"].is_number() || !doc.contains("frames") ||
      !doc["frames"].is_array()) {
    throw Error(ErrorKind::Parse, "pose JSON: expected {\"fps\": number, \"frames\": [...]}");
  }
  OutputSequence seq;
  seq.fps = doc["fps"].get<double>();
  for (std::size_t i = 0; i < doc["frames"].size(); ++i) {
    const auto& f = doc["frames"][i];
    try {
      seq.frames.push_back(detail::frame_from_json(f));
      if (!f.contains("tag") || !f["tag"].is_string()) throw Error(ErrorKind::Parse, "missing \"tag\"");
      seq.tags.push_back(parse_frame_source(f["tag"].get<std::string>()));
    } catch (const Error& e) {
      throw e.tagged("pose JSON: frame " + std::to_string(i));
    }
  }
  return seq;
}

}  // namespace posepipe
