#include <algorithm>
#include <random>

#include "doctest.h"
#include "posepipe/error.hpp"
#include "posepipe/kernels.hpp"
#include "posepipe/synth.hpp"
#include "test_support.hpp"

using namespace posepipe;
using posepipe::testing::english_fixture_dictionary;
using posepipe::testing::flat_snippet;
using posepipe::testing::random_frame;

namespace {

const PhoneUnit kM = PhoneUnit::arpabet("M");
const PhoneUnit kIY1 = PhoneUnit::arpabet("IY", Stress::Primary);

// Snippet frame j has every coordinate equal to 100 + j.
PhonemePoseDictionary indexed_dict() {
  PhonemePoseDictionary dict;
  PoseSequence snip;
  for (int j = 0; j < 7; ++j) {
    KeypointFrame f;
    f.points.leftCols<2>().setConstant(100 + j);
    f.points.col(2).setConstant(1.0);
    snip.frames.push_back(f);
  }
  dict.snippets[kIY1] = snip;
  dict.snippets[PhoneUnit::silence()] = snip;
  return dict;
}

FrameTimeline timeline_at(std::initializer_list<int> mids) {
  FrameTimeline tl;
  for (int m : mids) tl.events.push_back({kIY1, m, m, m, static_cast<double>(m)});
  return tl;
}

KeyPoseEvent block(int start, int end, double value = 0.0) {
  KeyPoseEvent e;
  e.start_frame = start;
  e.end_frame = end;
  e.center_frame = (start + end) / 2;
  e.frames = flat_snippet(end - start + 1, value).frames;
  return e;
}

// Kept set characterised directly: the first event is in, and every later
// event is in exactly when its gap to the previous member is at least min_dist.
// Searches all subsets for the one that satisfies this.
std::vector<std::size_t> reference_selection(const std::vector<KeyPoseEvent>& ev, int min_dist) {
  const std::size_t n = ev.size();
  std::vector<std::size_t> found;
  int solutions = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (n > 0 && !(mask & 1u)) continue;
    bool ok = true;
    int last = -1;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const bool in = mask & (1u << i);
      if (i > 0) {
        const bool should = ev[i].start_frame - ev[static_cast<std::size_t>(last)].end_frame - 1 >= min_dist;
        ok = in == should;
      }
      if (in) last = static_cast<int>(i);
    }
    if (!ok) continue;
    ++solutions;
    found.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) found.push_back(i);
  }
  REQUIRE(solutions == 1);
  return found;
}

std::vector<int> starts_of(const std::vector<KeyPoseEvent>& ev) {
  std::vector<int> out;
  for (const auto& e : ev) out.push_back(e.start_frame);
  return out;
}

}  // namespace

TEST_CASE("place_key_poses: centered blocks") {
  const auto dict = indexed_dict();
  const SynthConfig cfg;
  const auto placed = place_key_poses(timeline_at({28}), dict, cfg, 100);
  REQUIRE(placed.size() == 1);
  CHECK(placed[0].start_frame == 25);
  CHECK(placed[0].end_frame == 31);
  CHECK(placed[0].snippet_offset == 0);
  CHECK(place_key_poses(FrameTimeline{}, dict, cfg, 100).empty());
}

TEST_CASE("place_key_poses: trimming matches a frame-by-frame mapping") {
  const auto dict = indexed_dict();
  const SynthConfig cfg;
  const auto edge = place_key_poses(timeline_at({1}), dict, cfg, 100);
  REQUIRE(edge.size() == 1);
  CHECK(edge[0].start_frame == 0);
  CHECK(edge[0].end_frame == 4);
  CHECK(edge[0].frames.front().points(0, 0) == 102);
  CHECK(edge[0].frames.back().points(0, 0) == 106);

  const int total = 20;
  for (int mid = -5; mid < total + 5; ++mid) {
    const auto placed = place_key_poses(timeline_at({mid}), dict, cfg, total);
    std::vector<std::pair<int, double>> expected;  // output frame, snippet value
    for (int o = 0; o < total; ++o) {
      const int j = o - (mid - 3);
      if (j >= 0 && j < 7) expected.emplace_back(o, 100 + j);
    }
    std::vector<std::pair<int, double>> got;
    for (const auto& e : placed)
      for (std::size_t i = 0; i < e.frames.size(); ++i)
        got.emplace_back(e.start_frame + static_cast<int>(i), e.frames[i].points(0, 0));
    CHECK_MESSAGE(got == expected, mid);
  }
}

TEST_CASE("place_key_poses: sorted by center, mismatches rejected") {
  const auto dict = indexed_dict();
  SynthConfig cfg;
  FrameTimeline tl = timeline_at({40, 10, 25});
  CHECK(starts_of(place_key_poses(tl, dict, cfg, 100)) == std::vector<int>{7, 22, 37});
  cfg.pose_width = 5;
  CHECK_THROWS_AS(place_key_poses(tl, dict, cfg, 100), Error);
  tl.events[0].phone = PhoneUnit::arpabet("ZH");
  CHECK_THROWS_AS(place_key_poses(tl, dict, SynthConfig{}, 100), Error);
}

TEST_CASE("select_key_poses: gap threshold") {
  CHECK(select_key_poses({block(4, 10), block(15, 21)}, 4).size() == 2);  // gap 4
  CHECK(select_key_poses({block(4, 10), block(14, 20)}, 4).size() == 1);  // gap 3
  // gaps 2 then 6 after the skip
  const auto kept = select_key_poses({block(0, 6), block(9, 15), block(13, 19)}, 4);
  CHECK(starts_of(kept) == std::vector<int>{0, 13});
  CHECK(select_key_poses({}, 4).empty());
}

TEST_CASE("select_key_poses matches the subset characterisation") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = static_cast<int>(rng() % 9);
    const int min_dist = static_cast<int>(rng() % 7);
    std::vector<KeyPoseEvent> ev;
    int cursor = 0;
    for (int i = 0; i < n; ++i) {
      const int width = 1 + static_cast<int>(rng() % 7);
      cursor += static_cast<int>(rng() % 15) - 4;  // blocks may overlap
      ev.push_back(block(cursor, cursor + width - 1));
    }
    const auto kept = select_key_poses(ev, min_dist);
    std::vector<int> expected;
    for (auto i : reference_selection(ev, min_dist)) expected.push_back(ev[i].start_frame);
    REQUIRE(starts_of(kept) == expected);
  }
}

TEST_CASE("interpolate_gaps: linear blend between facing key frames") {
  std::mt19937 rng(2);
  KeyPoseEvent left = block(8, 10), right = block(14, 16);
  left.frames.back() = random_frame(rng);
  right.frames.front() = random_frame(rng);
  const auto& P = left.frames.back().points;
  const auto& Q = right.frames.front().points;
  const auto seq = interpolate_gaps({left, right}, 20);
  REQUIRE(seq.size() == 20);
  CHECK((seq.frames[12].points - (0.5 * P + 0.5 * Q)).cwiseAbs().maxCoeff() < 1e-12);
  for (int r = 0; r < kNumPoints; ++r)
    for (int c = 0; c < 3; ++c) {
      const double want = P(r, c) + (Q(r, c) - P(r, c)) * 0.25;
      CHECK(std::abs(seq.frames[11].points(r, c) - want) < 1e-12);
    }
  CHECK(seq.tags[11] == FrameSource::Interpolated);
  CHECK(seq.tags[10] == FrameSource::Copied);
  CHECK(seq.tags[0] == FrameSource::Held);
  CHECK(seq.tags[19] == FrameSource::Held);
  CHECK(seq.frames[0] == left.frames.front());
  CHECK(seq.frames[19] == right.frames.back());
}

TEST_CASE("interpolate_gaps: adjacent blocks, errors") {
  const auto seq = interpolate_gaps({block(0, 4, 1.0), block(5, 9, 2.0)}, 10);
  CHECK(std::count(seq.tags.begin(), seq.tags.end(), FrameSource::Interpolated) == 0);
  CHECK(std::count(seq.tags.begin(), seq.tags.end(), FrameSource::Copied) == 10);
  CHECK_THROWS_AS(interpolate_gaps({block(0, 4), block(4, 8)}, 10), Error);
  CHECK_THROWS_AS(interpolate_gaps({block(0, 12)}, 10), Error);
  CHECK_THROWS_AS(interpolate_gaps({}, 10), Error);
  CHECK(interpolate_gaps({}, 0).empty());
}

TEST_CASE("smoothing: constant sequences are fixed points") {
  std::mt19937 rng(4);
  const auto f = random_frame(rng);
  OutputSequence seq;
  seq.frames.assign(15, f);
  seq.tags.assign(15, FrameSource::Held);
  const auto out = smooth_sequence(seq, SynthConfig{});
  for (const auto& g : out.frames) CHECK(g == f);
}

TEST_CASE("smoothing: impulse response against a direct convolution") {
  const int n = 30, window = 9, h = 4;
  for (int spike = 0; spike < n; ++spike) {
    std::vector<Eigen::Matrix<double, 1, 1>> signal(n, Eigen::Matrix<double, 1, 1>::Zero());
    signal[static_cast<std::size_t>(spike)](0) = 1.0;
    const auto out = triangular_smooth<Eigen::Matrix<double, 1, 1>>(signal, window);
    for (int t = 0; t < n; ++t) {
      double num = 0.0, den = 0.0;
      for (int s = std::max(0, t - h); s <= std::min(n - 1, t + h); ++s) {
        const double w = h + 1 - std::abs(s - t);
        num += w * (s == spike ? 1.0 : 0.0);
        den += w;
      }
      CHECK(std::abs(out[static_cast<std::size_t>(t)](0) - num / den) < 1e-12);
    }
  }

  // interior peak: 5/25 of its height, on the nose of a full frame
  OutputSequence seq;
  seq.frames.assign(21, KeypointFrame{});
  seq.tags.assign(21, FrameSource::Held);
  seq.frames[10].points(0, 0) = 1.0;
  const auto out = smooth_sequence(seq, SynthConfig{});
  CHECK(out.frames[10].points(0, 0) == doctest::Approx(5.0 / 25.0).epsilon(1e-12));
  CHECK(out.frames[12].points(0, 0) == doctest::Approx(3.0 / 25.0).epsilon(1e-12));
  CHECK(out.frames[15].points(0, 0) == 0.0);
}

TEST_CASE("smoothing: mouth shape rides on the smoothed centroid") {
  std::mt19937 rng(8);
  auto seq = posepipe::testing::random_sequence(rng, 40);
  const auto out = smooth_sequence(seq, SynthConfig{});
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const Eigen::RowVector2d c_in = mouth_center(seq.frames[t]);
    const Eigen::RowVector2d c_out = mouth_center(out.frames[t]);
    for (int k = 0; k < kMouthPoints; ++k) {
      const Eigen::RowVector2d before = seq.frames[t].mouth().row(k).head<2>() - c_in;
      const Eigen::RowVector2d after = out.frames[t].mouth().row(k).head<2>() - c_out;
      CHECK((before - after).cwiseAbs().maxCoeff() < 1e-9);
    }
    CHECK(out.frames[t].mouth().col(2) == seq.frames[t].mouth().col(2));
  }
  CHECK(out.tags == seq.tags);
}

TEST_CASE("smoothing: translation equivariance") {
  std::mt19937 rng(12);
  auto seq = posepipe::testing::random_sequence(rng, 25);
  auto moved = seq;
  const Eigen::RowVector2d shift(37.25, -12.5);
  for (auto& f : moved.frames) f.points.leftCols<2>().rowwise() += shift;
  const auto a = smooth_sequence(seq, SynthConfig{});
  const auto b = smooth_sequence(moved, SynthConfig{});
  for (std::size_t t = 0; t < a.size(); ++t) {
    Eigen::Matrix<double, kNumPoints, 2> expect = a.frames[t].points.leftCols<2>();
    expect.rowwise() += shift;
    CHECK((b.frames[t].points.leftCols<2>() - expect).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(b.frames[t].points.col(2) == a.frames[t].points.col(2));
  }
}

TEST_CASE("synthesize: \"me\" places M and IY1 at their mid frames") {
  const auto& dict = english_fixture_dictionary();
  const auto result =
      synthesize({InputLanguage::English, "me", 1.0}, dict, &posepipe::testing::bundled_lexicon(), std::nullopt, {});
  CHECK(result.model_timing);
  CHECK(result.sequence.size() == static_cast<std::size_t>(frame_count(result.track.total_duration, 25.0)));
  std::vector<PhoneUnit> placed;
  for (const auto& e : result.placed) placed.push_back(e.phone);
  CHECK(placed == std::vector<PhoneUnit>{PhoneUnit::silence(), kM, kIY1, PhoneUnit::silence()});
  for (const auto& e : result.kept) {
    const auto ev = std::find_if(result.timeline.events.begin(), result.timeline.events.end(),
                                 [&](const TimelineEvent& t) { return t.phone == e.phone; });
    CHECK(e.center_frame == ev->mid_frame);
    for (int f = e.start_frame; f <= e.end_frame; ++f)
      CHECK(result.unsmoothed.tags[static_cast<std::size_t>(f)] == FrameSource::Copied);
  }
}

TEST_CASE("synthesize: empty text holds silence") {
  const auto result =
      synthesize({InputLanguage::English, "", 1.0}, english_fixture_dictionary(),
                 &posepipe::testing::bundled_lexicon(), std::nullopt, {});
  CHECK(result.sequence.size() == 5);  // one 0.2 s pause
  for (const auto& e : result.kept) CHECK(e.phone.is_silence());
}

TEST_CASE("synthesize: given alignment and determinism") {
  const auto& dict = english_fixture_dictionary();
  const AlignmentTrack track{{{kM, 0.3, 0.4}, {kIY1, 0.4, 0.7}}, 1.0};
  const auto a = synthesize({InputLanguage::English, "me", 1.0}, dict, &posepipe::testing::bundled_lexicon(), track, {});
  const auto b = synthesize({InputLanguage::English, "me", 1.0}, dict, &posepipe::testing::bundled_lexicon(), track, {});
  CHECK_FALSE(a.model_timing);
  CHECK(a.sequence.size() == 25);
  CHECK(a.warnings.empty());
  REQUIRE(a.sequence.size() == b.sequence.size());
  for (std::size_t i = 0; i < a.sequence.size(); ++i) CHECK(a.sequence.frames[i] == b.sequence.frames[i]);

  const auto mismatch =
      synthesize({InputLanguage::English, "she", 1.0}, dict, &posepipe::testing::bundled_lexicon(), track, {});
  CHECK(mismatch.warnings.size() == 1);
}

TEST_CASE("synthesize: errors name their stage") {
  const auto& dict = english_fixture_dictionary();
  try {
    synthesize({InputLanguage::English, "qzx", 1.0}, dict, &posepipe::testing::bundled_lexicon(), std::nullopt, {});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfVocabulary);
    CHECK(std::string(e.what()).find("lexicon") != std::string::npos);
  }
  try {
    synthesize({InputLanguage::Mandarin, "ni hao", 1.0}, dict, nullptr, std::nullopt, {});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingPhone);
    CHECK(std::string(e.what()).find("keypose") != std::string::npos);
  }
  CHECK_THROWS_AS(synthesize({InputLanguage::English, "me", 0.0}, dict, &posepipe::testing::bundled_lexicon(),
                             std::nullopt, {}),
                  Error);
}

TEST_CASE("synthesize: full pangram with a covering dictionary") {
  const auto& dict = english_fixture_dictionary();
  CHECK(coverage_report(dict, english_inventory()).fraction == 1.0);
  const auto result = synthesize({InputLanguage::English, "The quick brown fox jumps over the lazy dog.", 1.0},
                                 dict, &posepipe::testing::bundled_lexicon(), std::nullopt, {});
  CHECK(result.sequence.size() == static_cast<std::size_t>(frame_count(result.track.total_duration, 25.0)));
}
