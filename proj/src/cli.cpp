#include "posepipe/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "posepipe/alignment.hpp"
#include "posepipe/config.hpp"
#include "posepipe/corpus.hpp"
#include "posepipe/eval.hpp"
#include "posepipe/lexicon.hpp"
#include "posepipe/posedict.hpp"
#include "posepipe/render.hpp"
#include "posepipe/synth.hpp"

#ifndef POSEPIPE_DATA_DIR
#define POSEPIPE_DATA_DIR "data"
#endif

namespace posepipe {
namespace fs = std::filesystem;

namespace {

std::shared_ptr<spdlog::logger> logger() {
  static auto log = [] {
    auto l = spdlog::stderr_color_mt("posepipe");
    l->set_pattern("[%l] %v");
    const char* level = std::getenv("POSEPIPE_LOG");
    l->set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
    return l;
  }();
  return log;
}

struct Canvas {
  int width = 640;
  int height = 480;
};

Canvas parse_canvas(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    Canvas c{std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
    if (c.width <= 0 || c.height <= 0) throw std::invalid_argument(text);
    return c;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Usage, "--canvas expects WxH with positive sizes, got '" + text + "'");
  }
}

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw Error(ErrorKind::Usage, std::string(what) + " not found: " + path);
}

void require_dir(const std::string& path, const char* what) {
  if (!fs::is_directory(path)) throw Error(ErrorKind::Usage, std::string(what) + " not found: " + path);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
}

std::vector<PhoneUnit> inventory_for(const std::string& language) {
  return language == "mandarin" ? mandarin_inventory() : english_inventory();
}

void print_coverage(std::ostream& out, const CoverageReport& report) {
  out << "coverage " << report.present.size() << "/" << report.present.size() + report.missing.size() << " ("
      << report.fraction << ")\n";
  if (!report.missing.empty()) {
    out << "missing:";
    for (const auto& u : report.missing) out << " " << to_label(u);
    out << "\n";
  }
}

struct BuildDictArgs {
  std::vector<std::string> keypoint_dirs;
  std::vector<std::string> alignments;
  std::string config;
  std::string out;
  std::string language = "english";
  std::string tier = "phone";
};

int cmd_build_dict(const BuildDictArgs& a, std::ostream& out) {
  if (a.keypoint_dirs.size() != a.alignments.size()) {
    throw Error(ErrorKind::Usage, "need one --alignment per --keypoints-dir");
  }
  for (const auto& d : a.keypoint_dirs) require_dir(d, "keypoints directory");
  for (const auto& f : a.alignments) require_file(f, "alignment file");
  SynthConfig cfg;
  if (!a.config.empty()) {
    require_file(a.config, "config file");
    cfg = load_config(a.config);
  }
  std::vector<Clip> clips;
  for (std::size_t i = 0; i < a.keypoint_dirs.size(); ++i) {
    Clip clip;
    clip.id = fs::path(a.keypoint_dirs[i]).lexically_normal().string();
    clip.poses = load_keypoint_dir(a.keypoint_dirs[i], cfg.fps);
    clip.alignment = load_alignment(a.alignments[i], a.tier);
    logger()->info("clip {}: {} frames, {} aligned phones", clip.id, clip.poses.size(),
                   clip.alignment.intervals.size());
    clips.push_back(std::move(clip));
  }
  const auto dict = build_dictionary(clips, cfg.pose_width, cfg.fps);
  save_dictionary(dict, a.out);
  out << "wrote " << a.out << " with " << dict.snippets.size() << " units\n";
  print_coverage(out, coverage_report(dict, inventory_for(a.language)));
  return kExitOk;
}

struct SynthArgs {
  std::string text;
  std::string pinyin;
  std::string dict;
  std::string alignment;
  std::string out_dir;
  std::string config;
  std::string canvas = "640x480";
  std::string lexicon;
  std::string tier = "phone";
  double rate = 1.0;
  bool mandarin = false;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const bool mandarin = a.mandarin;
  require_file(a.dict, "dictionary");
  if (!a.alignment.empty()) require_file(a.alignment, "alignment file");
  const std::string lexicon_path = a.lexicon.empty() ? default_data_dir() + "/lexicon/english.dict" : a.lexicon;
  if (!mandarin) require_file(lexicon_path, "lexicon");
  const Canvas canvas = parse_canvas(a.canvas);
  SynthConfig cfg;
  if (!a.config.empty()) {
    require_file(a.config, "config file");
    cfg = load_config(a.config);
  }

  const auto dict = load_dictionary(a.dict);
  std::optional<PronouncingDictionary> lexicon;
  if (!mandarin) lexicon = load_pronouncing_dict(lexicon_path);
  std::optional<AlignmentTrack> alignment;
  if (!a.alignment.empty()) alignment = load_alignment(a.alignment, a.tier);

  SynthRequest request;
  request.language = mandarin ? InputLanguage::Mandarin : InputLanguage::English;
  request.text = mandarin ? a.pinyin : a.text;
  request.speaking_rate = a.rate;
  const auto result = synthesize(request, dict, lexicon ? &*lexicon : nullptr, alignment, cfg);
  for (const auto& w : result.warnings) logger()->warn("{}", w);

  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / "poses.json", export_pose_json(result.sequence));
  export_frames(result.sequence, (dir / "frames").string(), canvas.width, canvas.height, Palette::stick_figure());
  export_frames(result.sequence, (dir / "labels").string(), canvas.width, canvas.height, Palette::label_map());
  const auto coverage = coverage_report(dict, inventory_for(mandarin ? "mandarin" : "english"));
  const auto report = eval_metrics(result.sequence, result.kept, coverage.fraction, result.model_timing);
  write_text(dir / "report.json", report.to_json());

  out << "frames " << result.sequence.size() << ", key poses " << result.kept.size() << "/"
      << result.placed.size() << " kept, jitter " << report.jitter << " px, timing "
      << (result.model_timing ? "model-based" : "aligned") << "\n";
  return kExitOk;
}

struct CorpusArgs {
  std::string out_dir;
  std::string language = "english";
  std::string text;
  std::string lexicon;
  std::string pinyin_table;
  std::string config;
  double rate = 1.0;
};

int cmd_make_corpus(const CorpusArgs& a, std::ostream& out) {
  SynthConfig cfg;
  if (!a.config.empty()) {
    require_file(a.config, "config file");
    cfg = load_config(a.config);
  }
  std::vector<PhoneUnit> phones;
  if (a.language == "mandarin") {
    std::string text = a.text;
    if (text.empty()) {
      const std::string table = a.pinyin_table.empty() ? default_data_dir() + "/pinyin_syllables.txt" : a.pinyin_table;
      require_file(table, "pinyin table");
      for (const auto& syl : covering_pinyin_syllables(load_pinyin_table(table))) text += syl + ", ";
    }
    phones = transcribe_pinyin(text);
  } else {
    std::string text = a.text;
    if (text.empty()) {
      for (const auto& w : english_training_words()) text += w + ", ";
    }
    const std::string lexicon_path = a.lexicon.empty() ? default_data_dir() + "/lexicon/english.dict" : a.lexicon;
    require_file(lexicon_path, "lexicon");
    phones = transcribe(normalize_text(text).tokens, load_pronouncing_dict(lexicon_path));
  }
  const auto clip = make_synthetic_clip("corpus", phones, cfg.fps, a.rate);
  const fs::path dir(a.out_dir);
  write_keypoint_dir(clip.poses, (dir / "keypoints").string());
  write_text(dir / "alignment.TextGrid", serialize_textgrid(clip.alignment));
  out << "wrote " << clip.poses.size() << " frames and " << clip.alignment.intervals.size()
      << " aligned phones to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

std::string default_data_dir() {
  if (const char* env = std::getenv("POSEPIPE_DATA")) return env;
  return POSEPIPE_DATA_DIR;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return kExitUsage;
    case ErrorKind::Parse:
    case ErrorKind::OutOfVocabulary:
    case ErrorKind::MissingPhone: return kExitData;
    case ErrorKind::Io: return kExitIo;
    case ErrorKind::Invariant: return kExitInternal;
  }
  return kExitInternal;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Text to talking-head pose sequences via a phoneme-pose dictionary", "posepipe"};
  app.require_subcommand(1);

  BuildDictArgs build;
  auto* build_cmd = app.add_subcommand("build-dict", "Build a phoneme-pose dictionary from keypoints and alignments");
  build_cmd->add_option("--keypoints-dir", build.keypoint_dirs, "OpenPose JSON directory (repeatable)")->required();
  build_cmd->add_option("--alignment", build.alignments, "TextGrid or JSON alignment, one per directory")->required();
  build_cmd->add_option("--config", build.config, "Synthesis config JSON");
  build_cmd->add_option("--out", build.out, "Output dictionary JSON")->required();
  build_cmd->add_option("--language", build.language, "Inventory for the coverage report")
      ->check(CLI::IsMember({"english", "mandarin"}));
  build_cmd->add_option("--tier", build.tier, "TextGrid tier holding phones");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Synthesize a pose sequence from text");
  auto* text_opt = synth_cmd->add_option("--text", synth.text, "English text");
  auto* pinyin_opt = synth_cmd->add_option("--pinyin", synth.pinyin, "Space-separated pinyin syllables");
  text_opt->excludes(pinyin_opt);
  synth_cmd->add_option("--dict", synth.dict, "Phoneme-pose dictionary JSON")->required();
  synth_cmd->add_option("--alignment", synth.alignment, "Forced alignment of the speech (TextGrid or JSON)");
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory")->required();
  synth_cmd->add_option("--config", synth.config, "Synthesis config JSON");
  synth_cmd->add_option("--canvas", synth.canvas, "Frame size WxH");
  synth_cmd->add_option("--lexicon", synth.lexicon, "CMU-format pronouncing dictionary");
  synth_cmd->add_option("--tier", synth.tier, "TextGrid tier holding phones");
  synth_cmd->add_option("--rate", synth.rate, "Speaking rate for model-based timing")->check(CLI::PositiveNumber);

  CorpusArgs corpus;
  auto* corpus_cmd = app.add_subcommand("make-corpus", "Write a synthetic keypoint clip with its alignment");
  corpus_cmd->add_option("--out-dir", corpus.out_dir, "Output directory")->required();
  corpus_cmd->add_option("--language", corpus.language)->check(CLI::IsMember({"english", "mandarin"}));
  corpus_cmd->add_option("--text", corpus.text, "Text to speak (default: a phone-covering word list)");
  corpus_cmd->add_option("--lexicon", corpus.lexicon, "CMU-format pronouncing dictionary");
  corpus_cmd->add_option("--pinyin-table", corpus.pinyin_table, "Syllable table for the Mandarin default text");
  corpus_cmd->add_option("--config", corpus.config, "Synthesis config JSON (fps)");
  corpus_cmd->add_option("--rate", corpus.rate, "Speaking rate")->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build_cmd) return cmd_build_dict(build, out);
    if (*synth_cmd) {
      if (text_opt->count() + pinyin_opt->count() != 1) {
        throw Error(ErrorKind::Usage, "synth needs exactly one of --text or --pinyin");
      }
      synth.mandarin = pinyin_opt->count() > 0;
      return cmd_synth(synth, out);
    }
    if (*corpus_cmd) return cmd_make_corpus(corpus, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace posepipe
