#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "posepipe/phone.hpp"

namespace posepipe {

using Pronunciation = std::vector<PhoneUnit>;

/// Word -> pronunciations, in source order. Immutable after parsing.
class PronouncingDictionary {
public:
  /// Appends a pronunciation to `word` (uppercased).
  void add(std::string_view word, Pronunciation pron);

  /// All variants, or nullptr when the word is unknown.
  const std::vector<Pronunciation>* find(std::string_view word) const;

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::vector<Pronunciation>>& entries() const { return entries_; }

private:
  std::map<std::string, std::vector<Pronunciation>> entries_;
};

/// CMU-dict text: `WORD[(n)]  PH1 PH2 ...`, `;;;` comments.
/// Throws Error(Parse) naming the 1-based line number.
PronouncingDictionary parse_pronouncing_dict(std::string_view text);

/// Phones joined by single spaces with stress digits, e.g. "M IY1".
std::string format_pronunciation(const Pronunciation& pron);

/// Writes every entry back in CMU format, variants suffixed "(1)", "(2)", ...
std::string serialize_pronouncing_dict(const PronouncingDictionary& dict);

PronouncingDictionary load_pronouncing_dict(const std::string& path);

struct Token {
  enum class Kind : std::uint8_t { Word, Pause };
  Kind kind = Kind::Word;
  std::string text;  // empty for Pause

  static Token word(std::string text) { return {Kind::Word, std::move(text)}; }
  static Token pause() { return {Kind::Pause, {}}; }
  bool operator==(const Token&) const = default;
};

struct NormalizedText {
  std::vector<Token> tokens;
  std::size_t dropped_chars = 0;  // characters that were neither letters, digits nor punctuation
};

/// Upper-cases letters into words, expands integers, maps . , ! ? ; : to pauses.
NormalizedText normalize_text(std::string_view input);

/// English words for a non-negative integer written as digits. Values up to
/// 999,999 are read as numbers; longer numerals are read digit by digit.
std::vector<std::string> spell_number(std::string_view digits);

/// Words to phones; first pronunciation variant; one silence per pause.
/// Throws Error(OutOfVocabulary) naming the word.
std::vector<PhoneUnit> transcribe(const std::vector<Token>& tokens, const PronouncingDictionary& dict);

struct PinyinSyllable {
  std::optional<std::string> initial;
  std::string final_part;
  std::optional<int> tone;

  std::string toneless() const { return initial.value_or("") + final_part; }
  bool operator==(const PinyinSyllable&) const = default;
};

/// Longest-prefix split into initial and final. A trailing tone digit 0-4 is
/// accepted; 5 is read as the neutral tone 0. Throws Error(Parse).
PinyinSyllable segment_pinyin(std::string_view syllable);

/// Whitespace-separated pinyin syllables to initial/final units; punctuation
/// becomes silence. Throws Error(Parse) on an invalid syllable.
std::vector<PhoneUnit> transcribe_pinyin(std::string_view text);

}  // namespace posepipe
