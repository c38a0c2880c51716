#include "posepipe/phone.hpp"

#include <algorithm>
#include <iterator>

#include "posepipe/error.hpp"

namespace posepipe {
namespace {

constexpr std::string_view kArpabet[] = {
    // vowels
    "AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER", "EY", "IH", "IY", "OW", "OY", "UH", "UW",
    // consonants
    "B", "CH", "D", "DH", "F", "G", "HH", "JH", "K", "L", "M", "N", "NG", "P", "R", "S", "SH",
    "T", "TH", "V", "W", "Y", "Z", "ZH"};
constexpr std::size_t kNumVowels = 15;

constexpr std::string_view kInitials[] = {
    "b", "p", "m", "f", "d", "t", "n", "l", "g", "k", "h",
    "j", "q", "x", "zh", "ch", "sh", "r", "z", "c", "s"};

constexpr std::string_view kFinals[] = {
    "a",    "o",    "e",   "ai",  "ei",   "ao",   "ou",  "an",  "en",  "ang",  "eng",  "ong",
    "er",   "i",    "ia",  "ie",  "iao",  "iu",   "ian", "in",  "iang", "ing", "iong", "u",
    "ua",   "uo",   "uai", "ui",  "uan",  "un",   "uang", "v",  "ve",  "ue",
    // zero-initial spellings
    "yi",   "ya",   "ye",  "yao", "you",  "yan",  "yin", "yang", "ying", "yong", "yu",  "yue",
    "yuan", "yun",  "wu",  "wa",  "wo",   "wai",  "wei", "wan",  "wen",  "wang", "weng"};

template <std::size_t N>
bool contains(const std::string_view (&table)[N], std::string_view s) {
  return std::find(std::begin(table), std::end(table), s) != std::end(table);
}

static_assert(std::size(kArpabet) == 39);
static_assert(std::size(kInitials) == 21);

}  // namespace

bool is_arpabet_symbol(std::string_view symbol) { return contains(kArpabet, symbol); }

bool is_arpabet_vowel(std::string_view symbol) {
  return std::find(kArpabet, kArpabet + kNumVowels, symbol) != kArpabet + kNumVowels;
}

bool is_pinyin_initial(std::string_view symbol) { return contains(kInitials, symbol); }
bool is_pinyin_final(std::string_view symbol) { return contains(kFinals, symbol); }

std::span<const std::string_view> arpabet_symbols() { return kArpabet; }
std::span<const std::string_view> pinyin_initials() { return kInitials; }
std::span<const std::string_view> pinyin_finals() { return kFinals; }

PhoneUnit PhoneUnit::arpabet(std::string_view symbol, std::optional<Stress> stress) {
  if (!is_arpabet_symbol(symbol)) {
    throw Error(ErrorKind::Parse, "unknown ARPABET symbol '" + std::string(symbol) + "'");
  }
  const bool vowel = is_arpabet_vowel(symbol);
  if (vowel && !stress) {
    throw Error(ErrorKind::Parse, "vowel '" + std::string(symbol) + "' needs a stress digit");
  }
  if (!vowel && stress) {
    throw Error(ErrorKind::Parse, "consonant '" + std::string(symbol) + "' cannot carry stress");
  }
  PhoneUnit u;
  u.kind_ = PhoneKind::ArpabetPhone;
  u.symbol_ = symbol;
  u.stress_ = stress;
  return u;
}

PhoneUnit PhoneUnit::pinyin_initial(std::string_view symbol) {
  if (!is_pinyin_initial(symbol)) {
    throw Error(ErrorKind::Parse, "unknown pinyin initial '" + std::string(symbol) + "'");
  }
  PhoneUnit u;
  u.kind_ = PhoneKind::PinyinInitial;
  u.symbol_ = symbol;
  return u;
}

PhoneUnit PhoneUnit::pinyin_final(std::string_view symbol) {
  if (!is_pinyin_final(symbol)) {
    throw Error(ErrorKind::Parse, "unknown pinyin final '" + std::string(symbol) + "'");
  }
  PhoneUnit u;
  u.kind_ = PhoneKind::PinyinFinal;
  u.symbol_ = symbol;
  return u;
}

PhoneUnit PhoneUnit::with_stress(Stress stress) const {
  if (kind_ != PhoneKind::ArpabetPhone || !stress_) {
    throw Error(ErrorKind::Invariant, "with_stress on non-vowel unit " + to_label(*this));
  }
  PhoneUnit u = *this;
  u.stress_ = stress;
  return u;
}

std::string to_label(const PhoneUnit& unit) {
  switch (unit.kind()) {
    case PhoneKind::Silence: return "sil";
    case PhoneKind::ArpabetPhone: {
      std::string s = unit.symbol();
      if (unit.stress()) s += static_cast<char>('0' + static_cast<int>(*unit.stress()));
      return s;
    }
    default: return unit.symbol();
  }
}

PhoneUnit parse_arpabet(std::string_view token) {
  if (token.empty()) throw Error(ErrorKind::Parse, "empty phone");
  const char last = token.back();
  if (last >= '0' && last <= '9') {
    if (last > '2') {
      throw Error(ErrorKind::Parse, "bad stress digit in '" + std::string(token) + "'");
    }
    return PhoneUnit::arpabet(token.substr(0, token.size() - 1), static_cast<Stress>(last - '0'));
  }
  return PhoneUnit::arpabet(token);
}

PhoneUnit parse_phone_label(std::string_view label) {
  if (label.empty() || label == "sil" || label == "sp" || label == "SIL" || label == "SP") {
    return PhoneUnit::silence();
  }
  if (is_pinyin_initial(label)) return PhoneUnit::pinyin_initial(label);
  if (is_pinyin_final(label)) return PhoneUnit::pinyin_final(label);
  return parse_arpabet(label);
}

std::vector<PhoneUnit> english_inventory() {
  std::vector<PhoneUnit> out;
  for (std::string_view s : kArpabet) {
    out.push_back(is_arpabet_vowel(s) ? PhoneUnit::arpabet(s, Stress::Primary)
                                      : PhoneUnit::arpabet(s));
  }
  return out;
}

std::vector<PhoneUnit> mandarin_inventory() {
  std::vector<PhoneUnit> out;
  for (std::string_view s : kInitials) out.push_back(PhoneUnit::pinyin_initial(s));
  for (std::string_view s : kFinals) out.push_back(PhoneUnit::pinyin_final(s));
  return out;
}

bool is_vowel_like(const PhoneUnit& unit) {
  return unit.kind() == PhoneKind::PinyinFinal ||
         (unit.kind() == PhoneKind::ArpabetPhone && unit.stress().has_value());
}

}  // namespace posepipe
