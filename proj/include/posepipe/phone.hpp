#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace posepipe {

enum class PhoneKind : std::uint8_t { ArpabetPhone, PinyinInitial, PinyinFinal, Silence };

enum class Stress : std::uint8_t { Unstressed = 0, Primary = 1, Secondary = 2 };

/// One dictionary key: an ARPABET phone (vowels carry stress), a pinyin
/// initial or final, or silence. Construct through the factories; they
/// enforce the symbol tables.
class PhoneUnit {
public:
  PhoneUnit() = default;  // silence

  static PhoneUnit silence() { return {}; }
  static PhoneUnit arpabet(std::string_view symbol, std::optional<Stress> stress = std::nullopt);
  static PhoneUnit pinyin_initial(std::string_view symbol);
  static PhoneUnit pinyin_final(std::string_view symbol);

  PhoneKind kind() const { return kind_; }
  const std::string& symbol() const { return symbol_; }
  std::optional<Stress> stress() const { return stress_; }
  bool is_silence() const { return kind_ == PhoneKind::Silence; }

  /// Same phone with a different stress level. Only valid on ARPABET vowels.
  PhoneUnit with_stress(Stress stress) const;

  auto operator<=>(const PhoneUnit&) const = default;
  bool operator==(const PhoneUnit&) const = default;

private:
  PhoneKind kind_ = PhoneKind::Silence;
  std::string symbol_;
  std::optional<Stress> stress_;
};

/// Canonical text label: "IY1", "M", "zh", "uang", "sil".
std::string to_label(const PhoneUnit& unit);

/// Inverse of to_label. Also accepts "", "sp", "SIL", "SP" as silence.
/// Throws Error(Parse) for anything that is not a known unit.
PhoneUnit parse_phone_label(std::string_view label);

/// CMU ARPABET symbol, without stress digit. Throws Error(Parse).
PhoneUnit parse_arpabet(std::string_view token);

bool is_arpabet_symbol(std::string_view symbol);
bool is_arpabet_vowel(std::string_view symbol);
bool is_pinyin_initial(std::string_view symbol);
bool is_pinyin_final(std::string_view symbol);

/// 39 CMU phones: 15 vowels then 24 consonants.
std::span<const std::string_view> arpabet_symbols();
/// The 21 Hanyu Pinyin initials.
std::span<const std::string_view> pinyin_initials();
/// Orthographic finals, including the y-/w- spellings of zero-initial syllables.
std::span<const std::string_view> pinyin_finals();

/// One unit per base phone, vowels at primary stress.
std::vector<PhoneUnit> english_inventory();
/// Every initial and every final.
std::vector<PhoneUnit> mandarin_inventory();

/// Vowel-like units get the vowel duration in the timing model.
bool is_vowel_like(const PhoneUnit& unit);

}  // namespace posepipe
