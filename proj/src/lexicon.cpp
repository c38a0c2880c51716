#include "posepipe/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "posepipe/error.hpp"

namespace posepipe {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_pause_punct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':';
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Strips a "(n)" variant suffix.
std::string_view base_word(std::string_view word) {
  if (word.size() >= 3 && word.back() == ')') {
    const auto open = word.rfind('(');
    if (open != std::string_view::npos && open > 0 && open + 2 < word.size() &&
        std::all_of(word.begin() + open + 1, word.end() - 1, is_digit)) {
      return word.substr(0, open);
    }
  }
  return word;
}

constexpr const char* kOnes[] = {"ZERO",    "ONE",     "TWO",       "THREE",    "FOUR",
                                 "FIVE",    "SIX",     "SEVEN",     "EIGHT",    "NINE",
                                 "TEN",     "ELEVEN",  "TWELVE",    "THIRTEEN", "FOURTEEN",
                                 "FIFTEEN", "SIXTEEN", "SEVENTEEN", "EIGHTEEN", "NINETEEN"};
constexpr const char* kTens[] = {"",      "",      "TWENTY",  "THIRTY", "FORTY",
                                 "FIFTY", "SIXTY", "SEVENTY", "EIGHTY", "NINETY"};

// 1..999
void spell_below_thousand(int n, std::vector<std::string>& out) {
  if (n >= 100) {
    out.emplace_back(kOnes[n / 100]);
    out.emplace_back("HUNDRED");
    n %= 100;
  }
  if (n >= 20) {
    out.emplace_back(kTens[n / 10]);
    n %= 10;
    if (n > 0) out.emplace_back(kOnes[n]);
  } else if (n > 0) {
    out.emplace_back(kOnes[n]);
  }
}

}  // namespace

void PronouncingDictionary::add(std::string_view word, Pronunciation pron) {
  entries_[upper(word)].push_back(std::move(pron));
}

const std::vector<Pronunciation>* PronouncingDictionary::find(std::string_view word) const {
  auto it = entries_.find(std::string(word));
  return it == entries_.end() ? nullptr : &it->second;
}

PronouncingDictionary parse_pronouncing_dict(std::string_view text) {
  PronouncingDictionary dict;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.starts_with(";;;")) continue;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() < 2) {
      throw Error(ErrorKind::Parse, where + "no phones for '" + std::string(fields[0]) + "'");
    }
    Pronunciation pron;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      try {
        pron.push_back(parse_arpabet(fields[i]));
      } catch (const Error& e) {
        throw Error(ErrorKind::Parse, where + e.what());
      }
    }
    dict.add(base_word(fields[0]), std::move(pron));
  }
  return dict;
}

std::string format_pronunciation(const Pronunciation& pron) {
  std::string out;
  for (const auto& p : pron) {
    if (!out.empty()) out += ' ';
    out += to_label(p);
  }
  return out;
}

std::string serialize_pronouncing_dict(const PronouncingDictionary& dict) {
  std::string out;
  for (const auto& [word, prons] : dict.entries()) {
    for (std::size_t i = 0; i < prons.size(); ++i) {
      out += word;
      if (i > 0) out += "(" + std::to_string(i) + ")";
      out += "  " + format_pronunciation(prons[i]) + "\n";
    }
  }
  return out;
}

PronouncingDictionary load_pronouncing_dict(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read lexicon " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_pronouncing_dict(ss.str());
  } catch (const Error& e) {
    throw e.tagged(path);
  }
}

std::vector<std::string> spell_number(std::string_view digits) {
  std::vector<std::string> out;
  if (digits.empty()) return out;
  std::string_view significant = digits;
  while (significant.size() > 1 && significant.front() == '0') significant.remove_prefix(1);
  if (significant.size() > 6) {
    for (char c : digits) out.emplace_back(kOnes[c - '0']);
    return out;
  }
  int n = std::stoi(std::string(significant));
  if (n == 0) {
    out.emplace_back(kOnes[0]);
    return out;
  }
  if (n >= 1000) {
    spell_below_thousand(n / 1000, out);
    out.emplace_back("THOUSAND");
    n %= 1000;
  }
  spell_below_thousand(n, out);
  return out;
}

NormalizedText normalize_text(std::string_view input) {
  NormalizedText result;
  auto push_pause = [&] {
    if (result.tokens.empty() || result.tokens.back().kind != Token::Kind::Pause) {
      result.tokens.push_back(Token::pause());
    }
  };
  std::size_t i = 0;
  while (i < input.size()) {
    const char c = input[i];
    if (is_alpha(c)) {
      std::string word;
      while (i < input.size()) {
        if (is_alpha(input[i])) {
          word += input[i++];
        } else if (input[i] == '\'' && i + 1 < input.size() && is_alpha(input[i + 1])) {
          word += input[i++];
        } else {
          break;
        }
      }
      result.tokens.push_back(Token::word(upper(word)));
    } else if (is_digit(c)) {
      std::string digits;
      while (i < input.size()) {
        if (is_digit(input[i])) {
          digits += input[i++];
        } else if (input[i] == ',' && i + 3 < input.size() && is_digit(input[i + 1]) &&
                   is_digit(input[i + 2]) && is_digit(input[i + 3]) &&
                   (i + 4 == input.size() || !is_digit(input[i + 4]))) {
          // thousands separator, e.g. "1,000"
          ++i;
        } else {
          break;
        }
      }
      for (auto& w : spell_number(digits)) result.tokens.push_back(Token::word(std::move(w)));
    } else if (is_pause_punct(c)) {
      push_pause();
      ++i;
    } else if (is_space(c) || c == '-' || c == '\'' || c == '"' || c == '(' || c == ')' ||
               c == '[' || c == ']') {
      ++i;
    } else {
      // count code points, not UTF-8 continuation bytes
      if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++result.dropped_chars;
      ++i;
    }
  }
  return result;
}

std::vector<PhoneUnit> transcribe(const std::vector<Token>& tokens,
                                  const PronouncingDictionary& dict) {
  if (dict.empty()) throw Error(ErrorKind::Usage, "pronouncing dictionary is empty");
  std::vector<PhoneUnit> phones;
  for (const auto& tok : tokens) {
    if (tok.kind == Token::Kind::Pause) {
      phones.push_back(PhoneUnit::silence());
      continue;
    }
    const auto* prons = dict.find(tok.text);
    if (prons == nullptr || prons->empty()) {
      throw Error(ErrorKind::OutOfVocabulary, "out-of-vocabulary word '" + tok.text + "'");
    }
    const auto& first = prons->front();
    phones.insert(phones.end(), first.begin(), first.end());
  }
  return phones;
}

PinyinSyllable segment_pinyin(std::string_view syllable) {
  const std::string input(syllable);
  auto invalid = [&](const std::string& why) {
    return Error(ErrorKind::Parse, "invalid pinyin syllable '" + input + "': " + why);
  };
  PinyinSyllable out;
  if (!syllable.empty() && is_digit(syllable.back())) {
    const int tone = syllable.back() - '0';
    if (tone > 5) throw invalid("tone must be 0-5");
    out.tone = tone == 5 ? 0 : tone;
    syllable.remove_suffix(1);
  }
  if (syllable.empty()) throw invalid("empty");
  for (char c : syllable) {
    if (c < 'a' || c > 'z') throw invalid("expected lowercase ASCII letters");
  }
  for (std::size_t len : {std::size_t{2}, std::size_t{1}}) {
    if (syllable.size() > len && is_pinyin_initial(syllable.substr(0, len))) {
      out.initial = std::string(syllable.substr(0, len));
      syllable.remove_prefix(len);
      break;
    }
  }
  if (!is_pinyin_final(syllable)) throw invalid("no final '" + std::string(syllable) + "'");
  out.final_part = std::string(syllable);
  return out;
}

std::vector<PhoneUnit> transcribe_pinyin(std::string_view text) {
  std::vector<PhoneUnit> phones;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    const auto syl = segment_pinyin(current);
    if (syl.initial) phones.push_back(PhoneUnit::pinyin_initial(*syl.initial));
    phones.push_back(PhoneUnit::pinyin_final(syl.final_part));
    current.clear();
  };
  for (char c : text) {
    if (is_pause_punct(c)) {
      flush();
      if (phones.empty() || !phones.back().is_silence()) phones.push_back(PhoneUnit::silence());
    } else if (is_space(c) || c == '\'' || c == '-') {
      flush();
    } else {
      current += c;
    }
  }
  flush();
  return phones;
}

}  // namespace posepipe
