#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "posepipe/error.hpp"
#include "posepipe/corpus.hpp"
#include "posepipe/lexicon.hpp"
#include "test_support.hpp"

using namespace posepipe;
using posepipe::testing::data_path;
using posepipe::testing::read_file;
using posepipe::testing::repo_data_path;

namespace {

PhoneUnit vowel(const char* s, Stress st) { return PhoneUnit::arpabet(s, st); }
PhoneUnit cons(const char* s) { return PhoneUnit::arpabet(s); }

std::string parse_error(std::string_view text) {
  try {
    parse_pronouncing_dict(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    return e.what();
  }
  return {};
}

// Reference speller: builds the 100 names below a hundred up front and
// composes larger values from them.
std::vector<std::string> reference_spelling(int n) {
  static const std::vector<std::string> below_hundred = [] {
    const char* units[] = {"ZERO", "ONE", "TWO", "THREE", "FOUR", "FIVE", "SIX", "SEVEN", "EIGHT", "NINE",
                           "TEN", "ELEVEN", "TWELVE", "THIRTEEN", "FOURTEEN", "FIFTEEN", "SIXTEEN",
                           "SEVENTEEN", "EIGHTEEN", "NINETEEN"};
    const char* tens[] = {"TWENTY", "THIRTY", "FORTY", "FIFTY", "SIXTY", "SEVENTY", "EIGHTY", "NINETY"};
    std::vector<std::string> names(units, units + 20);
    for (const char* t : tens) {
      names.emplace_back(t);
      for (int u = 1; u <= 9; ++u) names.push_back(std::string(t) + " " + units[u]);
    }
    return names;
  }();
  auto chunk = [&](int v) {  // 1..999
    std::string s;
    if (v >= 100) s = below_hundred[static_cast<std::size_t>(v / 100)] + " HUNDRED";
    if (v % 100) s += (s.empty() ? "" : " ") + below_hundred[static_cast<std::size_t>(v % 100)];
    return s;
  };
  std::string text;
  if (n == 0) {
    text = "ZERO";
  } else {
    if (n >= 1000) text = chunk(n / 1000) + " THOUSAND";
    if (n % 1000) text += (text.empty() ? "" : " ") + chunk(n % 1000);
  }
  std::vector<std::string> words;
  std::istringstream in(text);
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::vector<std::string> word_texts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.kind == Token::Kind::Word ? t.text : "<pause>");
  return out;
}

}  // namespace

TEST_CASE("pronouncing dictionary: caption examples parse") {
  const auto dict = parse_pronouncing_dict("ME  M IY1\nSHE  SH IY1\n");
  REQUIRE(dict.find("ME") != nullptr);
  CHECK(dict.find("ME")->front() == Pronunciation{cons("M"), vowel("IY", Stress::Primary)});
  CHECK(dict.find("SHE")->front() == Pronunciation{cons("SH"), vowel("IY", Stress::Primary)});
}

TEST_CASE("pronouncing dictionary: comments and variants") {
  CHECK(parse_pronouncing_dict(";;; comment\n").empty());
  const auto dict = parse_pronouncing_dict("READ  R EH1 D\nREAD(1)  R IY1 D\n");
  const auto* prons = dict.find("READ");
  REQUIRE(prons != nullptr);
  REQUIRE(prons->size() == 2);
  CHECK(format_pronunciation((*prons)[0]) == "R EH1 D");
  CHECK(format_pronunciation((*prons)[1]) == "R IY1 D");
  CHECK(dict.find("READ(1)") == nullptr);
}

TEST_CASE("pronouncing dictionary: malformed lines name the line number") {
  CHECK(parse_error(read_file(data_path("bad_phone.dict"))).find("line 2") != std::string::npos);
  CHECK(parse_error(read_file(data_path("bad_phone.dict"))).find("XX") != std::string::npos);
  CHECK(parse_error(read_file(data_path("no_phones.dict"))).find("line 3: no phones") != std::string::npos);
  CHECK(parse_error("HM  M1\n").find("line 1") != std::string::npos);    // stress on consonant
  CHECK(parse_error("AH  AA\n").find("stress") != std::string::npos);     // vowel without stress
  CHECK(parse_error("AH  AA4\n").find("stress") != std::string::npos);
}

TEST_CASE("pronouncing dictionary: phone fields round-trip exactly") {
  for (const auto& file : {data_path("mini.dict"), repo_data_path("lexicon/english.dict")}) {
    const std::string text = read_file(file);
    const auto dict = parse_pronouncing_dict(text);
    std::map<std::string, std::size_t> seen;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
      if (line.empty() || line.starts_with(";;;")) continue;
      const auto sep = line.find("  ");
      REQUIRE(sep != std::string::npos);
      std::string word = line.substr(0, sep);
      if (auto paren = word.find('('); paren != std::string::npos) word.resize(paren);
      const auto idx = seen[word]++;
      CHECK(format_pronunciation(dict.find(word)->at(idx)) == line.substr(sep + 2));
    }
    CHECK(parse_pronouncing_dict(serialize_pronouncing_dict(dict)).entries() == dict.entries());
  }
}

TEST_CASE("normalize_text: words, pauses, empties") {
  auto n = normalize_text("Hello, world.");
  CHECK(n.tokens == std::vector<Token>{Token::word("HELLO"), Token::pause(), Token::word("WORLD"), Token::pause()});
  CHECK(normalize_text("").tokens.empty());
  CHECK(normalize_text("   ").tokens.empty());
  CHECK(word_texts(normalize_text("Don't stop!").tokens) == std::vector<std::string>{"DON'T", "STOP", "<pause>"});
  CHECK(word_texts(normalize_text("Wait...  what?!").tokens) ==
        std::vector<std::string>{"WAIT", "<pause>", "WHAT", "<pause>"});
}

TEST_CASE("normalize_text: unknown characters are dropped and counted") {
  const auto n = normalize_text("caf\xC3\xA9 & co");
  CHECK(n.dropped_chars == 2);  // one code point plus '&'
  CHECK(word_texts(n.tokens) == std::vector<std::string>{"CAF", "CO"});
}

TEST_CASE("normalize_text: numerals") {
  CHECK(word_texts(normalize_text("25").tokens) == std::vector<std::string>{"TWENTY", "FIVE"});
  CHECK(word_texts(normalize_text("1,000 cats").tokens) == std::vector<std::string>{"ONE", "THOUSAND", "CATS"});
  CHECK(word_texts(normalize_text("4th").tokens) == std::vector<std::string>{"FOUR", "TH"});
}

TEST_CASE("spell_number agrees with the reference speller on 0..10000") {
  for (int n = 0; n <= 10000; ++n) {
    REQUIRE_MESSAGE(spell_number(std::to_string(n)) == reference_spelling(n), n);
  }
}

TEST_CASE("spell_number: frozen values and the digit-by-digit cutoff") {
  using V = std::vector<std::string>;
  CHECK(spell_number("0") == V{"ZERO"});
  CHECK(spell_number("110") == V{"ONE", "HUNDRED", "TEN"});
  CHECK(spell_number("999999") ==
        V{"NINE", "HUNDRED", "NINETY", "NINE", "THOUSAND", "NINE", "HUNDRED", "NINETY", "NINE"});
  CHECK(spell_number("120000") == V{"ONE", "HUNDRED", "TWENTY", "THOUSAND"});
  CHECK(spell_number("1000000") == V{"ONE", "ZERO", "ZERO", "ZERO", "ZERO", "ZERO", "ZERO"});
  CHECK(spell_number("007") == V{"SEVEN"});
}

TEST_CASE("normalize_text is idempotent on its own words") {
  for (const char* input : {"Hello, world.", "The quick brown fox; 1999 jumps!", "it's 42 o'clock", "x-ray 7,250"}) {
    const auto once = normalize_text(input);
    std::string joined;
    std::vector<Token> words;
    for (const auto& t : once.tokens) {
      if (t.kind != Token::Kind::Word) continue;
      joined += t.text + " ";
      words.push_back(t);
    }
    CHECK(normalize_text(joined).tokens == words);
  }
}

TEST_CASE("transcribe") {
  const auto dict = parse_pronouncing_dict(read_file(data_path("mini.dict")));
  CHECK(transcribe({Token::word("ME")}, dict) == std::vector<PhoneUnit>{cons("M"), vowel("IY", Stress::Primary)});
  CHECK(transcribe({Token::pause()}, dict) == std::vector<PhoneUnit>{PhoneUnit::silence()});
  // first variant wins
  CHECK(format_pronunciation(transcribe({Token::word("READ")}, dict)) == "R EH1 D");

  try {
    transcribe({Token::word("QZX")}, dict);
    FAIL("expected out-of-vocabulary error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfVocabulary);
    CHECK(std::string(e.what()).find("QZX") != std::string::npos);
  }
  CHECK_THROWS_AS(transcribe({Token::word("ME")}, PronouncingDictionary{}), Error);
}

TEST_CASE("transcribe: output length is pronunciation lengths plus pauses") {
  const auto dict = parse_pronouncing_dict(read_file(repo_data_path("lexicon/english.dict")));
  const auto tokens = normalize_text("Hello, world. The quick brown fox; jumps over the lazy dog, 25 times?!").tokens;
  std::vector<Token> known;
  std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(known),
               [&](const Token& t) { return t.kind == Token::Kind::Pause || dict.find(t.text); });
  std::size_t expected = 0;
  for (const auto& t : known) expected += t.kind == Token::Kind::Pause ? 1 : dict.find(t.text)->front().size();
  CHECK(transcribe(known, dict).size() == expected);
}

namespace {

// Every split of the syllable into a table initial and a table final, by brute force.
std::vector<PinyinSyllable> all_splits(const std::string& s) {
  std::vector<PinyinSyllable> out;
  if (is_pinyin_final(s)) out.push_back({std::nullopt, s, std::nullopt});
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (is_pinyin_initial(s.substr(0, k)) && is_pinyin_final(s.substr(k)))
      out.push_back({s.substr(0, k), s.substr(k), std::nullopt});
  }
  return out;
}

}  // namespace

TEST_CASE("segment_pinyin examples") {
  CHECK(segment_pinyin("an") == PinyinSyllable{std::nullopt, "an", std::nullopt});
  CHECK(segment_pinyin("ma") == PinyinSyllable{"m", "a", std::nullopt});
  CHECK(segment_pinyin("zhuang1") == PinyinSyllable{"zh", "uang", 1});
  CHECK(segment_pinyin("zhang1") == PinyinSyllable{"zh", "ang", 1});
  CHECK(segment_pinyin("ni3") == PinyinSyllable{"n", "i", 3});
  CHECK(segment_pinyin("hao") == PinyinSyllable{"h", "ao", std::nullopt});
  CHECK(segment_pinyin("a1") == PinyinSyllable{std::nullopt, "a", 1});
  CHECK(segment_pinyin("de5").tone == 0);
  CHECK(segment_pinyin("er2") == PinyinSyllable{std::nullopt, "er", 2});
  CHECK(segment_pinyin("lve4") == PinyinSyllable{"l", "ve", 4});
  for (const char* bad : {"", "xyz", "zh", "Ni3", "ni6", "b"}) {
    CHECK_THROWS_AS(segment_pinyin(bad), Error);
  }
}

TEST_CASE("segment_pinyin: whole table splits, with the longest initial winning") {
  const auto table = load_pinyin_table(repo_data_path("pinyin_syllables.txt"));
  CHECK(table.size() >= 386);
  std::set<std::string> unique(table.begin(), table.end());
  CHECK(unique.size() == table.size());
  for (const auto& syl : table) {
    const auto splits = all_splits(syl);
    REQUIRE_MESSAGE(!splits.empty(), syl);
    // the split with the longest initial, where no initial counts as length 0
    const auto best = *std::max_element(splits.begin(), splits.end(), [](const auto& a, const auto& b) {
      return a.initial.value_or("").size() < b.initial.value_or("").size();
    });
    const auto got = segment_pinyin(syl);
    CHECK_MESSAGE(got == best, syl);
    CHECK(got.toneless() == syl);
    for (int tone = 0; tone <= 4; ++tone) {
      const auto toned = segment_pinyin(syl + std::to_string(tone));
      CHECK(toned.tone == tone);
      CHECK(toned.toneless() == syl);
    }
  }
}

TEST_CASE("transcribe_pinyin") {
  CHECK(transcribe_pinyin("ni hao") ==
        std::vector<PhoneUnit>{PhoneUnit::pinyin_initial("n"), PhoneUnit::pinyin_final("i"),
                               PhoneUnit::pinyin_initial("h"), PhoneUnit::pinyin_final("ao")});
  CHECK(transcribe_pinyin("ni3 hao3") == transcribe_pinyin("ni hao"));
  CHECK(transcribe_pinyin("a, o.") ==
        std::vector<PhoneUnit>{PhoneUnit::pinyin_final("a"), PhoneUnit::silence(), PhoneUnit::pinyin_final("o"),
                               PhoneUnit::silence()});
  CHECK(transcribe_pinyin("").empty());
  CHECK_THROWS_AS(transcribe_pinyin("ni qq"), Error);
}
