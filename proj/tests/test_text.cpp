#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "longsum/text.hpp"

using namespace longsum;

namespace {

std::vector<std::string> norms_of(const std::string& text) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(text)) out.push_back(t.norm);
  return out;
}

std::vector<std::string> surfaces_of(const std::string& text) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(text)) out.push_back(t.surface);
  return out;
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!is_space(c)) out += c;
  return out;
}

}  // namespace

TEST_CASE("tokenize splits on non-alphanumeric runs and lowercases norms") {
  CHECK(surfaces_of("The cat's 2nd-best friend!") ==
        std::vector<std::string>{"The", "cat", "s", "2nd", "best", "friend"});
  CHECK(norms_of("The cat's 2nd-best friend!") ==
        std::vector<std::string>{"the", "cat", "s", "2nd", "best", "friend"});
}

TEST_CASE("tokenize edge cases") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("...!?--").empty());
  CHECK(norms_of("don't") == std::vector<std::string>{"don", "t"});
  CHECK(norms_of("x") == std::vector<std::string>{"x"});
  CHECK(norms_of("a1b2") == std::vector<std::string>{"a1b2"});
  // Non-ASCII bytes act as separators.
  CHECK(norms_of("caf\xc3\xa9 au lait") ==
        std::vector<std::string>{"caf", "au", "lait"});
}

TEST_CASE("tokenize property: norms are lowercase, non-empty word chars") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> len(0, 60);
  std::uniform_int_distribution<int> byte(32, 126);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    int n = len(rng);
    for (int i = 0; i < n; ++i) text += static_cast<char>(byte(rng));
    for (const Token& t : tokenize(text)) {
      REQUIRE(!t.norm.empty());
      for (char c : t.norm) {
        REQUIRE(is_word_char(c));
        REQUIRE(c == ascii_lower(c));
      }
      REQUIRE(ascii_lower_copy(t.surface) == t.norm);
    }
  }
}

TEST_CASE("segment_sentences splits on terminators before whitespace") {
  CHECK(segment_sentences("It works. Done.") ==
        std::vector<std::string>{"It works.", "Done."});
  CHECK(segment_sentences("Really? Yes! Fine.") ==
        std::vector<std::string>{"Really?", "Yes!", "Fine."});
  CHECK(segment_sentences("no terminator here") ==
        std::vector<std::string>{"no terminator here"});
  CHECK(segment_sentences("   ").empty());
  CHECK(segment_sentences("").empty());
}

TEST_CASE("segment_sentences does not split inside numbers or tight dots") {
  CHECK(segment_sentences("Pi is 3.14 roughly.") ==
        std::vector<std::string>{"Pi is 3.14 roughly."});
  CHECK(segment_sentences("visit example.com today") ==
        std::vector<std::string>{"visit example.com today"});
}

TEST_CASE("segment_sentences honours abbreviation guards") {
  CHECK(segment_sentences("Dr. Smith arrived. He sat (see Fig. 2). Done!") ==
        std::vector<std::string>{"Dr. Smith arrived.",
                                 "He sat (see Fig. 2).", "Done!"});
  CHECK(segment_sentences("Smith et al. proved it. QED.") ==
        std::vector<std::string>{"Smith et al. proved it.", "QED."});
  CHECK(segment_sentences("i.e. the rest.") ==
        std::vector<std::string>{"i.e. the rest."});
  // Guard must sit at a word boundary: "focal." is not the guard "al.".
  CHECK(segment_sentences("use the focal. point follows.") ==
        std::vector<std::string>{"use the focal.", "point follows."});
}

TEST_CASE("segment_sentences preserves every non-space character in order") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len(0, 120);
  const std::string alphabet = "abcDE .?!,135\t\n(.)";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    int n = len(rng);
    for (int i = 0; i < n; ++i) text += alphabet[pick(rng)];
    std::string joined;
    for (const std::string& seg : segment_sentences(text)) {
      REQUIRE(!seg.empty());
      REQUIRE(seg == std::string(trim_view(seg)));
      joined += seg;
    }
    REQUIRE(strip_spaces(joined) == strip_spaces(text));
  }
}

TEST_CASE("builtin stopword list has the documented shape") {
  const StopwordList& stops = StopwordList::builtin();
  CHECK(stops.size() == 179);
  CHECK(stops.contains("the"));
  CHECK(stops.contains("i"));
  CHECK(stops.contains("don"));
  CHECK(stops.contains("t"));
  CHECK_FALSE(stops.contains("cat"));
  CHECK_FALSE(stops.contains("matter"));
}

TEST_CASE("stopword hash is order-insensitive and content-sensitive") {
  StopwordList ab({"alpha", "beta"});
  StopwordList ba({"beta", "alpha"});
  StopwordList abc({"alpha", "beta", "gamma"});
  CHECK(ab.content_hash() == ba.content_hash());
  CHECK(ab.content_hash() != abc.content_hash());
  CHECK(ab.content_hash_hex().size() == 16);
  // Same content loaded twice hashes identically.
  CHECK(StopwordList::builtin().content_hash() ==
        StopwordList::builtin().content_hash());
}

TEST_CASE("stopword list file loading skips comments and lowercases") {
  StopwordList custom = StopwordList::from_file(
      std::string(LONGSUM_FIXTURE_DIR) + "/stopwords_custom.txt");
  CHECK(custom.size() == 4);
  CHECK(custom.contains("the"));
  CHECK(custom.contains("of"));
  CHECK_FALSE(custom.contains("cat"));
  CHECK_THROWS_AS(StopwordList::from_file("/nonexistent/stops.txt"),
                  DataError);
}

TEST_CASE("remove_stopwords keeps order and drops exact norms") {
  std::vector<Token> tokens = tokenize("The cat and the dog");
  std::vector<Token> kept = remove_stopwords(tokens, StopwordList::builtin());
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].norm == "cat");
  CHECK(kept[1].norm == "dog");
  // Empty list removes nothing.
  CHECK(remove_stopwords(tokens, StopwordList::none()).size() ==
        tokens.size());
}

TEST_CASE("documents carry sentences, indices and optional references") {
  Document doc = make_document("d", {"one two .", "three four five ."},
                               {"three one ."});
  REQUIRE(doc.sentences.size() == 2);
  CHECK(doc.sentences[0].index == 0);
  CHECK(doc.sentences[1].index == 1);
  CHECK(doc.sentences[1].tokens.size() == 3);
  CHECK(doc.has_reference());
  Document bare = make_document("b", {"just text ."});
  CHECK_FALSE(bare.has_reference());
}

TEST_CASE("flatten_norms and join_sentences") {
  Document doc = make_document("d", {"One two.", "Three."});
  CHECK(flatten_norms(doc.sentences) ==
        std::vector<std::string>{"one", "two", "three"});
  CHECK(join_sentences(doc.sentences) == "One two. Three.");
  CHECK(join_sentences({}).empty());
}
