#include <doctest.h>

#include "cloze/error.hpp"
#include "cloze/text.hpp"
#include "test_support.hpp"

using namespace cloze;
using namespace cloze::test;

TEST_CASE("split_sentences places boundaries after terminators") {
  auto s = split_sentences({"Hi", ".", "Go", "!"});
  REQUIRE(s.size() == 2);
  CHECK(s[0] == Sentence{"Hi", "."});
  CHECK(s[1] == Sentence{"Go", "!"});
}

TEST_CASE("split_sentences attaches closing quotes to the left sentence") {
  auto s = split_sentences({"He", "said", ".", "''", "Then", "left", "."});
  REQUIRE(s.size() == 2);
  CHECK(s[0] == Sentence{"He", "said", ".", "''"});
  CHECK(s[1] == Sentence{"Then", "left", "."});
}

TEST_CASE("split_sentences on empty input") {
  CHECK(split_sentences({}).empty());
}

TEST_CASE("split_sentences keeps a trailing unterminated sentence") {
  auto s = split_sentences({"John", "ran", ".", "He", "saw", "John"});
  REQUIRE(s.size() == 2);
  CHECK(s[1] == Sentence{"He", "saw", "John"});
}

TEST_CASE("split_sentences is a partition of the token stream") {
  Rng rng(7);
  const std::vector<Token> pool = {"a", "b",  "c", ".", "!",  "?",
                                   "''", ")", "d", "e", "said"};
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<Token> tokens;
    const size_t n = rng.below(30);
    for (size_t i = 0; i < n; ++i) tokens.push_back(pool[rng.below(pool.size())]);
    std::vector<Token> flat;
    for (const auto& sent : split_sentences(tokens))
      flat.insert(flat.end(), sent.begin(), sent.end());
    CHECK(flat == tokens);
  }
}

TEST_CASE("parse_passage_line basic") {
  auto inst = parse_passage_line("John ran . He saw John", punctuation(), "p1");
  CHECK(inst.target_word == "John");
  REQUIRE(inst.context.size() == 1);
  CHECK(inst.context[0] == Sentence{"John", "ran", "."});
  CHECK(inst.target_sentence == Sentence{"He", "saw", "John"});
  CHECK(answer_in_context(inst));
}

TEST_CASE("parse_passage_line rejects punctuation targets") {
  CHECK_THROWS_AS(parse_passage_line("John ran . He fell .", punctuation()),
                  DataError);
}

TEST_CASE("parse_passage_line rejects single-sentence and empty lines") {
  CHECK_THROWS_AS(parse_passage_line("Hello", punctuation()), DataError);
  CHECK_THROWS_AS(parse_passage_line("", punctuation()), DataError);
  CHECK_THROWS_AS(parse_passage_line("   ", punctuation()), DataError);
}

TEST_CASE("render then parse is the identity on valid instances") {
  Rng rng(11);
  for (int iter = 0; iter < 50; ++iter) {
    Instance inst = random_instance(rng, 3, 4, "rt");
    const std::string line = render_passage(inst);
    Instance back = parse_passage_line(line, punctuation(), "rt");
    CHECK(back.context == inst.context);
    CHECK(back.target_sentence == inst.target_sentence);
    CHECK(back.target_word == inst.target_word);
  }
}

TEST_CASE("instance jsonl round trip") {
  TempDir tmp("jsonl");
  std::vector<Instance> instances;
  Rng rng(3);
  for (int i = 0; i < 3; ++i)
    instances.push_back(random_instance(rng, 2, 4, "i" + std::to_string(i)));
  instances[1].labels = {"coreference", "single name cue"};
  const auto path = tmp.path("x.jsonl");
  write_instances(instances, path);
  auto back = read_instances(path);
  REQUIRE(back.size() == 3);
  for (size_t i = 0; i < 3; ++i) CHECK(back[i] == instances[i]);

  // rewriting what was read is byte-identical
  const auto path2 = tmp.path("y.jsonl");
  write_instances(back, path2);
  CHECK(read_file(path) == read_file(path2));
}

TEST_CASE("instance jsonl errors name the line") {
  TempDir tmp("jsonl_err");
  const auto path = tmp.path("bad.jsonl");
  write_file(path,
             R"({"id":"a","context":[["x","."]],"target_sentence":["y","z"],"target_word":"z"})"
             "\n"
             R"({"id":"b","context":[["x","."]],"target_sentence":["y","z"]})"
             "\n");
  InstanceReader reader(path);
  CHECK(reader.next().has_value());
  try {
    reader.next();
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
    CHECK(std::string(e.what()).find("target_word") != std::string::npos);
  }
}

TEST_CASE("instance jsonl rejects unknown labels and keys") {
  TempDir tmp("jsonl_lbl");
  const auto path = tmp.path("bad.jsonl");
  write_file(path,
             R"({"id":"a","context":[["x","."]],"target_sentence":["y","z"],"target_word":"z","labels":["not a label"]})"
             "\n");
  CHECK_THROWS_AS(read_instances(path), DataError);
  write_file(path,
             R"({"id":"a","context":[["x","."]],"target_sentence":["y","z"],"target_word":"z","extra":1})"
             "\n");
  CHECK_THROWS_AS(read_instances(path), DataError);
}

TEST_CASE("tokenization never alters tokens") {
  const std::string line = "The QUICK brown-FOX 's . It was FOX";
  auto inst = parse_passage_line(line, punctuation(), "case");
  CHECK(render_passage(inst) == line);
}
