#include <doctest.h>

#include <cmath>

#include "cloze/builder.hpp"
#include "cloze/candidates.hpp"
#include "cloze/error.hpp"
#include "cloze/text.hpp"
#include "test_support.hpp"

using namespace cloze;
using namespace cloze::test;

namespace {

// n_words filler words plus a terminator; filler tokens are unique per
// (tag, index) so answer-in-context is fully controlled by the test.
Sentence filler_sentence(const std::string& tag, size_t n_words) {
  Sentence s;
  for (size_t i = 0; i < n_words; ++i) s.push_back(tag + std::to_string(i));
  s.push_back(".");
  return s;
}

Document doc_of(const std::string& id, std::vector<Sentence> sentences) {
  return Document{id, std::move(sentences)};
}

}  // namespace

TEST_CASE("extract_candidates excludes punctuation and keeps positions") {
  Instance inst = make_instance({"Mary went home .", "She slept ."}, "a b X");
  auto cs = extract_candidates(inst, punctuation());
  REQUIRE(cs.size() == 5);
  CHECK(cs.entries()[0].token == "Mary");
  CHECK(cs.entries()[0].positions == std::vector<size_t>{0});
  CHECK(cs.entries()[1].positions == std::vector<size_t>{1});
  CHECK(cs.entries()[2].positions == std::vector<size_t>{2});
  CHECK(cs.entries()[3].token == "She");
  CHECK(cs.entries()[3].positions == std::vector<size_t>{4});
  CHECK(cs.entries()[4].token == "slept");
  CHECK(cs.entries()[4].positions == std::vector<size_t>{5});
  CHECK(!cs.contains("."));
}

TEST_CASE("extract_candidates records repeated positions") {
  Instance inst = make_instance({"a a b"}, "x y a");
  auto cs = extract_candidates(inst, punctuation());
  REQUIRE(cs.size() == 2);
  CHECK(cs.entries()[0].token == "a");
  CHECK(cs.entries()[0].positions == std::vector<size_t>{0, 1});
  CHECK(cs.entries()[1].token == "b");
  CHECK(cs.entries()[1].positions == std::vector<size_t>{2});
}

TEST_CASE("extract_candidates rejects all-punctuation contexts") {
  Instance inst = make_instance({". . .", ". ."}, "x y z");
  CHECK_THROWS_AS(extract_candidates(inst, punctuation()), DataError);
}

TEST_CASE("candidate positions index the flattened context (property)") {
  Rng rng(5);
  for (int iter = 0; iter < 100; ++iter) {
    Instance inst = random_instance(rng);
    auto flat = flatten_context(inst);
    auto cs = extract_candidates(inst, punctuation());
    for (const auto& e : cs.entries()) {
      CHECK(!e.positions.empty());
      for (size_t k = 0; k < e.positions.size(); ++k) {
        CHECK(flat[e.positions[k]] == e.token);
        if (k) CHECK(e.positions[k] > e.positions[k - 1]);
      }
    }
  }
}

TEST_CASE("builder: 49-word context is rejected, 50 accepted") {
  // Four sentences totaling 49 tokens force the 5-sentence extension, and
  // with no sixth sentence left as a target nothing is emitted.
  std::vector<Sentence> shorts = {
      filler_sentence("a", 12), filler_sentence("b", 12),
      filler_sentence("c", 12), filler_sentence("d", 9)};  // 13+13+13+10 = 49
  Sentence target = tokenize_whitespace("t0 t1 t2 t3 t4 t5 t6 t7 t8 t9 a0 .");
  auto corpus49 = std::vector<Document>{doc_of("d49", {shorts[0], shorts[1],
                                                       shorts[2], shorts[3],
                                                       target})};
  CHECK(build_instances(corpus49, punctuation()).empty());

  // One more token tips the four-sentence window to 50.
  auto longer = shorts;
  longer[3] = filler_sentence("d", 10);  // 13+13+13+11 = 50
  auto corpus50 = std::vector<Document>{doc_of("d50", {longer[0], longer[1],
                                                       longer[2], longer[3],
                                                       target})};
  auto out = build_instances(corpus50, punctuation());
  REQUIRE(out.size() == 1);
  CHECK(out[0].context.size() == 4);
  CHECK(out[0].target_word == "a0");
  CHECK(context_token_count(out[0]) == 50);
  CHECK(answer_in_context(out[0]));
}

TEST_CASE("builder: target sentence must exceed 10 words") {
  std::vector<Sentence> ctx = {filler_sentence("a", 13), filler_sentence("b", 13),
                               filler_sentence("c", 13), filler_sentence("d", 13)};
  // 10 words after stripping the trailing terminator: rejected.
  Sentence t10 = tokenize_whitespace("t0 t1 t2 t3 t4 t5 t6 t7 t8 a0 .");
  auto corpus = std::vector<Document>{doc_of("d", {ctx[0], ctx[1], ctx[2], ctx[3], t10})};
  CHECK(build_instances(corpus, punctuation()).empty());

  Sentence t11 = tokenize_whitespace("t0 t1 t2 t3 t4 t5 t6 t7 t8 t9 a0 .");
  corpus = {doc_of("d", {ctx[0], ctx[1], ctx[2], ctx[3], t11})};
  auto out = build_instances(corpus, punctuation());
  REQUIRE(out.size() == 1);
  CHECK(out[0].target_sentence.size() == 11);
  CHECK(out[0].target_word == "a0");
}

TEST_CASE("builder: target word must occur in the context") {
  std::vector<Sentence> ctx = {filler_sentence("a", 13), filler_sentence("b", 13),
                               filler_sentence("c", 13), filler_sentence("d", 13)};
  Sentence absent = tokenize_whitespace("t0 t1 t2 t3 t4 t5 t6 t7 t8 t9 zzz .");
  auto corpus = std::vector<Document>{
      doc_of("d", {ctx[0], ctx[1], ctx[2], ctx[3], absent})};
  CHECK(build_instances(corpus, punctuation()).empty());
}

TEST_CASE("builder emits exactly the hand-enumerated windows of a 7-sentence doc") {
  // Sentence token counts: S0..S3 have 15, S4..S6 have 13 (with terminator).
  // Start 0: context S0..S3 (60 tokens), target S4 ends in a0 (present) -> emit.
  // Start 1: context S1..S4 (58 tokens), target S5 ends in zzz (absent) -> skip.
  // Start 2: context S2..S5 (56 tokens), target S6 ends in c0 (present) -> emit.
  std::vector<Sentence> s = {
      filler_sentence("a", 14), filler_sentence("b", 14),
      filler_sentence("c", 14), filler_sentence("d", 14),
      tokenize_whitespace("t0 t1 t2 t3 t4 t5 t6 t7 t8 t9 t10 a0 ."),
      tokenize_whitespace("u0 u1 u2 u3 u4 u5 u6 u7 u8 u9 u10 zzz ."),
      tokenize_whitespace("v0 v1 v2 v3 v4 v5 v6 v7 v8 v9 v10 c0 .")};
  auto corpus = std::vector<Document>{doc_of("seven", s)};
  auto out = build_instances(corpus, punctuation());
  REQUIRE(out.size() == 2);
  CHECK(out[0].id == "seven:0");
  CHECK(out[0].context.size() == 4);
  CHECK(out[0].target_word == "a0");
  CHECK(out[1].id == "seven:2");
  CHECK(out[1].target_word == "c0");
  // every emitted training instance carries the answer in context
  for (const auto& inst : out) CHECK(answer_in_context(inst));
}

TEST_CASE("builder strips the trailing punctuation run from targets") {
  std::vector<Sentence> ctx = {filler_sentence("a", 13), filler_sentence("b", 13),
                               filler_sentence("c", 13), filler_sentence("d", 13)};
  Sentence quoted = tokenize_whitespace("t0 t1 t2 t3 t4 t5 t6 t7 t8 t9 a0 . ''");
  auto corpus = std::vector<Document>{doc_of("d", {ctx[0], ctx[1], ctx[2], ctx[3], quoted})};
  auto out = build_instances(corpus, punctuation());
  REQUIRE(out.size() == 1);
  CHECK(out[0].target_word == "a0");
  CHECK(out[0].target_sentence.back() == "a0");
}

namespace {

std::vector<Document> control_corpus() {
  // 12 sentences of 13 tokens each; plenty of structural windows.
  std::vector<Sentence> s;
  for (int i = 0; i < 12; ++i)
    s.push_back(filler_sentence("s" + std::to_string(i) + "_", 12));
  return {doc_of("ctrl", s)};
}

}  // namespace

TEST_CASE("sample_control determinism and errors") {
  auto corpus = control_corpus();
  CHECK_THROWS_AS(sample_control(corpus, punctuation(), 0, 1), DataError);
  CHECK_THROWS_AS(sample_control(corpus, punctuation(), 100000, 1), DataError);
  auto a = sample_control(corpus, punctuation(), 3, 99);
  auto b = sample_control(corpus, punctuation(), 3, 99);
  REQUIRE(a.size() == 3);
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  auto c = sample_control(corpus, punctuation(), 3, 100);
  CHECK(a != c);  // different seed reshuffles (overwhelmingly likely)
  // control ignores the answer-in-context filter: these fillers never repeat
  for (const auto& inst : a) CHECK(!answer_in_context(inst));
}

TEST_CASE("split: sizes, determinism, partition") {
  std::vector<Instance> instances;
  Rng rng(17);
  for (int i = 0; i < 10; ++i)
    instances.push_back(random_instance(rng, 2, 3, "i" + std::to_string(i)));
  SplitSpec spec;
  spec.train_fraction = 0.8;
  spec.rng_seed = 5;
  auto [train, val] = split_instances(instances, spec);
  CHECK(train.size() == 8);
  CHECK(val.size() == 2);
  auto [train2, val2] = split_instances(instances, spec);
  CHECK(train == train2);
  CHECK(val == val2);
  // partition: union as multiset equals the input
  std::vector<std::string> ids;
  for (const auto& inst : train) ids.push_back(inst.id);
  for (const auto& inst : val) ids.push_back(inst.id);
  std::sort(ids.begin(), ids.end());
  std::vector<std::string> expected;
  for (const auto& inst : instances) expected.push_back(inst.id);
  std::sort(expected.begin(), expected.end());
  CHECK(ids == expected);
}

TEST_CASE("split: the default fraction reproduces the reference counts") {
  const double fraction = 1618782.0 / 1827123.0;
  const auto train_n =
      static_cast<size_t>(std::llround(fraction * 1827123.0));
  CHECK(train_n == 1618782u);
  CHECK(1827123u - train_n == 208341u);
  SplitSpec def;
  CHECK(def.train_fraction == doctest::Approx(fraction));
}

TEST_CASE("split by document keeps documents whole") {
  std::vector<Instance> instances;
  Rng rng(23);
  for (int d = 0; d < 6; ++d)
    for (int i = 0; i < 4; ++i) {
      auto inst = random_instance(rng, 2, 3, "doc" + std::to_string(d));
      inst.id = "doc" + std::to_string(d) + ":" + std::to_string(i);
      instances.push_back(inst);
    }
  SplitSpec spec;
  spec.train_fraction = 0.5;
  spec.rng_seed = 9;
  spec.by_document = true;
  auto [train, val] = split_instances(instances, spec);
  CHECK(train.size() + val.size() == instances.size());
  auto doc_of_id = [](const std::string& id) { return id.substr(0, id.find(':')); };
  std::unordered_set<std::string> train_docs, val_docs;
  for (const auto& inst : train) train_docs.insert(doc_of_id(inst.id));
  for (const auto& inst : val) val_docs.insert(doc_of_id(inst.id));
  for (const auto& d : train_docs) CHECK(!val_docs.count(d));
}

TEST_CASE("corpus_stats arithmetic") {
  std::vector<Instance> instances;
  instances.push_back(make_instance({"cat ran .", "dog sat ."}, "x y cat"));
  instances.push_back(make_instance({"cat ran .", "dog sat ."}, "x y dog"));
  instances.push_back(make_instance({"cat ran .", "dog sat ."}, "x y ran"));
  instances.push_back(make_instance({"cat ran .", "dog sat ."}, "x y zzz"));
  auto stats = corpus_stats(instances);
  CHECK(stats.instance_count == 4);
  CHECK(stats.answer_in_context_fraction == doctest::Approx(0.75));
  CHECK(stats.mean_context_sentences == doctest::Approx(2.0));
  CHECK(stats.mean_context_tokens == doctest::Approx(6.0));

  std::vector<Instance> one = {make_instance(
      {"a .", "b .", "c .", "d .", "e ."}, "x y a")};
  CHECK(corpus_stats(one).mean_context_sentences == doctest::Approx(5.0));

  CHECK_THROWS_AS(corpus_stats({}), DataError);
}

TEST_CASE("builder output is byte-identical across runs") {
  TempDir tmp("rebuild");
  std::filesystem::create_directories(tmp.path("corpus"));
  std::string text;
  for (int i = 0; i < 8; ++i) {
    for (int w = 0; w < 13; ++w) text += "w" + std::to_string(i) + "_" + std::to_string(w) + " ";
    text += ".\n";
  }
  // make later targets resolvable in context
  text += "x0 x1 x2 x3 x4 x5 x6 x7 x8 x9 x10 w4_0 .\n";
  write_file(tmp.path("corpus") + "/book.txt", text);

  auto run = [&](const std::string& out) {
    auto corpus = read_corpus_dir(tmp.path("corpus"));
    auto instances = build_instances(corpus, punctuation());
    write_instances(instances, tmp.path(out));
  };
  run("a.jsonl");
  run("b.jsonl");
  CHECK(read_file(tmp.path("a.jsonl")) == read_file(tmp.path("b.jsonl")));
  CHECK(!read_file(tmp.path("a.jsonl")).empty());
}
