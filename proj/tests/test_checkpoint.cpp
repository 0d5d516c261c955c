#include <doctest.h>

#include <fstream>

#include "cloze/checkpoint.hpp"
#include "cloze/error.hpp"
#include "cloze/model_io.hpp"
#include "test_support.hpp"

using namespace cloze;
using namespace cloze::test;

TEST_CASE("checkpoint round trip preserves values and meta (both precisions)") {
  TempDir tmp("ckpt");
  for (const char* precision : {"f32", "f64"}) {
    Checkpoint ckpt;
    ckpt.precision = precision;
    ckpt.meta["note"] = "hello";
    Tensor<double> a(2, 3);
    for (size_t i = 0; i < a.size(); ++i) a[i] = 0.5 * static_cast<double>(i) - 1.0;
    Tensor<double> b(4);
    for (size_t i = 0; i < b.size(); ++i) b[i] = static_cast<double>(i) * 0.25;
    ckpt.add_tensor("a", a);
    ckpt.add_tensor("b", b);
    const auto path = tmp.path(std::string("x_") + precision + ".ckpt");
    save_checkpoint(path, ckpt);
    auto back = load_checkpoint(path);
    CHECK(back.precision == precision);
    CHECK(back.meta.at("note") == "hello");
    REQUIRE(back.names == std::vector<std::string>{"a", "b"});
    Tensor<double> a2(2, 3), b2(4);
    back.read_tensor("a", a2);
    back.read_tensor("b", b2);
    for (size_t i = 0; i < a.size(); ++i) CHECK(a2[i] == a[i]);
    for (size_t i = 0; i < b.size(); ++i) CHECK(b2[i] == b[i]);
  }
}

TEST_CASE("bad magic fails loudly") {
  TempDir tmp("ckpt_magic");
  const auto path = tmp.path("bad.ckpt");
  write_file(path, "NOTLB-whatever");
  try {
    load_checkpoint(path);
    FAIL("expected VerifyError");
  } catch (const VerifyError& e) {
    CHECK(std::string(e.what()).find("magic") != std::string::npos);
  }
}

TEST_CASE("truncated checkpoints report the offset and entry") {
  TempDir tmp("ckpt_trunc");
  Checkpoint ckpt;
  ckpt.precision = "f64";
  Tensor<double> a(8);
  for (size_t i = 0; i < 8; ++i) a[i] = static_cast<double>(i);
  ckpt.add_tensor("weights", a);
  const auto path = tmp.path("full.ckpt");
  save_checkpoint(path, ckpt);
  auto bytes = read_file(path);
  write_file(tmp.path("cut.ckpt"), bytes.substr(0, bytes.size() - 20));
  try {
    load_checkpoint(tmp.path("cut.ckpt"));
    FAIL("expected VerifyError");
  } catch (const VerifyError& e) {
    const std::string what = e.what();
    CHECK(what.find("offset") != std::string::npos);
    CHECK(what.find("weights") != std::string::npos);
  }
  // trailing garbage is also refused
  write_file(tmp.path("fat.ckpt"), bytes + "xx");
  CHECK_THROWS_AS(load_checkpoint(tmp.path("fat.ckpt")), VerifyError);
}

TEST_CASE("reader checkpoints are self-contained and type-checked") {
  TempDir tmp("ckpt_reader");
  Instance inst = make_instance({"alpha beta gamma ."}, "one two three beta");
  Vocabulary vocab = Vocabulary::build({inst});
  ReaderConfig cfg;
  cfg.kind = ReaderKind::GatedAttention;
  cfg.embed_dim = 6;
  cfg.hidden_dim = 4;
  cfg.ga_hops = 2;
  cfg.use_features = true;
  ReaderParams<float> params = ReaderParams<float>::create(cfg, vocab.size());
  params.init(9);
  const auto path = tmp.path("reader.ckpt");
  nlohmann::ordered_json extra;
  extra["epoch"] = 3;
  save_reader_checkpoint(path, params, vocab, extra);

  const Checkpoint ckpt = load_checkpoint(path);
  const auto meta = read_reader_meta(ckpt);
  CHECK(meta.config.kind == ReaderKind::GatedAttention);
  CHECK(meta.config.use_features);
  CHECK(meta.vocab.size() == vocab.size());
  CHECK(meta.vocab.token(3) == vocab.token(3));
  CHECK(meta.extra.at("epoch") == 3);
  auto loaded = reader_params_from_checkpoint<float>(ckpt, meta);
  for (size_t i = 0; i < params.embeddings.size(); ++i)
    CHECK(loaded.embeddings[i] == params.embeddings[i]);
  CHECK(loaded.doc_fwd.size() == 2);

  // precision mismatch fails loudly
  CHECK_THROWS_AS(reader_params_from_checkpoint<double>(ckpt, meta), VerifyError);

  // shape mismatch fails loudly
  auto meta_small = meta;
  meta_small.config.hidden_dim = 3;
  CHECK_THROWS_AS(reader_params_from_checkpoint<float>(ckpt, meta_small),
                  VerifyError);

  // a non-reader checkpoint is rejected up front
  Checkpoint other;
  other.precision = "f32";
  other.meta["artifact"] = "train-state";
  CHECK_THROWS_AS(read_reader_meta(other), VerifyError);
}
