#include <doctest.h>

#include <filesystem>
#include <set>

#include "motedit/denoiser.hpp"
#include "motedit/io.hpp"
#include "motedit/training.hpp"

using namespace motedit;

namespace {

DenoiserConfig tiny_config() {
  DenoiserConfig c;
  c.d_model = 16;
  c.layers = 1;
  c.heads = 2;
  c.d_ff = 32;
  c.max_frames = 64;
  c.vocab_size = 16;
  return c;
}

nn::MatT<float> random_feat(int frames, std::uint64_t seed) {
  Rng rng(seed);
  nn::MatT<float> m(frames, kFeatureDim);
  for (int r = 0; r < frames; ++r)
    for (int c = 0; c < kFeatureDim; ++c)
      m(r, c) = static_cast<float>(rng.normal());
  return m;
}

}  // namespace

TEST_CASE("hashed text encoder") {
  const HashedTextEncoder enc(4096, 77);

  SUBCASE("empty string is the single null token") {
    const TextEncoding e = enc.encode("");
    REQUIRE(e.token_ids.size() == 1);
    CHECK(e.token_ids[0] == 0);
    CHECK(e.mask == std::vector<bool>{true});
  }
  SUBCASE("deterministic across calls") {
    const TextEncoding a = enc.encode("raise the arm much higher");
    const TextEncoding b = enc.encode("raise the arm much higher");
    CHECK(a.token_ids == b.token_ids);
    CHECK(a.token_ids.size() == 5);
  }
  SUBCASE("tokenizer lowercases and splits punctuation") {
    CHECK(HashedTextEncoder::tokenize("Walk, faster!") ==
          std::vector<std::string>{"walk", "faster"});
  }
  SUBCASE("no collisions across a benchmark-style vocabulary") {
    const std::vector<std::string> vocab = {
        "raise",  "lower",   "arm",      "arms",   "leg",     "legs",
        "left",   "right",   "higher",   "deeper", "faster",  "slower",
        "walk",   "walking", "circle",   "line",   "turn",    "turning",
        "wave",   "waving",  "squat",    "mirror", "reverse", "opposite",
        "speed",  "slow",    "quick",    "stop",   "earlier", "later",
        "start",  "much",    "slightly", "a",      "bit",     "more",
        "less",   "the",     "your",     "way",    "around",  "direction",
        "motion", "do",      "it",       "with",   "hand",    "wider",
        "deep",   "shallow", "small",    "big",    "bigger",  "smaller"};
    std::set<int> ids;
    for (const auto& w : vocab) ids.insert(enc.token_id(w));
    CHECK(ids.size() == vocab.size());
    for (int id : ids) CHECK(id > 0);
  }
  SUBCASE("over-long text is truncated, never fatal") {
    std::string many;
    for (int i = 0; i < 100; ++i) many += "w" + std::to_string(i) + " ";
    CHECK_THROWS_AS(enc.encode(std::string(600, 'a')), InvalidConfigError);
    const TextEncoding e = enc.encode(many.substr(0, 500));
    CHECK(e.token_ids.size() <= 77);
  }
}

TEST_CASE("frozen text encoder adapter") {
  namespace fsys = std::filesystem;
  const std::string dir = "frozen_enc_test";
  fsys::create_directories(dir);
  // Two cached texts with 4-token, 8-dim embeddings.
  std::vector<float> payload(4 * 8);
  for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = 0.01f * i;
  save_array_f32(dir + "/a.marr", {4, 8}, payload);
  for (auto& v : payload) v += 1.0f;
  save_array_f32(dir + "/b.marr", {4, 8}, payload);
  atomic_write(dir + "/texts.tsv", "raise the arm\ta.marr\nlower the arm\tb.marr\n");

  const FrozenTextEncoder enc(dir, 77);
  CHECK(enc.dim() == 8);
  const TextEncoding a = enc.encode("raise the arm");
  CHECK(a.frozen());
  CHECK(a.length() == 4);
  CHECK(a.embeddings(0, 1) == doctest::Approx(0.01));
  // Null condition stays a learned token id, not a frozen row.
  const TextEncoding null_enc = enc.encode("");
  CHECK_FALSE(null_enc.frozen());
  CHECK(null_enc.token_ids == std::vector<int>{0});
  CHECK_THROWS_AS(enc.encode("unknown text"), InvalidConfigError);

  // The denoiser accepts the adapter when text_dim matches.
  DenoiserConfig cfg = tiny_config();
  cfg.text_dim = 8;
  cfg.max_text_tokens = 77;
  TmedDenoiser model(cfg, 5);
  model.set_text_encoder(std::make_unique<FrozenTextEncoder>(dir, 77));
  const MatX x = random_feat(5, 3).cast<double>();
  const std::string text = "raise the arm";
  const MatX out = model.predict_x0(x, 2, &text, nullptr);
  CHECK(out.rows() == 5);
  fsys::remove_all(dir);
}

TEST_CASE("timestep embedding is deterministic and injective over [0,300]") {
  const TmedDenoiserT<float> model(tiny_config(), 9);
  std::vector<nn::MatT<float>> embs;
  for (int t = 0; t <= 300; ++t) embs.push_back(model.timestep_embedding(t));
  const nn::MatT<float> again = model.timestep_embedding(150);
  CHECK((again.array() == embs[150].array()).all());
  for (int a = 0; a <= 300; ++a) {
    for (int b = a + 1; b <= 300; b += 7) {  // pairwise-distinctness scan
      CHECK((embs[a] - embs[b]).norm() > 0.0f);
    }
  }
}

TEST_CASE("denoiser forward contracts") {
  const TmedDenoiserT<float> model(tiny_config(), 11);
  const HashedTextEncoder enc(16, 77);
  const TextEncoding text = enc.encode("raise the arm");

  SUBCASE("output shape matches the target for any frame combination") {
    for (auto [fs, ft] : std::vector<std::pair<int, int>>{{5, 8}, {20, 3}, {0, 12}}) {
      const nn::MatT<float> x = random_feat(ft, 1000 + ft);
      std::optional<nn::MatT<float>> src;
      if (fs > 0) src = random_feat(fs, 2000 + fs);
      const nn::MatT<float> out =
          model.predict(x, 3, &text, src ? &*src : nullptr);
      CHECK(out.rows() == ft);
      CHECK(out.cols() == kFeatureDim);
    }
  }
  SUBCASE("frame overflow is rejected") {
    const nn::MatT<float> x = random_feat(65, 5);
    CHECK_THROWS_AS(model.predict(x, 1, &text, nullptr), InvalidConfigError);
  }
  SUBCASE("null source differs from zero source frames") {
    const nn::MatT<float> x = random_feat(6, 7);
    const nn::MatT<float> zeros = nn::MatT<float>::Zero(6, kFeatureDim);
    const nn::MatT<float> a = model.predict(x, 2, &text, nullptr);
    const nn::MatT<float> b = model.predict(x, 2, &text, &zeros);
    CHECK((a - b).cwiseAbs().maxCoeff() > 1e-6f);
  }
}

TEST_CASE("padding-only text positions do not affect the output") {
  DenoiserConfig cfg = tiny_config();
  cfg.text_dim = 8;
  cfg.max_text_tokens = 77;
  const TmedDenoiserT<double> model(cfg, 13);

  Rng rng(55);
  TextEncoding text;
  text.embeddings.resize(6, 8);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 8; ++c) text.embeddings(r, c) = rng.normal();
  text.mask = {true, true, true, false, false, false};

  const nn::MatT<double> x = random_feat(5, 17).cast<double>();
  const nn::MatT<double> base = model.predict(x, 4, &text, nullptr);

  // Permute and rewrite the padded rows; the masked keys must not leak.
  TextEncoding permuted = text;
  permuted.embeddings.row(3) = text.embeddings.row(5);
  permuted.embeddings.row(5) = text.embeddings.row(3);
  permuted.embeddings.row(4).setConstant(42.0);
  const nn::MatT<double> out = model.predict(x, 4, &permuted, nullptr);
  CHECK((out - base).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("parameter count matches the config formula exactly") {
  const DenoiserConfig c = tiny_config();
  const TmedDenoiserT<float> model(c, 3);
  const int d = c.d_model;
  const std::int64_t embed = static_cast<std::int64_t>(c.vocab_size) * d + d;  // table + SEP
  const std::int64_t timestep = 2 * (d * d + d);
  const std::int64_t motion_io = kFeatureDim * d + d + d * kFeatureDim + kFeatureDim;
  const std::int64_t per_layer = 4 * (d * d + d)          // attention q,k,v,out
                                 + 2 * 2 * d              // two layer norms
                                 + d * c.d_ff + c.d_ff    // ff1
                                 + c.d_ff * d + d;        // ff2
  const std::int64_t final_ln = 2 * d;
  const std::int64_t expect =
      embed + timestep + motion_io + c.layers * per_layer + final_ln;
  CHECK(model.param_count() == expect);
  CHECK(model.param_count() <= 10000);  // the gradient-check model stays tiny
}

TEST_CASE("checkpoint reload reproduces outputs bitwise") {
  DenoiserConfig cfg = tiny_config();
  TmedDenoiser model(cfg, 21);
  FeatureStats stats;
  stats.mean = VecX::Constant(kFeatureDim, 0.25);
  stats.std = VecX::Constant(kFeatureDim, 1.5);
  stats.count = 77;
  stats.constant_dims.assign(kFeatureDim, false);
  stats.constant_dims[3] = true;

  const std::string path = "ckpt_test.medc";
  save_checkpoint(path, "tmed", model, 300, 20.0, {2.0, 2.0}, stats);
  const Checkpoint ck = load_checkpoint(path);
  std::filesystem::remove(path);

  CHECK(ck.kind == "tmed");
  CHECK(ck.schedule_steps == 300);
  CHECK(ck.stats.count == 77);
  CHECK(ck.stats.constant_dims[3]);
  CHECK((ck.stats.mean - stats.mean).norm() == 0.0);

  const MatX x = random_feat(7, 31).cast<double>();
  const MatX src = random_feat(4, 33).cast<double>();
  const std::string text = "turn around";
  const MatX a = model.predict_x0(x, 5, &text, &src);
  const MatX b = ck.model->predict_x0(x, 5, &text, &src);
  CHECK((a.array() == b.array()).all());
}

TEST_CASE("training-loss gradient matches finite differences to 1e-3") {
  // Double-precision tiny model; 100 random parameter coordinates.
  DenoiserConfig cfg = tiny_config();
  TmedDenoiserT<double> model(cfg, 77);
  REQUIRE(model.param_count() <= 10000);

  const NoiseSchedule sched = cosine_schedule(20);
  const HashedTextEncoder enc(cfg.vocab_size, 77);
  const TextEncoding text = enc.encode("bend lower");
  const nn::MatT<double> target = random_feat(5, 41).cast<double>();
  const nn::MatT<double> source = random_feat(4, 43).cast<double>();
  const nn::MatT<double> eps = random_feat(5, 47).cast<double>();
  const int t = 7;

  auto loss_value = [&]() {
    nn::Tape<double> tape(model.params().size());
    return build_training_loss<double>(tape, model, target, &source, &text, t,
                                       eps, sched)
        ->val(0, 0);
  };

  nn::Tape<double> tape(model.params().size());
  nn::Node<double>* loss =
      build_training_loss<double>(tape, model, target, &source, &text, t, eps, sched);
  tape.backward(loss);

  Rng rng(4242);
  auto& ps = model.params();
  const double h = 1e-4;
  int checked = 0;
  double worst = 0.0;
  while (checked < 100) {
    const std::size_t pi = rng.uniform_int(ps.size());
    nn::Param<double>& p = ps[pi];
    if (p.w.size() == 0) continue;
    const Eigen::Index k = static_cast<Eigen::Index>(rng.uniform_int(p.w.size()));
    const double orig = p.w.data()[k];
    p.w.data()[k] = orig + h;
    const double fp = loss_value();
    p.w.data()[k] = orig - h;
    const double fm = loss_value();
    p.w.data()[k] = orig;
    const double num = (fp - fm) / (2 * h);
    const double ana = tape.param_grads[pi].size() > 0 ? tape.param_grads[pi].data()[k] : 0.0;
    const double rel =
        std::abs(num - ana) / std::max({std::abs(num), std::abs(ana), 1e-8});
    worst = std::max(worst, rel);
    ++checked;
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("short training run decreases the loss") {
  DenoiserConfig cfg = tiny_config();
  cfg.d_model = 32;
  cfg.heads = 4;
  TmedDenoiser model(cfg, 5);
  const NoiseSchedule sched = cosine_schedule(10);
  const HashedTextEncoder enc(cfg.vocab_size, 77);

  std::vector<TrainItem> items;
  Rng rng(9);
  for (int i = 0; i < 8; ++i) {
    TrainItem item;
    item.target = random_feat(6, 100 + i) * 0.05f;
    item.source = random_feat(6, 200 + i) * 0.05f;
    item.text = enc.encode(i % 2 == 0 ? "raise" : "lower");
    items.push_back(std::move(item));
  }
  TrainConfig tc;
  tc.steps = 60;
  tc.batch_size = 4;
  tc.lr = 1e-3;
  tc.seed = 1;
  tc.log_every = 30;
  const TrainReport report = train_denoiser(model, items, sched, tc);
  REQUIRE(report.step_losses.size() == 2);
  CHECK(report.step_losses.back() < report.step_losses.front());
}
