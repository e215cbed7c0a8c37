#include "motedit/embedder.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <numeric>

#include <json.hpp>

#include "motedit/io.hpp"
#include "motedit/nn/adam.hpp"

namespace motedit {

MotionEmbedder::MotionEmbedder(const EmbedderConfig& cfg, std::uint64_t init_seed)
    : cfg_(cfg), tokenizer_(cfg.vocab_size, cfg.max_tokens) {
  cfg_.validate();
  stats_.mean = VecX::Zero(kFeatureDim);
  stats_.std = VecX::Ones(kFeatureDim);
  stats_.count = 0;
  stats_.constant_dims.assign(kFeatureDim, false);

  Rng rng(Rng::derive(init_seed, 0xE3BED));
  const int d = cfg_.d_model;
  token_table_ = &params_.add("token_table", cfg_.vocab_size, d);
  nn::gaussian_init(token_table_->w, rng, 0.02);
  motion_in_.init(params_, "motion_in", kFeatureDim, d, rng);
  motion_encoder_.init(params_, "motion_encoder", d, cfg_.heads, cfg_.d_ff,
                       cfg_.layers, rng);
  motion_out_.init(params_, "motion_out", d, cfg_.embed_dim, rng);
  text_mid_.init(params_, "text_mid", d, d, rng);
  text_out_.init(params_, "text_out", d, cfg_.embed_dim, rng);
}

nn::MatT<float> MotionEmbedder::prepare_motion(const FeatureSequence& features) const {
  features.check_shape();
  if (features.normalized) {
    throw MustNormalizeError("embedder: pass unnormalized features");
  }
  const FeatureSequence n = normalize(features, stats_);
  const int frames = n.frames();
  const int strided = (frames + cfg_.frame_stride - 1) / cfg_.frame_stride;
  if (strided > cfg_.max_frames) {
    throw InvalidConfigError("embedder: motion exceeds max_frames");
  }
  nn::MatT<float> out(strided, kFeatureDim);
  for (int i = 0; i < strided; ++i) {
    out.row(i) = n.data.row(i * cfg_.frame_stride).cast<float>();
  }
  return out;
}

nn::Node<float>* MotionEmbedder::motion_graph(
    nn::Tape<float>& tape, const nn::MatT<float>& normalized_strided) const {
  nn::Node<float>* x = motion_in_.apply(tape, tape.input(normalized_strided));
  x = tape.add(x, tape.input(nn::positional_encoding<float>(
                     static_cast<int>(normalized_strided.rows()), cfg_.d_model)));
  x = motion_encoder_.apply(tape, x);
  x = tape.mean_rows(x);
  x = motion_out_.apply(tape, x);
  return tape.l2_normalize_rows(x);
}

nn::Node<float>* MotionEmbedder::text_graph(nn::Tape<float>& tape,
                                            const TextEncoding& enc) const {
  nn::Node<float>* tok = tape.gather_rows(*token_table_, enc.token_ids);
  tok = tape.add(tok, tape.input(nn::positional_encoding<float>(
                          enc.length(), cfg_.d_model)));
  nn::Node<float>* pooled = tape.mean_rows(tok);
  nn::Node<float>* h = tape.gelu(text_mid_.apply(tape, pooled));
  return tape.l2_normalize_rows(text_out_.apply(tape, h));
}

VecX MotionEmbedder::embed_motion(const FeatureSequence& features) const {
  nn::Tape<float> tape(params_.size());
  nn::Node<float>* e = motion_graph(tape, prepare_motion(features));
  return e->val.row(0).transpose().cast<double>();
}

VecX MotionEmbedder::embed_text(const std::string& text) const {
  nn::Tape<float> tape(params_.size());
  nn::Node<float>* e = text_graph(tape, tokenizer_.encode(text));
  return e->val.row(0).transpose().cast<double>();
}

namespace {

double batch_loss(MotionEmbedder& emb, nn::Tape<float>& tape,
                  const std::vector<const nn::MatT<float>*>& motions,
                  const std::vector<const TextEncoding*>& texts,
                  const std::vector<const std::string*>& raw_texts,
                  bool do_backward, nn::Adam<float>* opt) {
  const std::size_t k = motions.size();
  std::vector<nn::Node<float>*> m_rows, t_rows;
  for (std::size_t i = 0; i < k; ++i) {
    m_rows.push_back(emb.motion_graph(tape, *motions[i]));
    t_rows.push_back(emb.text_graph(tape, *texts[i]));
  }
  nn::Node<float>* m = tape.concat_rows(m_rows);
  nn::Node<float>* t = tape.concat_rows(t_rows);
  nn::Node<float>* sim = tape.scale(
      tape.matmul_nt(m, t), 1.0f / static_cast<float>(emb.config().temperature));
  std::vector<std::vector<bool>> mask(k, std::vector<bool>(k, true));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j && *raw_texts[i] == *raw_texts[j]) mask[i][j] = false;
    }
  }
  nn::Node<float>* loss = tape.info_nce(sim, mask);
  const double value = loss->val(0, 0);
  if (do_backward) {
    tape.backward(loss);
    opt->step(emb.params(), tape.param_grads);
  }
  return value;
}

}  // namespace

MotionEmbedder train_embedder(
    const std::vector<std::pair<FeatureSequence, std::string>>& pairs,
    const EmbedderConfig& cfg, const EmbedderTrainConfig& tc,
    EmbedderTrainReport* report) {
  if (pairs.size() < 2) {
    throw InvalidConfigError("train_embedder: needs at least 2 pairs");
  }
  MotionEmbedder emb(cfg, tc.seed);

  std::vector<FeatureSequence> feats;
  feats.reserve(pairs.size());
  for (const auto& [f, _] : pairs) feats.push_back(f);
  emb.stats() = compute_stats(feats);

  // Pre-encode everything once.
  std::vector<nn::MatT<float>> motions;
  std::vector<TextEncoding> texts;
  motions.reserve(pairs.size());
  texts.reserve(pairs.size());
  for (const auto& [f, s] : pairs) {
    motions.push_back(emb.prepare_motion(f));
    texts.push_back(emb.tokenizer().encode(s));
  }

  Rng rng(Rng::derive(tc.seed, 0x7EB));
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  const std::size_t val_count = std::min<std::size_t>(
      pairs.size() > 4 ? static_cast<std::size_t>(pairs.size() * tc.val_fraction) : 0,
      256);
  std::vector<std::size_t> val_idx(order.end() - val_count, order.end());
  std::vector<std::size_t> train_idx(order.begin(), order.end() - val_count);
  if (train_idx.size() < 2) {
    train_idx = order;
    val_idx.clear();
  }

  nn::Adam<float> opt;
  opt.lr = tc.lr;

  auto eval_val = [&]() {
    if (val_idx.empty()) return 0.0;
    double total = 0.0;
    int batches = 0;
    const std::size_t bs = std::min<std::size_t>(tc.batch_size, val_idx.size());
    for (std::size_t at = 0; at + bs <= val_idx.size(); at += bs) {
      std::vector<const nn::MatT<float>*> bm;
      std::vector<const TextEncoding*> bt;
      std::vector<const std::string*> br;
      for (std::size_t i = at; i < at + bs; ++i) {
        bm.push_back(&motions[val_idx[i]]);
        bt.push_back(&texts[val_idx[i]]);
        br.push_back(&pairs[val_idx[i]].second);
      }
      nn::Tape<float> tape(emb.params().size());
      total += batch_loss(emb, tape, bm, bt, br, false, nullptr);
      ++batches;
    }
    return batches > 0 ? total / batches : 0.0;
  };

  const auto t_start = std::chrono::steady_clock::now();
  EmbedderTrainReport rep;
  rep.initial_val_loss = eval_val();

  const std::size_t bs = std::min<std::size_t>(tc.batch_size, train_idx.size());
  std::size_t cursor = train_idx.size();  // forces an initial shuffle
  nn::Tape<float> tape(emb.params().size());
  for (int step = 0; step < tc.steps; ++step) {
    std::vector<const nn::MatT<float>*> bm;
    std::vector<const TextEncoding*> bt;
    std::vector<const std::string*> br;
    for (std::size_t b = 0; b < bs; ++b) {
      if (cursor >= train_idx.size()) {
        rng.shuffle(train_idx);
        cursor = 0;
      }
      const std::size_t idx = train_idx[cursor++];
      bm.push_back(&motions[idx]);
      bt.push_back(&texts[idx]);
      br.push_back(&pairs[idx].second);
    }
    tape.reset(emb.params().size());
    const double loss = batch_loss(emb, tape, bm, bt, br, true, &opt);
    if (tc.log_every > 0 && (step + 1) % tc.log_every == 0) {
      std::printf("embedder step %d/%d  loss %.4f\n", step + 1, tc.steps, loss);
      std::fflush(stdout);
    }
  }
  rep.final_val_loss = eval_val();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t_start)
                    .count();
  if (report != nullptr) *report = rep;
  return emb;
}

namespace {

using nlohmann::json;

constexpr char kEmbMagic[4] = {'M', 'E', 'M', 'B'};
constexpr std::uint32_t kEmbVersion = 1;

}  // namespace

void save_embedder(const std::string& path, const MotionEmbedder& embedder) {
  const auto& cfg = embedder.config();
  const auto& params = embedder.params();
  json header;
  header["format_version"] = kEmbVersion;
  header["config"] = {{"d_model", cfg.d_model},
                      {"layers", cfg.layers},
                      {"heads", cfg.heads},
                      {"d_ff", cfg.d_ff},
                      {"embed_dim", cfg.embed_dim},
                      {"vocab_size", cfg.vocab_size},
                      {"max_tokens", cfg.max_tokens},
                      {"frame_stride", cfg.frame_stride},
                      {"max_frames", cfg.max_frames},
                      {"temperature", cfg.temperature}};
  json plist = json::array();
  for (std::size_t i = 0; i < params.size(); ++i) {
    plist.push_back({{"name", params[i].name},
                     {"rows", params[i].w.rows()},
                     {"cols", params[i].w.cols()}});
  }
  header["params"] = plist;
  const std::string hs = header.dump();

  std::string blob;
  blob.append(kEmbMagic, 4);
  const std::uint64_t hlen = hs.size();
  blob.append(reinterpret_cast<const char*>(&hlen), 8);
  blob += hs;
  for (std::size_t i = 0; i < params.size(); ++i) {
    blob.append(reinterpret_cast<const char*>(params[i].w.data()),
                params[i].w.size() * sizeof(float));
  }
  const auto& st = embedder.stats();
  blob.append(reinterpret_cast<const char*>(st.mean.data()), kFeatureDim * 8);
  blob.append(reinterpret_cast<const char*>(st.std.data()), kFeatureDim * 8);
  blob.append(reinterpret_cast<const char*>(&st.count), 8);
  for (int d = 0; d < kFeatureDim; ++d) blob.push_back(st.constant_dims[d] ? 1 : 0);
  atomic_write(path, blob);
}

MotionEmbedder load_embedder(const std::string& path) {
  const std::string blob = read_file(path);
  if (blob.size() < 12 || std::memcmp(blob.data(), kEmbMagic, 4) != 0) {
    throw ParseError("embedder: bad magic in " + path);
  }
  std::uint64_t hlen = 0;
  std::memcpy(&hlen, blob.data() + 4, 8);
  if (12 + hlen > blob.size()) throw ParseError("embedder: truncated header");
  const json header = json::parse(blob.substr(12, hlen));
  if (header.at("format_version").get<std::uint32_t>() != kEmbVersion) {
    throw ParseError("embedder: unsupported format version");
  }
  const json& jc = header.at("config");
  EmbedderConfig cfg;
  cfg.d_model = jc.at("d_model");
  cfg.layers = jc.at("layers");
  cfg.heads = jc.at("heads");
  cfg.d_ff = jc.at("d_ff");
  cfg.embed_dim = jc.at("embed_dim");
  cfg.vocab_size = jc.at("vocab_size");
  cfg.max_tokens = jc.at("max_tokens");
  cfg.frame_stride = jc.at("frame_stride");
  cfg.max_frames = jc.at("max_frames");
  cfg.temperature = jc.at("temperature");

  MotionEmbedder emb(cfg, 0);
  auto& params = emb.params();
  const json& plist = header.at("params");
  if (plist.size() != params.size()) {
    throw ParseError("embedder: parameter list mismatch");
  }
  const char* p = blob.data() + 12 + hlen;
  const char* end = blob.data() + blob.size();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const std::size_t bytes = params[i].w.size() * sizeof(float);
    if (p + bytes > end) throw ParseError("embedder: truncated payload");
    std::memcpy(params[i].w.data(), p, bytes);
    p += bytes;
  }
  auto& st = emb.stats();
  st.mean.resize(kFeatureDim);
  st.std.resize(kFeatureDim);
  if (p + kFeatureDim * 16 + 8 + kFeatureDim > end) {
    throw ParseError("embedder: truncated stats");
  }
  std::memcpy(st.mean.data(), p, kFeatureDim * 8);
  p += kFeatureDim * 8;
  std::memcpy(st.std.data(), p, kFeatureDim * 8);
  p += kFeatureDim * 8;
  std::memcpy(&st.count, p, 8);
  p += 8;
  st.constant_dims.resize(kFeatureDim);
  for (int d = 0; d < kFeatureDim; ++d) st.constant_dims[d] = p[d] != 0;
  return emb;
}

}  // namespace motedit
