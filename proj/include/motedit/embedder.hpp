#pragma once

#include <utility>
#include <vector>

#include "motedit/features.hpp"
#include "motedit/nn/transformer.hpp"
#include "motedit/text_encoder.hpp"

namespace motedit {

struct EmbedderConfig {
  int d_model = 64;
  int layers = 2;
  int heads = 4;
  int d_ff = 128;
  int embed_dim = 128;
  int vocab_size = 4096;
  int max_tokens = 77;
  int frame_stride = 2;  // frames are subsampled before encoding
  int max_frames = 512;
  double temperature = 0.1;

  void validate() const {
    if (d_model % heads != 0 || d_model % 2 != 0) {
      throw InvalidConfigError("embedder: d_model must be even and divide by heads");
    }
    if (embed_dim < 2 || frame_stride < 1 || layers < 1) {
      throw InvalidConfigError("embedder: invalid size field");
    }
  }
};

// Contrastive motion/text embedder: a small sequence encoder with mean
// pooling on the motion side, a pooled token MLP on the text side, both
// projected to unit-norm vectors.
class MotionEmbedder {
 public:
  MotionEmbedder(const EmbedderConfig& cfg, std::uint64_t init_seed);

  // Takes unnormalized features; normalization stats live in the embedder.
  VecX embed_motion(const FeatureSequence& features) const;
  VecX embed_text(const std::string& text) const;

  nn::Node<float>* motion_graph(nn::Tape<float>& tape,
                                const nn::MatT<float>& normalized_strided) const;
  nn::Node<float>* text_graph(nn::Tape<float>& tape, const TextEncoding& enc) const;

  nn::MatT<float> prepare_motion(const FeatureSequence& features) const;

  const EmbedderConfig& config() const { return cfg_; }
  FeatureStats& stats() { return stats_; }
  const FeatureStats& stats() const { return stats_; }
  nn::ParamSet<float>& params() { return params_; }
  const nn::ParamSet<float>& params() const { return params_; }
  const HashedTextEncoder& tokenizer() const { return tokenizer_; }

 private:
  EmbedderConfig cfg_;
  FeatureStats stats_;
  HashedTextEncoder tokenizer_;
  nn::ParamSet<float> params_;
  nn::Param<float>* token_table_ = nullptr;
  nn::Linear<float> motion_in_;
  nn::TransformerEncoder<float> motion_encoder_;
  nn::Linear<float> motion_out_;
  nn::Linear<float> text_mid_;
  nn::Linear<float> text_out_;
};

struct EmbedderTrainConfig {
  int steps = 1200;
  int batch_size = 32;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  int log_every = 0;
  double val_fraction = 0.1;
};

struct EmbedderTrainReport {
  double initial_val_loss = 0.0;
  double final_val_loss = 0.0;
  double seconds = 0.0;
};

// Symmetric InfoNCE over (motion, text) pairs; same-text pairs are excluded
// as negatives. Stats are fit on the training features.
MotionEmbedder train_embedder(
    const std::vector<std::pair<FeatureSequence, std::string>>& pairs,
    const EmbedderConfig& cfg, const EmbedderTrainConfig& tc,
    EmbedderTrainReport* report = nullptr);

void save_embedder(const std::string& path, const MotionEmbedder& embedder);
MotionEmbedder load_embedder(const std::string& path);

}  // namespace motedit
