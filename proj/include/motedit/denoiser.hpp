#pragma once

#include <memory>
#include <string>

#include "motedit/diffusion.hpp"
#include "motedit/nn/transformer.hpp"
#include "motedit/text_encoder.hpp"

namespace motedit {

struct DenoiserConfig {
  int d_model = 128;        // paper-scale setting is 512
  int layers = 4;
  int heads = 4;
  int d_ff = 256;
  int max_text_tokens = 77;
  int max_frames = 512;     // per motion
  double dropout = 0.0;
  int vocab_size = 4096;    // bundled hashed-vocabulary table
  int text_dim = 0;         // >0 selects the frozen-adapter projection path

  void validate() const {
    if (d_model < 2 || d_model % 2 != 0) {
      throw InvalidConfigError("denoiser: d_model must be even and >= 2");
    }
    if (d_model % heads != 0) {
      throw InvalidConfigError("denoiser: d_model must divide by heads");
    }
    if (layers < 1 || d_ff < 1 || max_frames < 2 || vocab_size < 2) {
      throw InvalidConfigError("denoiser: invalid size field");
    }
    if (text_dim > 0 && max_text_tokens != 77) {
      throw InvalidConfigError(
          "denoiser: the pretrained-text-encoder adapter requires 77 tokens");
    }
  }
};

// Transformer denoiser: one full-attention encoder over the sequence
// [timestep token; text tokens; projected source frames; SEP; projected
// noised-target frames], reading x0 predictions at the target positions.
template <typename S>
class TmedDenoiserT {
 public:
  using Mt = nn::MatT<S>;

  TmedDenoiserT(const DenoiserConfig& cfg, std::uint64_t init_seed) : cfg_(cfg) {
    cfg_.validate();
    Rng rng(Rng::derive(init_seed, 0xD40153));
    const int d = cfg_.d_model;
    text_embed_ = &params_.add("text_embed", cfg_.vocab_size, d);
    nn::gaussian_init(text_embed_->w, rng, 0.02);
    sep_token_ = &params_.add("sep", 1, d);
    nn::gaussian_init(sep_token_->w, rng, 0.02);
    if (cfg_.text_dim > 0) {
      text_proj_.init(params_, "text_proj", cfg_.text_dim, d, rng);
    }
    time_ff1_.init(params_, "time_ff1", d, d, rng);
    time_ff2_.init(params_, "time_ff2", d, d, rng);
    motion_in_.init(params_, "motion_in", kFeatureDim, d, rng);
    motion_out_.init(params_, "motion_out", d, kFeatureDim, rng);
    encoder_.init(params_, "encoder", d, cfg_.heads, cfg_.d_ff, cfg_.layers, rng);
  }

  // Differentiable forward pass. Null text means the null condition; null
  // source contributes zero source frames (SEP retained).
  nn::Node<S>* forward(nn::Tape<S>& tape, const Mt& x_t, int t,
                       const TextEncoding* text, const Mt* source) const {
    if (x_t.cols() != kFeatureDim) {
      throw ShapeError("denoiser: target features must have 207 columns");
    }
    const int f_t = static_cast<int>(x_t.rows());
    const int f_s = source != nullptr ? static_cast<int>(source->rows()) : 0;
    if (f_t > cfg_.max_frames || f_s > cfg_.max_frames) {
      throw InvalidConfigError("denoiser: frame count exceeds max_frames");
    }

    TextEncoding null_enc;
    null_enc.token_ids = {0};
    null_enc.mask = {true};
    const TextEncoding& enc = text != nullptr ? *text : null_enc;
    if (enc.length() > cfg_.max_text_tokens) {
      throw ShapeError("denoiser: text encoding exceeds max_text_tokens");
    }

    nn::Node<S>* time_tok = timestep_token(tape, t);
    nn::Node<S>* text_tok = embed_text(tape, enc);
    nn::Node<S>* sep = tape.leaf(*sep_token_);
    nn::Node<S>* tgt_tok = motion_in_.apply(tape, tape.input(x_t));

    std::vector<nn::Node<S>*> parts;
    parts.push_back(time_tok);
    parts.push_back(text_tok);
    if (source != nullptr) {
      parts.push_back(motion_in_.apply(tape, tape.input(*source)));
    }
    parts.push_back(sep);
    parts.push_back(tgt_tok);
    nn::Node<S>* seq = tape.concat_rows(parts);

    const int len = static_cast<int>(seq->rows());
    seq = tape.add(seq, tape.input(nn::positional_encoding<S>(len, cfg_.d_model)));

    // Padded text positions are masked out as attention keys.
    nn::Node<S>* key_mask = nullptr;
    bool any_masked = false;
    Mt mask_row = Mt::Zero(1, len);
    for (int i = 0; i < enc.length(); ++i) {
      if (!enc.mask[i]) {
        mask_row(0, 1 + i) = S(-1e9);
        any_masked = true;
      }
    }
    if (any_masked) key_mask = tape.input(mask_row);

    nn::Node<S>* out = encoder_.apply(tape, seq, key_mask);
    nn::Node<S>* tgt_out = tape.slice_rows(out, len - f_t, f_t);
    return motion_out_.apply(tape, tgt_out);
  }

  Mt predict(const Mt& x_t, int t, const TextEncoding* text, const Mt* source) const {
    nn::Tape<S> tape(params_.size());
    return forward(tape, x_t, t, text, source)->val;
  }

  // Timestep encoder output (1 x d_model), outside any tape.
  Mt timestep_embedding(int t) const {
    nn::Tape<S> tape(params_.size());
    return timestep_token(tape, t)->val;
  }

  nn::ParamSet<S>& params() { return params_; }
  const nn::ParamSet<S>& params() const { return params_; }
  const DenoiserConfig& config() const { return cfg_; }
  std::int64_t param_count() const { return params_.total_values(); }

 private:
  nn::Node<S>* timestep_token(nn::Tape<S>& tape, int t) const {
    nn::Node<S>* pe = tape.input(
        nn::sinusoidal_embedding<S>({static_cast<double>(t)}, cfg_.d_model));
    return time_ff2_.apply(tape, tape.silu(time_ff1_.apply(tape, pe)));
  }

  nn::Node<S>* embed_text(nn::Tape<S>& tape, const TextEncoding& enc) const {
    if (!enc.frozen()) {
      return tape.gather_rows(*text_embed_, enc.token_ids);
    }
    if (cfg_.text_dim == 0) {
      throw InvalidConfigError(
          "denoiser: frozen text embeddings need text_dim in the config");
    }
    if (enc.embeddings.cols() != cfg_.text_dim) {
      throw ShapeError("denoiser: frozen text embedding width mismatch");
    }
    return text_proj_.apply(tape, tape.input(enc.embeddings.template cast<S>()));
  }

  DenoiserConfig cfg_;
  nn::ParamSet<S> params_;
  nn::Param<S>* text_embed_ = nullptr;
  nn::Param<S>* sep_token_ = nullptr;
  nn::Linear<S> text_proj_;
  nn::Linear<S> time_ff1_, time_ff2_;
  nn::Linear<S> motion_in_, motion_out_;
  nn::TransformerEncoder<S> encoder_;
};

// Runtime denoiser (float32 compute) with its pluggable text encoder.
class TmedDenoiser : public X0Model {
 public:
  TmedDenoiser(const DenoiserConfig& cfg, std::uint64_t init_seed)
      : core_(cfg, init_seed),
        encoder_(std::make_unique<HashedTextEncoder>(cfg.vocab_size,
                                                     cfg.max_text_tokens)) {}

  MatX predict_x0(const MatX& x_t, int t, const std::string* text,
                  const MatX* source) const override;

  TmedDenoiserT<float>& core() { return core_; }
  const TmedDenoiserT<float>& core() const { return core_; }
  const TextEncoder& text_encoder() const { return *encoder_; }
  void set_text_encoder(std::unique_ptr<TextEncoder> enc) {
    encoder_ = std::move(enc);
  }

 private:
  TmedDenoiserT<float> core_;
  std::unique_ptr<TextEncoder> encoder_;
};

// Checkpoint container: versioned JSON header plus raw parameter payload and
// stats. Reload reproduces forward outputs bit-for-bit.
struct Checkpoint {
  std::string kind;  // "tmed" or "mdm"
  DenoiserConfig config;
  int schedule_steps = 300;
  double fps = 20.0;
  GuidanceScales guidance;
  FeatureStats stats;
  std::unique_ptr<TmedDenoiser> model;
};

void save_checkpoint(const std::string& path, const std::string& kind,
                     const TmedDenoiser& model, int schedule_steps, double fps,
                     const GuidanceScales& guidance, const FeatureStats& stats,
                     std::uint64_t run_seed = 0);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace motedit
