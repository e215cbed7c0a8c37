#pragma once

#include <memory>
#include <string>
#include <vector>

#include "motedit/common.hpp"

namespace motedit {

// Output of a text encoder. Exactly one representation is populated:
//  - token_ids: indices into the denoiser's trainable embedding table
//    (bundled hashed-vocabulary encoder); id 0 is the learned null token.
//  - embeddings: precomputed frozen token vectors (pretrained adapter).
struct TextEncoding {
  std::vector<int> token_ids;
  MatX embeddings;            // T x d_text when frozen
  std::vector<bool> mask;     // true = real token, padded positions false

  int length() const {
    return token_ids.empty() ? static_cast<int>(embeddings.rows())
                             : static_cast<int>(token_ids.size());
  }
  bool frozen() const { return token_ids.empty(); }
};

class TextEncoder {
 public:
  virtual ~TextEncoder() = default;
  virtual TextEncoding encode(const std::string& text) const = 0;
  // Width of frozen embeddings; 0 for id-producing encoders.
  virtual int dim() const = 0;
};

// Bundled trainable encoder: lowercase word split, FNV-1a hash into a fixed
// vocabulary. The empty string encodes the null condition as token id 0.
class HashedTextEncoder final : public TextEncoder {
 public:
  explicit HashedTextEncoder(int vocab_size = 4096, int max_tokens = 77);

  TextEncoding encode(const std::string& text) const override;
  int dim() const override { return 0; }

  int vocab_size() const { return vocab_size_; }
  int token_id(const std::string& word) const;
  static std::vector<std::string> tokenize(const std::string& text);

 private:
  int vocab_size_;
  int max_tokens_;
};

// Adapter for frozen pretrained token embeddings: a directory with a TSV
// manifest mapping each text to a [T x d] array file.
class FrozenTextEncoder final : public TextEncoder {
 public:
  explicit FrozenTextEncoder(const std::string& dir, int max_tokens = 77);

  TextEncoding encode(const std::string& text) const override;
  int dim() const override { return dim_; }

 private:
  std::string dir_;
  int max_tokens_;
  int dim_ = 0;
  std::vector<std::pair<std::string, std::string>> entries_;  // text -> file
};

}  // namespace motedit
