#include "motedit/text_encoder.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "motedit/io.hpp"

namespace motedit {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

HashedTextEncoder::HashedTextEncoder(int vocab_size, int max_tokens)
    : vocab_size_(vocab_size), max_tokens_(max_tokens) {
  if (vocab_size < 2 || max_tokens < 1) {
    throw InvalidConfigError("text encoder: vocab_size >= 2 and max_tokens >= 1");
  }
}

std::vector<std::string> HashedTextEncoder::tokenize(const std::string& text) {
  std::vector<std::string> words;
  std::string cur;
  for (char raw : text) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      words.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(cur);
  return words;
}

int HashedTextEncoder::token_id(const std::string& word) const {
  // Id 0 is reserved for the null-condition token.
  return 1 + static_cast<int>(fnv1a(word) % static_cast<std::uint64_t>(vocab_size_ - 1));
}

TextEncoding HashedTextEncoder::encode(const std::string& text) const {
  if (text.size() > 512) {
    throw InvalidConfigError("text encoder: text longer than 512 characters");
  }
  TextEncoding enc;
  const std::vector<std::string> words = tokenize(text);
  if (words.empty()) {
    enc.token_ids = {0};  // null condition
    enc.mask = {true};
    return enc;
  }
  std::size_t n = words.size();
  if (static_cast<int>(n) > max_tokens_) {
    std::fprintf(stderr, "motedit: warning: text truncated to %d tokens\n",
                 max_tokens_);
    n = static_cast<std::size_t>(max_tokens_);
  }
  for (std::size_t i = 0; i < n; ++i) enc.token_ids.push_back(token_id(words[i]));
  enc.mask.assign(n, true);
  return enc;
}

FrozenTextEncoder::FrozenTextEncoder(const std::string& dir, int max_tokens)
    : dir_(dir), max_tokens_(max_tokens) {
  std::ifstream in(dir + "/texts.tsv");
  if (!in) throw IoError("frozen text encoder: cannot open " + dir + "/texts.tsv");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("frozen text encoder: missing tab at line " +
                       std::to_string(lineno));
    }
    entries_.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  if (entries_.empty()) {
    throw InvalidConfigError("frozen text encoder: empty manifest");
  }
  std::vector<std::uint64_t> shape;
  load_array_f32(dir_ + "/" + entries_.front().second, shape);
  if (shape.size() != 2) throw ShapeError("frozen text encoder: expected 2-d arrays");
  dim_ = static_cast<int>(shape[1]);
}

TextEncoding FrozenTextEncoder::encode(const std::string& text) const {
  if (text.empty()) {
    // Null condition: resolved by the denoiser's learned null token.
    TextEncoding enc;
    enc.token_ids = {0};
    enc.mask = {true};
    return enc;
  }
  for (const auto& [key, file] : entries_) {
    if (key == text) {
      std::vector<std::uint64_t> shape;
      const std::vector<float> payload = load_array_f32(dir_ + "/" + file, shape);
      const int rows = std::min<int>(static_cast<int>(shape[0]), max_tokens_);
      TextEncoding enc;
      enc.embeddings.resize(rows, static_cast<int>(shape[1]));
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < static_cast<int>(shape[1]); ++c)
          enc.embeddings(r, c) = payload[r * shape[1] + c];
      enc.mask.assign(rows, true);
      return enc;
    }
  }
  throw InvalidConfigError("frozen text encoder: no embedding cached for text '" +
                           text + "'");
}

}  // namespace motedit
