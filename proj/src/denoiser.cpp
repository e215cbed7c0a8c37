#include "motedit/denoiser.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "motedit/io.hpp"

namespace motedit {

MatX TmedDenoiser::predict_x0(const MatX& x_t, int t, const std::string* text,
                              const MatX* source) const {
  std::optional<TextEncoding> enc;
  if (text != nullptr) enc = encoder_->encode(*text);
  const nn::MatT<float> x = x_t.cast<float>();
  std::optional<nn::MatT<float>> src;
  if (source != nullptr) src = source->cast<float>();
  const nn::MatT<float> out = core_.predict(
      x, t, enc ? &*enc : nullptr, src ? &*src : nullptr);
  return out.cast<double>();
}

namespace {

using nlohmann::json;

constexpr char kCheckpointMagic[4] = {'M', 'E', 'D', 'C'};
constexpr std::uint32_t kCheckpointVersion = 1;

json config_to_json(const DenoiserConfig& c) {
  return json{{"d_model", c.d_model},
              {"layers", c.layers},
              {"heads", c.heads},
              {"d_ff", c.d_ff},
              {"max_text_tokens", c.max_text_tokens},
              {"max_frames", c.max_frames},
              {"dropout", c.dropout},
              {"vocab_size", c.vocab_size},
              {"text_dim", c.text_dim}};
}

DenoiserConfig config_from_json(const json& j) {
  DenoiserConfig c;
  c.d_model = j.at("d_model");
  c.layers = j.at("layers");
  c.heads = j.at("heads");
  c.d_ff = j.at("d_ff");
  c.max_text_tokens = j.at("max_text_tokens");
  c.max_frames = j.at("max_frames");
  c.dropout = j.at("dropout");
  c.vocab_size = j.at("vocab_size");
  c.text_dim = j.at("text_dim");
  return c;
}

template <typename T>
void append_raw(std::string& blob, const T* data, std::size_t count) {
  const std::size_t at = blob.size();
  blob.resize(at + count * sizeof(T));
  std::memcpy(blob.data() + at, data, count * sizeof(T));
}

template <typename T>
const char* read_raw(const char* p, const char* end, T* out, std::size_t count) {
  if (p + count * sizeof(T) > end) {
    throw ParseError("checkpoint: truncated payload");
  }
  std::memcpy(out, p, count * sizeof(T));
  return p + count * sizeof(T);
}

}  // namespace

void save_checkpoint(const std::string& path, const std::string& kind,
                     const TmedDenoiser& model, int schedule_steps, double fps,
                     const GuidanceScales& guidance, const FeatureStats& stats,
                     std::uint64_t run_seed) {
  const auto& params = model.core().params();
  json header;
  header["format_version"] = kCheckpointVersion;
  header["kind"] = kind;
  header["scalar"] = "f32";
  header["config"] = config_to_json(model.core().config());
  header["schedule_steps"] = schedule_steps;
  header["fps"] = fps;
  header["guidance"] = {{"text", guidance.text}, {"source", guidance.source}};
  header["run_seed"] = run_seed;
  json plist = json::array();
  for (std::size_t i = 0; i < params.size(); ++i) {
    plist.push_back({{"name", params[i].name},
                     {"rows", params[i].w.rows()},
                     {"cols", params[i].w.cols()}});
  }
  header["params"] = plist;
  const std::string hs = header.dump();

  std::string blob;
  blob.append(kCheckpointMagic, 4);
  std::uint64_t hlen = hs.size();
  append_raw(blob, &hlen, 1);
  blob += hs;
  for (std::size_t i = 0; i < params.size(); ++i) {
    append_raw(blob, params[i].w.data(), static_cast<std::size_t>(params[i].w.size()));
  }
  append_raw(blob, stats.mean.data(), kFeatureDim);
  append_raw(blob, stats.std.data(), kFeatureDim);
  append_raw(blob, &stats.count, 1);
  for (int d = 0; d < kFeatureDim; ++d) {
    const char flag = stats.constant_dims[d] ? 1 : 0;
    blob.push_back(flag);
  }
  atomic_write(path, blob);
}

Checkpoint load_checkpoint(const std::string& path) {
  const std::string blob = read_file(path);
  if (blob.size() < 12 || std::memcmp(blob.data(), kCheckpointMagic, 4) != 0) {
    throw ParseError("checkpoint: bad magic in " + path);
  }
  const char* p = blob.data() + 4;
  const char* end = blob.data() + blob.size();
  std::uint64_t hlen = 0;
  p = read_raw(p, end, &hlen, 1);
  if (p + hlen > end) throw ParseError("checkpoint: truncated header in " + path);
  const json header = json::parse(std::string(p, p + hlen));
  p += hlen;
  if (header.at("format_version").get<std::uint32_t>() != kCheckpointVersion) {
    throw ParseError("checkpoint: unsupported format version in " + path);
  }

  Checkpoint ck;
  ck.kind = header.at("kind");
  ck.config = config_from_json(header.at("config"));
  ck.schedule_steps = header.at("schedule_steps");
  ck.fps = header.at("fps");
  ck.guidance.text = header.at("guidance").at("text");
  ck.guidance.source = header.at("guidance").at("source");
  ck.model = std::make_unique<TmedDenoiser>(ck.config, /*init_seed=*/0);

  auto& params = ck.model->core().params();
  const json& plist = header.at("params");
  if (plist.size() != params.size()) {
    throw ParseError("checkpoint: parameter list mismatch in " + path);
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto rows = plist[i].at("rows").get<Eigen::Index>();
    const auto cols = plist[i].at("cols").get<Eigen::Index>();
    if (plist[i].at("name") != params[i].name || rows != params[i].w.rows() ||
        cols != params[i].w.cols()) {
      throw ParseError("checkpoint: parameter layout mismatch at " +
                       params[i].name);
    }
    p = read_raw(p, end, params[i].w.data(), static_cast<std::size_t>(rows * cols));
  }
  ck.stats.mean.resize(kFeatureDim);
  ck.stats.std.resize(kFeatureDim);
  p = read_raw(p, end, ck.stats.mean.data(), kFeatureDim);
  p = read_raw(p, end, ck.stats.std.data(), kFeatureDim);
  p = read_raw(p, end, &ck.stats.count, 1);
  ck.stats.constant_dims.resize(kFeatureDim);
  for (int d = 0; d < kFeatureDim; ++d) {
    char flag;
    p = read_raw(p, end, &flag, 1);
    ck.stats.constant_dims[d] = flag != 0;
  }
  return ck;
}

}  // namespace motedit
