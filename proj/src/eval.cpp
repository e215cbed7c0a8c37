#include "motedit/eval.hpp"

#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "motedit/io.hpp"

namespace motedit {

void EvalReport::validate() const {
  for (const BenchmarkScores* b : {&to_target, &to_source}) {
    if (!(b->r1 <= b->r2 + 1e-9 && b->r2 <= b->r3 + 1e-9 && b->r3 <= 100.0 + 1e-9)) {
      throw InvalidConfigError("eval report: recalls must be monotone and <= 100");
    }
    if (b->avg_rank < 1.0 - 1e-9) {
      throw InvalidConfigError("eval report: AvgR must be >= 1");
    }
    if (gallery_size > 0 && b->avg_rank > gallery_size + 1e-9) {
      throw InvalidConfigError("eval report: AvgR exceeds the gallery size");
    }
  }
}

std::vector<int> rank_gallery(const VecX& query, const std::vector<VecX>& gallery) {
  if (gallery.empty()) throw InvalidConfigError("rank_gallery: empty gallery");
  std::vector<double> sims(gallery.size());
  for (std::size_t i = 0; i < gallery.size(); ++i) {
    if (gallery[i].size() != query.size()) {
      throw ShapeError("rank_gallery: embedding dimension mismatch");
    }
    sims[i] = query.dot(gallery[i]);
  }
  std::vector<int> order(gallery.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sims[a] > sims[b]; });
  std::vector<int> ranks(gallery.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    ranks[order[pos]] = static_cast<int>(pos) + 1;
  }
  return ranks;
}

namespace {

BenchmarkScores scores_from_ranks(const std::vector<int>& ranks, int gallery_size) {
  BenchmarkScores s;
  double sum = 0.0;
  int r1 = 0, r2 = 0, r3 = 0;
  for (int r : ranks) {
    sum += r;
    if (r <= 1) ++r1;
    if (r <= 2) ++r2;
    if (r <= 3) ++r3;
  }
  const double n = static_cast<double>(ranks.size());
  s.r1 = 100.0 * r1 / n;
  s.r2 = 100.0 * r2 / n;
  s.r3 = 100.0 * r3 / n;
  s.avg_rank = sum / n;
  (void)gallery_size;
  return s;
}

}  // namespace

EvalReport evaluate_editing(const TripletSampler& sampler,
                            const std::vector<const EditTriplet*>& testset,
                            const MotionEmbedder& embedder,
                            const EvalOptions& opts) {
  if (opts.skeleton == nullptr) {
    throw InvalidConfigError("evaluate_editing: skeleton required");
  }
  if (static_cast<int>(testset.size()) < opts.gallery_size) {
    throw InvalidConfigError("evaluate_editing: test set smaller than the gallery");
  }

  // Fixed batches by seeded shuffle; the final partial batch is dropped.
  std::vector<std::size_t> order(testset.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(Rng::derive(opts.seed, 0x6A77E));
  rng.shuffle(order);
  const int batch = opts.gallery_size;
  const int batches = static_cast<int>(order.size()) / batch;
  order.resize(static_cast<std::size_t>(batches) * batch);

  // Generate and embed.
  std::vector<VecX> gen_emb(order.size()), tgt_emb(order.size()), src_emb(order.size());
  std::vector<FeatureSequence> generations(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const EditTriplet& t = *testset[order[i]];
    generations[i] = sampler(t);
    gen_emb[i] = embedder.embed_motion(generations[i]);
    tgt_emb[i] = embedder.embed_motion(encode(t.target, *opts.skeleton));
    src_emb[i] = embedder.embed_motion(encode(t.source, *opts.skeleton));
  }

  std::vector<int> target_ranks, source_ranks;
  if (opts.full_gallery) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      target_ranks.push_back(rank_gallery(gen_emb[i], tgt_emb)[i]);
      source_ranks.push_back(rank_gallery(gen_emb[i], src_emb)[i]);
    }
  } else {
    for (int b = 0; b < batches; ++b) {
      std::vector<VecX> tgts(tgt_emb.begin() + b * batch,
                             tgt_emb.begin() + (b + 1) * batch);
      std::vector<VecX> srcs(src_emb.begin() + b * batch,
                             src_emb.begin() + (b + 1) * batch);
      for (int i = 0; i < batch; ++i) {
        const std::size_t q = static_cast<std::size_t>(b) * batch + i;
        target_ranks.push_back(rank_gallery(gen_emb[q], tgts)[i]);
        source_ranks.push_back(rank_gallery(gen_emb[q], srcs)[i]);
      }
    }
  }

  EvalReport report;
  report.to_target = scores_from_ranks(target_ranks, batch);
  report.to_source = scores_from_ranks(source_ranks, batch);
  report.gallery_seed = opts.seed;
  report.gallery_size = opts.full_gallery ? static_cast<int>(order.size()) : batch;
  report.batches = opts.full_gallery ? 1 : batches;
  report.queries = static_cast<int>(order.size());
  report.fid = fid(gen_emb, tgt_emb);
  if (opts.compute_l2) {
    double total = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const EditTriplet& t = *testset[order[i]];
      const Motion gen = decode(generations[i], *opts.skeleton, t.target.fps);
      total += l2_joints(gen, t.target, *opts.skeleton);
    }
    report.l2_cm = total / static_cast<double>(order.size());
  }
  report.validate();
  return report;
}

double fid(const std::vector<VecX>& features_a, const std::vector<VecX>& features_b,
           bool* regularized) {
  if (features_a.size() < 2 || features_b.size() < 2) {
    throw InvalidConfigError("fid: needs at least 2 samples per set");
  }
  const auto dim = features_a.front().size();
  auto fit = [&](const std::vector<VecX>& set, VecX& mu, MatX& cov) {
    mu = VecX::Zero(dim);
    for (const VecX& v : set) {
      if (v.size() != dim) throw ShapeError("fid: embedding dimension mismatch");
      mu += v;
    }
    mu /= static_cast<double>(set.size());
    cov = MatX::Zero(dim, dim);
    for (const VecX& v : set) {
      const VecX d = v - mu;
      cov += d * d.transpose();
    }
    cov /= static_cast<double>(set.size() - 1);
  };
  VecX mu_a, mu_b;
  MatX cov_a, cov_b;
  fit(features_a, mu_a, cov_a);
  fit(features_b, mu_b, cov_b);

  bool reg = false;
  auto min_eig = [](const MatX& m) {
    Eigen::SelfAdjointEigenSolver<MatX> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  };
  if (min_eig(cov_a) < 1e-10 || min_eig(cov_b) < 1e-10) {
    reg = true;
    cov_a += 1e-6 * MatX::Identity(dim, dim);
    cov_b += 1e-6 * MatX::Identity(dim, dim);
  }
  if (regularized != nullptr) *regularized = reg;

  // tr(sqrt(cov_a cov_b)) via the symmetric similarity transform.
  Eigen::SelfAdjointEigenSolver<MatX> es_a(cov_a);
  const MatX sqrt_a = es_a.operatorSqrt();
  Eigen::SelfAdjointEigenSolver<MatX> es_m(sqrt_a * cov_b * sqrt_a);
  const VecX eig = es_m.eigenvalues().cwiseMax(0.0);
  const double tr_sqrt = eig.cwiseSqrt().sum();

  const double d2 = (mu_a - mu_b).squaredNorm();
  return d2 + cov_a.trace() + cov_b.trace() - 2.0 * tr_sqrt;
}

double l2_joints(const Motion& gen, const Motion& ref, const Skeleton& skeleton) {
  const Motion* a = &gen;
  const Motion* b = &ref;
  Motion resampled;
  if (a->frames() != b->frames()) {
    if (a->frames() < b->frames()) {
      resampled = resample(*a, b->frames());
      a = &resampled;
    } else {
      resampled = resample(*b, a->frames());
      b = &resampled;
    }
  }
  double total = 0.0;
  const int frames = a->frames();
  for (int t = 0; t < frames; ++t) {
    const auto pa = a->joints(t, skeleton);
    const auto pb = b->joints(t, skeleton);
    for (int j = 0; j < kNumJoints; ++j) total += (pa[j] - pb[j]).norm();
  }
  return 100.0 * total / (static_cast<double>(frames) * kNumJoints);
}

double self_retrieval_r1(
    const MotionEmbedder& embedder,
    const std::vector<std::pair<FeatureSequence, std::string>>& pairs,
    int gallery_size, std::uint64_t seed) {
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(Rng::derive(seed, 0x3E1F));
  rng.shuffle(order);

  // Greedy batches of distinct texts.
  std::vector<std::vector<std::size_t>> batches;
  std::vector<std::size_t> pool(order.begin(), order.end());
  while (static_cast<int>(pool.size()) >= gallery_size) {
    std::vector<std::size_t> batch;
    std::set<std::string> used;
    std::vector<std::size_t> rest;
    for (std::size_t idx : pool) {
      if (static_cast<int>(batch.size()) < gallery_size &&
          used.insert(pairs[idx].second).second) {
        batch.push_back(idx);
      } else {
        rest.push_back(idx);
      }
    }
    if (static_cast<int>(batch.size()) < gallery_size) break;
    batches.push_back(std::move(batch));
    pool = std::move(rest);
  }
  if (batches.empty()) {
    throw InvalidConfigError("self_retrieval: not enough distinct texts");
  }

  int hits = 0, total = 0;
  for (const auto& batch : batches) {
    std::vector<VecX> text_embs;
    for (std::size_t idx : batch) text_embs.push_back(embedder.embed_text(pairs[idx].second));
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const VecX q = embedder.embed_motion(pairs[batch[i]].first);
      const std::vector<int> ranks = rank_gallery(q, text_embs);
      if (ranks[i] == 1) ++hits;
      ++total;
    }
  }
  return 100.0 * hits / total;
}

namespace {
using nlohmann::json;

json scores_to_json(const BenchmarkScores& s) {
  return json{{"r1", s.r1}, {"r2", s.r2}, {"r3", s.r3}, {"avg_rank", s.avg_rank}};
}

BenchmarkScores scores_from_json(const json& j) {
  BenchmarkScores s;
  s.r1 = j.at("r1");
  s.r2 = j.at("r2");
  s.r3 = j.at("r3");
  s.avg_rank = j.at("avg_rank");
  return s;
}
}  // namespace

void save_report(const std::string& path, const EvalReport& report) {
  json j;
  j["format_version"] = 1;
  j["generated_to_target"] = scores_to_json(report.to_target);
  j["generated_to_source"] = scores_to_json(report.to_source);
  j["fid"] = report.fid;
  j["l2_cm"] = report.l2_cm;
  j["gallery_seed"] = report.gallery_seed;
  j["gallery_size"] = report.gallery_size;
  j["batches"] = report.batches;
  j["queries"] = report.queries;
  atomic_write(path, j.dump(2) + "\n");
}

EvalReport load_report(const std::string& path) {
  const json j = json::parse(read_file(path));
  if (j.at("format_version").get<int>() != 1) {
    throw ParseError("eval report: unsupported version in " + path);
  }
  EvalReport r;
  r.to_target = scores_from_json(j.at("generated_to_target"));
  r.to_source = scores_from_json(j.at("generated_to_source"));
  r.fid = j.at("fid");
  r.l2_cm = j.at("l2_cm");
  r.gallery_seed = j.at("gallery_seed");
  r.gallery_size = j.at("gallery_size");
  r.batches = j.at("batches");
  r.queries = j.at("queries");
  r.validate();
  return r;
}

std::string format_report_table(const EvalReport& report) {
  std::ostringstream out;
  char buf[160];
  out << "benchmark             R@1     R@2     R@3     AvgR\n";
  std::snprintf(buf, sizeof(buf), "generated-to-target  %6.2f  %6.2f  %6.2f  %7.2f\n",
                report.to_target.r1, report.to_target.r2, report.to_target.r3,
                report.to_target.avg_rank);
  out << buf;
  std::snprintf(buf, sizeof(buf), "generated-to-source  %6.2f  %6.2f  %6.2f  %7.2f\n",
                report.to_source.r1, report.to_source.r2, report.to_source.r3,
                report.to_source.avg_rank);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "FID %.4f  L2 %.2f cm  (gallery %d, %d batches, %d queries, seed %llu)\n",
                report.fid, report.l2_cm, report.gallery_size, report.batches,
                report.queries,
                static_cast<unsigned long long>(report.gallery_seed));
  out << buf;
  return out.str();
}

}  // namespace motedit
