#include "motedit/harness.hpp"

#include <numeric>
#include <sstream>

#include "motedit/io.hpp"

namespace motedit {

FeatureStats stats_from_triplets(const std::vector<const EditTriplet*>& triplets,
                                 const Skeleton& skeleton) {
  std::vector<FeatureSequence> feats;
  feats.reserve(triplets.size() * 2);
  for (const EditTriplet* t : triplets) {
    feats.push_back(encode(t->source, skeleton));
    feats.push_back(encode(t->target, skeleton));
  }
  return compute_stats(feats);
}

std::vector<TrainItem> make_train_items(const std::vector<const EditTriplet*>& triplets,
                                        const Skeleton& skeleton,
                                        const FeatureStats& stats,
                                        const TextEncoder& encoder,
                                        bool text_only) {
  std::vector<TrainItem> items;
  items.reserve(triplets.size());
  for (const EditTriplet* t : triplets) {
    TrainItem item;
    item.target =
        normalize(encode(t->target, skeleton), stats).data.cast<float>();
    if (!text_only) {
      item.source =
          normalize(encode(t->source, skeleton), stats).data.cast<float>();
    }
    item.text = encoder.encode(t->edit_text);
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<std::pair<FeatureSequence, std::string>> embedder_pairs_from_triplets(
    const std::vector<const EditTriplet*>& triplets, const Skeleton& skeleton) {
  std::vector<std::pair<FeatureSequence, std::string>> pairs;
  pairs.reserve(triplets.size() * 2);
  for (const EditTriplet* t : triplets) {
    pairs.emplace_back(encode(t->source, skeleton), t->source_desc);
    pairs.emplace_back(encode(t->target, skeleton), t->target_desc);
  }
  return pairs;
}

namespace {

std::uint64_t triplet_seed(std::uint64_t base, const std::string& id) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return Rng::derive(base, h);
}

}  // namespace

TripletSampler make_editing_sampler(const TmedDenoiser& model,
                                    const NoiseSchedule& sched,
                                    const FeatureStats& stats,
                                    const GuidanceScales& scales,
                                    const Skeleton& skeleton, std::uint64_t seed) {
  return [&model, &sched, stats, scales, &skeleton, seed](const EditTriplet& t) {
    const FeatureSequence source = encode(t.source, skeleton);
    SampleOptions opts;
    opts.target_length = t.target.frames();
    opts.seed = triplet_seed(seed, t.id);
    return sample(model, &source, t.edit_text, scales, opts, sched, stats);
  };
}

TripletSampler make_baseline_sampler(BaselineKind kind, const TmedDenoiser& model,
                                     const NoiseSchedule& sched,
                                     const FeatureStats& stats,
                                     const GuidanceScales& scales,
                                     const Skeleton& skeleton,
                                     const BodyPartCache* cache,
                                     std::uint64_t seed) {
  return [kind, &model, &sched, stats, scales, &skeleton, cache,
          seed](const EditTriplet& t) {
    const int target_len = t.target.frames();
    FeatureSequence source;
    if (kind != BaselineKind::kMdm) {
      const Motion src = t.source.frames() == target_len
                             ? t.source
                             : resample(t.source, target_len);
      source = encode(canonicalize(src), skeleton);
    }
    BaselineRequest req;
    req.source = kind != BaselineKind::kMdm ? &source : nullptr;
    req.text = t.edit_text;
    req.scales = scales;
    req.target_length = target_len;
    req.seed = triplet_seed(seed, t.id);
    req.cache = cache;
    req.skeleton = &skeleton;
    return sample_baseline(kind, model, req, sched, stats);
  };
}

std::vector<SweepCell> guidance_sweep(
    const std::function<TripletSampler(const GuidanceScales&)>& sampler_factory,
    const std::vector<const EditTriplet*>& valset, const MotionEmbedder& embedder,
    const EvalOptions& opts, const std::vector<double>& text_grid,
    const std::vector<double>& source_grid) {
  std::vector<SweepCell> cells;
  for (double s_src : source_grid) {
    for (double s_txt : text_grid) {
      SweepCell cell;
      cell.scales = GuidanceScales{s_txt, s_src};
      const TripletSampler sampler = sampler_factory(cell.scales);
      cell.report = evaluate_editing(sampler, valset, embedder, opts);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

void save_sweep_dsv(const std::string& path, const std::vector<SweepCell>& cells) {
  std::ostringstream out;
  if (!cells.empty()) {
    out << "# gallery seed " << cells.front().report.gallery_seed << ", size "
        << cells.front().report.gallery_size << '\n';
  }
  out << "s_text\ts_source\tr1_to_target\tr1_to_source\n";
  for (const SweepCell& c : cells) {
    out << c.scales.text << '\t' << c.scales.source << '\t'
        << c.report.to_target.r1 << '\t' << c.report.to_source.r1 << '\n';
  }
  atomic_write(path, out.str());
}

std::vector<std::vector<const EditTriplet*>> nested_subsets(
    const std::vector<const EditTriplet*>& trainset,
    const std::vector<double>& fractions, std::uint64_t seed) {
  std::vector<std::size_t> order(trainset.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(Rng::derive(seed, 0xAB1A7E));
  rng.shuffle(order);
  std::vector<std::vector<const EditTriplet*>> subsets;
  for (double f : fractions) {
    if (f <= 0.0 || f > 1.0) {
      throw InvalidConfigError("datasize_ablation: fractions must lie in (0, 1]");
    }
    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(f * trainset.size())));
    std::vector<const EditTriplet*> subset;
    for (std::size_t i = 0; i < count && i < order.size(); ++i) {
      subset.push_back(trainset[order[i]]);
    }
    subsets.push_back(std::move(subset));
  }
  return subsets;
}

std::vector<AblationRun> datasize_ablation(
    const SubsetTrainerFn& trainer, const std::vector<const EditTriplet*>& trainset,
    const std::vector<const EditTriplet*>& testset, const MotionEmbedder& embedder,
    const EvalOptions& opts, const std::vector<double>& fractions,
    std::uint64_t seed) {
  const auto subsets = nested_subsets(trainset, fractions, seed);
  std::vector<AblationRun> runs;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    AblationRun run;
    run.fraction = fractions[i];
    run.train_count = static_cast<int>(subsets[i].size());
    const TripletSampler sampler = trainer(subsets[i]);
    run.report = evaluate_editing(sampler, testset, embedder, opts);
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace motedit
