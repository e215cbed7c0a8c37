#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "motedit/config.hpp"
#include "motedit/harness.hpp"
#include "motedit/io.hpp"
#include "motedit/mining.hpp"
#include "motedit/synth.hpp"

using namespace motedit;

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
};

KeyValueConfig load_config(const CommonOpts& common) {
  KeyValueConfig cfg;
  if (!common.config_path.empty()) {
    cfg = KeyValueConfig::load(resolve_data_path(common.config_path));
  }
  for (const std::string& kv : common.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw InvalidConfigError("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

DenoiserConfig denoiser_config(const KeyValueConfig& cfg) {
  DenoiserConfig dc;
  dc.d_model = cfg.get_int("denoiser.d_model", 64);
  dc.layers = cfg.get_int("denoiser.layers", 3);
  dc.heads = cfg.get_int("denoiser.heads", 4);
  dc.d_ff = cfg.get_int("denoiser.d_ff", 128);
  dc.max_text_tokens = cfg.get_int("denoiser.max_text_tokens", 77);
  dc.max_frames = cfg.get_int("denoiser.max_frames", 192);
  dc.dropout = cfg.get_double("denoiser.dropout", 0.0);
  dc.vocab_size = cfg.get_int("denoiser.vocab_size", 4096);
  dc.text_dim = cfg.get_int("denoiser.text_dim", 0);
  return dc;
}

EmbedderConfig embedder_config(const KeyValueConfig& cfg) {
  EmbedderConfig ec;
  ec.d_model = cfg.get_int("embedder.d_model", 64);
  ec.layers = cfg.get_int("embedder.layers", 2);
  ec.heads = cfg.get_int("embedder.heads", 4);
  ec.d_ff = cfg.get_int("embedder.d_ff", 128);
  ec.embed_dim = cfg.get_int("embedder.embed_dim", 128);
  ec.vocab_size = cfg.get_int("embedder.vocab_size", 4096);
  ec.frame_stride = cfg.get_int("embedder.frame_stride", 2);
  ec.temperature = cfg.get_double("embedder.temperature", 0.1);
  return ec;
}

GuidanceScales guidance_from(const KeyValueConfig& cfg) {
  return GuidanceScales{cfg.get_double("guidance.text", 2.0),
                        cfg.get_double("guidance.source", 2.0)};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<const EditTriplet*> split_of(const std::vector<EditTriplet>& all,
                                         const std::string& name) {
  return select_split(all, split_from_string(name));
}

int cmd_gen_synth(const std::string& out_dir, int count, std::uint64_t seed,
                  double fps, const std::string& ratios_str,
                  const std::string& motion_store, double min_dur, double max_dur) {
  SynthConfig sc;
  sc.count = count;
  sc.seed = seed;
  sc.fps = fps;
  sc.min_duration = min_dur;
  sc.max_duration = max_dur;
  std::vector<EditTriplet> triplets = generate_synthetic_triplets(sc);
  const std::vector<double> r = parse_list(ratios_str);
  if (r.size() != 3) throw InvalidConfigError("--ratios expects three values");
  apply_split(triplets, {r[0], r[1], r[2]}, seed);
  save_triplets(resolve_data_path(out_dir), triplets);
  if (!motion_store.empty()) {
    // Source clips as a plain motion store (mining input).
    std::vector<std::pair<std::string, Motion>> motions;
    for (const EditTriplet& t : triplets) motions.emplace_back(t.id, t.source);
    save_motion_dir(resolve_data_path(motion_store), motions);
  }
  KeyValueConfig meta;
  meta.set("seed", std::to_string(seed));
  meta.set("count", std::to_string(count));
  meta.set("fps", std::to_string(fps));
  meta.set("ratios", ratios_str);
  atomic_write(resolve_data_path(out_dir) + "/gen_config.txt", meta.dump());
  std::printf("wrote %zu triplets to %s (seed %llu)\n", triplets.size(),
              out_dir.c_str(), static_cast<unsigned long long>(seed));
  return 0;
}

int cmd_train(const std::string& what, const std::string& data_dir,
              const std::string& out_path, const KeyValueConfig& cfg) {
  const Skeleton skel = default_skeleton();
  const std::vector<EditTriplet> all = load_triplets(resolve_data_path(data_dir));
  const auto train = split_of(all, "train");
  if (train.empty()) throw InvalidConfigError("train split is empty");
  const std::uint64_t seed = cfg.get_u64("seed", 0);
  const double fps = all.front().source.fps;

  if (what == "embedder") {
    EmbedderTrainConfig tc;
    tc.steps = cfg.get_int("embedder.steps", 1800);
    tc.batch_size = cfg.get_int("embedder.batch", 32);
    tc.lr = cfg.get_double("embedder.lr", 1e-3);
    tc.seed = seed;
    tc.log_every = cfg.get_int("log_every", 100);
    EmbedderTrainReport rep;
    const MotionEmbedder emb = train_embedder(
        embedder_pairs_from_triplets(train, skel), embedder_config(cfg), tc, &rep);
    save_embedder(resolve_data_path(out_path), emb);
    std::printf("embedder: val loss %.4f -> %.4f in %.1f s; saved %s\n",
                rep.initial_val_loss, rep.final_val_loss, rep.seconds,
                out_path.c_str());
    return 0;
  }

  const bool text_only = what == "mdm";
  if (!text_only && what != "tmed") {
    throw InvalidConfigError("train: expected tmed, mdm or embedder, got '" + what + "'");
  }
  const int steps = cfg.get_int("steps", 100);
  const NoiseSchedule sched = cosine_schedule(steps);
  const FeatureStats stats = stats_from_triplets(train, skel);
  TmedDenoiser model(denoiser_config(cfg), Rng::derive(seed, 0xC0DE));
  const std::vector<TrainItem> items =
      make_train_items(train, skel, stats, model.text_encoder(), text_only);

  TrainConfig tc;
  tc.batch_size = cfg.get_int("train.batch", 16);
  const int per_epoch =
      std::max<int>(1, static_cast<int>(items.size()) / tc.batch_size);
  tc.steps = cfg.get_int("train.steps", cfg.get_int("epochs", 30) * per_epoch);
  tc.lr = cfg.get_double("train.lr", 3e-4);
  tc.seed = seed;
  tc.log_every = cfg.get_int("log_every", 200);
  const TrainReport rep = train_denoiser(model, items, sched, tc);
  save_checkpoint(resolve_data_path(out_path), what, model, steps, fps,
                  guidance_from(cfg), stats, seed);
  std::printf("%s: %d steps, final loss %.4f, %.1f s; saved %s\n", what.c_str(),
              tc.steps, rep.final_loss, rep.seconds, out_path.c_str());
  return 0;
}

int cmd_sample(const std::string& model_path, const std::string& data_dir,
               const std::string& id, const std::string& out_path,
               const KeyValueConfig& cfg, const std::string& text_override) {
  const Skeleton skel = default_skeleton();
  const Checkpoint ck = load_checkpoint(resolve_data_path(model_path));
  const NoiseSchedule sched = cosine_schedule(ck.schedule_steps);
  const std::vector<EditTriplet> all = load_triplets(resolve_data_path(data_dir));
  const EditTriplet* triplet = nullptr;
  for (const EditTriplet& t : all) {
    if (t.id == id) triplet = &t;
  }
  if (triplet == nullptr) throw InvalidConfigError("sample: unknown triplet id " + id);

  GuidanceScales scales = ck.guidance;
  if (cfg.get("guidance.text")) scales.text = cfg.get_double("guidance.text", scales.text);
  if (cfg.get("guidance.source")) scales.source = cfg.get_double("guidance.source", scales.source);

  const FeatureSequence source = encode(triplet->source, skel);
  SampleOptions opts;
  opts.target_length = triplet->target.frames();
  opts.seed = cfg.get_u64("seed", 0);
  const std::string text = text_override.empty() ? triplet->edit_text : text_override;
  const FeatureSequence gen =
      sample(*ck.model, &source, text, scales, opts, sched, ck.stats);
  save_features(resolve_data_path(out_path), gen);
  std::printf("sampled %d frames for '%s' (text: %s) -> %s\n", gen.frames(),
              id.c_str(), text.c_str(), out_path.c_str());
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& embedder_path,
             const std::string& data_dir, const std::string& baseline,
             const std::string& split, int gallery, bool full_gallery,
             const std::string& out_path, const std::string& cache_path,
             const KeyValueConfig& cfg) {
  const Skeleton skel = default_skeleton();
  const Checkpoint ck = load_checkpoint(resolve_data_path(model_path));
  const NoiseSchedule sched = cosine_schedule(ck.schedule_steps);
  const MotionEmbedder embedder = load_embedder(resolve_data_path(embedder_path));
  const std::vector<EditTriplet> all = load_triplets(resolve_data_path(data_dir));
  const auto testset = split_of(all, split);

  GuidanceScales scales = ck.guidance;
  if (cfg.get("guidance.text")) scales.text = cfg.get_double("guidance.text", scales.text);
  if (cfg.get("guidance.source")) scales.source = cfg.get_double("guidance.source", scales.source);
  const std::uint64_t seed = cfg.get_u64("seed", 0);

  BodyPartCache cache;
  const BodyPartCache* cache_ptr = nullptr;
  if (!cache_path.empty()) {
    cache = BodyPartCache::load(resolve_data_path(cache_path));
    cache_ptr = &cache;
  }

  TripletSampler sampler;
  if (baseline.empty()) {
    sampler = make_editing_sampler(*ck.model, sched, ck.stats, scales, skel, seed);
  } else {
    sampler = make_baseline_sampler(baseline_from_string(baseline), *ck.model,
                                    sched, ck.stats, scales, skel, cache_ptr, seed);
  }

  EvalOptions opts;
  opts.gallery_size = gallery;
  opts.seed = seed;
  opts.full_gallery = full_gallery;
  opts.skeleton = &skel;
  const EvalReport report = evaluate_editing(sampler, testset, embedder, opts);
  std::fputs(format_report_table(report).c_str(), stdout);
  if (!out_path.empty()) save_report(resolve_data_path(out_path), report);
  return 0;
}

int cmd_sweep(const std::string& model_path, const std::string& embedder_path,
              const std::string& data_dir, const std::string& grid_str,
              const std::string& split, int gallery, const std::string& out_path,
              const KeyValueConfig& cfg) {
  const Skeleton skel = default_skeleton();
  const Checkpoint ck = load_checkpoint(resolve_data_path(model_path));
  const NoiseSchedule sched = cosine_schedule(ck.schedule_steps);
  const MotionEmbedder embedder = load_embedder(resolve_data_path(embedder_path));
  const std::vector<EditTriplet> all = load_triplets(resolve_data_path(data_dir));
  const auto valset = split_of(all, split);
  const std::uint64_t seed = cfg.get_u64("seed", 0);

  EvalOptions opts;
  opts.gallery_size = gallery;
  opts.seed = seed;
  opts.skeleton = &skel;
  opts.compute_l2 = false;

  const std::vector<double> grid = parse_list(grid_str);
  const auto cells = guidance_sweep(
      [&](const GuidanceScales& scales) {
        return make_editing_sampler(*ck.model, sched, ck.stats, scales, skel, seed);
      },
      valset, embedder, opts, grid, grid);
  for (const SweepCell& c : cells) {
    std::printf("s_L=%.1f s_MS=%.1f  to-target R@1 %.2f  to-source R@1 %.2f\n",
                c.scales.text, c.scales.source, c.report.to_target.r1,
                c.report.to_source.r1);
  }
  if (!out_path.empty()) save_sweep_dsv(resolve_data_path(out_path), cells);
  return 0;
}

int cmd_ablate(const std::string& embedder_path, const std::string& data_dir,
               const std::string& fractions_str, const std::string& split,
               int gallery, const std::string& out_dir, const KeyValueConfig& cfg) {
  const Skeleton skel = default_skeleton();
  const MotionEmbedder embedder = load_embedder(resolve_data_path(embedder_path));
  const std::vector<EditTriplet> all = load_triplets(resolve_data_path(data_dir));
  const auto train = split_of(all, "train");
  const auto testset = split_of(all, split);
  const std::uint64_t seed = cfg.get_u64("seed", 0);
  const int steps = cfg.get_int("steps", 100);
  const NoiseSchedule sched = cosine_schedule(steps);
  const GuidanceScales scales = guidance_from(cfg);

  EvalOptions opts;
  opts.gallery_size = gallery;
  opts.seed = seed;
  opts.skeleton = &skel;

  // Models must outlive the returned samplers.
  std::vector<std::unique_ptr<TmedDenoiser>> models;
  std::vector<FeatureStats> stats_store;
  const auto trainer = [&](const std::vector<const EditTriplet*>& subset) {
    stats_store.push_back(stats_from_triplets(subset, skel));
    const FeatureStats& stats = stats_store.back();
    models.push_back(
        std::make_unique<TmedDenoiser>(denoiser_config(cfg), Rng::derive(seed, 0xC0DE)));
    TmedDenoiser& model = *models.back();
    const std::vector<TrainItem> items =
        make_train_items(subset, skel, stats, model.text_encoder(), false);
    TrainConfig tc;
    tc.batch_size = cfg.get_int("train.batch", 16);
    tc.steps = cfg.get_int("train.steps", 3000);
    tc.lr = cfg.get_double("train.lr", 3e-4);
    tc.seed = seed;
    tc.log_every = cfg.get_int("log_every", 0);
    train_denoiser(model, items, sched, tc);
    return make_editing_sampler(model, sched, stats, scales, skel, seed);
  };

  const std::vector<double> fractions = parse_list(fractions_str);
  const auto runs =
      datasize_ablation(trainer, train, testset, embedder, opts, fractions, seed);
  for (const AblationRun& r : runs) {
    std::printf("fraction %.2f (%d triplets): to-target R@1 %.2f  AvgR %.2f\n",
                r.fraction, r.train_count, r.report.to_target.r1,
                r.report.to_target.avg_rank);
    if (!out_dir.empty()) {
      std::ostringstream name;
      name << out_dir << "/ablation_" << static_cast<int>(r.fraction * 100) << ".json";
      save_report(resolve_data_path(name.str()), r.report);
    }
  }
  return 0;
}

int cmd_mine(const std::string& motions_dir, const std::string& embedder_path,
             const std::string& out_dir, const std::string& durations_str,
             double stride, int k, double dedup) {
  const Skeleton skel = default_skeleton();
  const MotionEmbedder embedder = load_embedder(resolve_data_path(embedder_path));
  const auto entries = read_motion_manifest(resolve_data_path(motions_dir));
  std::vector<Motion> motions;
  std::vector<MotionWindow> windows;
  std::vector<int> parent_of_window;
  motions.reserve(entries.size());
  for (const auto& e : entries) {
    motions.push_back(load_motion_from_dir(resolve_data_path(motions_dir), e));
  }
  for (std::size_t i = 0; i < motions.size(); ++i) {
    const auto ws =
        slide_windows(motions[i], entries[i].id, parse_list(durations_str), stride);
    for (const MotionWindow& w : ws) {
      windows.push_back(w);
      parent_of_window.push_back(static_cast<int>(i));
    }
  }
  std::vector<const Motion*> parents;
  for (const Motion& m : motions) parents.push_back(&m);
  embed_windows(windows, parents, parent_of_window, embedder, skel);
  const auto pairs = mine_pairs(windows, k, dedup);

  std::vector<CandidatePair> pooled;
  std::map<int, Motion> clips;
  for (const CandidatePair& p : pairs) {
    if (p.status != PairStatus::kPooled) continue;
    pooled.push_back(p);
    for (int w : {p.source_window, p.target_window}) {
      if (!clips.count(w)) {
        clips[w] = extract_window(motions[parent_of_window[w]], windows[w]);
      }
    }
  }
  export_pool(pooled, windows, clips, resolve_data_path(out_dir));
  std::printf("mined %zu windows, pooled %zu pairs -> %s\n", windows.size(),
              pooled.size(), out_dir.c_str());
  return 0;
}

int cmd_export(const std::string& data_dir, const std::string& id,
               const std::string& which, const std::string& features_path,
               const std::string& out_path) {
  const Skeleton skel = default_skeleton();
  Motion motion;
  if (!features_path.empty()) {
    const FeatureSequence f = load_features(resolve_data_path(features_path));
    motion = decode(f, skel);
  } else {
    const std::vector<EditTriplet> all = load_triplets(resolve_data_path(data_dir));
    const EditTriplet* triplet = nullptr;
    for (const EditTriplet& t : all) {
      if (t.id == id) triplet = &t;
    }
    if (triplet == nullptr) throw InvalidConfigError("export: unknown triplet id " + id);
    motion = which == "source" ? triplet->source : triplet->target;
  }
  std::ostringstream out;
  out << "# joint animation: one `frame <index> x y z ...` line per frame, "
         "22 joints in skeleton order\n";
  out << "version 1\nfps " << motion.fps << "\njoints " << kNumJoints << "\nnames";
  for (int j = 0; j < kNumJoints; ++j) out << ' ' << skel.joint_names[j];
  out << '\n';
  out.precision(9);
  for (int t = 0; t < motion.frames(); ++t) {
    const auto pos = motion.joints(t, skel);
    out << "frame " << t;
    for (int j = 0; j < kNumJoints; ++j) {
      out << ' ' << pos[j].x() << ' ' << pos[j].y() << ' ' << pos[j].z();
    }
    out << '\n';
  }
  atomic_write(resolve_data_path(out_path), out.str());
  std::printf("exported %d frames to %s\n", motion.frames(), out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"motedit: text-driven motion editing workbench"};
  app.require_subcommand(1);
  CommonOpts common;
  app.add_option("--config", common.config_path, "run config file (key = value)");
  app.add_option("--set", common.overrides, "override config keys (key=value)");

  // gen-synth
  auto* gen = app.add_subcommand("gen-synth", "generate synthetic edit triplets");
  std::string gen_out = "data/synth";
  int gen_count = 2000;
  std::uint64_t gen_seed = 0;
  double gen_fps = 20.0;
  std::string gen_ratios = "0.80,0.05,0.15";
  std::string gen_store;
  double gen_min_dur = 2.0, gen_max_dur = 2.7;
  gen->add_option("--out", gen_out, "output triplet store");
  gen->add_option("--count", gen_count, "number of triplets");
  gen->add_option("--seed", gen_seed, "run seed");
  gen->add_option("--fps", gen_fps, "frame rate");
  gen->add_option("--ratios", gen_ratios, "train,val,test ratios");
  gen->add_option("--motion-store", gen_store, "also export source clips as a motion store");
  gen->add_option("--min-duration", gen_min_dur, "minimum clip seconds");
  gen->add_option("--max-duration", gen_max_dur, "maximum clip seconds");

  // train
  auto* train = app.add_subcommand("train", "train tmed, mdm or embedder");
  std::string train_what = "tmed", train_data = "data/synth", train_out = "model.medc";
  train->add_option("what", train_what, "tmed | mdm | embedder")->required();
  train->add_option("--data", train_data, "triplet store");
  train->add_option("--out", train_out, "output checkpoint");

  // sample
  auto* smp = app.add_subcommand("sample", "sample an edited motion");
  std::string smp_model = "model.medc", smp_data = "data/synth", smp_id, smp_out = "gen.marr", smp_text;
  smp->add_option("--model", smp_model, "checkpoint");
  smp->add_option("--data", smp_data, "triplet store");
  smp->add_option("--id", smp_id, "triplet id")->required();
  smp->add_option("--out", smp_out, "output feature file");
  smp->add_option("--text", smp_text, "override edit text");

  // eval
  auto* ev = app.add_subcommand("eval", "run the retrieval benchmark");
  std::string ev_model = "model.medc", ev_emb = "embedder.memb", ev_data = "data/synth";
  std::string ev_baseline, ev_split = "test", ev_out, ev_cache;
  int ev_gallery = 32;
  bool ev_full = false;
  ev->add_option("--model", ev_model, "checkpoint");
  ev->add_option("--embedder", ev_emb, "embedder file");
  ev->add_option("--data", ev_data, "triplet store");
  ev->add_option("--baseline", ev_baseline, "MDM | MDM_S | MDM-BP | MDM-BP_S");
  ev->add_option("--split", ev_split, "split to evaluate");
  ev->add_option("--gallery", ev_gallery, "gallery size");
  ev->add_flag("--full-gallery", ev_full, "use the whole split as the gallery");
  ev->add_option("--out", ev_out, "report JSON path");
  ev->add_option("--bodypart-cache", ev_cache, "body-part response cache file");

  // sweep
  auto* sw = app.add_subcommand("sweep", "guidance-scale grid sweep");
  std::string sw_model = "model.medc", sw_emb = "embedder.memb", sw_data = "data/synth";
  std::string sw_grid = "1,2,3,4,5", sw_split = "val", sw_out;
  int sw_gallery = 32;
  sw->add_option("--model", sw_model, "checkpoint");
  sw->add_option("--embedder", sw_emb, "embedder file");
  sw->add_option("--data", sw_data, "triplet store");
  sw->add_option("--grid", sw_grid, "scale grid values");
  sw->add_option("--split", sw_split, "split to evaluate");
  sw->add_option("--gallery", sw_gallery, "gallery size");
  sw->add_option("--out", sw_out, "plot-data TSV path");

  // ablate-data
  auto* ab = app.add_subcommand("ablate-data", "training-set size ablation");
  std::string ab_emb = "embedder.memb", ab_data = "data/synth";
  std::string ab_fracs = "0.1,0.5,1.0", ab_split = "test", ab_out;
  int ab_gallery = 32;
  ab->add_option("--embedder", ab_emb, "embedder file");
  ab->add_option("--data", ab_data, "triplet store");
  ab->add_option("--fractions", ab_fracs, "training fractions");
  ab->add_option("--split", ab_split, "split to evaluate");
  ab->add_option("--gallery", ab_gallery, "gallery size");
  ab->add_option("--out", ab_out, "report output directory");

  // mine
  auto* mn = app.add_subcommand("mine", "mine candidate edit pairs");
  std::string mn_motions, mn_emb = "embedder.memb", mn_out = "pool";
  std::string mn_durations = "3,4,5";
  double mn_stride = 1.0, mn_dedup = 0.99;
  int mn_k = 2;
  mn->add_option("--motions", mn_motions, "motion store directory")->required();
  mn->add_option("--embedder", mn_emb, "embedder file");
  mn->add_option("--out", mn_out, "annotation pool directory");
  mn->add_option("--durations", mn_durations, "window durations in seconds");
  mn->add_option("--stride", mn_stride, "window stride in seconds");
  mn->add_option("--k", mn_k, "neighbors per query");
  mn->add_option("--dedup", mn_dedup, "too-similar threshold");

  // export
  auto* ex = app.add_subcommand("export", "export joint positions as text animation");
  std::string ex_data = "data/synth", ex_id, ex_which = "target", ex_feat, ex_out = "anim.txt";
  ex->add_option("--data", ex_data, "triplet store");
  ex->add_option("--id", ex_id, "triplet id");
  ex->add_option("--which", ex_which, "source | target");
  ex->add_option("--features", ex_feat, "feature file to decode instead");
  ex->add_option("--out", ex_out, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    const KeyValueConfig cfg = load_config(common);
    if (gen->parsed()) {
      return cmd_gen_synth(gen_out, gen_count, gen_seed, gen_fps, gen_ratios,
                           gen_store, gen_min_dur, gen_max_dur);
    }
    if (train->parsed()) return cmd_train(train_what, train_data, train_out, cfg);
    if (smp->parsed()) return cmd_sample(smp_model, smp_data, smp_id, smp_out, cfg, smp_text);
    if (ev->parsed()) {
      return cmd_eval(ev_model, ev_emb, ev_data, ev_baseline, ev_split, ev_gallery,
                      ev_full, ev_out, ev_cache, cfg);
    }
    if (sw->parsed()) {
      return cmd_sweep(sw_model, sw_emb, sw_data, sw_grid, sw_split, sw_gallery,
                       sw_out, cfg);
    }
    if (ab->parsed()) {
      return cmd_ablate(ab_emb, ab_data, ab_fracs, ab_split, ab_gallery, ab_out, cfg);
    }
    if (mn->parsed()) {
      return cmd_mine(mn_motions, mn_emb, mn_out, mn_durations, mn_stride, mn_k,
                      mn_dedup);
    }
    if (ex->parsed()) return cmd_export(ex_data, ex_id, ex_which, ex_feat, ex_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "motedit: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
