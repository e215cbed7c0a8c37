// Acceptance suite: runs every criterion end to end and prints one
// [PASS]/[FAIL] line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "motedit/baselines.hpp"
#include "motedit/harness.hpp"
#include "motedit/mining.hpp"
#include "motedit/synth.hpp"
#include "motedit/training.hpp"

using namespace motedit;
using Clock = std::chrono::steady_clock;

namespace {

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Checker {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

const Skeleton kSkel = default_skeleton();

// Shared end-to-end state for criteria 6, 7 and 8.
struct E2E {
  std::vector<EditTriplet> triplets;
  std::vector<const EditTriplet*> train;
  std::vector<const EditTriplet*> test;      // evaluation subset
  std::vector<const EditTriplet*> test_all;  // full test split
  FeatureStats stats;
  NoiseSchedule sched;
  std::unique_ptr<MotionEmbedder> embedder;
  std::unique_ptr<TmedDenoiser> tmed;
  std::unique_ptr<TmedDenoiser> mdm;
  double embedder_self_retrieval = 0.0;
  double tmed_train_seconds = 0.0;
  EvalReport r_tmed, r_mdm, r_bp;
  GuidanceScales scales{2.0, 2.0};
  EvalOptions opts;
  DenoiserConfig dconf;
  TrainConfig tconf;
  bool built = false;
};

E2E g_e2e;

DenoiserConfig toy_denoiser_config() {
  DenoiserConfig dc;
  dc.d_model = 64;
  dc.layers = 3;
  dc.heads = 4;
  dc.d_ff = 128;
  dc.max_frames = 192;
  return dc;
}

TmedDenoiser train_editing_model(const std::vector<const EditTriplet*>& subset,
                                 const E2E& e, bool text_only, std::uint64_t seed,
                                 double* train_seconds) {
  TmedDenoiser model(e.dconf, Rng::derive(seed, 0xC0DE));
  const FeatureStats stats = text_only ? e.stats : e.stats;  // shared stats
  const auto items =
      make_train_items(subset, kSkel, stats, model.text_encoder(), text_only);
  TrainConfig tc = e.tconf;
  tc.seed = seed;
  tc.text_only = text_only;
  const TrainReport rep = train_denoiser(model, items, e.sched, tc);
  if (train_seconds != nullptr) *train_seconds = rep.seconds;
  return model;
}

void build_e2e() {
  if (g_e2e.built) return;
  E2E& e = g_e2e;
  std::printf("  [e2e] generating 2048 synthetic triplets...\n");
  std::fflush(stdout);
  SynthConfig sc;
  sc.count = 2048;
  sc.seed = 7;
  e.triplets = generate_synthetic_triplets(sc);
  apply_split(e.triplets, {0.80, 0.05, 0.15}, 7);
  e.train = select_split(e.triplets, Split::kTrain);
  e.test_all = select_split(e.triplets, Split::kTest);
  e.test.assign(e.test_all.begin(), e.test_all.begin() + 160);
  e.stats = stats_from_triplets(e.train, kSkel);
  e.sched = cosine_schedule(100);
  e.dconf = toy_denoiser_config();
  e.tconf.steps = 2500;
  e.tconf.batch_size = 16;
  e.tconf.lr = 3e-4;
  e.opts.gallery_size = 32;
  e.opts.seed = 11;
  e.opts.skeleton = &kSkel;

  std::printf("  [e2e] training the retrieval embedder...\n");
  std::fflush(stdout);
  EmbedderTrainConfig etc_;
  etc_.steps = 1800;
  etc_.batch_size = 32;
  etc_.seed = 2;
  const auto train_pairs = embedder_pairs_from_triplets(e.train, kSkel);
  e.embedder = std::make_unique<MotionEmbedder>(
      train_embedder(train_pairs, EmbedderConfig{}, etc_, nullptr));
  const std::vector<std::pair<FeatureSequence, std::string>> sr_sub(
      train_pairs.begin(), train_pairs.begin() + 640);
  e.embedder_self_retrieval = self_retrieval_r1(*e.embedder, sr_sub, 32, 5);
  std::printf("  [e2e] embedder self-retrieval R@1 on training pairs: %.1f%%\n",
              e.embedder_self_retrieval);

  std::printf("  [e2e] training TMED-toy (source + text conditions)...\n");
  std::fflush(stdout);
  e.tmed = std::make_unique<TmedDenoiser>(
      train_editing_model(e.train, e, false, 1, &e.tmed_train_seconds));

  std::printf("  [e2e] training MDM-toy (text only)...\n");
  std::fflush(stdout);
  e.mdm = std::make_unique<TmedDenoiser>(
      train_editing_model(e.train, e, true, 2, nullptr));

  std::printf("  [e2e] evaluating TMED / MDM / MDM-BP...\n");
  std::fflush(stdout);
  e.r_tmed = evaluate_editing(
      make_editing_sampler(*e.tmed, e.sched, e.stats, e.scales, kSkel, 17),
      e.test, *e.embedder, e.opts);
  e.r_mdm = evaluate_editing(
      make_baseline_sampler(BaselineKind::kMdm, *e.mdm, e.sched, e.stats,
                            e.scales, kSkel, nullptr, 17),
      e.test, *e.embedder, e.opts);
  static const BodyPartCache cache =
      BodyPartCache::load(std::string(MOTEDIT_SOURCE_DIR) + "/assets/bodyparts_cache.tsv");
  e.r_bp = evaluate_editing(
      make_baseline_sampler(BaselineKind::kMdmBp, *e.mdm, e.sched, e.stats,
                            e.scales, kSkel, &cache, 17),
      e.test, *e.embedder, e.opts);
  std::printf("  [e2e] TMED:\n%s", format_report_table(e.r_tmed).c_str());
  std::printf("  [e2e] MDM-BP:\n%s", format_report_table(e.r_bp).c_str());
  std::printf("  [e2e] MDM:\n%s", format_report_table(e.r_mdm).c_str());
  std::fflush(stdout);
  e.built = true;
}

// --- criteria -------------------------------------------------------------

void criterion1(Checker& c) {
  const auto t0 = Clock::now();
  Rng rng(1001);
  double worst_fk = 0.0, worst_feat = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int frames = 2 + static_cast<int>(rng.uniform_int(99));
    const Motion m =
        canonicalize(motedit::testutil::random_motion(rng, frames, false));
    const FeatureSequence f = encode(m, kSkel);
    const Motion back = decode(f, kSkel, m.fps);
    worst_fk = std::max(worst_fk, motedit::testutil::max_joint_error(m, back, kSkel));
    const FeatureSequence f2 = encode(back, kSkel);
    worst_feat = std::max(
        worst_feat, (f2.data.leftCols(kJointPosOffset) -
                     f.data.leftCols(kJointPosOffset)).cwiseAbs().maxCoeff());
  }
  const double elapsed = secs_since(t0);
  c.require(worst_fk < 1e-4, "FK error " + std::to_string(worst_fk));
  c.require(worst_feat < 1e-5, "feature error " + std::to_string(worst_feat));
  c.require(elapsed < 60.0, "runtime " + std::to_string(elapsed) + " s");
  std::ostringstream d;
  d << "1000 motions, max FK err " << worst_fk << " m, max feat err "
    << worst_feat << ", " << elapsed << " s";
  c.note(d.str());
}

void criterion2(Checker& c) {
  Rng rng(1002);
  double worst_6d = 0.0, worst_fz = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Mat3 r = random_rotation(rng);
    worst_6d = std::max(worst_6d, (sixd_to_rotmat(rotmat_to_6d(r)) - r).norm());
    const ZFactorization z = factor_z_rotation(r);
    if (!z.degenerate) {
      worst_fz = std::max(worst_fz, (rot_z(z.theta_z) * z.r_xy - r).norm());
    }
  }
  c.require(worst_6d < 1e-9, "6d round trip " + std::to_string(worst_6d));
  c.require(worst_fz < 1e-9, "recomposition " + std::to_string(worst_fz));
  std::ostringstream d;
  d << "10k rotations, 6d err " << worst_6d << ", recomposition err " << worst_fz;
  c.note(d.str());
}

void criterion3(Checker& c) {
  struct Stub : X0Model {
    MatX predict_x0(const MatX& x, int, const std::string* text,
                    const MatX* source) const override {
      double v = 0.0;
      if (source != nullptr && text != nullptr) {
        v = 3.0;
      } else if (source != nullptr) {
        v = 1.0;
      }
      return MatX::Constant(x.rows(), x.cols(), v);
    }
  };
  struct Noisy : X0Model {
    MatX predict_x0(const MatX& x, int, const std::string* text,
                    const MatX* source) const override {
      Rng rng((source ? 2 : 0) + (text ? 1 : 0) + 41);
      MatX out(x.rows(), x.cols());
      for (Eigen::Index r = 0; r < x.rows(); ++r)
        for (Eigen::Index k = 0; k < x.cols(); ++k) out(r, k) = rng.normal();
      return out;
    }
  };
  const MatX x = MatX::Zero(3, 4);
  const MatX src = MatX::Zero(3, 4);
  const std::string text = "t";
  Noisy noisy;
  const MatX full = noisy.predict_x0(x, 1, &text, &src);
  const MatX uncond = noisy.predict_x0(x, 1, nullptr, nullptr);
  const MatX g11 = guided_x0(noisy, x, 1, &src, &text, {1.0, 1.0});
  const MatX g00 = guided_x0(noisy, x, 1, &src, &text, {0.0, 0.0});
  c.require((g11.array() == full.array()).all(), "(1,1) not bitwise equal");
  c.require((g00.array() == uncond.array()).all(), "(0,0) not bitwise equal");
  Stub stub;
  const MatX g = guided_x0(stub, x, 1, &src, &text, {2.0, 2.0});
  c.require(g(0, 0) == 6.0, "scalar case gave " + std::to_string(g(0, 0)));
  c.note("telescoping bitwise, scalar case (0,1,3)x(2,2) = 6");
}

void criterion4(Checker& c) {
  const NoiseSchedule s = cosine_schedule(300);
  c.require(s.alpha_bar[0] == 1.0, "alpha_bar[0] != 1");
  bool monotone = true;
  for (int t = 1; t <= 300; ++t) monotone = monotone && s.alpha_bar[t] < s.alpha_bar[t - 1];
  c.require(monotone, "alpha_bar not strictly decreasing");
  c.require(s.alpha_bar[300] < 0.01,
            "alpha_bar[300] = " + std::to_string(s.alpha_bar[300]));

  // Empirical q_sample variance at a fixed timestep.
  Rng rng(1004);
  const int t = 150;
  double sum = 0.0, sumsq = 0.0;
  const int n = 100000;
  const MatX zero = MatX::Zero(1, 1);
  for (int i = 0; i < n; ++i) {
    MatX eps(1, 1);
    eps(0, 0) = rng.normal();
    const double v = q_sample(zero, t, eps, s)(0, 0);
    sum += v;
    sumsq += v * v;
  }
  const double var = sumsq / n - (sum / n) * (sum / n);
  const double expect = 1.0 - s.alpha_bar[t];
  c.require(std::abs(var - expect) / expect < 0.02,
            "q_sample variance off by " +
                std::to_string(100.0 * std::abs(var - expect) / expect) + "%");

  // Gradient check on a tiny double-precision denoiser.
  DenoiserConfig dc;
  dc.d_model = 16;
  dc.layers = 1;
  dc.heads = 2;
  dc.d_ff = 32;
  dc.max_frames = 64;
  dc.vocab_size = 16;
  TmedDenoiserT<double> model(dc, 77);
  c.require(model.param_count() <= 10000,
            "gradient-check model has " + std::to_string(model.param_count()) +
                " params");
  const NoiseSchedule sg = cosine_schedule(20);
  const HashedTextEncoder enc(dc.vocab_size, 77);
  const TextEncoding text = enc.encode("bend lower");
  Rng rg(1005);
  auto randmat = [&](int r) {
    nn::MatT<double> m(r, kFeatureDim);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < kFeatureDim; ++j) m(i, j) = rg.normal();
    return m;
  };
  const nn::MatT<double> target = randmat(5);
  const nn::MatT<double> source = randmat(4);
  const nn::MatT<double> eps = randmat(5);
  auto loss_value = [&]() {
    nn::Tape<double> tape(model.params().size());
    return build_training_loss<double>(tape, model, target, &source, &text, 7,
                                       eps, sg)
        ->val(0, 0);
  };
  nn::Tape<double> tape(model.params().size());
  nn::Node<double>* loss =
      build_training_loss<double>(tape, model, target, &source, &text, 7, eps, sg);
  tape.backward(loss);
  double worst = 0.0;
  const double h = 1e-4;
  int checked = 0;
  while (checked < 100) {
    auto& ps = model.params();
    const std::size_t pi = rg.uniform_int(ps.size());
    if (ps[pi].w.size() == 0) continue;
    const Eigen::Index k = static_cast<Eigen::Index>(rg.uniform_int(ps[pi].w.size()));
    const double orig = ps[pi].w.data()[k];
    ps[pi].w.data()[k] = orig + h;
    const double fp = loss_value();
    ps[pi].w.data()[k] = orig - h;
    const double fm = loss_value();
    ps[pi].w.data()[k] = orig;
    const double num = (fp - fm) / (2 * h);
    const double ana =
        tape.param_grads[pi].size() > 0 ? tape.param_grads[pi].data()[k] : 0.0;
    worst = std::max(worst, std::abs(num - ana) /
                                std::max({std::abs(num), std::abs(ana), 1e-8}));
    ++checked;
  }
  c.require(worst < 1e-3, "gradient rel err " + std::to_string(worst));
  std::ostringstream d;
  d << "alpha_bar[300] = " << s.alpha_bar[300] << ", var err "
    << 100.0 * std::abs(var - expect) / expect << "%, grad rel err " << worst;
  c.note(d.str());
}

void criterion5(Checker& c) {
  Rng rng(1006);
  int counts[4] = {0, 0, 0, 0};
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[static_cast<int>(draw_condition_dropout(rng))]++;
  const double keep = 100.0 * counts[0] / n;
  const double ds = 100.0 * counts[1] / n;
  const double dt = 100.0 * counts[2] / n;
  const double db = 100.0 * counts[3] / n;
  c.require(std::abs(ds - 5.0) < 0.5, "drop-source " + std::to_string(ds));
  c.require(std::abs(dt - 5.0) < 0.5, "drop-text " + std::to_string(dt));
  c.require(std::abs(db - 5.0) < 0.5, "drop-both " + std::to_string(db));
  c.require(std::abs(keep - 85.0) < 0.5, "keep " + std::to_string(keep));
  std::ostringstream d;
  d << "empirical %: " << ds << "/" << dt << "/" << db << "/" << keep;
  c.note(d.str());
}

void criterion6(Checker& c) {
  build_e2e();
  const E2E& e = g_e2e;
  c.require(e.tmed_train_seconds < 1800.0,
            "TMED training took " + std::to_string(e.tmed_train_seconds) + " s");
  c.require(e.embedder_self_retrieval >= 90.0,
            "embedder self-retrieval " + std::to_string(e.embedder_self_retrieval));
  const double tmed = e.r_tmed.to_target.r1;
  const double mdm = e.r_mdm.to_target.r1;
  const double bp = e.r_bp.to_target.r1;
  c.require(tmed >= 10.0, "TMED R@1 " + std::to_string(tmed) + " < 10");
  c.require(tmed >= mdm + 5.0, "TMED does not beat MDM by 5 points");
  c.require(tmed > bp, "ordering TMED > MDM-BP violated");
  c.require(bp > mdm, "ordering MDM-BP > MDM violated");
  std::ostringstream d;
  d << "to-target R@1: TMED " << tmed << " > MDM-BP " << bp << " > MDM " << mdm
    << " (train " << e.tmed_train_seconds << " s)";
  c.note(d.str());
}

void criterion7(Checker& c) {
  build_e2e();
  const E2E& e = g_e2e;
  const auto subsets = nested_subsets(e.train, {0.1, 0.5, 1.0}, 19);
  // Nested-subset sanity.
  for (const EditTriplet* t : subsets[0]) {
    c.require(std::find(subsets[1].begin(), subsets[1].end(), t) != subsets[1].end(),
              "subsets not nested");
  }
  std::vector<double> r1s;
  for (int i = 0; i < 2; ++i) {
    std::printf("  [e2e] ablation: training on %zu triplets (%.0f%%)...\n",
                subsets[i].size(), 100.0 * (i == 0 ? 0.1 : 0.5));
    std::fflush(stdout);
    const TmedDenoiser model =
        train_editing_model(subsets[i], e, false, 1, nullptr);
    const EvalReport r = evaluate_editing(
        make_editing_sampler(model, e.sched, e.stats, e.scales, kSkel, 17),
        e.test, *e.embedder, e.opts);
    r1s.push_back(r.to_target.r1);
  }
  r1s.push_back(e.r_tmed.to_target.r1);  // the 100% model from criterion 6
  c.require(r1s[1] >= r1s[0] - 2.0, "50% below 10% beyond tolerance");
  c.require(r1s[2] >= r1s[1] - 2.0, "100% below 50% beyond tolerance");
  std::ostringstream d;
  d << "to-target R@1 at 10/50/100%: " << r1s[0] << " / " << r1s[1] << " / "
    << r1s[2];
  c.note(d.str());
}

void criterion8(Checker& c) {
  // rank_gallery against the exhaustive oracle.
  Rng rng(1008);
  bool rank_ok = true;
  for (int trial = 0; trial < 1000 && rank_ok; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(63));
    const int dim = 4 + static_cast<int>(rng.uniform_int(12));
    auto unit = [&]() {
      VecX v(dim);
      for (int i = 0; i < dim; ++i) v[i] = rng.normal();
      return VecX(v / v.norm());
    };
    const VecX q = unit();
    std::vector<VecX> gallery;
    for (int i = 0; i < n; ++i) gallery.push_back(unit());
    const std::vector<int> ranks = rank_gallery(q, gallery);
    for (int i = 0; i < n; ++i) {
      int rank = 1;
      const double si = q.dot(gallery[i]);
      for (int j = 0; j < n; ++j) {
        const double sj = q.dot(gallery[j]);
        if (sj > si || (sj == si && j < i)) ++rank;
      }
      rank_ok = rank_ok && ranks[i] == rank;
    }
  }
  c.require(rank_ok, "rank_gallery disagrees with the brute-force oracle");

  // Ground-truth sampler upper bound with the trained embedder.
  build_e2e();
  const E2E& e = g_e2e;
  const TripletSampler gt = [&](const EditTriplet& t) {
    return encode(t.target, kSkel);
  };
  const EvalReport r = evaluate_editing(gt, e.test, *e.embedder, e.opts);
  c.require(r.to_target.r1 == 100.0,
            "GT R@1 " + std::to_string(r.to_target.r1));
  c.require(r.to_target.avg_rank == 1.0,
            "GT AvgR " + std::to_string(r.to_target.avg_rank));

  // FID closed-form checks.
  std::vector<VecX> a;
  Rng rf(1009);
  for (int i = 0; i < 50; ++i) {
    VecX v(8);
    for (int d = 0; d < 8; ++d) v[d] = rf.normal();
    a.push_back(v);
  }
  const double self_fid = fid(a, a);
  c.require(std::abs(self_fid) < 1e-6, "identical-set FID " + std::to_string(self_fid));
  VecX offset = VecX::Zero(8);
  offset[1] = 0.75;
  offset[5] = -1.25;
  std::vector<VecX> b;
  for (const VecX& v : a) b.push_back(v + offset);
  const double shifted = fid(a, b);
  c.require(std::abs(shifted - offset.squaredNorm()) < 1e-6,
            "mean-shift FID " + std::to_string(shifted) + " vs " +
                std::to_string(offset.squaredNorm()));
  std::ostringstream d;
  d << "oracle ranks ok, GT R@1 " << r.to_target.r1 << ", FID(self) " << self_fid
    << ", FID(shift) " << shifted;
  c.note(d.str());
}

void criterion9(Checker& c) {
  Rng rng(1010);
  const int n = 500;
  std::vector<MotionWindow> ws;
  for (int i = 0; i < n; ++i) {
    MotionWindow w;
    w.parent_id = "p" + std::to_string(i % 100);
    w.start_frame = (i / 100) * 50;
    w.end_frame = w.start_frame + 70;  // adjacent windows of a parent overlap
    w.duration = 3.5;
    VecX e(10);
    for (int d = 0; d < 10; ++d) e[d] = rng.normal();
    // A slice of near-duplicates exercises the 0.99 filter.
    if (i % 17 == 0 && i > 0) {
      e = ws[i - 1].embedding * 200.0 + e * 0.5;
    }
    w.embedding = e / e.norm();
    ws.push_back(std::move(w));
  }
  const auto pairs = mine_pairs(ws, 2, 0.99);

  bool match = true;
  std::size_t at = 0;
  int too_similar = 0;
  for (int q = 0; q < n && match; ++q) {
    std::vector<std::pair<double, int>> sims;
    for (int j = 0; j < n; ++j) {
      if (j != q) sims.emplace_back(ws[q].embedding.dot(ws[j].embedding), j);
    }
    std::stable_sort(sims.begin(), sims.end(), [](const auto& x, const auto& y) {
      return x.first > y.first || (x.first == y.first && x.second < y.second);
    });
    int pooled = 0;
    for (const auto& [s, j] : sims) {
      if (pooled >= 2) break;
      PairStatus expect;
      const bool overlap = ws[q].parent_id == ws[j].parent_id &&
                           ws[q].start_frame < ws[j].end_frame &&
                           ws[j].start_frame < ws[q].end_frame;
      if (overlap) {
        expect = PairStatus::kFiltered;
      } else if (s >= 0.99) {
        expect = PairStatus::kTooSimilar;
        ++too_similar;
      } else {
        expect = PairStatus::kPooled;
        ++pooled;
      }
      match = match && at < pairs.size() && pairs[at].source_window == q &&
              pairs[at].target_window == j && pairs[at].similarity == s &&
              pairs[at].status == expect;
      ++at;
    }
  }
  match = match && at == pairs.size();
  c.require(match, "mine_pairs disagrees with the O(n^2) oracle");
  c.require(too_similar > 0, "corpus failed to exercise the 0.99 filter");
  for (const auto& p : pairs) {
    if (p.status == PairStatus::kPooled) {
      c.require(p.similarity < 0.99, "pooled pair at similarity >= 0.99");
    }
  }

  // Alignment zeroes frame-0 anchors.
  Rng rm(1011);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Motion a = motedit::testutil::random_motion(rm, 30, false);
    const Motion b = motedit::testutil::random_motion(rm, 25, false);
    const auto [ca, cb] = align_pair(a, b);
    worst = std::max({worst, ca.root_trans[0].norm(), cb.root_trans[0].norm(),
                      std::abs(factor_z_rotation(ca.root_orient[0]).theta_z),
                      std::abs(factor_z_rotation(cb.root_orient[0]).theta_z)});
  }
  c.require(worst < 1e-9, "alignment residual " + std::to_string(worst));
  std::ostringstream d;
  d << "500 windows, " << pairs.size() << " records match oracle, " << too_similar
    << " too-similar; align residual " << worst;
  c.note(d.str());
}

void criterion10(Checker& c) {
  DenoiserConfig dc;
  dc.d_model = 16;
  dc.layers = 1;
  dc.heads = 2;
  dc.d_ff = 32;
  dc.max_frames = 64;
  dc.vocab_size = 64;
  const TmedDenoiser model(dc, 71);
  const NoiseSchedule sched = cosine_schedule(10);
  FeatureStats stats;
  Rng rs(1012);
  stats.mean.resize(kFeatureDim);
  stats.std.resize(kFeatureDim);
  for (int d = 0; d < kFeatureDim; ++d) {
    stats.mean[d] = rs.uniform(-0.5, 0.5);
    stats.std[d] = rs.uniform(0.5, 2.0);
  }
  stats.count = 10;
  stats.constant_dims.assign(kFeatureDim, false);

  FeatureSequence source;
  source.data.resize(12, kFeatureDim);
  for (int r = 0; r < 12; ++r)
    for (int d = 0; d < kFeatureDim; ++d) source.data(r, d) = rs.normal();
  source.normalized = false;

  BaselineRequest req;
  req.source = &source;
  req.text = "raise the left hand";
  req.scales = {2.0, 2.0};
  req.target_length = 12;
  req.seed = 5;
  req.skeleton = &kSkel;

  const std::vector<bool> mask = part_mask({BodyPart::kLeftArm}, kSkel);
  req.editable_dims = &mask;
  const FeatureSequence bp = sample_baseline(BaselineKind::kMdmBp, model, req, sched, stats);
  bool held_exact = true;
  for (int d = 0; d < kFeatureDim; ++d) {
    if (!mask[d]) {
      held_exact = held_exact && (bp.data.col(d).array() == source.data.col(d).array()).all();
    }
  }
  c.require(held_exact, "held dims differ from the source");

  const std::vector<bool> full(kFeatureDim, true);
  req.editable_dims = &full;
  const FeatureSequence bp_full = sample_baseline(BaselineKind::kMdmBp, model, req, sched, stats);
  BaselineRequest plain = req;
  plain.editable_dims = nullptr;
  const FeatureSequence mdm = sample_baseline(BaselineKind::kMdm, model, plain, sched, stats);
  c.require((bp_full.data.array() == mdm.data.array()).all(),
            "full-mask MDM-BP differs from MDM under a shared seed");
  c.note("held dims bitwise-equal to source; full-mask BP == MDM bitwise");
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<void(Checker&)> run;
  };
  const std::vector<Entry> criteria = {
      {1, "codec round-trip over 1000 random canonical motions", criterion1},
      {2, "rotation suite: 6d and z-factoring to 1e-9", criterion2},
      {3, "two-way guidance algebra with a stubbed denoiser", criterion3},
      {4, "cosine schedule, q_sample variance, loss gradient check", criterion4},
      {5, "condition-dropout frequencies 5/5/5/85", criterion5},
      {9, "mining matches the O(n^2) oracle; alignment residuals", criterion9},
      {10, "inpainting exactness and full-mask equivalence", criterion10},
      {6, "end-to-end toy benchmark: TMED > MDM-BP > MDM", criterion6},
      {7, "data-size trend over 10/50/100% fractions", criterion7},
      {8, "retrieval metrics: rank oracle, GT bound, FID closed form", criterion8},
  };
  int failures = 0;
  std::vector<std::string> lines(11);
  for (const Entry& e : criteria) {
    const auto t0 = Clock::now();
    Checker c;
    try {
      e.run(c);
    } catch (const std::exception& ex) {
      c.ok = false;
      c.note(std::string("exception: ") + ex.what());
    }
    std::ostringstream line;
    line << (c.ok ? "[PASS]" : "[FAIL]") << " criterion " << e.id << ": "
         << e.name;
    if (!c.detail.empty()) line << " (" << c.detail << ")";
    line << " [" << static_cast<int>(secs_since(t0)) << " s]";
    lines[e.id] = line.str();
    std::puts(line.str().c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
  }
  std::puts("---");
  for (int i = 1; i <= 10; ++i) std::puts(lines[i].c_str());
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::puts("all acceptance criteria passed");
  return 0;
}
