#include <doctest.h>

#include <set>

#include "motedit/baselines.hpp"
#include "motedit/denoiser.hpp"

using namespace motedit;

namespace {

const Skeleton kSkel = default_skeleton();

const char* kCachePath = MOTEDIT_SOURCE_DIR "/assets/bodyparts_cache.tsv";

std::set<BodyPart> parts_of(std::initializer_list<BodyPart> ps) { return ps; }

}  // namespace

TEST_CASE("body-part cache lookups return the stored rows verbatim") {
  const BodyPartCache cache = BodyPartCache::load(kCachePath);
  CHECK(cache.size() == 13);

  const BodyPartSet a = body_parts_for_edit("spread your legs more as you jump", &cache);
  CHECK(a.provenance == BodyPartProvenance::kCachedLlm);
  CHECK(a.parts == parts_of({BodyPart::kLeftLeg, BodyPart::kRightLeg}));

  // The cached response covers the whole body except the waist.
  const BodyPartSet b = body_parts_for_edit("turn around", &cache);
  CHECK(b.provenance == BodyPartProvenance::kCachedLlm);
  CHECK(b.parts.size() == 7);
  CHECK(b.parts.count(BodyPart::kWaist) == 0);
  CHECK(b.parts.count(BodyPart::kNeck) == 1);

  const BodyPartSet c =
      body_parts_for_edit("raise your hand faster and a little higher", &cache);
  CHECK(c.parts == parts_of({BodyPart::kLeftArm, BodyPart::kRightArm}));

  SUBCASE("identical text gives identical parts across calls") {
    const BodyPartSet again = body_parts_for_edit("turn around", &cache);
    CHECK(again.parts == b.parts);
  }
}

TEST_CASE("malformed cache reports the offending line") {
  try {
    BodyPartCache::from_string("good text\tleft arm\nbad line without tab\n", "cache");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  CHECK_THROWS_AS(
      BodyPartCache::from_string("text\tleft arm, kneecap\n", "cache"), ParseError);
}

TEST_CASE("lexicon fallback rules") {
  SUBCASE("sided arm phrase") {
    const BodyPartSet r = body_parts_for_edit("raise the left hand");
    CHECK(r.provenance == BodyPartProvenance::kLexiconRule);
    CHECK(r.parts == parts_of({BodyPart::kLeftArm}));
  }
  SUBCASE("locomotion words pull in legs and buttocks") {
    const BodyPartSet r = body_parts_for_edit("walk a bit faster");
    CHECK(r.parts.count(BodyPart::kLeftLeg) == 1);
    CHECK(r.parts.count(BodyPart::kRightLeg) == 1);
    CHECK(r.parts.count(BodyPart::kButtocks) == 1);
  }
  SUBCASE("whole-body words select everything") {
    CHECK(body_parts_for_edit("mirror the motion").parts.size() == 8);
  }
  SUBCASE("unknown vocabulary falls back to all parts, never empty") {
    const BodyPartSet r = body_parts_for_edit("qwertyuiop zxcvbnm");
    CHECK(r.parts.size() == 8);
  }
  SUBCASE("empty text selects nothing") {
    CHECK(body_parts_for_edit("").parts.empty());
  }
}

TEST_CASE("part_mask layout") {
  SUBCASE("all parts cover all 207 dims") {
    const std::vector<bool> mask = part_mask(all_body_parts(), kSkel);
    CHECK(std::count(mask.begin(), mask.end(), true) == kFeatureDim);
  }
  SUBCASE("empty selection covers nothing") {
    const std::vector<bool> mask = part_mask({}, kSkel);
    CHECK(std::count(mask.begin(), mask.end(), true) == 0);
  }
  SUBCASE("left arm owns exactly its joints' rotation and position dims") {
    const std::vector<bool> mask = part_mask({BodyPart::kLeftArm}, kSkel);
    std::set<int> expect;
    for (int j : {kLeftCollar, kLeftShoulder, kLeftElbow, kLeftWrist}) {
      for (int d = 0; d < 6; ++d) expect.insert(kBodyPoseOffset + 6 * (j - 1) + d);
      for (int d = 0; d < 3; ++d) expect.insert(kJointPosOffset + 3 * j + d);
    }
    for (int d = 0; d < kFeatureDim; ++d) {
      CHECK(mask[d] == (expect.count(d) > 0));
    }
    CHECK(expect.size() == 36);
  }
  SUBCASE("root dims belong to buttocks and waist") {
    for (BodyPart p : {BodyPart::kButtocks, BodyPart::kWaist}) {
      const std::vector<bool> mask = part_mask({p}, kSkel);
      for (int d = 0; d < kBodyPoseOffset; ++d) CHECK(mask[d]);
    }
    const std::vector<bool> arm = part_mask({BodyPart::kLeftArm}, kSkel);
    for (int d = 0; d < kBodyPoseOffset; ++d) CHECK_FALSE(arm[d]);
  }
  SUBCASE("parts' joints are disjoint and cover the skeleton") {
    std::set<int> seen;
    for (BodyPart p : all_body_parts()) {
      for (int j : joints_of_part(p)) {
        CHECK(seen.insert(j).second);  // no joint owned twice
      }
    }
    CHECK(seen.size() == kNumJoints);
  }
}

namespace {

DenoiserConfig baseline_test_config() {
  DenoiserConfig c;
  c.d_model = 16;
  c.layers = 1;
  c.heads = 2;
  c.d_ff = 32;
  c.max_frames = 64;
  c.vocab_size = 64;
  return c;
}

FeatureStats synthetic_stats() {
  FeatureStats stats;
  Rng rng(37);
  stats.mean.resize(kFeatureDim);
  stats.std.resize(kFeatureDim);
  for (int d = 0; d < kFeatureDim; ++d) {
    stats.mean[d] = rng.uniform(-0.5, 0.5);
    stats.std[d] = rng.uniform(0.5, 2.0);
  }
  stats.count = 100;
  stats.constant_dims.assign(kFeatureDim, false);
  return stats;
}

FeatureSequence random_source(int frames, std::uint64_t seed) {
  Rng rng(seed);
  FeatureSequence f;
  f.data.resize(frames, kFeatureDim);
  for (int r = 0; r < frames; ++r)
    for (int c = 0; c < kFeatureDim; ++c) f.data(r, c) = rng.normal();
  f.normalized = false;
  return f;
}

}  // namespace

TEST_CASE("baseline kinds parse and print") {
  CHECK(baseline_from_string("MDM") == BaselineKind::kMdm);
  CHECK(baseline_from_string("MDM_S") == BaselineKind::kMdmS);
  CHECK(baseline_from_string("MDM-BP") == BaselineKind::kMdmBp);
  CHECK(baseline_from_string("MDM-BP_S") == BaselineKind::kMdmBpS);
  CHECK(to_string(BaselineKind::kMdmBp) == "MDM-BP");
  CHECK_THROWS_AS(baseline_from_string("GT"), InvalidConfigError);
}

TEST_CASE("baseline sampling contracts") {
  const TmedDenoiser model(baseline_test_config(), 71);
  const NoiseSchedule sched = cosine_schedule(8);
  const FeatureStats stats = synthetic_stats();
  const FeatureSequence source = random_source(10, 1234);

  BaselineRequest req;
  req.source = &source;
  req.text = "raise the left hand";
  req.scales = {2.0, 2.0};
  req.target_length = 10;
  req.seed = 99;
  req.skeleton = &kSkel;

  SUBCASE("MDM is deterministic per seed") {
    const FeatureSequence a = sample_baseline(BaselineKind::kMdm, model, req, sched, stats);
    const FeatureSequence b = sample_baseline(BaselineKind::kMdm, model, req, sched, stats);
    CHECK((a.data.array() == b.data.array()).all());
  }
  SUBCASE("source-dependent kinds demand a source") {
    BaselineRequest no_src = req;
    no_src.source = nullptr;
    CHECK_THROWS_AS(
        sample_baseline(BaselineKind::kMdmS, model, no_src, sched, stats),
        InvalidConfigError);
    const FeatureSequence ok =
        sample_baseline(BaselineKind::kMdm, model, no_src, sched, stats);
    CHECK(ok.frames() == 10);
  }
  SUBCASE("inpainting exactness: held dims equal the source bitwise") {
    const std::vector<bool> mask = part_mask({BodyPart::kLeftArm}, kSkel);
    req.editable_dims = &mask;
    const FeatureSequence out =
        sample_baseline(BaselineKind::kMdmBp, model, req, sched, stats);
    int held = 0, edited_changed = 0;
    for (int d = 0; d < kFeatureDim; ++d) {
      if (!mask[d]) {
        ++held;
        CHECK((out.data.col(d).array() == source.data.col(d).array()).all());
      } else if ((out.data.col(d).array() != source.data.col(d).array()).any()) {
        ++edited_changed;
      }
    }
    CHECK(held == kFeatureDim - 36);
    CHECK(edited_changed > 0);
  }
  SUBCASE("full-body mask reduces MDM-BP to MDM under a shared seed") {
    const std::vector<bool> all_editable(kFeatureDim, true);
    req.editable_dims = &all_editable;
    const FeatureSequence bp =
        sample_baseline(BaselineKind::kMdmBp, model, req, sched, stats);
    BaselineRequest plain = req;
    plain.editable_dims = nullptr;
    const FeatureSequence mdm =
        sample_baseline(BaselineKind::kMdm, model, plain, sched, stats);
    CHECK((bp.data.array() == mdm.data.array()).all());
  }
  SUBCASE("MDM_S differs from MDM but stays deterministic") {
    const FeatureSequence s1 = sample_baseline(BaselineKind::kMdmS, model, req, sched, stats);
    const FeatureSequence s2 = sample_baseline(BaselineKind::kMdmS, model, req, sched, stats);
    const FeatureSequence plain = sample_baseline(BaselineKind::kMdm, model, req, sched, stats);
    CHECK((s1.data.array() == s2.data.array()).all());
    CHECK((s1.data - plain.data).cwiseAbs().maxCoeff() > 1e-6);
  }
  SUBCASE("BP derives the mask from the cache/lexicon when absent") {
    const BodyPartCache cache = BodyPartCache::load(kCachePath);
    req.cache = &cache;
    req.editable_dims = nullptr;
    req.text = "raise your hand faster and a little higher";  // cached: both arms
    const FeatureSequence out =
        sample_baseline(BaselineKind::kMdmBp, model, req, sched, stats);
    const std::vector<bool> expect_mask =
        part_mask({BodyPart::kLeftArm, BodyPart::kRightArm}, kSkel);
    for (int d = 0; d < kFeatureDim; ++d) {
      if (!expect_mask[d]) {
        CHECK((out.data.col(d).array() == source.data.col(d).array()).all());
      }
    }
  }
}
