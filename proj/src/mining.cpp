#include "motedit/mining.hpp"

#include <cstdio>
#include <numeric>
#include <sstream>

#include "motedit/features.hpp"
#include "motedit/io.hpp"

namespace motedit {

std::vector<MotionWindow> slide_windows(const Motion& m, const std::string& parent_id,
                                        const std::vector<double>& durations,
                                        double stride_seconds) {
  for (double d : durations) {
    if (d < 3.0 || d > 5.0) {
      throw InvalidConfigError("slide_windows: durations must lie in [3, 5] s");
    }
  }
  if (stride_seconds <= 0.0) {
    throw InvalidConfigError("slide_windows: stride must be positive");
  }
  const double total = m.duration();
  std::vector<MotionWindow> out;
  const double min_dur = *std::min_element(durations.begin(), durations.end());
  if (total < min_dur) {
    std::fprintf(stderr,
                 "motedit: warning: motion '%s' is %.2f s, shorter than the "
                 "%.1f s minimum window; no windows emitted\n",
                 parent_id.c_str(), total, min_dur);
    return out;
  }
  const double eps = 1e-9;
  for (double start = 0.0; start <= total + eps; start += stride_seconds) {
    for (double dur : durations) {
      if (start + dur > total + eps) continue;
      MotionWindow w;
      w.parent_id = parent_id;
      w.start_frame = static_cast<int>(std::lround(start * m.fps));
      w.end_frame = w.start_frame + static_cast<int>(std::lround(dur * m.fps));
      w.duration = dur;
      if (w.end_frame > m.frames()) continue;
      out.push_back(std::move(w));
    }
  }
  return out;
}

Motion extract_window(const Motion& m, const MotionWindow& w) {
  return crop(m, w.start_frame, w.end_frame);
}

void embed_windows(std::vector<MotionWindow>& windows,
                   const std::vector<const Motion*>& parents,
                   const std::vector<int>& parent_of_window,
                   const MotionEmbedder& embedder, const Skeleton& skeleton) {
  if (parent_of_window.size() != windows.size()) {
    throw ShapeError("embed_windows: parent index list mismatch");
  }
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const Motion clip =
        canonicalize(extract_window(*parents[parent_of_window[i]], windows[i]));
    windows[i].embedding = embedder.embed_motion(encode(clip, skeleton));
  }
}

namespace {

bool same_parent_overlap(const MotionWindow& a, const MotionWindow& b) {
  return a.parent_id == b.parent_id && a.start_frame < b.end_frame &&
         b.start_frame < a.end_frame;
}

}  // namespace

std::vector<CandidatePair> mine_pairs(const std::vector<MotionWindow>& windows,
                                      int k, double dedup) {
  if (windows.size() < 2) {
    throw InvalidConfigError("mine_pairs: needs at least 2 windows");
  }
  const int n = static_cast<int>(windows.size());
  std::vector<CandidatePair> out;
  for (int q = 0; q < n; ++q) {
    std::vector<int> order;
    order.reserve(n - 1);
    for (int j = 0; j < n; ++j) {
      if (j != q) order.push_back(j);
    }
    std::vector<double> sim(n, 0.0);
    for (int j : order) sim[j] = windows[q].embedding.dot(windows[j].embedding);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sim[a] > sim[b]; });
    int pooled = 0;
    for (int j : order) {
      if (pooled >= k) break;
      CandidatePair p;
      p.source_window = q;
      p.target_window = j;
      p.similarity = sim[j];
      if (same_parent_overlap(windows[q], windows[j])) {
        p.status = PairStatus::kFiltered;
      } else if (sim[j] >= dedup) {
        p.status = PairStatus::kTooSimilar;
      } else {
        p.status = PairStatus::kPooled;
        ++pooled;
      }
      out.push_back(p);
    }
  }
  return out;
}

std::pair<Motion, Motion> align_pair(const Motion& source, const Motion& target) {
  return {canonicalize(source), canonicalize(target)};
}

void export_pool(const std::vector<CandidatePair>& pairs,
                 const std::vector<MotionWindow>& windows,
                 const std::map<int, Motion>& clips_by_window,
                 const std::string& dir) {
  std::vector<CandidatePair> pooled;
  for (const CandidatePair& p : pairs) {
    if (p.status != PairStatus::kPooled) {
      throw InvalidConfigError("export_pool: only pooled pairs are exportable");
    }
    pooled.push_back(p);
  }
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const CandidatePair& a, const CandidatePair& b) {
                     if (a.source_window != b.source_window) {
                       return a.source_window < b.source_window;
                     }
                     if (a.similarity != b.similarity) return a.similarity > b.similarity;
                     return a.target_window < b.target_window;
                   });

  std::vector<int> missing;
  for (const CandidatePair& p : pooled) {
    for (int w : {p.source_window, p.target_window}) {
      if (clips_by_window.find(w) == clips_by_window.end()) missing.push_back(w);
    }
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "export_pool: missing clips for windows:";
    for (int w : missing) msg << ' ' << w;
    throw IoError(msg.str());
  }

  std::ostringstream manifest;
  manifest << "# annotation pool: pair <id> <source_window> <target_window> "
              "<similarity> <source_clip> <target_clip>\n";
  manifest << "# window <index> <parent> <start_frame> <end_frame> <duration_s>\n";
  manifest << "version 1\n";
  std::map<int, std::string> clip_files;
  for (const CandidatePair& p : pooled) {
    for (int w : {p.source_window, p.target_window}) {
      if (clip_files.count(w)) continue;
      const std::string file = "clips/window_" + std::to_string(w) + ".marr";
      const Motion aligned = quantize_f32(canonicalize(clips_by_window.at(w)));
      save_motion(dir + "/" + file, aligned);
      clip_files[w] = file;
    }
  }
  for (const auto& [w, file] : clip_files) {
    const MotionWindow& win = windows.at(w);
    manifest << "window " << w << ' ' << win.parent_id << ' ' << win.start_frame
             << ' ' << win.end_frame << ' ' << win.duration << '\n';
  }
  int id = 0;
  manifest.precision(17);
  for (const CandidatePair& p : pooled) {
    manifest << "pair " << id++ << ' ' << p.source_window << ' '
             << p.target_window << ' ' << p.similarity << ' '
             << clip_files[p.source_window] << ' ' << clip_files[p.target_window]
             << '\n';
  }
  atomic_write(dir + "/pool_manifest.txt", manifest.str());
}

}  // namespace motedit
