#include "patchsearch/io/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "json_util.hpp"
#include "patchsearch/io/feature_file.hpp"
#include "patchsearch/rng.hpp"

namespace patchsearch::io {

using detail::Json;

SynthSpec parse_synth_spec(std::string_view json_text) {
  const Json j = detail::parse_json(json_text, "synth spec");
  if (!j.is_object()) throw ValidationError("synth spec: expected a JSON object");
  SynthSpec s;
  auto opt = [&](const char* key, auto& dst) {
    if (j.contains(key)) dst = detail::get<std::remove_reference_t<decltype(dst)>>(j, key, "synth spec");
  };
  opt("n_classes", s.n_classes);
  opt("n_patches", s.n_patches);
  opt("dim", s.dim);
  opt("scenes", s.scenes);
  opt("objects_per_scene", s.objects_per_scene);
  opt("noise_sigma", s.noise_sigma);
  opt("seed", s.seed);
  opt("anchor_norm", s.anchor_norm);
  opt("min_object", s.min_object);
  opt("max_object", s.max_object);
  return s;
}

namespace {

void check_spec(const SynthSpec& s) {
  if (s.n_classes < 1) throw InvalidArgument("synth: n_classes must be >= 1");
  if (s.dim < 3) throw InvalidArgument("synth: dim must be >= 3");
  if (s.n_patches < 1) throw InvalidArgument("synth: n_patches must be >= 1");
  if (s.scenes < 0) throw InvalidArgument("synth: scenes must be >= 0");
  if (s.objects_per_scene < 0 || s.objects_per_scene > s.n_classes) {
    throw InvalidArgument("synth: objects_per_scene must lie in [0, n_classes]");
  }
  if (!(s.noise_sigma >= 0.0) || !(s.anchor_norm > 0.0)) {
    throw InvalidArgument("synth: noise_sigma must be >= 0 and anchor_norm > 0");
  }
  if (s.min_object < 1 || s.min_object > s.max_object) throw InvalidArgument("synth: need 1 <= min_object <= max_object");
  // The support box needs a free border ring for the cluster filter.
  if (s.max_object > s.n_patches - 2) throw InvalidArgument("synth: objects exceed the grid");
}

// Draws non-touching rectangles; throws when rejection sampling gives up.
std::vector<BBox> place_objects(int count, const SynthSpec& s, Rng& rng) {
  std::vector<BBox> placed;
  constexpr int kAttempts = 2000;
  for (int o = 0; o < count; ++o) {
    bool ok = false;
    for (int attempt = 0; attempt < kAttempts && !ok; ++attempt) {
      const int w = rng.uniform_int(s.min_object, s.max_object);
      const int h = rng.uniform_int(s.min_object, s.max_object);
      const int x = rng.uniform_int(1, s.n_patches - 1 - w);
      const int y = rng.uniform_int(1, s.n_patches - 1 - h);
      const BBox box{x, y, x + w - 1, y + h - 1};
      ok = true;
      for (const BBox& other : placed) {
        const bool apart = box.x_max + 1 < other.x_min || other.x_max + 1 < box.x_min ||
                           box.y_max + 1 < other.y_min || other.y_max + 1 < box.y_min;
        if (!apart) {
          ok = false;
          break;
        }
      }
      if (ok) placed.push_back(box);
    }
    if (!ok) throw InvalidArgument("synth: objects do not fit on the grid without touching");
  }
  return placed;
}

FeatureMap render(const SynthSpec& s, const std::vector<std::vector<double>>& anchors,
                  const std::vector<std::pair<int, BBox>>& objects, Rng& rng) {
  const int background = s.n_classes;
  const auto dim = static_cast<std::size_t>(s.dim);
  std::vector<float> data(static_cast<std::size_t>(s.n_patches) * s.n_patches * dim);
  for (int r = 0; r < s.n_patches; ++r) {
    for (int c = 0; c < s.n_patches; ++c) {
      int owner = background;
      for (const auto& [cls, box] : objects) {
        if (box.contains({r, c})) owner = cls;
      }
      const auto& anchor = anchors[static_cast<std::size_t>(owner)];
      float* dst = data.data() + (static_cast<std::size_t>(r) * s.n_patches + c) * dim;
      for (std::size_t d = 0; d < dim; ++d) {
        double v = anchor[d];
        if (s.noise_sigma > 0.0) v += s.noise_sigma * rng.normal();
        dst[d] = static_cast<float>(v);
      }
    }
  }
  return FeatureMap(s.n_patches, s.dim, std::move(data));
}

std::string numbered(const char* prefix, int i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, i);
  return buf;
}

}  // namespace

std::vector<std::vector<double>> synth_anchors(const SynthSpec& spec) {
  check_spec(spec);
  Rng rng(spec.seed);
  const auto count = static_cast<std::size_t>(spec.n_classes + 1);
  const auto dim = static_cast<std::size_t>(spec.dim);
  const bool orthogonal = count <= dim;
  std::vector<std::vector<double>> anchors;
  while (anchors.size() < count) {
    std::vector<double> v(dim);
    for (double& x : v) x = rng.normal();
    if (orthogonal) {
      for (const auto& a : anchors) {
        const double proj = std::inner_product(v.begin(), v.end(), a.begin(), 0.0);
        for (std::size_t d = 0; d < dim; ++d) v[d] -= proj * a[d];
      }
    }
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm < 1e-6) continue;
    for (double& x : v) x /= norm;
    anchors.push_back(std::move(v));
  }
  for (auto& a : anchors) {
    for (double& x : a) x *= spec.anchor_norm;
  }
  return anchors;
}

DatasetManifest synth_dataset(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  check_spec(spec);
  const auto anchors = synth_anchors(spec);
  // Independent stream so anchors stay fixed when scene parameters change.
  Rng rng(spec.seed ^ 0x9E3779B97F4A7C15ULL);

  std::filesystem::create_directories(out_dir / "features");
  DatasetManifest m;
  m.n_patches = spec.n_patches;
  m.dim = spec.dim;
  m.base_dir = out_dir;

  for (int c = 0; c < spec.n_classes; ++c) {
    m.classes.push_back({c, numbered("object_", c, 2)});
    const auto boxes = place_objects(1, spec, rng);
    const FeatureMap fmap = render(spec, anchors, {{c, boxes[0]}}, rng);
    const std::filesystem::path rel = std::filesystem::path("features") / (numbered("support_", c, 2) + ".pfmap");
    write_feature_file(out_dir / rel, fmap);
    m.supports.push_back({c, rel, boxes[0]});
  }

  std::vector<int> pool(static_cast<std::size_t>(spec.n_classes));
  for (int s = 0; s < spec.scenes; ++s) {
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < spec.objects_per_scene; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng.uniform_index(pool.size() - static_cast<std::size_t>(i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    const auto boxes = place_objects(spec.objects_per_scene, spec, rng);
    std::vector<std::pair<int, BBox>> objects;
    QueryEntry q;
    q.query_id = numbered("scene_", s, 3);
    for (int i = 0; i < spec.objects_per_scene; ++i) {
      const int cls = pool[static_cast<std::size_t>(i)];
      objects.emplace_back(cls, boxes[static_cast<std::size_t>(i)]);
      q.truths.push_back({cls, PatchSet::from_bbox(boxes[static_cast<std::size_t>(i)], spec.n_patches)});
    }
    const FeatureMap fmap = render(spec, anchors, objects, rng);
    q.feature_file = std::filesystem::path("features") / (q.query_id + ".pfmap");
    write_feature_file(out_dir / q.feature_file, fmap);
    m.queries.push_back(std::move(q));
  }

  save_manifest(out_dir / "manifest.json", m);
  return m;
}

}  // namespace patchsearch::io
