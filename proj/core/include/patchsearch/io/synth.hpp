#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "patchsearch/io/manifest.hpp"

namespace patchsearch::io {

/// Parameters of a synthetic dataset of rectangular objects on a plain background.
struct SynthSpec {
  int n_classes = 5;
  int n_patches = 32;
  int dim = 64;
  int scenes = 20;
  int objects_per_scene = 2;
  /// Per-channel Gaussian noise added to every patch, in feature units.
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  /// Norm of each class / background anchor direction.
  double anchor_norm = 40.0;
  int min_object = 3;
  int max_object = 8;
};

SynthSpec parse_synth_spec(std::string_view json_text);

/// Mutually orthogonal anchors (Gram-Schmidt over Gaussian draws) when
/// n_classes + 1 <= dim, otherwise independent random directions. The last
/// anchor is the background.
std::vector<std::vector<double>> synth_anchors(const SynthSpec& spec);

/// Writes `manifest.json` and `features/*.pfmap` into `out_dir`.
///
/// Each class gets one support image holding a single object with a bbox
/// prompt. Each query scene holds `objects_per_scene` distinct classes,
/// placed so no two objects touch (not even diagonally); truths are masks.
/// Output is a pure function of the spec. Throws InvalidArgument when the
/// spec cannot be realised.
DatasetManifest synth_dataset(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace patchsearch::io
