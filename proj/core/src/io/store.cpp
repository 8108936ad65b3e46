#include "patchsearch/io/store.hpp"

#include <cmath>

#include "json_util.hpp"
#include "patchsearch/io/atomic_write.hpp"

namespace patchsearch::io {

using detail::Json;

namespace {
constexpr std::string_view kStoreFormat = "patchsearch.store";
}

std::string serialize_store(const EnrolledStore& store) {
  Json j;
  j["format"] = kStoreFormat;
  j["version"] = store.version;
  j["manifest_version"] = store.manifest_version;
  j["n_patches"] = store.n_patches;
  j["dim"] = store.dim;
  j["config"] = {{"k_s", store.k_s}, {"seed", store.seed}};
  j["models"] = Json::array();
  for (const ClassModel& m : store.models) {
    j["models"].push_back({{"class_index", m.class_index},
                           {"label", m.label},
                           {"threshold", m.threshold},
                           {"prototype", m.prototype},
                           {"support_seg", encode_mask(m.support_seg)}});
  }
  return j.dump() + "\n";
}

EnrolledStore parse_store(std::string_view json_text) {
  const Json j = detail::parse_json(json_text, "store");
  if (detail::get<std::string>(j, "format", "store") != kStoreFormat) throw ValidationError("store: not a patchsearch store");
  EnrolledStore s;
  s.version = detail::get<int>(j, "version", "store");
  if (s.version != kStoreVersion) {
    throw ValidationError("store version " + std::to_string(s.version) + " is not supported");
  }
  s.manifest_version = detail::get<int>(j, "manifest_version", "store");
  s.n_patches = detail::get<int>(j, "n_patches", "store");
  s.dim = detail::get<int>(j, "dim", "store");
  if (s.n_patches < 1 || s.dim < 1) throw ValidationError("store: n_patches and dim must be >= 1");
  const Json& config = detail::field(j, "config", "store");
  s.k_s = detail::get<int>(config, "k_s", "store config");
  s.seed = detail::get<std::uint64_t>(config, "seed", "store config");

  for (const Json& mj : detail::field(j, "models", "store")) {
    ClassModel m;
    m.class_index = detail::get<int>(mj, "class_index", "store model");
    const std::string where = "store model " + std::to_string(m.class_index);
    m.label = detail::get<std::string>(mj, "label", where);
    m.threshold = detail::get<double>(mj, "threshold", where);
    m.prototype = detail::get<std::vector<double>>(mj, "prototype", where);
    m.support_seg = decode_mask(detail::get<std::string>(mj, "support_seg", where), s.n_patches);
    if (m.prototype.size() != static_cast<std::size_t>(s.dim)) throw ValidationError(where + ": prototype length != dim");
    if (!std::isfinite(m.threshold)) throw ValidationError(where + ": threshold is not finite");
    s.models.push_back(std::move(m));
  }
  return s;
}

void save_store(const std::filesystem::path& path, const EnrolledStore& store) {
  write_file_atomic(path, serialize_store(store));
}

EnrolledStore load_store(const std::filesystem::path& path) { return parse_store(read_text_file(path)); }

}  // namespace patchsearch::io
