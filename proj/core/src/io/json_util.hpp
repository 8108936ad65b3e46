#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "patchsearch/errors.hpp"
#include "patchsearch/feature_map.hpp"
#include "patchsearch/io/base64.hpp"
#include "patchsearch/io/manifest.hpp"

namespace patchsearch::io::detail {

using Json = nlohmann::ordered_json;

inline Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

inline const Json& field(const Json& obj, const char* key, std::string_view where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(std::string(where) + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

template <class T>
T get(const Json& obj, const char* key, std::string_view where) {
  const Json& v = field(obj, key, where);
  try {
    return v.get<T>();
  } catch (const Json::exception&) {
    throw ValidationError(std::string(where) + ": field '" + key + "' has the wrong type");
  }
}

inline Json bbox_to_json(const BBox& b) { return Json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

inline BBox bbox_from_json(const Json& j, std::string_view where) {
  if (!j.is_array() || j.size() != 4) throw ValidationError(std::string(where) + ": bbox must be [x_min, y_min, x_max, y_max]");
  try {
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
  } catch (const Json::exception&) {
    throw ValidationError(std::string(where) + ": bbox entries must be integers");
  }
}

inline Json location_to_json(const Location& loc) {
  if (const auto* b = std::get_if<BBox>(&loc)) return Json{{"bbox", bbox_to_json(*b)}};
  return Json{{"mask", encode_mask(std::get<PatchSet>(loc))}};
}

inline Location location_from_json(const Json& j, int n_patches, std::string_view where) {
  if (j.is_object() && j.contains("bbox")) {
    BBox b = bbox_from_json(j.at("bbox"), where);
    if (!b.within(n_patches)) throw ValidationError(std::string(where) + ": bbox outside the patch grid");
    return b;
  }
  if (j.is_object() && j.contains("mask")) {
    return decode_mask(get<std::string>(j, "mask", where), n_patches);
  }
  throw ValidationError(std::string(where) + ": location needs a 'bbox' or 'mask' field");
}

}  // namespace patchsearch::io::detail
