#include "phvi/io/raw_io.hpp"

#include <json.hpp>

#include "phvi/errors.hpp"
#include "phvi/io/files.hpp"

namespace phvi::io {
namespace {

using nlohmann::json;

const json& require(const json& meta, const char* key) {
  if (!meta.contains(key)) {
    throw ParseError(key, std::string("sidecar is missing required key '") + key + "'");
  }
  return meta.at(key);
}

template <typename T>
T get_as(const json& value, const char* key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ParseError(key, std::string("sidecar key '") + key + "' has the wrong type");
  }
}

}  // namespace

raw::BayerFrame load_bayer(const std::filesystem::path& raw_path,
                           const std::filesystem::path& meta_path) {
  json meta;
  try {
    meta = json::parse(read_text(meta_path));
  } catch (const json::exception& e) {
    throw ParseError("sidecar", "malformed sidecar JSON: " + std::string(e.what()));
  }
  if (!meta.is_object()) throw ParseError("sidecar", "sidecar must be a JSON object");

  raw::BayerFrame frame;
  frame.width = get_as<std::size_t>(require(meta, "width"), "width");
  frame.height = get_as<std::size_t>(require(meta, "height"), "height");
  frame.pattern = raw::parse_pattern(get_as<std::string>(require(meta, "pattern"), "pattern"));
  const auto black = get_as<std::vector<double>>(require(meta, "black_levels"), "black_levels");
  if (black.size() != 4) throw ParseError("black_levels", "black_levels must hold 4 numbers");
  std::copy(black.begin(), black.end(), frame.black_levels.begin());
  frame.white_level = get_as<double>(require(meta, "white_level"), "white_level");

  if (meta.contains("homography")) {
    const auto h = get_as<std::vector<double>>(meta.at("homography"), "homography");
    if (h.size() != 9) throw ParseError("homography", "homography must hold 9 numbers");
    std::copy(h.begin(), h.end(), frame.homography.m.begin());
  }
  if (meta.contains("crop")) {
    const auto c = get_as<std::vector<std::size_t>>(meta.at("crop"), "crop");
    if (c.size() != 4) throw ParseError("crop", "crop must be [x0, y0, width, height]");
    frame.crop = {c[0], c[1], c[2], c[3]};
  }

  const std::vector<std::uint8_t> bytes = read_binary(raw_path);
  if (bytes.size() != frame.width * frame.height * 2) {
    throw ParseError("width", "width/height do not match the raw file: it holds " + std::to_string(bytes.size()) +
                                  " bytes, sidecar dimensions need " +
                                  std::to_string(frame.width * frame.height * 2));
  }
  frame.data.resize(frame.width * frame.height);
  for (std::size_t i = 0; i < frame.data.size(); ++i) {
    frame.data[i] = static_cast<std::uint16_t>(bytes[2 * i] | (bytes[2 * i + 1] << 8));
  }

  try {
    frame.validate();
  } catch (const InvalidMetadataError& e) {
    const std::string what = e.what();
    const char* field = what.find("crop") != std::string::npos ? "crop"
                        : what.find("black") == 0            ? "black_levels"
                                                             : "white_level";
    throw ParseError(field, what);
  } catch (const ParameterError& e) {
    throw ParseError("homography", e.what());
  } catch (const DimensionError& e) {
    throw ParseError("width", e.what());
  }
  return frame;
}

void save_bayer(const raw::BayerFrame& frame, const std::filesystem::path& raw_path,
                const std::filesystem::path& meta_path) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(frame.data.size() * 2);
  for (std::uint16_t v : frame.data) {
    bytes.push_back(static_cast<std::uint8_t>(v & 0xff));
    bytes.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  write_atomic(raw_path, bytes);

  json meta = {{"width", frame.width},
               {"height", frame.height},
               {"pattern", std::string(raw::to_string(frame.pattern))},
               {"black_levels", frame.black_levels},
               {"white_level", frame.white_level},
               {"homography", frame.homography.m}};
  if (frame.crop.width != 0 || frame.crop.height != 0) {
    meta["crop"] = {frame.crop.x0, frame.crop.y0, frame.crop.width, frame.crop.height};
  }
  write_atomic(meta_path, meta.dump(2) + "\n");
}

}  // namespace phvi::io
