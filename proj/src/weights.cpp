#include "phvi/weights.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <random>

#include <json.hpp>

#include "phvi/errors.hpp"
#include "phvi/io/files.hpp"

namespace phvi::net {
namespace {

constexpr char kMagic[8] = {'P', 'H', 'V', 'I', 'W', 'T', 'S', '1'};

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::size_t element_count(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

void add_conv(std::vector<LayerSpec>& out, const std::string& prefix,
              std::size_t o, std::size_t i, std::size_t k) {
  out.push_back({prefix + ".weight", {o, i, k, k}});
  out.push_back({prefix + ".bias", {o}});
}

void add_branch(std::vector<LayerSpec>& out, const NetworkConfig& cfg,
                const std::string& b, std::size_t in) {
  add_conv(out, b + ".stem", cfg.channels_at(0), in, 3);
  for (std::size_t l = 0; l < cfg.depth; ++l) {
    add_conv(out, b + ".enc" + std::to_string(l) + ".fusion",
             cfg.channels_at(l + 1), 4 * cfg.channels_at(l), 1);
  }
  add_conv(out, b + ".bottleneck", cfg.channels_at(cfg.depth),
           cfg.channels_at(cfg.depth), 3);
  for (std::size_t l = cfg.depth; l-- > 0;) {
    const std::string p = b + ".dec" + std::to_string(l);
    add_conv(out, p + ".adjust", 4 * cfg.channels_at(l), cfg.channels_at(l + 1), 1);
    add_conv(out, p + ".fuse", cfg.channels_at(l), 2 * cfg.channels_at(l), 3);
  }
  add_conv(out, b + ".head", in, cfg.channels_at(0), 3);
}

void put_u64(std::vector<std::uint8_t>& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

void NetworkConfig::validate() const {
  if (base_channels == 0) throw ParameterError("base_channels must be positive");
  if (depth == 0 || depth > 16) throw ParameterError("depth must be in [1, 16]");
  if (!(hvi_k > 0.0) || !std::isfinite(hvi_k)) {
    throw ParameterError("hvi_k must be positive and finite");
  }
}

std::vector<LayerSpec> required_layers(const NetworkConfig& config) {
  config.validate();
  const std::size_t c = config.base_channels;
  const std::size_t bottom = config.channels_at(config.depth);
  std::vector<LayerSpec> out;
  add_conv(out, "rggb.conv1", c, 4, 3);
  add_conv(out, "rggb.conv2", c, c, 3);
  add_conv(out, "proxy", 3, c, 1);
  add_branch(out, config, "hv", 2);
  add_branch(out, config, "i", 1);
  add_conv(out, "interact.hv", bottom, 2 * bottom, 1);
  add_conv(out, "interact.i", bottom, 2 * bottom, 1);
  add_conv(out, "final_up", 12, 3, 1);
  return out;
}

void WeightBundle::set(Tensor tensor) {
  if (tensor.values.size() != element_count(tensor.shape)) {
    throw WeightError("tensor " + tensor.name + " has " +
                      std::to_string(tensor.values.size()) +
                      " values for shape " + shape_string(tensor.shape));
  }
  for (Tensor& t : tensors_) {
    if (t.name == tensor.name) {
      t = std::move(tensor);
      return;
    }
  }
  tensors_.push_back(std::move(tensor));
}

const Tensor* WeightBundle::find(const std::string& name) const {
  for (const Tensor& t : tensors_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const Tensor& WeightBundle::get(const std::string& name) const {
  const Tensor* t = find(name);
  if (!t) throw WeightError("missing weight tensor '" + name + "'");
  return *t;
}

ConvLayer WeightBundle::conv(const std::string& prefix) const {
  const Tensor& w = get(prefix + ".weight");
  const Tensor& b = get(prefix + ".bias");
  if (w.shape.size() != 4 || w.shape[2] != w.shape[3] || b.shape.size() != 1 ||
      b.shape[0] != w.shape[0]) {
    throw WeightError("layer '" + prefix + "' has inconsistent shapes " +
                      shape_string(w.shape) + " / " + shape_string(b.shape));
  }
  ConvLayer layer{w.shape[0], w.shape[1], w.shape[2], w.values, b.values};
  layer.check();
  return layer;
}

void WeightBundle::set_conv(const std::string& prefix, const ConvLayer& layer) {
  layer.check();
  set({prefix + ".weight",
       {layer.out_channels, layer.in_channels, layer.kernel, layer.kernel},
       layer.weights});
  set({prefix + ".bias", {layer.out_channels}, layer.bias});
}

void WeightBundle::validate() const {
  for (const LayerSpec& spec : required_layers(config_)) {
    const Tensor& t = get(spec.name);
    if (t.shape != spec.shape) {
      throw WeightError("tensor '" + spec.name + "' has shape " +
                        shape_string(t.shape) + ", expected " +
                        shape_string(spec.shape));
    }
  }
}

WeightBundle generate_weights(const NetworkConfig& config, std::uint64_t seed) {
  // mt19937_64 output is fully specified by the standard; distributions are
  // not, so uniforms are derived from the raw bits.
  std::mt19937_64 rng(seed);
  auto unit = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  WeightBundle bundle(config);
  const auto layers = required_layers(config);
  for (std::size_t idx = 0; idx < layers.size(); idx += 2) {
    const LayerSpec& w = layers[idx];
    const LayerSpec& b = layers[idx + 1];
    const std::size_t fan_in = w.shape[1] * w.shape[2] * w.shape[3];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (const LayerSpec* spec : {&w, &b}) {
      Tensor t{spec->name, spec->shape, std::vector<double>(element_count(spec->shape))};
      for (double& v : t.values) {
        v = static_cast<double>(static_cast<float>((2.0 * unit() - 1.0) * bound));
      }
      bundle.set(std::move(t));
    }
  }
  return bundle;
}

WeightBundle zero_weights(const NetworkConfig& config) {
  WeightBundle bundle(config);
  for (const LayerSpec& spec : required_layers(config)) {
    bundle.set({spec.name, spec.shape, std::vector<double>(element_count(spec.shape), 0.0)});
  }
  return bundle;
}

void save_weights(const WeightBundle& bundle, const std::filesystem::path& path) {
  nlohmann::json header;
  header["config"] = {{"base_channels", bundle.config().base_channels},
                      {"depth", bundle.config().depth},
                      {"hvi_k", bundle.config().hvi_k}};
  header["layers"] = nlohmann::json::array();
  std::size_t offset = 0;
  for (const Tensor& t : bundle.tensors()) {
    header["layers"].push_back({{"name", t.name},
                                {"shape", t.shape},
                                {"offset", offset},
                                {"count", t.values.size()}});
    offset += t.values.size() * 4;
  }
  const std::string text = header.dump();

  std::vector<std::uint8_t> buf(std::begin(kMagic), std::end(kMagic));
  put_u64(buf, text.size());
  buf.insert(buf.end(), text.begin(), text.end());
  buf.reserve(buf.size() + offset);
  for (const Tensor& t : bundle.tensors()) {
    for (double v : t.values) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
      for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
  }
  io::write_atomic(path, buf);
}

WeightBundle load_weights(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> buf = io::read_binary(path);
  if (buf.size() < 16 || std::memcmp(buf.data(), kMagic, 8) != 0) {
    throw ParseError("weights", path.string() + " is not a weight file (bad magic)");
  }
  const std::uint64_t header_len = get_u64(buf.data() + 8);
  if (header_len > buf.size() - 16) {
    throw ParseError("weights", "weight header length exceeds file size");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(buf.begin() + 16,
                                   buf.begin() + 16 + static_cast<std::ptrdiff_t>(header_len));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("weights", std::string("malformed weight header: ") + e.what());
  }
  const std::uint8_t* payload = buf.data() + 16 + header_len;
  const std::size_t payload_size = buf.size() - 16 - header_len;

  WeightBundle bundle;
  try {
    const auto& cfg = header.at("config");
    NetworkConfig config;
    config.base_channels = cfg.at("base_channels").get<std::size_t>();
    config.depth = cfg.at("depth").get<std::size_t>();
    config.hvi_k = cfg.at("hvi_k").get<double>();
    config.validate();
    bundle = WeightBundle(config);
    for (const auto& layer : header.at("layers")) {
      Tensor t;
      t.name = layer.at("name").get<std::string>();
      t.shape = layer.at("shape").get<std::vector<std::size_t>>();
      const auto off = layer.at("offset").get<std::size_t>();
      const auto count = layer.at("count").get<std::size_t>();
      if (count != element_count(t.shape) || off + count * 4 > payload_size) {
        throw ParseError("layers", "layer '" + t.name + "' payload out of range");
      }
      t.values.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint8_t* p = payload + off + 4 * i;
        const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                                   static_cast<std::uint32_t>(p[1]) << 8 |
                                   static_cast<std::uint32_t>(p[2]) << 16 |
                                   static_cast<std::uint32_t>(p[3]) << 24;
        t.values[i] = static_cast<double>(std::bit_cast<float>(bits));
      }
      bundle.set(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("weights", std::string("malformed weight header: ") + e.what());
  }
  return bundle;
}

}  // namespace phvi::net
