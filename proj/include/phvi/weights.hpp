#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "phvi/conv.hpp"

namespace phvi::net {

struct NetworkConfig {
  std::size_t base_channels = 16;
  std::size_t depth = 3;
  double hvi_k = 1.0;

  /// Channel width at encoder level l: base_channels * 2^l.
  std::size_t channels_at(std::size_t level) const {
    return base_channels << level;
  }
  void validate() const;
};

struct Tensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> values;
};

/// Name and shape of one tensor the network expects.
struct LayerSpec {
  std::string name;
  std::vector<std::size_t> shape;
};

/// Every tensor path the network reads for `config`, in file order.
std::vector<LayerSpec> required_layers(const NetworkConfig& config);

/// Named tensors plus the configuration they were built for. Immutable once
/// loaded; safe to share across threads.
class WeightBundle {
 public:
  WeightBundle() = default;
  explicit WeightBundle(NetworkConfig config) : config_(config) {}

  const NetworkConfig& config() const noexcept { return config_; }
  NetworkConfig& mutable_config() noexcept { return config_; }
  const std::vector<Tensor>& tensors() const noexcept { return tensors_; }

  /// Inserts or replaces a tensor.
  void set(Tensor tensor);
  const Tensor* find(const std::string& name) const;
  const Tensor& get(const std::string& name) const;

  /// Builds a ConvLayer from "<prefix>.weight" [o,i,k,k] and "<prefix>.bias".
  ConvLayer conv(const std::string& prefix) const;
  void set_conv(const std::string& prefix, const ConvLayer& layer);

  /// Throws WeightError unless every required layer is present with the
  /// expected shape.
  void validate() const;

 private:
  NetworkConfig config_;
  std::vector<Tensor> tensors_;
};

/// Deterministic uniform weights (bound 1/sqrt(fan_in)), rounded to float32
/// so the bundle survives a save/load cycle unchanged.
WeightBundle generate_weights(const NetworkConfig& config, std::uint64_t seed);

/// A bundle with every required tensor zero-filled.
WeightBundle zero_weights(const NetworkConfig& config);

/// File layout: 8-byte magic "PHVIWTS1", uint64 LE header length, JSON
/// header ({config, layers:[{name, shape, offset, count}]}), then the tensor
/// payload as little-endian float32 in manifest order. Offsets are bytes
/// from the start of the payload.
void save_weights(const WeightBundle& bundle, const std::filesystem::path& path);
WeightBundle load_weights(const std::filesystem::path& path);

}  // namespace phvi::net
