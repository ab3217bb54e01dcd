// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "clcp/ndnn/tensor.hpp"

namespace clcp::ndnn {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat binary checkpoint:
///   magic "CLCPCKPT", u32 version, u32 scalar bytes, u32 entry count,
///   manifest: per entry u32 name length, name bytes, u32 rank, u64 dims,
///   then the raw buffers in manifest order.
/// Little-endian host assumed.
inline constexpr char kCheckpointMagic[8] = {'C', 'L', 'C', 'P', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw CheckpointError("truncated checkpoint");
  return v;
}

}  // namespace detail

template <typename Scalar>
void save_checkpoint(const std::string& path, const std::vector<ParamRef<Scalar>>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write " + path);
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  detail::put<std::uint32_t>(out, kCheckpointVersion);
  detail::put<std::uint32_t>(out, sizeof(Scalar));
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) {
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(e.name.size()));
    out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(e.tensor->shape.size()));
    for (Index d : e.tensor->shape) detail::put<std::uint64_t>(out, static_cast<std::uint64_t>(d));
  }
  for (const auto& e : entries) {
    out.write(reinterpret_cast<const char*>(e.tensor->data.data()),
              static_cast<std::streamsize>(e.tensor->numel() * static_cast<Index>(sizeof(Scalar))));
  }
  if (!out) throw CheckpointError("write failed: " + path);
}

/// Restores every entry by name; names and shapes must match exactly.
template <typename Scalar>
void load_checkpoint(const std::string& path, const std::vector<ParamRef<Scalar>>& entries) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw CheckpointError(path + " is not a checkpoint");
  }
  if (detail::get<std::uint32_t>(in) != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version");
  if (detail::get<std::uint32_t>(in) != sizeof(Scalar)) throw CheckpointError("checkpoint scalar width differs");
  const std::uint32_t count = detail::get<std::uint32_t>(in);
  std::vector<std::pair<std::string, std::vector<Index>>> manifest;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name(detail::get<std::uint32_t>(in), '\0');
    in.read(name.data(), static_cast<std::streamsize>(name.size()));
    std::vector<Index> shape(detail::get<std::uint32_t>(in));
    for (Index& d : shape) d = static_cast<Index>(detail::get<std::uint64_t>(in));
    manifest.emplace_back(std::move(name), std::move(shape));
  }
  std::map<std::string, Tensor<Scalar>*> targets;
  for (const auto& e : entries) targets[e.name] = e.tensor;
  if (targets.size() != manifest.size()) {
    throw CheckpointError("checkpoint holds " + std::to_string(manifest.size()) + " entries, model expects " +
                          std::to_string(targets.size()));
  }
  for (const auto& [name, shape] : manifest) {
    auto it = targets.find(name);
    if (it == targets.end()) throw CheckpointError("unexpected checkpoint entry " + name);
    if (it->second->shape != shape) {
      throw CheckpointError("shape mismatch for " + name + ": " + shape_string(shape) + " vs " +
                            shape_string(it->second->shape));
    }
    Tensor<Scalar>& t = *it->second;
    t.data.resize(Tensor<Scalar>::count(shape));
    in.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(t.numel() * static_cast<Index>(sizeof(Scalar))));
    if (!in) throw CheckpointError("truncated checkpoint data for " + name);
  }
}

}  // namespace clcp::ndnn
