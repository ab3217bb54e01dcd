// SPDX-License-Identifier: Apache-2.0
#include "clcp/himg.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace clcp::himg {

namespace {

constexpr std::array<char, 8> kMagic = {'C', 'L', 'C', 'P', 'H', 'I', 'M', 'G'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("truncated image file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

HeterogeneousImage make_image(std::span<const TokenId> ids, std::size_t length, TokenId max_id) {
  if (length == 0) throw std::invalid_argument("image length must be positive");
  if (max_id == 0) throw std::invalid_argument("max_id must be positive");
  HeterogeneousImage img;
  img.true_len = std::min(ids.size(), length);
  img.truncated = ids.size() > length;
  img.ids.assign(length, vocab::kPadId);
  std::copy_n(ids.begin(), img.true_len, img.ids.begin());
  img.values.resize(length);
  const double scale = 1.0 / static_cast<double>(max_id);
  for (std::size_t i = 0; i < length; ++i) {
    if (img.ids[i] > max_id) throw std::invalid_argument("ID above max_id: " + std::to_string(img.ids[i]));
    img.values[i] = static_cast<float>(static_cast<double>(img.ids[i]) * scale);
  }
  return img;
}

EncodedSnippet encode_snippet(const std::string& code, const vocab::Vocabulary& vocab,
                              vocab::ExhaustPolicy policy) {
  EncodedSnippet out{{}, vocab::NamespaceScope(vocab.ranges)};
  out.ids = vocab::assign_ids(pylex::tokenize(code), vocab, out.scope, policy);
  return out;
}

void ImageFile::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kVersion);
  put_u32(out, length);
  put_u32(out, max_id);
  const std::uint64_t count = images.size();
  put_u32(out, static_cast<std::uint32_t>(count));
  put_u32(out, static_cast<std::uint32_t>(count >> 32));
  for (std::size_t r = 0; r < images.size(); ++r) {
    const auto& img = images[r];
    if (img.ids.size() != length) throw std::invalid_argument("image length mismatch");
    put_u32(out, static_cast<std::uint32_t>(img.true_len));
    std::uint32_t f = r < flags.size() ? flags[r] : 0;
    if (img.truncated) f |= kFlagTruncated;
    put_u32(out, f);
    for (TokenId id : img.ids) put_u32(out, id);
  }
}

ImageFile ImageFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error(path + " is not a heterogeneous-image file");
  }
  if (const auto v = get_u32(in); v != kVersion) {
    throw std::runtime_error("unsupported image file version " + std::to_string(v));
  }
  ImageFile f;
  f.length = get_u32(in);
  f.max_id = get_u32(in);
  const std::uint64_t lo = get_u32(in);
  const std::uint64_t count = lo | (static_cast<std::uint64_t>(get_u32(in)) << 32);
  f.images.reserve(count);
  std::vector<TokenId> ids(f.length);
  for (std::uint64_t r = 0; r < count; ++r) {
    const std::uint32_t true_len = get_u32(in);
    const std::uint32_t flags = get_u32(in);
    for (auto& id : ids) id = get_u32(in);
    auto img = make_image(std::span<const TokenId>(ids.data(), true_len), f.length, f.max_id);
    img.truncated = (flags & kFlagTruncated) != 0;
    f.images.push_back(std::move(img));
    f.flags.push_back(flags);
  }
  return f;
}

std::string ImageFile::debug_dump(std::size_t index) const {
  if (index >= images.size()) throw std::out_of_range("image index " + std::to_string(index));
  const auto& img = images[index];
  std::ostringstream out;
  out << "record " << index << " length " << length << " true_len " << img.true_len
      << (img.truncated ? " truncated" : "") << "\n";
  for (std::size_t i = 0; i < img.true_len; ++i) out << img.ids[i] << (i + 1 < img.true_len ? ' ' : '\n');
  return out.str();
}

}  // namespace clcp::himg
