// SPDX-License-Identifier: Apache-2.0
#include "clcp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "clcp/util.hpp"

namespace clcp {

std::string family_name(Family f) {
  switch (f) {
    case Family::Lp:
      return "lp";
    case Family::Gp:
      return "gp";
    case Family::Rn:
      return "rn";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "lp") return Family::Lp;
  if (name == "gp") return Family::Gp;
  if (name == "rn") return Family::Rn;
  throw ConfigError("family", "expected lp, gp or rn, got '" + name + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError(key, "not a number: '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

struct Field {
  std::function<void(ModelConfig&, const std::string&)> set;
  std::function<std::string(const ModelConfig&)> get;
};

template <typename T>
Field int_field(T ModelConfig::*m) {
  return {[m](ModelConfig& c, const std::string& v) { c.*m = parse_number<T>("", v); },
          [m](const ModelConfig& c) { return std::to_string(c.*m); }};
}

Field bool_field(bool ModelConfig::*m) {
  return {[m](ModelConfig& c, const std::string& v) { c.*m = parse_bool("", v); },
          [m](const ModelConfig& c) { return std::string(c.*m ? "true" : "false"); }};
}

Field double_field(double ModelConfig::*m) {
  return {[m](ModelConfig& c, const std::string& v) { c.*m = parse_number<double>("", v); },
          [m](const ModelConfig& c) { return format_double(c.*m); }};
}

Field string_field(std::string ModelConfig::*m) {
  return {[m](ModelConfig& c, const std::string& v) { c.*m = v; }, [m](const ModelConfig& c) { return c.*m; }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> kFields = {
      {"family",
       {[](ModelConfig& c, const std::string& v) { c.family = family_from_name(v); },
        [](const ModelConfig& c) { return family_name(c.family); }}},
      {"blocks", int_field(&ModelConfig::blocks)},
      {"kernel", int_field(&ModelConfig::kernel)},
      {"stride", int_field(&ModelConfig::stride)},
      {"pool_kernel", int_field(&ModelConfig::pool_kernel)},
      {"pool_stride", int_field(&ModelConfig::pool_stride)},
      {"pool_mode", string_field(&ModelConfig::pool_mode)},
      {"channels", int_field(&ModelConfig::channels)},
      {"channel_cap", int_field(&ModelConfig::channel_cap)},
      {"use_bn", bool_field(&ModelConfig::use_bn)},
      {"use_pooling", bool_field(&ModelConfig::use_pooling)},
      {"use_he_init", bool_field(&ModelConfig::use_he_init)},
      {"embed_dim", int_field(&ModelConfig::embed_dim)},
      {"image_length", int_field(&ModelConfig::image_length)},
      {"text_vocab_size", int_field(&ModelConfig::text_vocab_size)},
      {"text_min_freq", int_field(&ModelConfig::text_min_freq)},
      {"text_width", int_field(&ModelConfig::text_width)},
      {"text_layers", int_field(&ModelConfig::text_layers)},
      {"text_heads", int_field(&ModelConfig::text_heads)},
      {"text_ffn", int_field(&ModelConfig::text_ffn)},
      {"text_max_len", int_field(&ModelConfig::text_max_len)},
      {"logit_scale_init", double_field(&ModelConfig::logit_scale_init)},
      {"optimizer", string_field(&ModelConfig::optimizer)},
      {"lr", double_field(&ModelConfig::lr)},
      {"batch_size", int_field(&ModelConfig::batch_size)},
      {"max_epochs", int_field(&ModelConfig::max_epochs)},
      {"patience", int_field(&ModelConfig::patience)},
      {"val_fraction", double_field(&ModelConfig::val_fraction)},
      {"target_train_acc", double_field(&ModelConfig::target_train_acc)},
      {"seed", int_field(&ModelConfig::seed)},
  };
  return kFields;
}

const Field& field(const std::string& key) {
  for (const auto& [name, f] : fields()) {
    if (name == key) return f;
  }
  throw ConfigError(key, "unknown config key");
}

}  // namespace

int ModelConfig::block_channels(int block) const {
  long c = channels;
  for (int i = 1; i < block && c < channel_cap; ++i) c *= 2;
  return static_cast<int>(std::min<long>(c, channel_cap));
}

void ModelConfig::validate() const {
  auto require = [](bool ok, const char* key, const std::string& msg) {
    if (!ok) throw ConfigError(key, msg);
  };
  require(blocks >= 3 && blocks <= 7, "blocks", "must be in 3..7, got " + std::to_string(blocks));
  require(kernel >= 1, "kernel", "must be at least 1");
  require(stride >= 1, "stride", "must be at least 1");
  require(pool_kernel >= 1, "pool_kernel", "must be at least 1");
  require(pool_stride >= 1, "pool_stride", "must be at least 1");
  require(pool_mode == "max" || pool_mode == "avg", "pool_mode", "expected max or avg, got '" + pool_mode + "'");
  require(channels >= 1, "channels", "must be positive");
  require(channel_cap >= channels, "channel_cap", "must be at least channels");
  require(embed_dim >= 8, "embed_dim", "must be at least 8");
  require(image_length >= 1, "image_length", "must be positive");
  require(text_vocab_size >= 3, "text_vocab_size", "must be at least 3");
  require(text_min_freq >= 1, "text_min_freq", "must be at least 1");
  require(text_width >= 1, "text_width", "must be positive");
  require(text_layers >= 0, "text_layers", "must be non-negative");
  require(text_heads >= 1 && text_width % text_heads == 0, "text_heads", "must divide text_width");
  require(text_ffn >= 1, "text_ffn", "must be positive");
  require(text_max_len >= 1, "text_max_len", "must be positive");
  require(optimizer == "adam" || optimizer == "sgd", "optimizer", "expected adam or sgd, got '" + optimizer + "'");
  require(lr > 0 && std::isfinite(lr), "lr", "must be positive");
  require(batch_size >= 1, "batch_size", "must be positive");
  require(max_epochs >= 1, "max_epochs", "must be positive");
  require(patience >= 1, "patience", "must be positive");
  require(val_fraction >= 0 && val_fraction < 1, "val_fraction", "must be in [0, 1)");
  require(target_train_acc >= 0 && target_train_acc <= 1, "target_train_acc", "must be in [0, 1]");
  plan_code_encoder(*this);
}

void ModelConfig::set(const std::string& key, const std::string& value) {
  try {
    field(key).set(*this, value);
  } catch (const ConfigError& e) {
    if (!e.field().empty()) throw;
    throw ConfigError(key, std::string(e.what()).substr(2));
  }
}

std::string ModelConfig::get(const std::string& key) const { return field(key).get(*this); }

const std::vector<std::string>& ModelConfig::keys() {
  static const std::vector<std::string> kKeys = [] {
    std::vector<std::string> k;
    for (const auto& [name, f] : fields()) k.push_back(name);
    return k;
  }();
  return kKeys;
}

std::string ModelConfig::serialize() const {
  std::string out;
  for (const auto& [name, f] : fields()) out += name + " = " + f.get(*this) + "\n";
  return out;
}

ModelConfig ModelConfig::parse(const std::string& text) {
  ModelConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  c.validate();
  return c;
}

ModelConfig ModelConfig::load(const std::string& path) { return parse(util::read_file(path)); }

void ModelConfig::save(const std::string& path) const { util::write_file(path, serialize()); }

std::string ModelConfig::id() const {
  std::string s = family_name(family) + std::to_string(blocks);
  if (use_bn) s += "+BN";
  if (!use_pooling) s += "-Pool";
  if (!use_he_init) s += "-Init";
  return s;
}

std::string ModelConfig::hash() const { return util::hex64(util::fnv1a64(serialize())); }

std::vector<PlanStep> plan_code_encoder(const ModelConfig& cfg) {
  std::vector<PlanStep> steps;
  int ch = 1;
  int len = cfg.image_length;
  steps.push_back({"input", ch, len});
  auto fail = [&](const std::string& where, const std::string& what) {
    throw ConfigError("blocks", where + ": " + what + " (input length " + std::to_string(cfg.image_length) +
                                    ", kernel " + std::to_string(cfg.kernel) + ")");
  };
  auto conv = [&](const std::string& name, int out, int k, int s) {
    if (len < k) fail(name, "length " + std::to_string(len) + " shorter than kernel " + std::to_string(k));
    len = (len - k) / s + 1;
    ch = out;
    steps.push_back({name, ch, len});
  };
  auto local_pool = [&](const std::string& name) {
    if (len < cfg.pool_kernel) {
      fail(name, "length " + std::to_string(len) + " shorter than pool window " + std::to_string(cfg.pool_kernel));
    }
    len = (len - cfg.pool_kernel) / cfg.pool_stride + 1;
    steps.push_back({name, ch, len});
  };

  if (cfg.residual()) {
    conv("input.conv", cfg.block_channels(1), cfg.kernel, cfg.stride);
    for (int b = 1; b <= cfg.blocks; ++b) {
      const std::string name = "block" + std::to_string(b);
      conv(name + ".conv_a", cfg.block_channels(b), cfg.kernel, 1);
      conv(name + ".conv_b", cfg.block_channels(b), cfg.kernel, 1);
      steps.push_back({name + ".add", ch, len});
    }
  } else {
    for (int b = 1; b <= cfg.blocks; ++b) {
      const std::string name = "block" + std::to_string(b);
      conv(name + ".conv", cfg.block_channels(b), cfg.kernel, cfg.stride);
      if (cfg.use_pooling && !cfg.global_pool()) local_pool(name + ".pool");
    }
  }
  if (cfg.use_pooling && cfg.global_pool()) {
    len = 1;
    steps.push_back({"global_pool", ch, len});
  }
  steps.push_back({"flatten", ch * len, 1});
  steps.push_back({"projection", cfg.embed_dim, 1});
  return steps;
}

}  // namespace clcp
