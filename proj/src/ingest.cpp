// SPDX-License-Identifier: Apache-2.0
#include "clcp/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "clcp/util.hpp"
#include "json.hpp"

namespace clcp::ingest {

using nlohmann::json;

namespace {

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::optional<std::string> string_field(const json& obj, const std::string& name) {
  auto it = obj.find(name);
  if (it == obj.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

LoadResult read_pairs(std::istream& in, std::optional<std::size_t> limit, const FieldNames& fields) {
  LoadResult out;
  std::unordered_map<std::string, std::size_t> seen_ids;
  std::string line;
  while ((!limit || out.records.size() < *limit) && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    ++out.lines;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error&) {
      ++out.skipped;
      continue;
    }
    if (!obj.is_object()) {
      ++out.skipped;
      continue;
    }
    auto code = string_field(obj, fields.code);
    auto doc = string_field(obj, fields.doc);
    if (!code || code->empty() || !doc || blank(*doc)) {
      ++out.skipped;
      continue;
    }
    PairRecord rec;
    if (auto id = string_field(obj, fields.id); id && !id->empty()) {
      rec.id = *id;
    } else if (auto url = string_field(obj, "url"); url && !url->empty()) {
      rec.id = *url;
    } else {
      rec.id = "h:" + util::hex64(util::fnv1a64(*code + '\0' + *doc));
    }
    if (const std::size_t n = seen_ids[rec.id]++; n > 0) rec.id += "#" + std::to_string(n);
    rec.code = std::move(*code);
    rec.doc = std::move(*doc);
    out.records.push_back(std::move(rec));
  }
  if (out.lines > 0 && out.skipped * 2 > out.lines) {
    throw IngestError("more than half of the lines are malformed (" + std::to_string(out.skipped) +
                      " of " + std::to_string(out.lines) + "); wrong file or field names?");
  }
  return out;
}

LoadResult load_pairs(const std::string& path, std::optional<std::size_t> limit, const FieldNames& fields) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read " + path);
  return read_pairs(in, limit, fields);
}

void write_pairs(const std::string& path, const std::vector<PairRecord>& records, const FieldNames& fields) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write " + path);
  for (const auto& r : records) {
    json obj;
    obj[fields.id] = r.id;
    obj[fields.code] = r.code;
    obj[fields.doc] = r.doc;
    out << obj.dump() << "\n";
  }
}

void SamplePlan::validate() const {
  auto check = [](const std::vector<std::size_t>& sizes, const char* what) {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (sizes[i] == 0) throw IngestError(std::string(what) + " sizes must be positive");
      if (i > 0 && sizes[i] < sizes[i - 1]) {
        throw IngestError(std::string(what) + " sizes must be non-decreasing");
      }
    }
  };
  check(train_sizes, "train");
  check(test_sizes, "test");
}

SamplePlan SamplePlan::from_json(const std::string& text) {
  const json j = json::parse(text);
  SamplePlan p;
  p.train_sizes = j.at("train_sizes").get<std::vector<std::size_t>>();
  p.test_sizes = j.value("test_sizes", std::vector<std::size_t>{});
  p.seed = j.value("seed", std::uint64_t{0});
  p.validate();
  return p;
}

std::string SamplePlan::to_json() const {
  return json{{"train_sizes", train_sizes}, {"test_sizes", test_sizes}, {"seed", seed}}.dump();
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

std::string first_sentence_key(const std::string& doc) {
  std::string out;
  bool space = false;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto c = static_cast<unsigned char>(doc[i]);
    if (c == '.' && (i + 1 == doc.size() || std::isspace(static_cast<unsigned char>(doc[i + 1])))) break;
    if (c == '\n' && i + 1 < doc.size() && doc[i + 1] == '\n' && !out.empty()) break;
    if (std::isspace(c)) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::vector<PairRecord> Split::train(std::size_t n) const {
  if (n > train_pool.size()) {
    throw IngestError("train size " + std::to_string(n) + " exceeds train pool of " +
                      std::to_string(train_pool.size()));
  }
  return {train_pool.begin(), train_pool.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::vector<PairRecord> Split::test(std::size_t n) const {
  if (n > test_pool.size()) {
    throw IngestError("test size " + std::to_string(n) + " exceeds test pool of " +
                      std::to_string(test_pool.size()));
  }
  return {test_pool.begin(), test_pool.begin() + static_cast<std::ptrdiff_t>(n)};
}

Split sample_split(const std::vector<PairRecord>& records, const SamplePlan& plan) {
  plan.validate();
  for (std::size_t n : plan.train_sizes) {
    if (n > records.size()) {
      throw IngestError("train size " + std::to_string(n) + " exceeds corpus of " +
                        std::to_string(records.size()));
    }
  }
  const std::size_t test_n = plan.test_sizes.empty() ? 0 : plan.test_sizes.back();
  if (test_n > records.size()) {
    throw IngestError("test size " + std::to_string(test_n) + " exceeds corpus of " +
                      std::to_string(records.size()));
  }
  const auto order = seeded_permutation(records.size(), plan.seed);
  Split s;
  std::unordered_set<std::string> test_keys;
  std::unordered_set<std::string> test_ids;
  for (std::size_t i = 0; i < test_n; ++i) {
    const PairRecord& r = records[order[i]];
    s.test_pool.push_back(r);
    test_keys.insert(first_sentence_key(r.doc));
    test_ids.insert(r.id);
  }
  for (std::size_t i = test_n; i < order.size(); ++i) {
    const PairRecord& r = records[order[i]];
    if (test_ids.count(r.id) != 0 || test_keys.count(first_sentence_key(r.doc)) != 0) {
      ++s.removed_for_overlap;
      continue;
    }
    s.train_pool.push_back(r);
  }
  for (std::size_t n : plan.train_sizes) {
    if (n > s.train_pool.size()) {
      throw IngestError("train size " + std::to_string(n) + " exceeds train pool of " +
                        std::to_string(s.train_pool.size()) + " after removing test overlap");
    }
  }
  return s;
}

void write_split_manifest(const std::string& path, const Split& split, const SamplePlan& plan) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write " + path);
  out << json{{"seed", plan.seed},
              {"train_sizes", plan.train_sizes},
              {"test_sizes", plan.test_sizes},
              {"train_pool", split.train_pool.size()},
              {"test_pool", split.test_pool.size()},
              {"removed_for_overlap", split.removed_for_overlap}}
             .dump()
      << "\n";
  auto dump = [&](const std::vector<PairRecord>& pool, const char* name) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      out << json{{"split", name}, {"rank", i}, {"id", pool[i].id}}.dump() << "\n";
    }
  };
  dump(split.train_pool, "train");
  dump(split.test_pool, "test");
}

}  // namespace clcp::ingest
