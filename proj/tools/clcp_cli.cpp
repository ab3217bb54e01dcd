// SPDX-License-Identifier: Apache-2.0
// Command-line entry point: vocabulary building, corpus encoding, text
// cleaning, training, evaluation, ladders and ablations.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "clcp/dataset.hpp"
#include "clcp/himg.hpp"
#include "clcp/manifest.hpp"
#include "clcp/pylex.hpp"
#include "clcp/synthetic.hpp"
#include "clcp/textclean.hpp"
#include "clcp/util.hpp"
#include "clcp/zeval.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace clcp;

namespace {

using Real = float;

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

ModelConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  ModelConfig cfg = path.empty() ? ModelConfig{} : ModelConfig::load(path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError(kv, "override must look like key=value");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

ingest::FieldNames fields(const std::string& code, const std::string& doc) {
  ingest::FieldNames f;
  f.code = code;
  f.doc = doc;
  return f;
}

std::vector<std::string> read_snippets(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::string> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains(field) || !j[field].is_string()) {
      throw std::runtime_error(path + ":" + std::to_string(n) + ": missing string field '" + field + "'");
    }
    out.push_back(j[field].get<std::string>());
  }
  return out;
}

void write_side_manifest(const std::string& out, const std::string& cmd, const std::vector<std::string>& inputs,
                         const std::string& vocab_hash, std::uint64_t seed, const std::string& started) {
  RunManifest m;
  m.command = cmd;
  m.vocab_hash = vocab_hash;
  for (const auto& p : inputs) m.data_hashes[p] = util::file_hash(p);
  m.seed = seed;
  m.started = started;
  m.finished = utc_now();
  m.artifacts = {fs::path(out).filename().string()};
  util::write_file(out + ".manifest.json", m.to_json());
}

struct SplitSource {
  std::string data;
  std::size_t synthetic = 0;
  std::string code_field = "code";
  std::string doc_field = "docstring";
};

ingest::Split make_split(const SplitSource& src, const ingest::SamplePlan& plan) {
  if (src.synthetic > 0 || src.data.empty()) {
    const std::size_t train = std::max(src.synthetic, plan.train_sizes.back());
    const auto s = synthetic::make_split(train, plan.test_sizes.back(), plan.seed);
    ingest::Split split;
    split.train_pool = s.train;
    split.test_pool = s.test;
    return split;
  }
  const auto loaded = ingest::load_pairs(src.data, std::nullopt, fields(src.code_field, src.doc_field));
  return ingest::sample_split(loaded.records, plan);
}

int cmd_build_vocab(const std::string& in, const std::string& out, std::optional<std::size_t> limit,
                    const SplitSource& src, const std::string& cmd) {
  const auto started = utc_now();
  const auto loaded = ingest::load_pairs(in, limit, fields(src.code_field, src.doc_field));
  const auto vocab = build_code_vocab(loaded.records);
  vocab.save(out);
  write_side_manifest(out, cmd, {in}, util::file_hash(out), 0, started);
  std::cout << "vocab: " << vocab.size() << " fixed entries from " << loaded.records.size() << " snippets ("
            << loaded.skipped << " skipped) -> " << out << "\n";
  return 0;
}

int cmd_encode(const std::string& in, const std::string& vocab_path, const std::string& out, std::size_t length,
               const std::string& field, const std::string& cmd) {
  const auto started = utc_now();
  const auto vocab = vocab::Vocabulary::load(vocab_path);
  himg::ImageFile file;
  file.length = static_cast<std::uint32_t>(length);
  file.max_id = vocab.ranges.max_id();
  std::size_t truncated = 0, recycled = 0;
  for (const auto& code : read_snippets(in, field)) {
    const auto snip = himg::encode_snippet(code, vocab, vocab::ExhaustPolicy::Recycle);
    auto img = himg::make_image(snip.ids, length, file.max_id);
    truncated += img.truncated;
    recycled += snip.scope.recycled() > 0;
    file.flags.push_back(snip.scope.recycled() ? himg::kFlagRecycled : 0u);
    file.images.push_back(std::move(img));
  }
  file.save(out);
  write_side_manifest(out, cmd, {in, vocab_path}, util::file_hash(vocab_path), 0, started);
  std::cout << "encoded " << file.images.size() << " snippets (" << truncated << " truncated, " << recycled
            << " recycled) -> " << out << "\n";
  return 0;
}

int cmd_clean_text(const std::string& in, const std::string& out, const std::string& report_path,
                   const SplitSource& src, const std::string& cmd) {
  const auto started = utc_now();
  const auto f = fields(src.code_field, src.doc_field);
  const auto loaded = ingest::load_pairs(in, std::nullopt, f);
  const auto [cleaned, report] = textclean::clean_corpus(loaded.records);
  ingest::write_pairs(out, cleaned, f);
  if (!report_path.empty()) util::write_file(report_path, report.to_json());
  write_side_manifest(out, cmd, {in}, "", 0, started);
  std::cout << "cleaned " << report.input << " descriptions: " << report.kept << " kept, " << report.dropped
            << " dropped -> " << out << "\n";
  return 0;
}

int cmd_train(const ModelConfig& cfg, const std::string& data, const std::string& out, const SplitSource& src,
              const std::string& cmd) {
  const auto started = utc_now();
  const auto loaded = ingest::load_pairs(data, std::nullopt, fields(src.code_field, src.doc_field));
  const auto dir = fresh_run_dir(out);
  const auto code_vocab = build_code_vocab(loaded.records);
  const auto text_vocab = build_text_vocab(loaded.records, cfg);
  const auto pairs = encode_pairs(loaded.records, code_vocab, text_vocab, cfg);
  cfg.save(dir + "/model.cfg");
  code_vocab.save(dir + "/vocab.tsv");
  text_vocab.save(dir + "/text_vocab.txt");

  ClcpModel<Real> model(cfg, static_cast<Index>(text_vocab.size()));
  model.init();
  TrainOptions opts;
  opts.out_dir = dir;
  opts.log = &std::cerr;
  opts.on_epoch = [](const EpochMetrics& m) { std::cout << m.to_json().dump() << std::endl; };
  const auto result = train(model, pairs, opts);

  RunManifest m;
  m.command = cmd;
  m.config_hash = cfg.hash();
  m.vocab_hash = util::file_hash(dir + "/vocab.tsv");
  m.data_hashes[data] = util::file_hash(data);
  m.seed = cfg.seed;
  m.started = started;
  m.finished = utc_now();
  m.artifacts = {"model.cfg", "vocab.tsv", "text_vocab.txt", "metrics.jsonl", "result.json"};
  if (fs::exists(dir + "/best/checkpoint.bin")) {
    m.artifacts.push_back("best/checkpoint.bin");
    m.artifacts.push_back("best/state.json");
  }
  m.save(dir);
  std::cout << "run " << dir << ": " << result.stop_reason << ", best epoch " << result.best_epoch << "\n";
  return result.stop_reason == "non_finite" ? 1 : 0;
}

int cmd_eval(const std::string& run, const std::string& data, const std::string& variant, const std::string& out,
             std::optional<std::size_t> limit, const SplitSource& src, const std::string& cmd) {
  const auto started = utc_now();
  const auto cfg = ModelConfig::load(run + "/model.cfg");
  const auto code_vocab = vocab::Vocabulary::load(run + "/vocab.tsv");
  const auto text_vocab = TextVocab::load(run + "/text_vocab.txt");
  auto records = ingest::load_pairs(data, limit, fields(src.code_field, src.doc_field)).records;
  if (variant == "cleaned") records = textclean::clean_corpus(records).first;
  const auto pairs = encode_pairs(records, code_vocab, text_vocab, cfg);
  ClcpModel<Real> model(cfg, static_cast<Index>(text_vocab.size()));
  TrainState<Real> state(model);
  state.load(run + "/best");
  auto [fwd, back] = zeval::evaluate(model, pairs);
  zeval::LadderRow row;
  row.config_id = cfg.id();
  row.config_hash = cfg.hash();
  row.family = family_name(cfg.family);
  row.blocks = cfg.blocks;
  row.variant = fwd.variant = back.variant = variant;
  row.test_size = fwd.L;
  row.result = fwd;
  row.reverse = back;
  row.run_dir = run;
  std::cout << zeval::ladder_table({row});
  if (!out.empty()) {
    util::write_file(out, zeval::ladder_csv({row}));
    write_side_manifest(out, cmd, {data, run + "/vocab.tsv"}, util::file_hash(run + "/vocab.tsv"), cfg.seed,
                        started);
  }
  return 0;
}

struct SweepArgs {
  std::string plan;
  std::vector<std::string> configs;
  std::vector<std::string> overrides;
  std::string out;
  std::string variant = "raw";
  unsigned workers = 0;
  std::vector<std::string> deltas;
};

std::pair<ingest::SamplePlan, std::vector<ModelConfig>> sweep_inputs(const SweepArgs& a) {
  const auto plan = ingest::SamplePlan::from_json(util::read_file(a.plan));
  if (plan.test_sizes.empty()) throw ingest::IngestError("plan: test_sizes must not be empty");
  std::vector<ModelConfig> configs;
  if (a.configs.empty()) configs.push_back(load_config("", a.overrides));
  for (const auto& c : a.configs) configs.push_back(load_config(c, a.overrides));
  return {plan, configs};
}

void write_sweep_manifest(const SweepArgs& a, const std::vector<ModelConfig>& configs, const SplitSource& src,
                          const std::string& cmd, const std::string& started, const std::vector<std::string>& files) {
  RunManifest m;
  m.command = cmd;
  std::string hashes;
  for (const auto& c : configs) hashes += c.hash();
  m.config_hash = util::hex64(util::fnv1a64(hashes));
  m.data_hashes[a.plan] = util::file_hash(a.plan);
  if (!src.data.empty()) m.data_hashes[src.data] = util::file_hash(src.data);
  m.seed = configs.front().seed;
  m.started = started;
  m.finished = utc_now();
  m.artifacts = files;
  m.artifacts.push_back("runs/");
  util::write_file(a.out + "/manifest-" + a.variant + ".json", m.to_json());
}

int cmd_ladder(const SweepArgs& a, const SplitSource& src, const std::string& cmd) {
  const auto started = utc_now();
  auto [plan, configs] = sweep_inputs(a);
  fs::create_directories(a.out);
  zeval::LadderOptions opts;
  opts.out_dir = a.out;
  opts.variant = a.variant;
  opts.workers = a.workers;
  opts.log = &std::cerr;
  const auto rows = zeval::run_ladder(make_split(src, plan), plan.train_sizes, plan.test_sizes, configs, opts);
  std::cout << zeval::ladder_table(rows);
  write_sweep_manifest(a, configs, src, cmd, started, {"results-" + a.variant + ".csv", "results-" + a.variant + ".txt"});
  return 0;
}

int cmd_ablate(const SweepArgs& a, const SplitSource& src, const std::string& cmd) {
  const auto started = utc_now();
  auto [plan, configs] = sweep_inputs(a);
  fs::create_directories(a.out);
  zeval::LadderOptions opts;
  opts.out_dir = a.out;
  opts.variant = a.variant;
  opts.workers = a.workers;
  opts.log = &std::cerr;
  const auto deltas = a.deltas.empty() ? zeval::standard_deltas() : a.deltas;
  const auto report = zeval::run_ablations(make_split(src, plan), plan.train_sizes, plan.test_sizes, configs, deltas, opts);
  std::cout << zeval::ablation_table(report);
  write_sweep_manifest(a, configs, src, cmd, started,
                       {"results-" + a.variant + ".csv", "ablation-" + a.variant + ".csv", "ablation-" + a.variant + ".txt"});
  return 0;
}

int cmd_inspect(const std::string& vocab_path, std::optional<long long> id, const std::string& img_path,
                std::size_t index) {
  std::optional<vocab::Vocabulary> vocab;
  if (!vocab_path.empty()) vocab = vocab::Vocabulary::load(vocab_path);
  const auto ranges = vocab ? vocab->ranges : vocab::IdRanges::table_defaults();
  if (id) {
    if (*id < 0 || *id > static_cast<long long>(ranges.max_id())) {
      throw std::out_of_range("id " + std::to_string(*id) + " outside 0.." + std::to_string(ranges.max_id()));
    }
    const auto tid = static_cast<vocab::TokenId>(*id);
    if (tid == vocab::kPadId) {
      std::cout << "id 0: padding\n";
      return 0;
    }
    const auto comp = ranges.component_of(tid);
    if (!comp) {
      std::cout << "id " << tid << ": unassigned\n";
      return 1;
    }
    const auto own = ranges.own(*comp);
    const auto table = ranges.table_range(*comp);
    std::cout << "id " << tid << ": component " << pylex::component_name(*comp) << ", range " << table.lo << "-"
              << table.hi;
    if (own != table) std::cout << " (own " << own.lo << "-" << own.hi << ")";
    std::cout << "\n";
    if (tid >= ranges.local_lo(*comp)) {
      std::cout << "  namespace-local slot " << tid - ranges.local_lo(*comp) << "\n";
    } else if (vocab) {
      if (const auto* e = vocab->entry(tid)) std::cout << "  key " << pylex::escape_text(e->second) << "\n";
      for (const auto& t : vocab->lookup_list(tid)) std::cout << "  lookup " << t << "\n";
    }
  }
  if (!img_path.empty()) {
    const auto file = himg::ImageFile::load(img_path);
    std::cout << file.debug_dump(index);
    if (vocab) {
      const auto& img = file.images.at(index);
      const auto toks = vocab::decode(std::span(img.ids.data(), img.true_len), *vocab, nullptr);
      for (const auto& t : toks) {
        std::cout << t.id << "\t" << (t.component ? pylex::component_name(*t.component) : "Pad") << "\t"
                  << pylex::escape_text(t.text);
        if (t.ambiguous) {
          std::cout << "\t{";
          for (std::size_t i = 0; i < t.candidates.size(); ++i) std::cout << (i ? ", " : "") << t.candidates[i];
          std::cout << "}";
        }
        std::cout << "\n";
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clcp: heterogeneous-image code encoding and contrastive code/text pretraining"};
  app.require_subcommand(1);
  const std::string cmd = command_line(argc, argv);
  SplitSource src;
  auto add_fields = [&](CLI::App* s) {
    s->add_option("--code-field", src.code_field, "JSONL field holding code")->capture_default_str();
    s->add_option("--doc-field", src.doc_field, "JSONL field holding the description")->capture_default_str();
  };

  std::string in, out, vocab_path, data, config_path, report_path, run, variant = "raw", img;
  std::vector<std::string> overrides;
  std::optional<std::size_t> limit;
  std::size_t length = himg::kDefaultLength, index = 0;
  std::optional<long long> id;

  auto* bv = app.add_subcommand("build-vocab", "build the code vocabulary from JSONL pairs");
  bv->add_option("--in", in, "input JSONL")->required();
  bv->add_option("--out", out, "vocabulary file")->required();
  bv->add_option("--limit", limit, "read at most this many records");
  add_fields(bv);

  auto* enc = app.add_subcommand("encode", "encode snippets into heterogeneous images");
  enc->add_option("--in", in, "input JSONL with a code field")->required();
  enc->add_option("--vocab", vocab_path, "vocabulary file")->required();
  enc->add_option("--out", out, "image file")->required();
  enc->add_option("--length", length, "image length")->capture_default_str()->check(CLI::PositiveNumber);
  enc->add_option("--code-field", src.code_field, "JSONL field holding code")->capture_default_str();

  auto* ct = app.add_subcommand("clean-text", "apply the description cleaning rules");
  ct->add_option("--in", in, "input JSONL")->required();
  ct->add_option("--out", out, "cleaned JSONL")->required();
  ct->add_option("--report", report_path, "JSON rule report");
  add_fields(ct);

  auto* tr = app.add_subcommand("train", "contrastive training run");
  tr->add_option("--config", config_path, "model config file");
  tr->add_option("--set", overrides, "config override key=value (repeatable)");
  tr->add_option("--data", data, "training JSONL")->required();
  tr->add_option("--out", out, "run directory (a suffix is added if it exists)")->required();
  add_fields(tr);

  auto* ev = app.add_subcommand("eval", "zero-shot matching with a trained run");
  ev->add_option("--run", run, "run directory from train")->required();
  ev->add_option("--data", data, "test JSONL")->required();
  ev->add_option("--variant", variant, "raw or cleaned")->check(CLI::IsMember({"raw", "cleaned"}))->capture_default_str();
  ev->add_option("--limit", limit, "evaluate the first N pairs");
  ev->add_option("--out", out, "results CSV");
  add_fields(ev);

  SweepArgs sweep;
  auto add_sweep = [&](CLI::App* s) {
    s->add_option("--plan", sweep.plan, "sample plan JSON (train_sizes, test_sizes, seed)")->required();
    s->add_option("--config", sweep.configs, "model config file (repeatable)");
    s->add_option("--set", sweep.overrides, "override applied to every config (repeatable)");
    s->add_option("--data", src.data, "pairs JSONL; omit to use the synthetic family");
    s->add_option("--synthetic", src.synthetic, "synthetic train pool size");
    s->add_option("--out", sweep.out, "output directory")->required();
    s->add_option("--variant", sweep.variant, "raw or cleaned")
        ->check(CLI::IsMember({"raw", "cleaned"}))
        ->capture_default_str();
    s->add_option("--workers", sweep.workers, "parallel runs (default: CLCP_WORKERS or 1)");
    add_fields(s);
  };
  auto* ld = app.add_subcommand("ladder", "train and evaluate over the sample-size ladder");
  add_sweep(ld);
  auto* ab = app.add_subcommand("ablate", "ablation matrix with difference table");
  add_sweep(ab);
  ab->add_option("--delta", sweep.deltas, "deltas to run: +BN, -Pool, -Init (repeatable)");

  auto* in_cmd = app.add_subcommand("inspect", "describe an ID or a stored image");
  in_cmd->add_option("--vocab", vocab_path, "vocabulary file");
  in_cmd->add_option("--id", id, "token ID");
  in_cmd->add_option("--img", img, "image file");
  in_cmd->add_option("--index", index, "record index in the image file")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success) ? code : 2;
  }

  try {
    if (*bv) return cmd_build_vocab(in, out, limit, src, cmd);
    if (*enc) return cmd_encode(in, vocab_path, out, length, src.code_field, cmd);
    if (*ct) return cmd_clean_text(in, out, report_path, src, cmd);
    if (*tr) return cmd_train(load_config(config_path, overrides), data, out, src, cmd);
    if (*ev) return cmd_eval(run, data, variant, out, limit, src, cmd);
    if (*ld) return cmd_ladder(sweep, src, cmd);
    if (*ab) return cmd_ablate(sweep, src, cmd);
    if (*in_cmd) {
      if (!id && img.empty()) {
        std::cerr << "inspect: give --id or --img\n" << in_cmd->help();
        return 2;
      }
      return cmd_inspect(vocab_path, id, img, index);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: field '" << e.field() << "': " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
