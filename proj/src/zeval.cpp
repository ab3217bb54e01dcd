// SPDX-License-Identifier: Apache-2.0
#include "clcp/zeval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "clcp/dataset.hpp"
#include "clcp/manifest.hpp"
#include "clcp/textclean.hpp"
#include "clcp/util.hpp"

namespace clcp::zeval {

unsigned workers_from_env() {
  if (const char* v = std::getenv("CLCP_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end != v && *end == '\0' && n >= 1) return static_cast<unsigned>(n);
  }
  return 1;
}

const std::vector<std::string>& standard_deltas() {
  static const std::vector<std::string> d = {"none", "+BN", "-Pool", "-Init"};
  return d;
}

ModelConfig apply_delta(const ModelConfig& base, const std::string& delta) {
  ModelConfig c = base;
  if (delta == "+BN") {
    c.use_bn = true;
  } else if (delta == "-Pool") {
    c.use_pooling = false;
  } else if (delta == "-Init") {
    c.use_he_init = false;
  } else if (delta != "none") {
    throw ConfigError("delta", "unknown ablation delta '" + delta + "'");
  }
  return c;
}

namespace {

using Real = float;

struct Task {
  std::size_t config = 0;
  std::size_t size = 0;
};

std::vector<LadderRow> run_cell(const ingest::Split& split, std::size_t train_size,
                                const std::vector<std::size_t>& test_sizes, const ModelConfig& cfg,
                                const std::string& delta, const LadderOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  LadderRow base;
  base.config_id = cfg.id();
  base.config_hash = cfg.hash();
  base.family = family_name(cfg.family);
  base.blocks = cfg.blocks;
  base.delta = delta;
  base.variant = opts.variant;
  base.train_size = train_size;
  std::vector<LadderRow> rows;
  try {
    const auto train_records = split.train(train_size);
    const auto test_records = split.test(std::min(split.test_pool.size(), test_sizes.back()));
    const auto code_vocab = build_code_vocab(train_records);
    const auto text_vocab = build_text_vocab(train_records, cfg);
    const auto train_pairs = encode_pairs(train_records, code_vocab, text_vocab, cfg);
    const auto test_pairs = encode_pairs(test_records, code_vocab, text_vocab, cfg);

    TrainOptions topts;
    RunManifest manifest;
    if (!opts.out_dir.empty()) {
      base.run_dir = fresh_run_dir(opts.out_dir + "/runs/" + opts.variant + "-" + cfg.id() + "-n" +
                                   std::to_string(train_size) + "-s" + std::to_string(cfg.seed));
      topts.out_dir = base.run_dir;
      manifest.command = "ladder cell";
      manifest.config_hash = cfg.hash();
      manifest.vocab_hash = util::hex64(util::fnv1a64(code_vocab.serialize()));
      manifest.seed = cfg.seed;
      manifest.started = utc_now();
      cfg.save(base.run_dir + "/model.cfg");
      code_vocab.save(base.run_dir + "/vocab.tsv");
      text_vocab.save(base.run_dir + "/text_vocab.txt");
    }
    ClcpModel<Real> model(cfg, static_cast<Index>(text_vocab.size()));
    model.init();
    const TrainResult tr = train(model, train_pairs, topts);
    base.stop_reason = tr.stop_reason;
    base.epochs = static_cast<int>(tr.history.size());
    base.best_epoch = tr.best_epoch;
    if (tr.stop_reason == "non_finite" && tr.best_epoch == 0) throw std::runtime_error(tr.error);

    for (std::size_t t : test_sizes) {
      LadderRow row = base;
      const std::size_t n = std::min(t, test_pairs.size());
      row.test_size = n;
      std::vector<EncodedPair> subset(test_pairs.begin(), test_pairs.begin() + static_cast<std::ptrdiff_t>(n));
      auto [fwd, back] = evaluate(model, subset);
      fwd.variant = back.variant = opts.variant;
      row.result = fwd;
      row.reverse = back;
      rows.push_back(row);
    }
    if (!opts.out_dir.empty()) {
      manifest.finished = utc_now();
      manifest.artifacts = {"model.cfg", "vocab.tsv", "text_vocab.txt", "metrics.jsonl", "result.json",
                            "best/checkpoint.bin", "best/state.json", "eval.csv"};
      util::write_file(base.run_dir + "/eval.csv", ladder_csv(rows));
      manifest.save(base.run_dir);
    }
  } catch (const std::exception& e) {
    rows.clear();
    for (std::size_t t : test_sizes) {
      LadderRow row = base;
      row.test_size = t;
      row.failed = true;
      row.error = e.what();
      rows.push_back(row);
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : rows) r.seconds = secs;
  return rows;
}

ingest::Split cleaned(const ingest::Split& split) {
  ingest::Split out;
  out.train_pool = textclean::clean_corpus(split.train_pool).first;
  out.test_pool = textclean::clean_corpus(split.test_pool).first;
  out.removed_for_overlap = split.removed_for_overlap;
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

}  // namespace

std::vector<LadderRow> run_ladder(const ingest::Split& raw_split, const std::vector<std::size_t>& train_sizes,
                                  const std::vector<std::size_t>& test_sizes, const std::vector<ModelConfig>& configs,
                                  const LadderOptions& opts) {
  if (opts.variant != "raw" && opts.variant != "cleaned") {
    throw std::invalid_argument("variant must be raw or cleaned, got '" + opts.variant + "'");
  }
  if (train_sizes.empty() || test_sizes.empty()) throw std::invalid_argument("ladder: empty size list");
  for (const auto& c : configs) c.validate();
  const ingest::Split split = opts.variant == "cleaned" ? cleaned(raw_split) : raw_split;

  std::vector<Task> tasks;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (std::size_t s = 0; s < train_sizes.size(); ++s) tasks.push_back({c, s});
  }
  std::vector<std::vector<LadderRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mu;
  auto worker = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto& task = tasks[i];
      const std::string delta = task.config < opts.deltas.size() ? opts.deltas[task.config] : "none";
      results[i] = run_cell(split, train_sizes[task.size], test_sizes, configs[task.config], delta, opts);
      if (opts.log) {
        std::lock_guard lock(log_mu);
        const auto& r = results[i].front();
        *opts.log << "[" << opts.variant << "] " << r.config_id << " n=" << r.train_size;
        if (r.failed) {
          *opts.log << " FAILED: " << r.error << "\n";
        } else {
          *opts.log << " acc=" << fixed(r.result.acc, 4) << " (ea " << fixed(r.result.ea, 4) << ", L=" << r.test_size
                    << ") epochs=" << r.epochs << " " << fixed(r.seconds, 1) << "s\n";
        }
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(opts.workers ? opts.workers : workers_from_env(),
                                                     static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<LadderRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  if (!opts.out_dir.empty()) {
    util::write_file(opts.out_dir + "/results-" + opts.variant + ".csv", ladder_csv(rows));
    util::write_file(opts.out_dir + "/results-" + opts.variant + ".txt", ladder_table(rows));
  }
  return rows;
}

std::string ladder_csv(const std::vector<LadderRow>& rows) {
  std::ostringstream ss;
  ss << "config_id,config_hash,family,blocks,delta,variant,train_size,test_size,correct,acc,ea,acc_text_to_code,"
        "failed,error,stop_reason,epochs,best_epoch,seconds,run_dir\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    for (char& ch : err) {
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    }
    ss << r.config_id << ',' << r.config_hash << ',' << r.family << ',' << r.blocks << ',' << r.delta << ','
       << r.variant << ',' << r.train_size << ',' << r.test_size << ',' << r.result.correct << ','
       << fixed(r.result.acc, 6) << ',' << fixed(r.result.ea, 6) << ',' << fixed(r.reverse.acc, 6) << ','
       << (r.failed ? 1 : 0) << ',' << err << ',' << r.stop_reason << ',' << r.epochs << ',' << r.best_epoch << ','
       << fixed(r.seconds, 2) << ',' << r.run_dir << '\n';
  }
  return ss.str();
}

std::string ladder_table(const std::vector<LadderRow>& rows) {
  std::ostringstream ss;
  ss << std::left << std::setw(22) << "config" << std::setw(9) << "variant" << std::right << std::setw(8) << "train"
     << std::setw(7) << "test" << std::setw(9) << "acc" << std::setw(9) << "ea" << std::setw(9) << "t2c"
     << std::setw(8) << "epochs" << "\n";
  for (const auto& r : rows) {
    ss << std::left << std::setw(22) << r.config_id << std::setw(9) << r.variant << std::right << std::setw(8)
       << r.train_size << std::setw(7) << r.test_size;
    if (r.failed) {
      ss << "   FAILED  " << r.error << "\n";
      continue;
    }
    ss << std::setw(9) << fixed(r.result.acc, 4) << std::setw(9) << fixed(r.result.ea, 4) << std::setw(9)
       << fixed(r.reverse.acc, 4) << std::setw(8) << r.epochs << "\n";
  }
  return ss.str();
}

AblationReport run_ablations(const ingest::Split& split, const std::vector<std::size_t>& train_sizes,
                             const std::vector<std::size_t>& test_sizes, const std::vector<ModelConfig>& bases,
                             const std::vector<std::string>& deltas_in, const LadderOptions& opts) {
  std::vector<std::string> deltas = {"none"};
  for (const auto& d : deltas_in) {
    if (d != "none") deltas.push_back(d);
  }
  std::vector<ModelConfig> configs;
  LadderOptions lo = opts;
  lo.deltas.clear();
  for (const auto& b : bases) {
    for (const auto& d : deltas) {
      configs.push_back(apply_delta(b, d));
      lo.deltas.push_back(d);
    }
  }
  AblationReport report;
  report.rows = run_ladder(split, train_sizes, test_sizes, configs, lo);

  std::map<std::pair<std::string, std::string>, AblationCell> by_key;  // (base id, delta)
  std::vector<std::pair<std::string, std::string>> order;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const ModelConfig& base = bases[c / deltas.size()];
    const std::string& delta = deltas[c % deltas.size()];
    AblationCell cell;
    cell.family = family_name(base.family);
    cell.blocks = base.blocks;
    cell.delta = delta;
    double acc = 0, ea = 0;
    for (const auto& r : report.rows) {
      if (r.config_hash != configs[c].hash() || r.delta != delta) continue;
      ++cell.runs;
      if (r.failed) {
        ++cell.failed;
        continue;
      }
      acc += r.result.acc;
      ea += r.result.ea;
    }
    const std::size_t ok = cell.runs - cell.failed;
    cell.mean_acc = ok ? acc / static_cast<double>(ok) : 0;
    cell.mean_ea = ok ? ea / static_cast<double>(ok) : 0;
    by_key[{base.id(), delta}] = cell;
    order.emplace_back(base.id(), delta);
  }
  for (const auto& key : order) {
    AblationCell cell = by_key[key];
    cell.diff = cell.mean_acc - by_key[{key.first, "none"}].mean_acc;
    report.cells.push_back(cell);
  }

  const std::map<std::string, std::string> claims = {
      {"-Pool", "pool removal hurts"}, {"-Init", "removing He init hurts"}, {"+BN", "adding BN hurts"}};
  for (const auto& cell : report.cells) {
    auto it = claims.find(cell.delta);
    if (it == claims.end()) continue;
    DirectionFlag f;
    f.claim = it->second;
    f.family = cell.family + std::to_string(cell.blocks);
    f.observed = cell.failed < cell.runs && cell.diff < 0;
    f.detail = "diff " + fixed(cell.diff, 4);
    report.flags.push_back(f);
    if (cell.delta == "-Pool" && cell.family == "lp") {
      DirectionFlag below;
      below.claim = "lp-Pool below random";
      below.family = f.family;
      below.observed = cell.failed < cell.runs && cell.mean_acc < cell.mean_ea;
      below.detail = "acc " + fixed(cell.mean_acc, 4) + " vs ea " + fixed(cell.mean_ea, 4);
      report.flags.push_back(below);
    }
  }
  if (!opts.out_dir.empty()) {
    util::write_file(opts.out_dir + "/ablation-" + opts.variant + ".csv", ablation_csv(report));
    util::write_file(opts.out_dir + "/ablation-" + opts.variant + ".txt", ablation_table(report));
  }
  return report;
}

std::string ablation_table(const AblationReport& report) {
  std::vector<std::string> deltas, models;
  for (const auto& c : report.cells) {
    const std::string m = c.family + std::to_string(c.blocks);
    if (std::find(deltas.begin(), deltas.end(), c.delta) == deltas.end()) deltas.push_back(c.delta);
    if (std::find(models.begin(), models.end(), m) == models.end()) models.push_back(m);
  }
  std::ostringstream ss;
  ss << "mean accuracy difference vs base (base column: mean accuracy)\n";
  ss << std::left << std::setw(10) << "model" << std::right;
  for (const auto& d : deltas) ss << std::setw(11) << d;
  ss << "\n";
  for (const auto& m : models) {
    ss << std::left << std::setw(10) << m << std::right;
    for (const auto& d : deltas) {
      const AblationCell* cell = nullptr;
      for (const auto& c : report.cells) {
        if (c.family + std::to_string(c.blocks) == m && c.delta == d) cell = &c;
      }
      std::string v = "n/a";
      if (cell && cell->failed == cell->runs) {
        v = "failed";
      } else if (cell) {
        const double x = d == "none" ? cell->mean_acc : cell->diff;
        v = (d != "none" && x >= 0 ? "+" : "") + fixed(x, 4);
        if (cell->failed) v += "*";
      }
      ss << std::setw(11) << v;
    }
    ss << "\n";
  }
  ss << "\ndirection flags\n";
  for (const auto& f : report.flags) {
    ss << "  " << std::left << std::setw(28) << f.claim << std::setw(8) << f.family
       << (f.observed ? "observed     " : "not observed ") << f.detail << "\n";
  }
  return ss.str();
}

std::string ablation_csv(const AblationReport& report) {
  std::ostringstream ss;
  ss << "family,blocks,delta,mean_acc,mean_ea,diff,runs,failed\n";
  for (const auto& c : report.cells) {
    ss << c.family << ',' << c.blocks << ',' << c.delta << ',' << fixed(c.mean_acc, 6) << ',' << fixed(c.mean_ea, 6)
       << ',' << fixed(c.diff, 6) << ',' << c.runs << ',' << c.failed << '\n';
  }
  return ss.str();
}

}  // namespace clcp::zeval
