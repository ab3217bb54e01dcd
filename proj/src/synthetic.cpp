// SPDX-License-Identifier: Apache-2.0
#include "clcp/synthetic.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "clcp/util.hpp"

namespace clcp::synthetic {

namespace {

const std::vector<std::string> kFunctionNames = {"compute", "helper", "transform", "apply", "process",
                                                 "run", "handle", "evaluate", "calc", "do_step"};
const std::vector<std::string> kArgNames = {"value", "data", "item", "arg", "x", "obj", "inp", "src", "val", "elem"};

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t at = s.find(from); at != std::string::npos; at = s.find(from, at + to.size())) {
    s.replace(at, from.size(), to);
  }
  return s;
}

}  // namespace

const std::vector<Operation>& operations() {
  static const std::vector<Operation> ops = {
      {"add", "def {f}({x}):\n    return {x} + {c}\n",
       {"Return the value plus {c}.", "Add {c} to the number."}},
      {"scale", "def {f}({x}):\n    result = {x} * {c}\n    return result\n",
       {"Multiply the value by {c}.", "Scale the number by a factor of {c}."}},
      {"floordiv", "def {f}({x}):\n    if {x} < 0:\n        return 0\n    return {x} // {c}\n",
       {"Integer divide a non negative value by {c}.", "Divide the number by {c} rounding down."}},
      {"modulo", "def {f}({x}):\n    return {x} % {c} == 0\n",
       {"Check whether the value is divisible by {c}.", "Return True if the number is a multiple of {c}."}},
      {"power", "def {f}({x}):\n    return pow({x}, {c})\n",
       {"Raise the value to the power {c}.", "Compute the {c}th power of the number."}},
      {"head", "def {f}({x}):\n    items = list({x})\n    return items[0:{c}]\n",
       {"Return the first {c} elements of the sequence.", "Take the leading {c} items."}},
      {"tail", "def {f}({x}):\n    return list({x})[-{c}:]\n",
       {"Return the last {c} elements as a list.", "Take the trailing {c} items."}},
      {"repeat", "def {f}({x}):\n    return [{x}] * {c}\n",
       {"Build a list holding the value {c} times.", "Repeat the item {c} times in a list."}},
      {"range_sum",
       "def {f}({x}):\n    total = 0\n    for i in range({c}):\n        total += {x} * i\n    return total\n",
       {"Sum the value times each index below {c}.", "Accumulate the weighted sum over {c} steps."}},
      {"greater", "def {f}({x}):\n    return len({x}) > {c}\n",
       {"Check whether the collection has more than {c} elements.", "Return True if the length exceeds {c}."}},
      {"round", "def {f}({x}):\n    return round(float({x}), {c})\n",
       {"Round the number to {c} decimal places.", "Convert to float and keep {c} digits."}},
      {"ljust", "def {f}({x}):\n    return str({x}).ljust({c})\n",
       {"Pad the text on the right to width {c}.", "Left justify the string in {c} columns."}},
      {"split", "def {f}({x}):\n    parts = {x}.split(None, {c})\n    return parts\n",
       {"Split the string on whitespace at most {c} times.", "Break the text into pieces with {c} splits."}},
      {"count", "def {f}({x}):\n    return sum(1 for v in {x} if v == {c})\n",
       {"Count how often {c} occurs in the sequence.", "Return the number of elements equal to {c}."}},
      {"shift_all", "def {f}({x}):\n    return [v + {c} for v in {x}]\n",
       {"Add {c} to every element of the list.", "Shift each item by {c}."}},
      {"filter", "def {f}({x}):\n    return [v for v in {x} if v > {c}]\n",
       {"Keep only the elements greater than {c}.", "Filter out values not above {c}."}},
      {"clamp_max", "def {f}({x}):\n    if {x} > {c}:\n        return {c}\n    return {x}\n",
       {"Clamp the value to at most {c}.", "Return the smaller of the number and {c}."}},
      {"clamp_min", "def {f}({x}):\n    {x} = abs({x})\n    return {x} if {x} >= {c} else {c}\n",
       {"Return the absolute value but at least {c}.", "Take the magnitude with a floor of {c}."}},
      {"shift_left", "def {f}({x}):\n    {x} = int({x})\n    return {x} << {c}\n",
       {"Shift the integer left by {c} bits.", "Multiply by two to the power {c} using a bit shift."}},
      {"chunks",
       "def {f}({x}):\n    out = []\n    for i in range(0, len({x}), {c}):\n        out.append({x}[i:i + {c}])\n"
       "    return out\n",
       {"Split the sequence into chunks of size {c}.", "Group items into blocks of {c}."}},
      {"retry",
       "def {f}({x}):\n    for attempt in range({c}):\n        try:\n            return {x}()\n"
       "        except Exception:\n            pass\n    return None\n",
       {"Call the function up to {c} times until it succeeds.", "Retry the callable at most {c} times."}},
      {"while_halve",
       "def {f}({x}):\n    steps = 0\n    while {x} > {c}:\n        {x} = {x} / 2\n        steps += 1\n"
       "    return steps\n",
       {"Count how many halvings bring the value down to {c}.", "Halve the number until it is at most {c}."}},
      {"dict_default", "def {f}({x}):\n    return {x}.get('key', {c})\n",
       {"Look up the key in the mapping with default {c}.", "Get the entry or fall back to {c}."}},
      {"index_of",
       "def {f}({x}):\n    for i, v in enumerate({x}):\n        if v == {c}:\n            return i\n    return -1\n",
       {"Return the index of the first element equal to {c}.", "Find the position of {c} in the sequence."}},
      {"contains", "def {f}({x}):\n    return {c} in set({x})\n",
       {"Check whether {c} is among the elements.", "Return True if the collection holds {c}."}},
      {"dict_fill", "def {f}({x}):\n    return {k: {c} for k in {x}}\n",
       {"Map every key to the value {c}.", "Build a dictionary assigning {c} to each key."}},
      {"top_k", "def {f}({x}):\n    return sorted({x}, reverse=True)[:{c}]\n",
       {"Return the {c} largest elements in descending order.", "Sort descending and keep the top {c}."}},
      {"counter_class",
       "class {f}:\n    def __init__(self, {x}=None):\n        self.start = {c}\n        self.{x} = {x}\n",
       {"Create an object whose counter starts at {c}.", "Store the argument and a start value of {c}."}},
      {"assert_len", "def {f}({x}):\n    assert len({x}) == {c}\n    return {x}\n",
       {"Ensure the sequence has exactly {c} elements.", "Assert that the length equals {c}."}},
      {"sort_mod", "def {f}({x}):\n    return sorted({x}, key=lambda v: v % {c})\n",
       {"Sort the items by their remainder modulo {c}.", "Order values by the residue mod {c}."}},
      {"dash_prefix", "def {f}({x}):\n    return '-' * {c} + str({x})\n",
       {"Prefix the text with {c} dashes.", "Prepend a run of {c} hyphens to the string."}},
      {"grid",
       "def {f}({x}):\n    for i in range({c}):\n        for j in range({c}):\n            yield i, j, {x}\n",
       {"Yield every index pair below {c}.", "Generate the coordinates of a {c} by {c} grid."}},
      {"sleep", "def {f}({x}):\n    time.sleep({c})\n    return {x}\n",
       {"Wait {c} seconds and return the argument.", "Pause for {c} seconds before returning."}},
      {"zfill", "def {f}({x}):\n    text = str({x})\n    return text.zfill({c})\n",
       {"Pad the number with zeros to {c} digits.", "Zero fill the string to width {c}."}},
  };
  return ops;
}

ingest::PairRecord instantiate(std::size_t op, int c, std::uint64_t variant) {
  const Operation& o = operations().at(op);
  std::mt19937_64 rng(variant);
  const std::string& f = kFunctionNames[rng() % kFunctionNames.size()];
  const std::string& x = kArgNames[rng() % kArgNames.size()];
  const std::string& doc = o.docs[rng() % o.docs.size()];
  ingest::PairRecord r;
  r.code = replace_all(replace_all(replace_all(o.code, "{f}", f), "{x}", x), "{c}", std::to_string(c));
  r.doc = replace_all(doc, "{c}", std::to_string(c));
  r.id = "syn:" + o.name + ":" + std::to_string(c) + ":" + util::hex64(variant).substr(0, 8);
  return r;
}

namespace {

std::vector<std::pair<std::size_t, int>> shuffled_combinations(std::uint64_t seed) {
  std::vector<std::pair<std::size_t, int>> combos;
  for (std::size_t op = 0; op < operations().size(); ++op) {
    for (int c = kMinConstant; c <= kMaxConstant; ++c) combos.emplace_back(op, c);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(combos.begin(), combos.end(), rng);
  return combos;
}

}  // namespace

Split make_split(std::size_t train_size, std::size_t test_size, std::uint64_t seed) {
  auto combos = shuffled_combinations(seed);
  if (test_size >= combos.size()) throw std::invalid_argument("synthetic: test size exceeds the combination count");
  Split s;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::set<std::string> docs;
  for (std::size_t i = 0; i < test_size; ++i) {
    auto r = instantiate(combos[i].first, combos[i].second, rng());
    if (!docs.insert(r.doc).second) throw std::logic_error("synthetic: duplicate test description");
    s.test.push_back(std::move(r));
  }
  const std::size_t pool = combos.size() - test_size;
  for (std::size_t i = 0; i < train_size; ++i) {
    const auto& [op, c] = combos[test_size + rng() % pool];
    s.train.push_back(instantiate(op, c, rng()));
  }
  return s;
}

std::vector<ingest::PairRecord> distinct_pairs(std::size_t n, std::uint64_t seed) {
  if (n > operations().size()) throw std::invalid_argument("synthetic: not enough distinct operations");
  std::vector<std::size_t> ops(operations().size());
  for (std::size_t i = 0; i < ops.size(); ++i) ops[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(ops.begin(), ops.end(), rng);
  std::uniform_int_distribution<int> constant(kMinConstant, kMaxConstant);
  std::vector<ingest::PairRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const int c = constant(rng);
    out.push_back(instantiate(ops[i], c, rng()));
  }
  return out;
}

}  // namespace clcp::synthetic
