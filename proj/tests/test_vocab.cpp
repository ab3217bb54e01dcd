// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <random>

#include "clcp/himg.hpp"
#include "clcp/vocab.hpp"
#include "doctest.h"
#include "golden_corpus.hpp"

using namespace clcp::vocab;
using clcp::pylex::Token;
using clcp::pylex::tokenize;

namespace {

std::vector<std::vector<Token>> golden_streams() {
  std::vector<std::vector<Token>> out;
  for (const auto& g : clcp::testing::load_golden(CLCP_GOLDEN_DIR)) out.push_back(tokenize(g.raw));
  return out;
}

std::vector<TokenId> encode(const std::string& code, const Vocabulary& v) {
  NamespaceScope scope(v.ranges);
  return assign_ids(tokenize(code), v, scope);
}

}  // namespace

TEST_CASE("default ranges follow the class layout") {
  const auto r = IdRanges::table_defaults();
  CHECK_NOTHROW(r.validate());
  CHECK(r.own(Component::Keyword) == IdRange{1, 35});
  CHECK(r.own(Component::BuiltinClass) == IdRange{36, 54});
  CHECK(r.own(Component::Class) == IdRange{55, 1584});
  CHECK(r.own(Component::BuiltinMethod) == IdRange{1585, 2698});
  CHECK(r.own(Component::Method) == IdRange{2699, 4454});
  CHECK(r.own(Component::BuiltinMethCall) == IdRange{4455, 6128});
  CHECK(r.own(Component::MethodCall) == IdRange{6129, 6929});
  CHECK(r.own(Component::BuiltinAttribute) == IdRange{6930, 7960});
  CHECK(r.own(Component::Variable) == IdRange{7961, 9999});
  CHECK(r.own(Component::BuiltinAttrCall) == IdRange{10000, 11270});
  CHECK(r.own(Component::AttributeCall) == IdRange{11271, 11509});
  CHECK(r.own(Component::Operator) == IdRange{11510, 11554});
  CHECK(r.table_range(Component::Number) == IdRange{11555, 13811});
  CHECK(r.max_id() == 13811);
  CHECK(r.own(Component::Variable).size() == 2039);
  for (auto c : {Component::Symbol, Component::Whitespace, Component::Newline, Component::Placeholder}) {
    const IdRange own = r.own(c);
    const IdRange host = r.table_range(c);
    CHECK(host == IdRange{11555, 13811});
    CHECK(host.contains(own.lo));
    CHECK(host.contains(own.hi));
  }
  CHECK_FALSE(r.component_of(0).has_value());
  CHECK_FALSE(r.component_of(14000).has_value());
  CHECK(r.component_of(7961) == Component::Variable);
}

TEST_CASE("overlapping ranges are rejected") {
  auto r = IdRanges::table_defaults();
  r.set(Component::BuiltinClass, {30, 54}, 55);
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("build_vocab on an empty corpus holds only built-in tables") {
  const auto v = build_vocab({});
  const auto& b = clcp::pylex::BuiltinTables::standard();
  CHECK(b.keywords.size() == 35);
  CHECK(b.classes.size() == 19);
  for (std::size_t i = 0; i < b.keywords.size(); ++i) {
    CHECK(v.find(Component::Keyword, b.keywords[i]) == static_cast<TokenId>(1 + i));
  }
  CHECK(v.find(Component::BuiltinClass, "int").has_value());
  CHECK(v.find(Component::Operator, "=").has_value());
  CHECK(v.find(Component::Placeholder, "STR") == 13732u);
  CHECK_FALSE(v.find(Component::Number, "0").has_value());
  CHECK(v.lookup_lists().empty());
  const std::size_t expected = b.keywords.size() + b.classes.size() + b.functions.size() +
                               b.attributes.size() + b.methods.size() + b.attr_calls.size() + 38 +
                               9 + 5 + 1 + 72;
  CHECK(v.size() == expected);
}

TEST_CASE("built-in table larger than its range is RangeExhausted") {
  auto r = IdRanges::table_defaults();
  r.set(Component::Keyword, {1, 30}, 31);
  try {
    build_vocab({}, r);
    FAIL("expected RangeExhausted");
  } catch (const RangeExhausted& e) {
    CHECK(e.component() == Component::Keyword);
  }
}

TEST_CASE("call composites share one ID per member name") {
  const std::vector<std::vector<Token>> corpus = {tokenize("def f(a_param):\n    return a_param.strip\n"),
                                                  tokenize("def g(address):\n    return address.strip\n")};
  const auto v = build_vocab(corpus);
  const auto a = encode("def f(a_param):\n    return a_param.strip\n", v);
  const auto b = encode("def g(address):\n    return address.strip\n", v);
  const TokenId id = a[a.size() - 2];
  CHECK(id == b[b.size() - 2]);
  CHECK(v.ranges.own(Component::AttributeCall).contains(id));
  CHECK(v.lookup_list(id) == std::vector<std::string>{"a_param.strip", "address.strip"});

  // Called form: strip is a builtin str method, so both land on one BuiltinMethCall ID.
  const auto c = encode("a_param.strip()", v);
  const auto d = encode("address.strip()", v);
  CHECK(c[0] == d[0]);
  CHECK(c[0] == v.find(Component::BuiltinMethCall, "strip"));
}

TEST_CASE("numbers rank by frequency with lexicographic ties") {
  const std::vector<std::vector<Token>> corpus = {tokenize("x = 7 + 7 + 3\n"), tokenize("y = 2 + 3 + 7\n")};
  const auto v = build_vocab(corpus);
  CHECK(v.find(Component::Number, "7") == 11555u);
  CHECK(v.find(Component::Number, "3") == 11556u);
  CHECK(v.find(Component::Number, "2") == 11557u);
  // unseen literal falls back to the scope-local tail
  const auto ids = encode("z = 99", v);
  CHECK(ids.back() == v.ranges.local_lo(Component::Number));
}

TEST_CASE("assign_ids: namespace reuse") {
  const auto v = build_vocab({});
  const auto ids = encode("x = 1; x", v);
  CHECK(ids[0] == 7961u);
  CHECK(ids.back() == 7961u);
  CHECK(encode("def a():\n    foo = 1\n", v)[8] == 7961u);
  CHECK(encode("def b():\n    bar = 2\n", v)[8] == 7961u);
}

TEST_CASE("assign_ids: variable range capacity is 2039") {
  const auto v = build_vocab({});
  std::vector<Token> toks;
  for (int i = 0; i < 2039; ++i) toks.push_back(Token{"v" + std::to_string(i), Component::Variable, {}});
  NamespaceScope ok(v.ranges);
  const auto ids = assign_ids(toks, v, ok);
  CHECK(ids.back() == 9999u);

  toks.push_back(Token{"one_too_many", Component::Variable, {}});
  NamespaceScope full(v.ranges);
  try {
    assign_ids(toks, v, full);
    FAIL("expected RangeExhausted");
  } catch (const RangeExhausted& e) {
    CHECK(e.component() == Component::Variable);
  }
  NamespaceScope wrap(v.ranges);
  const auto wrapped = assign_ids(toks, v, wrap, ExhaustPolicy::Recycle);
  CHECK(wrapped.back() == 7961u);
  CHECK(wrap.recycled() == 1);
}

TEST_CASE("decode: padding, unknown IDs and round trip") {
  const auto v = build_vocab({});
  const std::vector<TokenId> pad = {0};
  CHECK(decode(pad, v, nullptr)[0].pad);
  const std::vector<TokenId> bad = {14000};
  CHECK_THROWS_AS(decode(bad, v, nullptr), DecodeError);

  auto enc = clcp::himg::encode_snippet("def f(x):\n    return x + 1\n", v);
  const auto dec = decode(enc.ids, v, &enc.scope);
  std::string joined;
  for (const auto& d : dec) joined += d.text;
  CHECK(joined == "def f(x):\n    return x + 1\n");
  // without the scope, user tokens come back as markers
  CHECK(decode(enc.ids, v, nullptr)[2].text == "<Method#0>");
}

TEST_CASE("golden corpus: range containment, round trip, determinism") {
  const auto corpus = golden_streams();
  const auto v = build_vocab(corpus);
  CHECK(v.serialize() == build_vocab(corpus).serialize());
  CHECK(Vocabulary::parse(v.serialize()).serialize() == v.serialize());

  for (const auto& toks : corpus) {
    NamespaceScope scope(v.ranges);
    const auto ids = assign_ids(toks, v, scope);
    REQUIRE(ids.size() == toks.size());
    const auto dec = decode(ids, v, &scope);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const Component c = toks[i].component;
      CHECK(v.ranges.own(c).contains(ids[i]));
      CHECK(v.ranges.table_range(c).contains(ids[i]));
      if (c == Component::Keyword) CHECK((ids[i] >= 1 && ids[i] <= 35));
      REQUIRE(dec[i].component.has_value());
      CHECK(*dec[i].component == c);
      if (clcp::pylex::is_call_class(c)) {
        CHECK(std::find(dec[i].candidates.begin(), dec[i].candidates.end(), toks[i].text) !=
              dec[i].candidates.end());
      } else {
        CHECK(dec[i].text == toks[i].text);
      }
    }
  }
}

TEST_CASE("permuting snippet order changes no snippet's IDs") {
  auto corpus = golden_streams();
  corpus.resize(60);
  const auto v1 = build_vocab(corpus);
  auto shuffled = corpus;
  std::mt19937 rng(9);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto v2 = build_vocab(shuffled);
  CHECK(v1.serialize() == v2.serialize());
  for (const auto& toks : corpus) {
    NamespaceScope s1(v1.ranges), s2(v2.ranges);
    CHECK(assign_ids(toks, v1, s1) == assign_ids(toks, v2, s2));
  }
}
