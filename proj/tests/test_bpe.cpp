/*
 * Copyright 2026 The simcomb Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "simcomb/bpe.hpp"
#include "simcomb/error.hpp"

using namespace simcomb;

namespace {

MergeTable table_of(std::initializer_list<std::pair<const char*, const char*>> merges) {
  MergeTable t;
  for (const auto& [l, r] : merges) t.add(l, r);
  return t;
}

std::vector<TokenLine> random_words(std::mt19937_64& rng, std::size_t lines, const std::string& alphabet) {
  std::vector<TokenLine> out(lines);
  for (auto& l : out) {
    const std::size_t n = rng() % 6;
    for (std::size_t i = 0; i < n; ++i) {
      std::string w;
      const std::size_t len = 1 + rng() % 7;
      for (std::size_t k = 0; k < len; ++k) w += alphabet[rng() % alphabet.size()];
      l.push_back(w);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("bpe learn") {
  TEST_CASE("most frequent pair wins") {
    // "aa" x2 gives the pair (a, a</w>) twice; (a, b</w>) occurs once.
    const auto t = learn_bpe(WordCounts{{"aa", 2}, {"ab", 1}}, 1);
    REQUIRE(t.size() == 1);
    CHECK(t.merges()[0] == std::pair<std::string, std::string>{"a", "a</w>"});
  }

  TEST_CASE("zero merges") { CHECK(learn_bpe(std::vector<TokenLine>{{"abc", "abd"}}, 0).empty()); }

  TEST_CASE("stops when no pair occurs twice") {
    const auto t = learn_bpe(WordCounts{{"abc", 1}}, 10);
    CHECK(t.empty());
  }

  TEST_CASE("ties by byte order of (left, right)") {
    const auto t = learn_bpe(WordCounts{{"xy", 2}, {"ab", 2}}, 2);
    REQUIRE(t.size() == 2);
    CHECK(t.merges()[0] == std::pair<std::string, std::string>{"a", "b</w>"});
    CHECK(t.merges()[1] == std::pair<std::string, std::string>{"x", "y</w>"});
  }

  TEST_CASE("empty corpus") {
    try {
      learn_bpe(std::vector<TokenLine>{}, 5);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Config);
    }
  }

  TEST_CASE("deterministic across runs and threads") {
    std::mt19937_64 rng(21);
    const auto corpus = random_words(rng, 400, "abcde");
    const auto a = learn_bpe(corpus, 200, 1);
    CHECK(learn_bpe(corpus, 200, 1) == a);
    CHECK(learn_bpe(corpus, 200, 4) == a);
  }

  TEST_CASE("greedy choice matches a brute-force recount each step") {
    std::mt19937_64 rng(22);
    const auto corpus = random_words(rng, 80, "abc");
    const auto counts = count_words(corpus);
    const auto table = learn_bpe(counts, 30);
    // Replay: before each merge, count all pairs directly and check the
    // learned pair is the maximum under (freq desc, left, right).
    std::map<std::string, std::vector<std::string>> seg;
    for (const auto& [w, n] : counts) seg[w] = oracle::bpe_word({}, w);
    for (const auto& [l, r] : table.merges()) {
      std::map<std::pair<std::string, std::string>, std::size_t> freq;
      for (const auto& [w, n] : counts) {
        const auto& s = seg[w];
        for (std::size_t j = 0; j + 1 < s.size(); ++j) freq[{s[j], s[j + 1]}] += n;
      }
      std::pair<std::string, std::string> best;
      std::size_t best_n = 0;
      for (const auto& [p, n] : freq)
        if (n > best_n) {
          best_n = n;
          best = p;
        }
      CHECK(best_n >= 2);
      CHECK(best == std::pair<std::string, std::string>{l, r});
      for (auto& [w, s] : seg) {
        std::vector<std::string> merged;
        for (std::size_t j = 0; j < s.size(); ++j) {
          if (j + 1 < s.size() && s[j] == l && s[j + 1] == r) {
            merged.push_back(l + r);
            ++j;
          } else {
            merged.push_back(s[j]);
          }
        }
        s = merged;
      }
    }
  }
}

TEST_SUITE("bpe apply") {
  TEST_CASE("rank-ordered merge") { CHECK(apply_bpe(table_of({{"a", "a"}}), {"aab"}) == SubwordLine{"aa@@", "b"}); }
  TEST_CASE("empty table splits into characters") { CHECK(apply_bpe(MergeTable{}, {"ab"}) == SubwordLine{"a@@", "b"}); }
  TEST_CASE("fully merged word passes through") {
    const auto t = learn_bpe(WordCounts{{"lower", 5}}, 10);
    CHECK(apply_bpe(t, {"lower"}) == SubwordLine{"lower"});
  }
  TEST_CASE("multibyte characters are units") {
    CHECK(apply_bpe(MergeTable{}, {"\xC3\xA9t\xC3\xA9"}) == SubwordLine{"\xC3\xA9@@", "t@@", "\xC3\xA9"});
  }

  TEST_CASE("matches the re-scan oracle on random tables") {
    std::mt19937_64 rng(31);
    const std::vector<std::string> syms{"a", "b", "c", "ab", "bc", "a</w>", "b</w>", "c</w>", "ab</w>"};
    for (int trial = 0; trial < 300; ++trial) {
      MergeTable t;
      std::vector<std::pair<std::string, std::string>> merges;
      for (int k = 0; k < 8; ++k) {
        std::string l = syms[rng() % syms.size()], r = syms[rng() % syms.size()];
        if (l.find("</w>") != std::string::npos || t.rank(l, r)) continue;
        t.add(l, r);
        merges.emplace_back(l, r);
      }
      std::string w;
      for (std::size_t k = 0, n = 1 + rng() % 8; k < n; ++k) w += static_cast<char>('a' + rng() % 3);
      CHECK(segment_word(t, w) == oracle::bpe_word(merges, w));
    }
  }

  TEST_CASE("longer prefixes never produce more units") {
    std::mt19937_64 rng(32);
    const auto corpus = random_words(rng, 200, "abcd");
    const auto full = learn_bpe(corpus, 60);
    const auto probe = random_words(rng, 50, "abcd");
    for (const auto& line : probe) {
      std::size_t prev = std::numeric_limits<std::size_t>::max();
      for (std::size_t k = 0; k <= full.size(); k += 5) {
        const std::size_t units = apply_bpe(full.prefix(k), line).size();
        CHECK(units <= prev);
        prev = units;
      }
    }
  }
}

TEST_SUITE("bpe undo") {
  TEST_CASE("inverse") { CHECK(undo_bpe({"aa@@", "b"}) == TokenLine{"aab"}); }
  TEST_CASE("single") { CHECK(undo_bpe({"x"}) == TokenLine{"x"}); }
  TEST_CASE("dangling continuation") {
    try {
      undo_bpe({"a@@"});
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Malformed);
    }
  }
  TEST_CASE("round trip") {
    std::mt19937_64 rng(41);
    const auto corpus = random_words(rng, 300, "abcxyz");
    const auto table = learn_bpe(corpus, 100);
    for (const auto& line : random_words(rng, 300, "abcxyzq")) CHECK(undo_bpe(apply_bpe(table, line)) == line);
  }
}

TEST_SUITE("merge table") {
  TEST_CASE("file round trip") {
    const auto t = table_of({{"a", "b"}, {"ab", "c</w>"}, {"\xC3\xA9", "t"}});
    std::stringstream ss;
    t.write(ss);
    CHECK(ss.str() == "#version: simcomb-bpe 1\na b\nab c</w>\n\xC3\xA9 t\n");
    CHECK(MergeTable::read(ss) == t);
  }
  TEST_CASE("ranks are dense") {
    const auto t = table_of({{"a", "b"}, {"c", "d"}});
    CHECK(t.rank("a", "b") == 0u);
    CHECK(t.rank("c", "d") == 1u);
    CHECK_FALSE(t.rank("b", "a"));
  }
  TEST_CASE("duplicates and bad symbols rejected") {
    MergeTable t;
    t.add("a", "b");
    CHECK_THROWS_AS(t.add("a", "b"), Error);
    CHECK_THROWS_AS(t.add("", "b"), Error);
    CHECK_THROWS_AS(t.add("a b", "c"), Error);
  }
  TEST_CASE("parse errors carry the line number") {
    std::stringstream ss("#version: simcomb-bpe 1\na b\nonlyone\n");
    try {
      MergeTable::read(ss);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Parse);
      CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
  }
}
