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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "simcomb/error.hpp"
#include "simcomb/lm.hpp"

using namespace simcomb;

namespace {

double prob(const KnModel& m, const TokenLine& history, const std::string& w) {
  return std::pow(10.0, m.log10_prob(history, w));
}

double mass(const KnModel& m, const TokenLine& history) {
  double sum = 0.0;
  for (const auto& w : m.vocab())
    if (w != "<s>") sum += prob(m, history, w);
  return sum;
}

std::string arpa_of(const KnModel& m) {
  std::stringstream ss;
  m.write_arpa(ss);
  return ss.str();
}

KnModel from_text(const std::string& text) {
  std::stringstream ss(text);
  return KnModel::read_arpa(ss);
}

}  // namespace

TEST_SUITE("kneser-ney") {
  TEST_CASE("bigram distribution sums to one") {
    const auto m = KnModel::train({{"a", "b"}, {"a", "c"}}, {2});
    const double sum = prob(m, {"a"}, "b") + prob(m, {"a"}, "c") + prob(m, {"a"}, "<unk>") +
                       prob(m, {"a"}, "</s>") + prob(m, {"a"}, "a");
    CHECK(std::abs(sum - 1.0) <= 1e-6);
  }

  TEST_CASE("hand-computed table with fallback discounts") {
    // Counts-of-counts never reach 3, so both orders use D = 0.5. Unigram
    // continuation counts a, b, c = 1 and </s> = 2 over 5 predictable
    // symbols: P(a) = 0.5/5 + (2/5)/5 = 0.18, P(</s>) = 1.5/5 + 0.08 = 0.38.
    const auto m = KnModel::train({{"a", "b"}, {"a", "c"}}, {2});
    CHECK(m.discounts()[0].fallback);
    CHECK(m.discounts()[1].fallback);
    CHECK(m.warnings().size() == 2);
    CHECK(prob(m, {}, "a") == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(prob(m, {}, "</s>") == doctest::Approx(0.38).epsilon(1e-12));
    CHECK(prob(m, {}, "<unk>") == doctest::Approx(0.08).epsilon(1e-12));
    CHECK(prob(m, {"a"}, "b") == doctest::Approx(0.34).epsilon(1e-12));
    CHECK(prob(m, {"a"}, "a") == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(prob(m, {"a"}, "</s>") == doctest::Approx(0.19).epsilon(1e-12));
    CHECK(prob(m, {"<s>"}, "a") == doctest::Approx(0.795).epsilon(1e-12));
  }

  TEST_CASE("matches the recursive oracle on small corpora") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 12; ++trial) {
      const std::size_t order = 1 + trial % 3;
      const auto corpus = oracle::random_lines(rng, 3 + trial % 8, 4, 7);
      const auto m = KnModel::train(corpus, {order});
      const oracle::KneserNey o(corpus, order);
      for (std::size_t n = 1; n <= order; ++n) {
        CHECK(m.discounts()[n - 1].d1 == doctest::Approx(o.discounts(n)[0]).epsilon(1e-12));
        CHECK(m.discounts()[n - 1].d3 == doctest::Approx(o.discounts(n)[2]).epsilon(1e-12));
      }
      std::vector<TokenLine> histories{{}, {"<s>"}};
      for (const auto& line : corpus) {
        TokenLine h{"<s>"};
        for (const auto& t : line) {
          h.push_back(t);
          histories.push_back(h);
        }
      }
      histories.push_back({"d", "d"});
      histories.push_back({"<s>", "zz"});
      for (const auto& h : histories)
        for (const auto& w : m.vocab()) {
          if (w == "<s>") continue;
          CHECK(std::abs(prob(m, h, w) - o.prob(h, w)) <= 1e-9);
        }
    }
  }

  TEST_CASE("sampled contexts normalize, orders 2 to 5") {
    std::mt19937_64 rng(62);
    const auto corpus = oracle::random_lines(rng, 300, 6, 10, 1);
    for (std::size_t order = 2; order <= 5; ++order) {
      const auto m = KnModel::train(corpus, {order});
      for (int k = 0; k < 25; ++k) {
        TokenLine h;
        if (k % 3 == 0) h.push_back("<s>");
        for (std::size_t i = 0, n = rng() % order; i < n; ++i)
          h.push_back(k % 5 == 4 ? "unseen" : std::string(1, static_cast<char>('a' + rng() % 6)));
        CHECK_MESSAGE(std::abs(mass(m, h) - 1.0) <= 1e-6, order);
      }
    }
  }

  TEST_CASE("all log probabilities are at most zero") {
    std::mt19937_64 rng(63);
    const auto m = KnModel::train(oracle::random_lines(rng, 50, 5, 8), {3});
    std::stringstream ss(arpa_of(m));
    const std::string text = ss.str();
    std::istringstream lines(text);
    bool in_grams = false;
    for (std::string line; std::getline(lines, line);) {
      if (line.size() > 2 && line[0] == '\\' && line.find("-grams:") != std::string::npos) {
        in_grams = true;
        continue;
      }
      if (!in_grams || line.empty() || line[0] == '\\') continue;
      CHECK(std::stod(line.substr(0, line.find('\t'))) <= 0.0);
    }
  }

  TEST_CASE("training is deterministic") {
    std::mt19937_64 rng(64);
    const auto corpus = oracle::random_lines(rng, 60, 5, 9);
    CHECK(arpa_of(KnModel::train(corpus, {4})) == arpa_of(KnModel::train(corpus, {4})));
  }

  TEST_CASE("ARPA round trip is exact") {
    std::mt19937_64 rng(65);
    const auto corpus = oracle::random_lines(rng, 80, 5, 9);
    const auto m = KnModel::train(corpus, {3});
    const std::string text = arpa_of(m);
    const auto back = from_text(text);
    CHECK(arpa_of(back) == text);
    for (const auto& line : oracle::random_lines(rng, 30, 7, 9)) CHECK(log_prob(back, line) == log_prob(m, line));
    CHECK(back.discounts()[2].d1 == m.discounts()[2].d1);
  }

  TEST_CASE("unknown floor maps rare symbols to <unk>") {
    KnOptions opts{2};
    opts.unk_floor = 2;
    const auto m = KnModel::train({{"a", "a", "b"}}, opts);
    CHECK(m.in_vocab("a"));
    CHECK_FALSE(m.in_vocab("b"));
    CHECK(prob(m, {}, "<unk>") > prob(m, {}, "zzz") * 0.999);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(KnModel::train({}, {3}), Error);
    CHECK_THROWS_AS(KnModel::train({{"a"}}, {0}), Error);
    CHECK_THROWS_AS(from_text("\\data\\\nngram 1=2\n\n\\1-grams:\n-1\ta\n\\end\\\n"), Error);
  }
}

TEST_SUITE("scoring") {
  // Uniform over a, b, c, d and </s>.
  const char* kUniform =
      "\\data\\\nngram 1=6\n\n\\1-grams:\n-99\t<s>\n-0.69897000433601886\t</s>\n-0.69897000433601886\ta\n"
      "-0.69897000433601886\tb\n-0.69897000433601886\tc\n-0.69897000433601886\td\n\n\\end\\\n";

  TEST_CASE("uniform unigram model has perplexity five") {
    const auto m = from_text(kUniform);
    const auto rep = perplexity(m, {{"a", "b"}, {"c"}, {"d", "d", "a"}});
    CHECK(rep.perplexity == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(rep.events == 9);
  }

  TEST_CASE("one symbol under the uniform model") {
    const auto m = from_text(kUniform);
    CHECK(log_prob(m, {"a"}) == doctest::Approx(2 * std::log10(0.2)).epsilon(1e-12));
  }

  TEST_CASE("empty line scores the end transition only") {
    const auto m = KnModel::train({{"a", "b"}, {"a", "c"}}, {2});
    CHECK(log_prob(m, {}) == doctest::Approx(m.log10_prob(TokenLine{"<s>"}, "</s>")));
  }

  TEST_CASE("sentence score matches the oracle chain") {
    std::mt19937_64 rng(66);
    const auto corpus = oracle::random_lines(rng, 8, 4, 6);
    const auto m = KnModel::train(corpus, {3});
    const oracle::KneserNey o(corpus, 3);
    for (const auto& line : oracle::random_lines(rng, 20, 4, 6)) {
      double expected = 0.0;
      TokenLine h{"<s>"};
      for (const auto& t : line) {
        expected += std::log10(o.prob(h, t));
        h.push_back(t);
      }
      expected += std::log10(o.prob(h, "</s>"));
      CHECK(log_prob(m, line) == doctest::Approx(expected).epsilon(1e-9));
    }
  }

  TEST_CASE("perplexity from summed log probabilities") {
    const auto m = KnModel::train({{"a", "b", "c"}, {"b", "c"}, {"a", "a"}}, {2});
    const std::vector<TokenLine> test{{"a", "c"}, {"b"}};
    const double total = log_prob(m, test[0]) + log_prob(m, test[1]);
    CHECK(perplexity(m, test).perplexity == doctest::Approx(std::pow(10.0, -total / 5.0)).epsilon(1e-12));
  }

  TEST_CASE("training text beats disjoint text") {
    const std::vector<TokenLine> train{{"a", "b", "c"}, {"b", "c", "a"}};
    const auto m = KnModel::train(train, {3});
    CHECK(perplexity(m, train).perplexity < perplexity(m, {{"x", "y", "z"}}).perplexity);
  }

  TEST_CASE("oov counted") {
    const auto m = KnModel::train({{"a"}}, {2});
    const auto s = score_sentence(m, {"a", "q", "<s>"});
    CHECK(s.oov == 2);
    CHECK(s.events == 4);
  }

  TEST_CASE("parallel scoring is identical") {
    std::mt19937_64 rng(67);
    const auto m = KnModel::train(oracle::random_lines(rng, 100, 5, 9), {3});
    const auto test = oracle::random_lines(rng, 97, 5, 9);
    CHECK(perplexity(m, test, 1).log10_prob == perplexity(m, test, 4).log10_prob);
  }

  TEST_CASE("character models") {
    CHECK(char_symbols("ab  c") == TokenLine{"a", "b", "\xE2\x96\x81", "c"});
    KnOptions opts{3, LmLevel::Char};
    const auto m = KnModel::train({{"ab", "\xC3\xA9"}}, opts);
    CHECK(m.in_vocab("\xE2\x96\x81"));
    CHECK(m.in_vocab("\xC3\xA9"));
    const auto back = from_text(arpa_of(m));
    CHECK(back.level() == LmLevel::Char);
  }
}

TEST_SUITE("language distance") {
  std::vector<std::string> markov_text(std::mt19937_64 & rng, const std::string& alphabet, std::size_t lines) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < lines; ++i) {
      std::string s;
      char prev = alphabet[0];
      for (std::size_t k = 0, n = 10 + rng() % 20; k < n; ++k) {
        const std::size_t step = rng() % 3;
        prev = alphabet[(alphabet.find(prev) + step) % alphabet.size()];
        s += prev;
        if (rng() % 5 == 0) s += ' ';
      }
      out.push_back(s);
    }
    return out;
  }

  TEST_CASE("identical corpora are symmetric") {
    std::mt19937_64 rng(71);
    const auto a = markov_text(rng, "abcdef", 60);
    const auto r = language_distance(a, a, {});
    CHECK(r.ppl_ab == r.ppl_ba);
    CHECK(r.distance == doctest::Approx((r.ppl_ab + r.ppl_ba) / 2));
    CHECK(r.ppl_ab >= 1.0);
  }

  TEST_CASE("a relabelled language is farther than itself") {
    std::mt19937_64 rng(72);
    const auto a = markov_text(rng, "abcdef", 80);
    std::vector<std::string> b;
    for (auto s : a) {
      for (auto& c : s)
        if (c != ' ') c = static_cast<char>('u' + (c - 'a'));
      b.push_back(s);
    }
    CHECK(language_distance(a, b, {}).distance > language_distance(a, a, {}).distance);
  }

  TEST_CASE("too small") {
    try {
      language_distance({"a"}, {"b", "c"}, {});
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Size);
    }
  }
}
