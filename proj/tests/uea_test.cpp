#include <doctest.h>

#include "common.hpp"
#include "liefox/uea.hpp"

using namespace liefox;

TEST_SUITE("uea") {

TEST_CASE("word basis dimensions match the product formula") {
  auto p3 = test_ctx("p3");
  CHECK(p3->ambient_dims() == AmbientDims{1, 3, 9, 27, 81, 243, 729});

  auto ph = test_ctx("ph");
  // 1/series = (1-t)^2 (1-t^2) + 2(1-t) - 2
  CHECK(ph->ambient_dims() == AmbientDims{1, 4, 16, 62, 241, 936, 3636});
}

TEST_CASE("word order and indexing are consistent") {
  auto p3 = test_ctx("p3");
  for (int d = 1; d <= p3->cap(); ++d) {
    const auto& ws = p3->words(d);
    for (size_t i = 0; i + 1 < ws.size(); ++i) CHECK(word_less(ws[i], ws[i + 1]));
    for (size_t i = 0; i < ws.size(); ++i) CHECK(p3->word_index(ws[i]) == i);
  }
}

TEST_CASE("products concatenate, merge, and straighten") {
  auto p3 = test_ctx("p3");
  UEAElement a = p3->generator_element("a");
  UEAElement b = p3->generator_element("b");

  UEAElement ab = a * b;
  CHECK(ab.terms().size() == 1);
  CHECK(ab.str() == "a.b");
  CHECK((b * a).str() == "b.a");
  CHECK(!(ab == b * a));

  // abelian summand: a.a is one syllable with two letters
  CHECK((a * a).str() == "a*a");
  CHECK((a * a * a).degree() == 3);

  // bracket of distinct summands stays a commutator of words
  CHECK(lie_bracket(a, b).str() == "a.b + -b.a");

  auto ph = test_ctx("ph");
  UEAElement x = ph->generator_element("x");
  UEAElement y = ph->generator_element("y");
  UEAElement z = ph->generator_element("z");
  CHECK((x * y).str() == "x*y");       // already nondecreasing
  CHECK((y * x) == x * y - z);         // straightening inserts the bracket
  CHECK(lie_bracket(x, y) == z);
  CHECK(lie_bracket(y, x) == -z);
  CHECK(lie_bracket(x, z).is_zero());

  // mixed word rendering
  UEAElement bb = ph->generator_element("b");
  CHECK((x * y * bb).str() == "x*y.b");
  CHECK((bb * x * y).str() == "b.x*y");
}

TEST_CASE("multiplication is associative across merges") {
  auto ph = test_ctx("ph");
  UEAElement x = ph->generator_element("x");
  UEAElement y = ph->generator_element("y");
  UEAElement b = ph->generator_element("b");
  std::vector<UEAElement> probes = {x, y, b, y * x + b, lie_bracket(x, y) - b * x};
  for (const auto& u : probes)
    for (const auto& v : probes)
      for (const auto& w : probes) {
        CHECK((u * v) * w == u * (v * w));
      }
}

TEST_CASE("constants multiply through") {
  auto p3 = test_ctx("p3");
  UEAElement a = p3->generator_element("a");
  UEAElement e = p3->one() + a;  // 1 + a
  UEAElement sq = e * e;
  CHECK(sq.constant().str() == "1");
  UEAElement expect = p3->one() + a.scaled(p3->scalar(2)) + a * a;
  CHECK(sq == expect);
}

TEST_CASE("truncation discards only words past the cap") {
  auto p3 = test_ctx("p3");
  UEAElement a = p3->generator_element("a");
  UEAElement b = p3->generator_element("b");
  UEAElement w = a;
  for (int i = 1; i < 6; ++i) w = w * b;  // degree 6 word
  CHECK(w.degree() == 6);
  CHECK((w * a).is_zero());
  CHECK((w + p3->one()) * a == a);  // only the constant part survives
}

TEST_CASE("evaluate parses and folds expressions") {
  auto ph = test_ctx("ph");
  CHECK(evaluate(ph, "[x,y]") == ph->generator_element("z"));
  UEAElement lhs = evaluate(ph, "2*[x,b] - [b,x]");
  UEAElement alt = lie_bracket(evaluate(ph, "x"), evaluate(ph, "b")).scaled(ph->scalar(3));
  CHECK(lhs == alt);
  CHECK(evaluate(ph, "[x,y] - z").is_zero());
  CHECK_THROWS_AS(evaluate(ph, "nosuch"), input_error);
}

TEST_CASE("graded conversions round trip") {
  auto ph = test_ctx("ph");
  UEAElement u = evaluate(ph, "[x,y]") * evaluate(ph, "b") + evaluate(ph, "x");
  u += ph->one();
  GradedVector g = to_graded(u);
  CHECK(g.comps.count(0) == 1);
  CHECK(g.comps.count(1) == 1);
  CHECK(g.comps.count(3) == 1);
  CHECK(from_graded(ph, g) == u);

  // row_element reconstructs single-degree slices
  UEAElement slice = row_element(ph, 3, g.comps[3]);
  CHECK(to_graded(slice).comps[3] == g.comps[3]);
}

TEST_CASE("make_word validates its shape") {
  auto ph = test_ctx("ph");
  Syllable sx{0, {0}};
  Syllable sb{1, {0}};
  Syllable bad_order{0, {1, 0}};
  Syllable free_letters{1, {0, 1}};
  CHECK(ph->make_word({sx, sb}).degree == 2);
  CHECK_THROWS_AS(ph->make_word({sx, sx}), structural_error);
  CHECK_THROWS_AS(ph->make_word({bad_order}), structural_error);
  CHECK_THROWS_AS(ph->make_word({Syllable{0, {}}}), structural_error);
  CHECK_THROWS_AS(ph->make_word({Syllable{9, {}}}), structural_error);
  (void)free_letters;
}

TEST_CASE("mixed instance with a free generator") {
  auto mx = test_ctx("mixed");
  // sources: A, B, then g; free-generator syllables may repeat
  UEAElement g = mx->generator_element("g");
  UEAElement gg = g * g;
  CHECK(gg.terms().size() == 1);
  CHECK(gg.str() == "g.g");
  UEAElement a = mx->generator_element("a");
  CHECK((g * a * g).degree() == 3);
  // dims: 1/series = (1-t)(1-t^2) + 2(1-t) - 2 = 1 - 3t - t^2 + t^3,
  // so h_d = 3h_{d-1} + h_{d-2} - h_{d-3}
  CHECK(mx->ambient_dims() == AmbientDims{1, 3, 10, 32, 103});
}

}  // TEST_SUITE
