#include <doctest.h>

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "common.hpp"
#include "liefox/calculus.hpp"
#include "liefox/fox.hpp"

using namespace liefox;

namespace {

UEAElement ev(const ContextPtr& ctx, const std::string& text) { return evaluate(ctx, text); }

// Deterministic sparse element built from random basis words of degree <= maxdeg.
UEAElement random_uea(const ContextPtr& ctx, std::mt19937& rng, int maxdeg, int terms) {
  std::uniform_int_distribution<int> dd(0, maxdeg);
  std::uniform_int_distribution<long> cc(-3, 3);
  UEAElement u(ctx);
  for (int t = 0; t < terms; ++t) {
    long c = cc(rng);
    if (c == 0) c = 1;
    int d = dd(rng);
    if (d == 0) {
      u += ctx->one().scaled(ctx->scalar(c));
      continue;
    }
    const auto& ws = ctx->words(d);
    std::uniform_int_distribution<size_t> wi(0, ws.size() - 1);
    UEAElement m(ctx);
    m.add_term(ws[wi(rng)], ctx->scalar(c));
    u += m;
  }
  return u;
}

// Random member of S concentrated in degree d; zero when that degree is empty.
UEAElement random_member(const ContextPtr& ctx, std::mt19937& rng, const GradedSubspace& S,
                         int d) {
  const auto& rows = S.at(d).rows();
  UEAElement u(ctx);
  if (rows.empty()) return u;
  std::uniform_int_distribution<size_t> ri(0, rows.size() - 1);
  std::uniform_int_distribution<long> cc(1, 3);
  u += row_element(ctx, d, rows[ri(rng)]).scaled(ctx->scalar(cc(rng)));
  u += row_element(ctx, d, rows[ri(rng)]).scaled(ctx->scalar(-cc(rng)));
  return u;
}

struct P3Fox {
  ContextPtr ctx;
  GradedSubspace H, N;
  std::unique_ptr<FoxEnvironment> env;
};

const P3Fox& p3_fox() {
  static P3Fox fix = [] {
    auto ctx = test_ctx("p3");
    P3Fox f;
    f.ctx = ctx;
    f.H = lie_subalgebra_closure(ctx, {ev(ctx, "a"), ev(ctx, "b")});
    f.N = ideal_from_spec(ctx);
    f.env = FoxEnvironment::make(ctx, f.H, f.N);
    return f;
  }();
  return fix;
}

}  // namespace

TEST_SUITE("fox") {
  TEST_CASE("first-syllable decomposition matches hand values") {
    auto ctx = test_ctx("p3");
    FoxImage img = fox_derivatives(ev(ctx, "[a,c]"));
    CHECK(img.constant.is_zero());
    CHECK(img.part(0) == ev(ctx, "a") * ev(ctx, "c"));
    CHECK(img.part(1).is_zero());
    CHECK(img.part(2) == -(ev(ctx, "c") * ev(ctx, "a")));

    // a generator's derivative at its own block is the generator itself
    CHECK(fox_derivatives(ev(ctx, "a")).part(0) == ev(ctx, "a"));
    CHECK(fox_derivatives(ev(ctx, "a")).part(1).is_zero());

    FoxImage scal = fox_derivatives(ctx->one().scaled(ctx->scalar(5)));
    CHECK(scal.constant == ctx->scalar(5));
    CHECK(scal.parts.empty());
    CHECK(fox_reconstruct(fox_derivatives(UEAElement(ctx))).is_zero());

    auto ctx3 = test_ctx("free3");
    FoxImage g1 = fox_derivatives(ev(ctx3, "g1"));
    CHECK(g1.part(0) == ctx3->one());
    CHECK(g1.part(1).is_zero());
    CHECK(g1.part(2).is_zero());
    CHECK(g1.constant.is_zero());
    // a product led by a free generator is left-quotiented
    CHECK(fox_derivatives(ev(ctx3, "g1") * ev(ctx3, "g2")).part(0) == ev(ctx3, "g2"));
    CHECK(fox_derivatives(ev(ctx3, "g1") * ev(ctx3, "g2")).part(1).is_zero());

    auto ctxm = test_ctx("mixed");
    CHECK(fox_derivatives(ev(ctxm, "g") * ev(ctxm, "b")).part(2) == ev(ctxm, "b"));
    CHECK(fox_derivatives(ev(ctxm, "g") * ev(ctxm, "b")).part(1).is_zero());
    // while a summand-led product is kept whole
    CHECK(fox_derivatives(ev(ctxm, "b") * ev(ctxm, "g")).part(1) ==
          ev(ctxm, "b") * ev(ctxm, "g"));
    CHECK(fox_derivatives(ev(ctxm, "b2")).part(1) == ev(ctxm, "b2"));
  }

  TEST_CASE("decomposition reconstructs and is linear") {
    std::mt19937 rng(7321);
    for (const char* stem : {"p3", "mixed", "free3"}) {
      CAPTURE(stem);
      auto ctx = test_ctx(stem);
      for (int t = 0; t < 15; ++t) {
        UEAElement u = random_uea(ctx, rng, ctx->cap(), 4);
        CHECK(fox_reconstruct(fox_derivatives(u)) == u);
      }
      UEAElement u = random_uea(ctx, rng, ctx->cap(), 4);
      UEAElement v = random_uea(ctx, rng, ctx->cap(), 4);
      UEAElement w = u.scaled(ctx->scalar(2)) - v.scaled(ctx->scalar(3));
      FoxImage iu = fox_derivatives(u), iv = fox_derivatives(v), iw = fox_derivatives(w);
      CHECK(iw.constant == iu.constant * ctx->scalar(2) - iv.constant * ctx->scalar(3));
      for (Index k = 0; k < ctx->source_count(); ++k)
        CHECK(iw.part(k) == iu.part(k).scaled(ctx->scalar(2)) - iv.part(k).scaled(ctx->scalar(3)));
    }
  }

  TEST_CASE("product and bracket rules hold within the cap headroom") {
    std::mt19937 rng(40712);
    for (const char* stem : {"p3", "mixed"}) {
      CAPTURE(stem);
      auto ctx = test_ctx(stem);
      GradedSubspace F = LieAmbient::build(ctx).space();
      std::uniform_int_distribution<int> dd(1, ctx->cap() - 1);
      for (int t = 0; t < 12; ++t) {
        int du = dd(rng);
        int dv = std::uniform_int_distribution<int>(0, ctx->cap() - du)(rng);
        UEAElement u = random_uea(ctx, rng, du, 3);
        UEAElement v = random_uea(ctx, rng, dv, 3);
        FoxImage iu = fox_derivatives(u), iv = fox_derivatives(v);
        FoxImage ip = fox_derivatives(u * v);
        CHECK(ip.constant == iu.constant * iv.constant);
        for (Index k = 0; k < ctx->source_count(); ++k) {
          CAPTURE(k);
          CHECK(ip.part(k) == iu.part(k) * v + iv.part(k).scaled(u.constant()));
        }
        if (dv == 0) continue;
        UEAElement x = random_member(ctx, rng, F, du);
        UEAElement y = random_member(ctx, rng, F, dv);
        FoxImage ix = fox_derivatives(x), iy = fox_derivatives(y);
        FoxImage ib = fox_derivatives(lie_bracket(x, y));
        for (Index k = 0; k < ctx->source_count(); ++k) {
          CAPTURE(k);
          CHECK(ib.part(k) == ix.part(k) * y - iy.part(k) * x);
        }
      }
    }
    // bracketing with the relator ideal only shifts derivatives inside it
    const P3Fox& fix = p3_fox();
    std::uniform_int_distribution<int> dn(2, fix.ctx->cap() - 1);
    for (int t = 0; t < 12; ++t) {
      int d1 = dn(rng);
      int d2 = std::uniform_int_distribution<int>(1, fix.ctx->cap() - d1)(rng);
      UEAElement n = random_member(fix.ctx, rng, fix.N, d1);
      UEAElement u = random_member(fix.ctx, rng, fix.env->F, d2);
      FoxImage ib = fox_derivatives(lie_bracket(n, u));
      FoxImage in = fox_derivatives(n);
      for (Index k = 0; k < fix.ctx->source_count(); ++k) {
        CAPTURE(k);
        CHECK(fix.env->NU.contains(to_graded(ib.part(k) - in.part(k) * u)));
      }
    }
  }

  TEST_CASE("left decomposition over a free base") {
    const P3Fox& fix = p3_fox();
    auto ctx = fix.ctx;
    FreeGeneratingSet base = free_generating_set(ctx, fix.env->HN);
    std::vector<UEAElement> zs = base.elements(ctx);
    REQUIRE(!zs.empty());
    for (size_t k = 0; k < zs.size(); ++k) {
      CAPTURE(k);
      SubalgebraFoxImage img = subalgebra_fox(ctx, zs[k], base);
      CHECK(img.constant.is_zero());
      CHECK(img.part(k) == ctx->one());
      for (size_t j = 0; j < zs.size(); ++j)
        if (j != k) CHECK(img.part(j).is_zero());
    }

    SubalgebraFoxImage br = subalgebra_fox(ctx, lie_bracket(zs[0], zs[1]), base);
    CHECK(br.part(0) == zs[1]);
    CHECK(br.part(1) == -zs[0]);

    std::mt19937 rng(90125);
    std::uniform_int_distribution<size_t> zi(0, std::min<size_t>(zs.size(), 5) - 1);
    for (int t = 0; t < 10; ++t) {
      UEAElement f = ctx->one().scaled(ctx->scalar(t - 4));
      for (int p = 0; p < 3; ++p) {
        UEAElement prod = zs[zi(rng)];
        if (prod.terms().begin()->first.degree * 2 <= ctx->cap()) prod = prod * zs[zi(rng)];
        f += prod.scaled(ctx->scalar(p + 1));
      }
      SubalgebraFoxImage img = subalgebra_fox(ctx, f, base);
      UEAElement back = ctx->one().scaled(img.constant);
      for (const auto& [k, p] : img.parts) back += zs[k] * p;
      CHECK(back == f);
    }

    CHECK_THROWS_WITH_AS(subalgebra_fox(ctx, ev(ctx, "c"), base),
                         doctest::Contains("degree 1"), structural_error);
    CHECK_THROWS_WITH_AS(subalgebra_fox(ctx, zs[0] + ev(ctx, "c") * ev(ctx, "[a,b]"), base),
                         doctest::Contains("degree 3"), structural_error);
  }

  TEST_CASE("chain rule through a free base") {
    const P3Fox& fix = p3_fox();
    auto ctx = fix.ctx;
    FreeGeneratingSet base = free_generating_set(ctx, fix.env->HN);
    std::vector<UEAElement> zs = base.elements(ctx);
    std::vector<FoxImage> zimg;
    zimg.reserve(zs.size());
    for (const auto& z : zs) zimg.push_back(fox_derivatives(z));

    std::mt19937 rng(5150);
    std::uniform_int_distribution<size_t> zi(0, zs.size() - 1);
    for (int t = 0; t < 8; ++t) {
      UEAElement f = ctx->one().scaled(ctx->scalar(t));
      for (int p = 0; p < 3; ++p) {
        UEAElement prod = zs[zi(rng)];
        UEAElement more = zs[zi(rng)];
        if (prod.terms().begin()->first.degree + more.terms().begin()->first.degree <=
            ctx->cap())
          prod = prod * more;
        f += prod.scaled(ctx->scalar(2 * p - 1));
      }
      SubalgebraFoxImage inner = subalgebra_fox(ctx, f, base);
      FoxImage outer = fox_derivatives(f);
      CHECK(outer.constant == inner.constant);
      for (Index l = 0; l < ctx->source_count(); ++l) {
        CAPTURE(l);
        UEAElement rhs(ctx);
        for (const auto& [k, p] : inner.parts) rhs += zimg[k].part(l) * p;
        CHECK(outer.part(l) == rhs);
      }
    }
  }

  TEST_CASE("derivative kernel equals the relator commutator ideal") {
    const P3Fox& fix = p3_fox();
    GradedSubspace nn = bracket_span(fix.ctx, fix.N, fix.N);
    for (int d = 1; d <= fix.ctx->cap(); ++d) {
      CAPTURE(d);
      GradedSubspace ker = fox_kernel_subspace(fix.ctx, fix.N, d);
      CHECK(ker.at(d) == nn.at(d));
    }

    // an ideal meeting a summand adds that summand's full ideal to the kernel
    auto ctx2 = test_ctx("p3mod");
    GradedSubspace n2 = ideal_from_spec(ctx2);
    GradedSubspace m2 = subspace_sum(lie_ideal_closure(ctx2, {ev(ctx2, "a")}),
                                     bracket_span(ctx2, n2, n2));
    for (int d = 1; d <= ctx2->cap(); ++d) {
      CAPTURE(d);
      GradedSubspace ker = fox_kernel_subspace(ctx2, n2, d);
      CHECK(ker.at(d) == m2.at(d));
    }
  }

  TEST_CASE("subalgebra preimages invert the derivatives exactly") {
    const P3Fox& fix = p3_fox();
    const FoxEnvironment& env = *fix.env;
    for (int d = 2; d <= fix.ctx->cap(); ++d)
      for (const SparseVec& row : env.HN.at(d).rows()) {
        UEAElement v0 = row_element(fix.ctx, d, row);
        FoxImage img = fox_derivatives(v0);
        REQUIRE(img.part(2).is_zero());
        std::map<Index, UEAElement> targets{{0, img.part(0)}, {1, img.part(1)}};
        CAPTURE(d);
        CHECK(construct_preimage(env, targets, PreimageMode::Subalgebra) == v0);
      }

    // a target family given by hand rather than by differentiating
    std::map<Index, UEAElement> split{
        {0, ev(fix.ctx, "a") * ev(fix.ctx, "b") * ev(fix.ctx, "b")},
        {1, -(ev(fix.ctx, "b") * ev(fix.ctx, "a") * ev(fix.ctx, "b"))}};
    CHECK(construct_preimage(env, split, PreimageMode::Subalgebra) == ev(fix.ctx, "[[a,b],b]"));

    CHECK(construct_preimage(env, {}, PreimageMode::Subalgebra).is_zero());
    CHECK(construct_preimage(fix.ctx,
                             {{0, ev(fix.ctx, "a") * ev(fix.ctx, "b")},
                              {1, -(ev(fix.ctx, "b") * ev(fix.ctx, "a"))}},
                             PreimageMode::Subalgebra, fix.H, fix.N) == ev(fix.ctx, "[a,b]"));
  }

  TEST_CASE("ideal preimages respect led targets") {
    const P3Fox& fix = p3_fox();
    const FoxEnvironment& env = *fix.env;
    auto ctx = fix.ctx;

    // regression: the grouped coefficients must stay led by their own summand
    std::map<Index, UEAElement> led{{0, ev(ctx, "a") * ev(ctx, "b") * ev(ctx, "c")},
                                    {1, -(ev(ctx, "b") * ev(ctx, "a") * ev(ctx, "c"))}};
    CHECK(construct_preimage(env, led, PreimageMode::Ideal) == ev(ctx, "[[a,b],c]"));

    std::mt19937 rng(61914);
    for (int t = 0; t < 8; ++t) {
      UEAElement v0(ctx);
      for (int reps = 0; reps < 2; ++reps) {
        int d = std::uniform_int_distribution<int>(2, ctx->cap())(rng);
        v0 += random_member(ctx, rng, env.ideal_HN, d);
      }
      FoxImage img = fox_derivatives(v0);
      CHECK(env.NU.contains(to_graded(img.part(2))));
      std::map<Index, UEAElement> targets{{0, img.part(0)}, {1, img.part(1)}};
      UEAElement v = construct_preimage(env, targets, PreimageMode::Ideal);
      CHECK(env.ideal_HN.contains(to_graded(v)));
      FoxImage out = fox_derivatives(v);
      for (Index k : {Index(0), Index(1)}) {
        CAPTURE(k);
        CHECK(env.NU.contains(to_graded(out.part(k) - targets[k])));
      }
    }

    // inadmissible family: the combined element must lie in the relator ideal
    std::map<Index, UEAElement> bad{{0, ev(ctx, "a") * ev(ctx, "c")}};
    CHECK_THROWS_WITH_AS(construct_preimage(env, bad, PreimageMode::Ideal),
                         doctest::Contains("first failure at degree 2"), verification_error);

    std::map<Index, UEAElement> misled{{0, ev(ctx, "b") * ev(ctx, "a")}};
    CHECK_THROWS_WITH_AS(construct_preimage(env, misled, PreimageMode::Subalgebra),
                         doctest::Contains("led by its own summand"), input_error);
    std::map<Index, UEAElement> escaped{{0, ev(ctx, "a") * ev(ctx, "c")}};
    CHECK_THROWS_WITH_AS(construct_preimage(env, escaped, PreimageMode::Subalgebra),
                         doctest::Contains("escapes the enveloping algebra"), input_error);
    std::map<Index, UEAElement> outside{{2, ev(ctx, "c") * ev(ctx, "a")}};
    CHECK_THROWS_WITH_AS(construct_preimage(env, outside, PreimageMode::Ideal),
                         doctest::Contains("not part of the subalgebra"), input_error);
  }

  TEST_CASE("hypothesis splitting decomposes and rejects") {
    const P3Fox& fix = p3_fox();
    const FoxEnvironment& env = *fix.env;
    auto ctx = fix.ctx;
    std::vector<Index> K{0, 1};

    auto check_contract = [&](const UEAElement& v) {
      FoxDecomposition d = theorem4_decompose(env, v, K);
      CHECK(env.H.contains(to_graded(d.v0)));
      CHECK(env.ideal_HN.contains(to_graded(d.v1)));
      CHECK(env.M.contains(to_graded(v - d.v0 - d.v1)));
      return d;
    };

    FoxDecomposition inside = check_contract(ev(ctx, "a") + ev(ctx, "[a,b]"));
    CHECK(inside.v1.is_zero());
    check_contract(ev(ctx, "[[a,b],c]") + ev(ctx, "[a,b]"));
    check_contract(ev(ctx, "[[a,c],[b,c]]"));

    CHECK_THROWS_WITH_AS(theorem4_decompose(env, ev(ctx, "[a,c]"), K),
                         doctest::Contains("source 'C', first failure at degree 2"),
                         verification_error);
    CHECK_THROWS_WITH_AS(theorem4_decompose(env, ev(ctx, "a") * ev(ctx, "b"), K),
                         doctest::Contains("not a Lie element"), input_error);

    FoxDecomposition viaspec =
        theorem4_decompose(ev(ctx, "[[a,b],c]"), K, fix.H, fix.N);
    CHECK(env.ideal_HN.contains(to_graded(viaspec.v1)));
  }

  TEST_CASE("a generic solver confirms the constructed preimages") {
    const P3Fox& fix = p3_fox();
    const FoxEnvironment& env = *fix.env;
    auto ctx = fix.ctx;

    AmbientDims ad = ctx->ambient_dims();
    std::vector<Index> off(ctx->cap() + 1, 0);
    Index utotal = 0;
    for (int d = 0; d <= ctx->cap(); ++d) {
      off[d] = utotal;
      utotal += ad[d];
    }
    auto flatten = [&](const UEAElement& p0, const UEAElement& p1) {
      SparseVec out;
      auto put = [&](const UEAElement& p, Index base) {
        GradedVector g = env.NU.reduce(to_graded(p));
        for (const auto& [d, row] : g.comps)
          for (const auto& e : row) out.push_back({base + off[d] + e.col, e.val});
      };
      put(p0, 0);
      put(p1, utotal);
      std::sort(out.begin(), out.end(),
                [](const Entry& x, const Entry& y) { return x.col < y.col; });
      return out;
    };

    std::vector<UEAElement> gens = space_elements(ctx, env.ideal_HN);
    TrackedEchelon solver(2 * utotal);
    for (const auto& g : gens) {
      FoxImage img = fox_derivatives(g);
      solver.feed(flatten(img.part(0), img.part(1)));
    }

    std::mt19937 rng(31337);
    for (int t = 0; t < 5; ++t) {
      UEAElement v0 = random_member(ctx, rng, env.ideal_HN,
                                    std::uniform_int_distribution<int>(3, ctx->cap())(rng));
      FoxImage img = fox_derivatives(v0);
      std::map<Index, UEAElement> targets{{0, img.part(0)}, {1, img.part(1)}};
      auto coords = solver.coords_over_generators(flatten(targets[0], targets[1]));
      REQUIRE(coords.has_value());
      UEAElement vgen(ctx);
      for (const auto& e : *coords) vgen += gens[e.col].scaled(e.val);
      FoxImage out = fox_derivatives(vgen);
      CHECK(env.NU.contains(to_graded(out.part(0) - targets[0])));
      CHECK(env.NU.contains(to_graded(out.part(1) - targets[1])));
      // the dedicated construction solves the same system
      UEAElement v = construct_preimage(env, targets, PreimageMode::Ideal);
      FoxImage both = fox_derivatives(v - vgen);
      CHECK(env.NU.contains(to_graded(both.part(0))));
      CHECK(env.NU.contains(to_graded(both.part(1))));
    }

    // a family the construction rejects is unsolvable for the generic solver too
    UEAElement stray = ev(ctx, "a") * ev(ctx, "c");
    CHECK(!solver.coords_over_generators(flatten(stray, UEAElement(ctx))).has_value());
    std::map<Index, UEAElement> bad{{0, stray}};
    CHECK_THROWS_AS(construct_preimage(env, bad, PreimageMode::Ideal), verification_error);
  }
}
