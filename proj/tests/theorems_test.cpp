#include <doctest.h>

#include <vector>

#include "common.hpp"
#include "liefox/theorems.hpp"

using namespace liefox;

namespace {

UEAElement ev(const ContextPtr& ctx, const std::string& text) { return evaluate(ctx, text); }

struct ThmFix {
  ContextPtr ctx;
  GradedSubspace N;
};

const ThmFix& thm_fix() {
  static ThmFix fix = [] {
    auto ctx = test_ctx("p3");
    return ThmFix{ctx, cartesian_ideal(ctx)};
  }();
  return fix;
}

// A degree-6 member of the third lower central power of N.
UEAElement deep_element(const ContextPtr& ctx, const GradedSubspace& N) {
  SeriesChain ch = power_chain(ctx, N, {2});
  return row_element(ctx, 6, ch.at(1, 3).at(6).rows().front());
}

}  // namespace

TEST_SUITE("theorems") {
  TEST_CASE("summand kills preserve non-killed words") {
    auto ctx = thm_fix().ctx;
    CHECK(kill_summand(ev(ctx, "a + b"), 0) == ev(ctx, "b"));
    CHECK(kill_summand(ev(ctx, "[a,b]"), 0).is_zero());
    CHECK(kill_summand(ev(ctx, "[b,c]"), 0) == ev(ctx, "[b,c]"));
    UEAElement a = ev(ctx, "a"), b = ev(ctx, "b"), c = ev(ctx, "c");
    UEAElement bc3 = b * c + ctx->one().scaled(ctx->scalar(3));
    CHECK(kill_summand(bc3, 0) == bc3);
    CHECK(kill_summand(a * b * a + b * a, 0).is_zero());
    CHECK(kill_summand(ctx->one(), 2) == ctx->one());
    CHECK(kill_summand(UEAElement(ctx), 1).is_zero());
  }

  TEST_CASE("elementary invariance certifies and witnesses") {
    auto ctx = thm_fix().ctx;
    CHECK(check_elementary_invariance(ctx, thm_fix().N).passed);
    CHECK(check_elementary_invariance(ctx, lie_ideal_closure(ctx, {ev(ctx, "[a,b]")})).passed);

    // killing B maps the generator to a multiple of [a,c], which the ideal
    // of [a,b] + [a,c] does not contain
    GradedSubspace skew = lie_ideal_closure(ctx, {ev(ctx, "[a,b] + [a,c]")});
    InvarianceCheck inv = check_elementary_invariance(ctx, skew);
    CHECK_FALSE(inv.passed);
    CHECK(inv.summand == 1);
    CHECK_FALSE(inv.witness.is_zero());
    CHECK_FALSE(skew.contains(to_graded(inv.witness)));
  }

  TEST_CASE("relator chain positions") {
    auto ctx = thm_fix().ctx;
    const GradedSubspace& N = thm_fix().N;
    SeriesChain ch2 = power_chain(ctx, N, {2});

    ChainPosition pos = relator_filtration_position(ev(ctx, "[a,c]"), ch2);
    CHECK(pos.block == 1);
    CHECK(pos.step == 1);
    CHECK_FALSE(pos.beyond);

    pos = relator_filtration_position(ev(ctx, "[[a,b],[a,c]]"), ch2);
    CHECK(pos.block == 1);
    CHECK(pos.step == 2);
    CHECK_FALSE(pos.beyond);

    UEAElement deep = deep_element(ctx, N);
    pos = relator_filtration_position(deep, ch2);
    CHECK(pos.block == 1);
    CHECK(pos.step == 3);
    CHECK(pos.beyond);

    // with a second block the same element sits at the duplicated boundary
    SeriesChain ch22 = power_chain(ctx, N, {2, 2});
    pos = relator_filtration_position(deep, ch22);
    CHECK(pos.block == 2);
    CHECK(pos.step == 1);
    CHECK_FALSE(pos.beyond);

    CHECK_THROWS_AS(relator_filtration_position(UEAElement(ctx), ch2), input_error);
    CHECK_THROWS_WITH_AS(relator_filtration_position(ev(ctx, "a"), ch2),
                         doctest::Contains("outside the ideal"), verification_error);
  }

  TEST_CASE("jacobian rows mirror derivatives") {
    auto ctx = thm_fix().ctx;
    const GradedSubspace& N = thm_fix().N;

    OreMatrix jac = jacobian_matrix(ctx, {ev(ctx, "[a,c]")}, N);
    CHECK(jac.rows() == 1);
    CHECK(jac.cols() == 3);
    CHECK(jac.at(0, 0) == ev(ctx, "a") * ev(ctx, "c"));
    CHECK(jac.at(0, 1).is_zero());
    CHECK(jac.at(0, 2) == -(ev(ctx, "c") * ev(ctx, "a")));
    CHECK(jac.ledger().empty());

    OreMatrix two = jacobian_matrix(ctx, {ev(ctx, "[a,c]"), ev(ctx, "[a,c]")}, N);
    CHECK(two.rows() == 2);
    for (size_t j = 0; j < two.cols(); ++j) CHECK(two.at(0, j) == two.at(1, j));

    CHECK_THROWS_AS(jacobian_matrix(ctx, {}, N), input_error);
    CHECK_THROWS_AS(jacobian_matrix(ctx, {UEAElement(ctx)}, N), input_error);
    CHECK_THROWS_WITH_AS(jacobian_matrix(ctx, {ev(ctx, "b")}, N),
                         doctest::Contains("outside the ideal"), verification_error);
  }

  TEST_CASE("one-relator freedom holds for a transversal relator") {
    auto ctx = thm_fix().ctx;
    const GradedSubspace& N = thm_fix().N;
    UEAElement r = ev(ctx, "[a,c]");

    const std::vector<std::vector<int>> sigs = {{2}, {2, 2}, {3}};
    const std::vector<size_t> member_counts = {3, 6, 4};
    for (size_t si = 0; si < sigs.size(); ++si) {
      CAPTURE(si);
      VerificationReport rep = verify_one_relator(ctx, N, sigs[si], r, {0, 1});
      CHECK(rep.hypothesis_holds);
      CHECK(rep.all_equal);
      REQUIRE(rep.position.has_value());
      CHECK(rep.position->block == 1);
      CHECK(rep.position->step == 1);
      CHECK(rep.members.size() == member_counts[si]);
      for (const MemberComparison& mc : rep.members) {
        CHECK(mc.equal);
        CHECK(mc.graded);
        CHECK(mc.left_total == mc.right_total);
        CHECK(mc.left_dims == mc.right_dims);
        CHECK_FALSE(mc.witness.has_value());
      }
      for (const ImplicationCheck& imp : rep.implications) CHECK(imp.holds);
      CHECK(rep.implications.size() == (si == 1 ? 3 : 2));
    }

    // the first member's shared value is H meet N, computed independently
    VerificationReport rep = verify_one_relator(ctx, N, {2}, r, {0, 1});
    GradedSubspace H = lie_subalgebra_closure(ctx, {ev(ctx, "a"), ev(ctx, "b")});
    GradedSubspace HN = subspace_intersect(H, N);
    CHECK(rep.members[0].right_dims == HN.dims());
    CHECK(rep.members[0].right_total == HN.total_dim());
  }

  TEST_CASE("one-relator hypothesis failure yields a separating witness") {
    auto ctx = thm_fix().ctx;
    const GradedSubspace& N = thm_fix().N;
    VerificationReport rep = verify_one_relator(ctx, N, {2}, ev(ctx, "[a,b]"), {0, 1});

    CHECK_FALSE(rep.hypothesis_holds);
    CHECK_FALSE(rep.all_equal);
    REQUIRE(rep.position.has_value());
    CHECK(rep.position->block == 1);
    CHECK(rep.position->step == 1);

    SeriesChain ch = power_chain(ctx, N, {2});
    const MemberComparison& mc = rep.members[ch.index_of(1, 2)];
    CHECK_FALSE(mc.equal);
    REQUIRE(mc.witness.has_value());
    CHECK(*mc.witness == ev(ctx, "[a,b]"));
    REQUIRE(mc.witness_expr.has_value());

    // feeding the witness back through membership reproduces the verdicts
    GradedSubspace H = lie_subalgebra_closure(ctx, {ev(ctx, "a"), ev(ctx, "b")});
    GradedSubspace R = lie_ideal_closure(ctx, {ev(ctx, "[a,b]")});
    GradedVector w = to_graded(*mc.witness);
    CHECK(flatten(H).contains(w));
    CHECK(flat_sum(flatten(R), flatten(ch.at(1, 2))).contains(w));
    CHECK_FALSE(flatten(ch.at(1, 2)).contains(w));
    CHECK(evaluate(ctx, mc.witness_expr->str()) == *mc.witness);

    for (const ImplicationCheck& imp : rep.implications) CHECK(imp.holds);
    // inequality propagates: every member after (1,2) compares unequal
    for (size_t i = ch.index_of(1, 2); i < rep.members.size(); ++i)
      CHECK_FALSE(rep.members[i].equal);
    CHECK(rep.members[0].equal);
  }

  TEST_CASE("one-relator verification rejects malformed hypotheses") {
    auto ctx = thm_fix().ctx;
    const GradedSubspace& N = thm_fix().N;
    UEAElement r = ev(ctx, "[a,c]");

    auto ctx2 = test_ctx("mixed");
    CHECK_THROWS_WITH_AS(verify_one_relator(ctx2, cartesian_ideal(ctx2), {2},
                                            ev(ctx2, "[a,b]"), {0}),
                         doctest::Contains("more than two"), verification_error);

    CHECK_THROWS_WITH_AS(verify_one_relator(ctx, N, {2}, r, {0}),
                         doctest::Contains("all but one"), verification_error);
    CHECK_THROWS_WITH_AS(verify_one_relator(ctx, N, {2}, r, {0, 1, 2}),
                         doctest::Contains("all but one"), verification_error);
    CHECK_THROWS_WITH_AS(verify_one_relator(ctx, N, {2}, r, {0, 3}),
                         doctest::Contains("all but one"), verification_error);

    CHECK_THROWS_AS(verify_one_relator(ctx, N, {2}, UEAElement(ctx), {0, 1}), input_error);
    CHECK_THROWS_WITH_AS(verify_one_relator(ctx, N, {2}, ev(ctx, "b"), {0, 1}),
                         doctest::Contains("outside the ideal"), verification_error);
    CHECK_THROWS_WITH_AS(verify_one_relator(ctx, N, {2}, deep_element(ctx, N), {0, 1}),
                         doctest::Contains("first-block"), verification_error);

    auto ctxm = test_ctx("p3mod");
    CHECK_THROWS_WITH_AS(verify_one_relator(ctxm, ideal_from_spec(ctxm), {2},
                                            ev(ctxm, "[b,c]"), {1, 2}),
                         doctest::Contains("nontrivially"), verification_error);

    GradedSubspace skew = lie_ideal_closure(ctx, {ev(ctx, "[a,b] + [a,c]")});
    CHECK_THROWS_WITH_AS(verify_one_relator(ctx, skew, {2}, ev(ctx, "[a,b] + [a,c]"), {0, 1}),
                         doctest::Contains("not invariant"), verification_error);
  }

  TEST_CASE("one-relator verification at the second chain step") {
    auto ctx = thm_fix().ctx;
    VerificationReport rep =
        verify_one_relator(ctx, thm_fix().N, {2}, ev(ctx, "[[a,b],[a,c]]"), {0, 1});
    REQUIRE(rep.position.has_value());
    CHECK(rep.position->block == 1);
    CHECK(rep.position->step == 2);
    CHECK(rep.hypothesis_holds);
    CHECK(rep.all_equal);
  }

  TEST_CASE("many-relator selection certifies column survival") {
    auto ctx = thm_fix().ctx;
    const GradedSubspace& N = thm_fix().N;

    auto [sel, rep] = verify_many_relators(ctx, N, {2}, {ev(ctx, "[a,c]")}, true);
    CHECK(sel.ranks == std::vector<size_t>{1, 1});
    REQUIRE(sel.first_nonzero_level.has_value());
    CHECK(*sel.first_nonzero_level == 0);
    CHECK(sel.selected == std::vector<Index>{0});
    CHECK(sel.complement == std::vector<Index>{1, 2});
    CHECK(sel.complement_large_enough);
    for (const auto& led : sel.ledgers) CHECK(led.empty());
    CHECK(rep.all_equal);
    for (const MemberComparison& mc : rep.members) CHECK(mc.equal);

    auto [sel2, rep2] = verify_many_relators(ctx, N, {2, 2}, {ev(ctx, "[a,c]")}, true);
    CHECK(sel2.ranks == std::vector<size_t>{1, 1, 1});
    CHECK(sel2.selected == std::vector<Index>{0});
    CHECK(rep2.all_equal);
    CHECK(rep2.members.size() == 6);

    auto [sel3, rep3] =
        verify_many_relators(ctx, N, {2}, {ev(ctx, "[a,c]"), ev(ctx, "[b,c]")}, true);
    CHECK(sel3.ranks == std::vector<size_t>{2, 2});
    CHECK(sel3.selected == std::vector<Index>{0, 1});
    CHECK(sel3.complement == std::vector<Index>{2});
    CHECK(sel3.complement_large_enough);
    CHECK(rep3.all_equal);
  }

  TEST_CASE("many-relator staging climbs to the relator's level") {
    auto ctx = thm_fix().ctx;
    auto [sel, rep] =
        verify_many_relators(ctx, thm_fix().N, {2}, {ev(ctx, "[[a,b],[a,c]]")}, true);
    CHECK(sel.ranks.size() == 2);
    CHECK(sel.ranks[0] == 0);
    CHECK(sel.ranks[1] == 1);
    REQUIRE(sel.first_nonzero_level.has_value());
    CHECK(*sel.first_nonzero_level == 1);
    CHECK(sel.selected.size() == 1);
    CHECK(sel.complement.size() == 2);
    CHECK(sel.complement_large_enough);
    CHECK(rep.all_equal);
  }

  TEST_CASE("many-relator degenerate depth returns trivial equality") {
    auto ctx = thm_fix().ctx;
    const GradedSubspace& N = thm_fix().N;
    auto [sel, rep] = verify_many_relators(ctx, N, {2}, {deep_element(ctx, N)}, true);
    CHECK(sel.ranks == std::vector<size_t>{0, 0});
    CHECK_FALSE(sel.first_nonzero_level.has_value());
    CHECK(sel.selected.empty());
    CHECK(sel.complement == std::vector<Index>{0, 1, 2});
    for (const auto& led : sel.ledgers) CHECK(led.empty());
    CHECK(rep.all_equal);
    for (const MemberComparison& mc : rep.members) {
      CHECK(mc.trivial);
      CHECK(mc.equal);
    }
  }

  TEST_CASE("many-relator rejections") {
    auto ctx = thm_fix().ctx;
    const GradedSubspace& N = thm_fix().N;

    CHECK_THROWS_WITH_AS(
        verify_many_relators(ctx, N, {2},
                             {ev(ctx, "[a,b]"), ev(ctx, "[a,c]"), ev(ctx, "[b,c]")}, true),
        doctest::Contains("fewer relators"), verification_error);
    CHECK_THROWS_WITH_AS(verify_many_relators(ctx, N, {2}, {ev(ctx, "[a,c]")}, false),
                         doctest::Contains("asserted"), verification_error);
    CHECK_THROWS_WITH_AS(verify_many_relators(ctx, N, {2}, {ev(ctx, "b")}, true),
                         doctest::Contains("outside the ideal"), verification_error);
    CHECK_THROWS_AS(verify_many_relators(ctx, N, {2}, {}, true), input_error);
  }

  TEST_CASE("inhomogeneous relators run the flat route") {
    auto ctx = thm_fix().ctx;
    auto [sel, rep] =
        verify_many_relators(ctx, thm_fix().N, {2}, {ev(ctx, "[a,c] + [[a,b],c]")}, true);
    CHECK(sel.ranks == std::vector<size_t>{1, 1});
    CHECK(rep.all_equal);
    for (const MemberComparison& mc : rep.members) {
      CHECK_FALSE(mc.graded);
      CHECK(mc.left_dims.empty());
      CHECK(mc.equal);
      CHECK(mc.left_total == mc.right_total);
    }
  }
}
