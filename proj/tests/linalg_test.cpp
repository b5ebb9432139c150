#include <doctest.h>

#include "liefox/linalg.hpp"

using namespace liefox;

namespace {

FieldSpec Q = FieldSpec::rationals();

Scalar q(long n, long d = 1) { return Scalar(Q, n, d); }

SparseVec row(std::initializer_list<std::pair<Index, long>> entries) {
  SparseVec v;
  for (auto [c, val] : entries)
    if (val != 0) v.push_back({c, q(val)});
  return v;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("sparse primitives") {
  SparseVec a = row({{0, 1}, {2, 3}});
  SparseVec b = row({{1, 2}, {2, -3}});
  sparse_axpy(a, q(1), b);
  CHECK(sparse_eq(a, row({{0, 1}, {1, 2}})));
  CHECK(sparse_at(a, 1).has_value());
  CHECK(!sparse_at(a, 2).has_value());
  CHECK(sparse_eq(sparse_scale(a, q(0)), {}));
}

TEST_CASE("echelon basis is canonical in insertion order") {
  EchelonBasis e1(4), e2(4);
  SparseVec v1 = row({{0, 1}, {1, 2}});
  SparseVec v2 = row({{1, 1}, {3, 1}});
  SparseVec v3 = row({{0, 2}, {1, 5}, {3, 1}});  // v3 = 2*v1 + v2
  CHECK(e1.insert(v1));
  CHECK(e1.insert(v2));
  CHECK(!e1.insert(v3));
  CHECK(e2.insert(v3));
  CHECK(e2.insert(v2));
  CHECK(!e2.insert(v1));
  CHECK(e1 == e2);
  CHECK(e1.rank() == 2);
  CHECK(e1.contains(v3));
  CHECK(!e1.contains(row({{2, 1}})));
  // rows are fully back-reduced with unit leading entries
  CHECK(sparse_eq(e1.rows()[0], row({{0, 1}, {3, -2}})));
  CHECK(sparse_eq(e1.rows()[1], row({{1, 1}, {3, 1}})));
}

TEST_CASE("coords reconstruct the vector") {
  EchelonBasis e(3);
  e.insert(row({{0, 1}, {1, 1}}));
  e.insert(row({{1, 1}, {2, 1}}));
  SparseVec v = row({{0, 2}, {1, 5}, {2, 3}});
  auto c = e.coords(v);
  REQUIRE(c.has_value());
  SparseVec back;
  for (size_t i = 0; i < c->size(); ++i) sparse_axpy(back, (*c)[i], e.rows()[i]);
  CHECK(sparse_eq(back, v));
  CHECK(!e.coords(row({{0, 1}})).has_value());
}

TEST_CASE("tracked echelon reports kernel combinations") {
  TrackedEchelon t(3);
  CHECK(!t.feed(row({{0, 1}, {1, 1}})).has_value());
  CHECK(!t.feed(row({{1, 1}, {2, 1}})).has_value());
  auto combo = t.feed(row({{0, 3}, {1, 1}, {2, -2}}));  // 3*g0 - 2*g1
  REQUIRE(combo.has_value());
  auto c0 = sparse_at(*combo, 0), c1 = sparse_at(*combo, 1), c2 = sparse_at(*combo, 2);
  REQUIRE(c2.has_value());
  // normalize so the last generator has coefficient 1 and check the ratio
  Scalar inv = c2->inverse();
  CHECK((*c0 * inv).str() == "-3");
  CHECK((*c1 * inv).str() == "2");
  auto expr = t.coords_over_generators(row({{0, 1}, {1, 2}, {2, 1}}));
  REQUIRE(expr.has_value());
  CHECK(!t.coords_over_generators(row({{0, 1}})).has_value());
}

TEST_CASE("graded sum, intersection, and the dimension formula") {
  AmbientDims dims{1, 3, 3};
  GradedSubspace a(dims), b(dims);
  a.insert_at(1, row({{0, 1}}));
  a.insert_at(1, row({{1, 1}}));
  a.insert_at(2, row({{0, 1}, {1, 1}}));
  b.insert_at(1, row({{1, 1}}));
  b.insert_at(1, row({{2, 1}}));
  b.insert_at(2, row({{0, 1}, {2, 1}}));

  GradedSubspace s = subspace_sum(a, b);
  GradedSubspace i = subspace_intersect(a, b);
  GradedSubspace i2 = subspace_intersect_alt(a, b);
  CHECK(i == i2);
  CHECK(s.total_dim() + i.total_dim() == a.total_dim() + b.total_dim());
  CHECK(i.dims() == std::vector<Index>{0, 1, 0});
  GradedVector mid;
  mid.comps[1] = row({{1, 7}});
  CHECK(i.contains(mid));
  CHECK(s.contains_subspace(a));
  CHECK(s.contains_subspace(b));
}

TEST_CASE("membership with coordinates") {
  AmbientDims dims{1, 3};
  GradedSubspace a(dims);
  a.insert_at(1, row({{0, 1}, {1, 1}}));
  a.insert_at(1, row({{2, 1}}));
  GradedVector v;
  v.comps[1] = row({{0, 2}, {1, 2}, {2, -1}});
  auto m = membership_coords(v, a);
  CHECK(m.member);
  REQUIRE(m.coords.count(1));
  CHECK(m.coords[1][0].str() == "2");
  CHECK(m.coords[1][1].str() == "-1");
  GradedVector w;
  w.comps[1] = row({{0, 1}});
  CHECK(!membership_coords(w, a).member);
}

TEST_CASE("sum decomposition splits across the two parts") {
  AmbientDims dims{1, 3};
  GradedSubspace a(dims), b(dims);
  a.insert_at(1, row({{0, 1}, {1, 1}}));
  b.insert_at(1, row({{1, 1}, {2, 1}}));
  GradedVector v;
  v.comps[1] = row({{0, 1}, {1, 3}, {2, 2}});
  auto parts = sum_decompose(v, a, b);
  REQUIRE(parts.has_value());
  CHECK(a.contains(parts->first));
  CHECK(b.contains(parts->second));
  GradedVector check = parts->first;
  for (const auto& [d, r] : parts->second.comps) check.add(d, r, q(1));
  CHECK(a.reduce(check).is_zero() == false);  // sanity: reduce against a alone is not zero
  GradedVector diff = check;
  diff.add(1, v.comps[1], q(-1));
  CHECK(diff.is_zero());
  GradedVector out;
  out.comps[1] = row({{0, 1}, {2, 1}});
  // 0-coefficient middle: still decomposable (e0+e1) - (e1) + ... check a genuinely outside vector
  GradedSubspace tiny(dims);
  tiny.insert_at(1, row({{0, 1}}));
  CHECK(!sum_decompose(out, tiny, tiny).has_value());
}

TEST_CASE("complement lifts extend a base to a target") {
  AmbientDims dims{1, 4};
  GradedSubspace base(dims), target(dims);
  base.insert_at(1, row({{0, 1}}));
  target.insert_at(1, row({{0, 1}}));
  target.insert_at(1, row({{1, 1}}));
  target.insert_at(1, row({{2, 1}, {3, 1}}));
  auto lifts = complement_lifts(base, target);
  CHECK(lifts.size() == 2);
  GradedSubspace span = base;
  for (const auto& l : lifts) span.insert_at(l.degree, l.vec);
  CHECK(span == target);

  // constrained source: lifts must come from the given space
  GradedSubspace source(dims);
  source.insert_at(1, row({{1, 1}}));
  source.insert_at(1, row({{2, 1}, {3, 1}}));
  source.insert_at(1, row({{0, 1}, {1, 1}}));
  auto lifts2 = complement_lifts(base, target, &source);
  CHECK(lifts2.size() == 2);
  for (const auto& l : lifts2) CHECK(source.at(1).contains(l.vec));
}

TEST_CASE("flat subspaces hold spans of inhomogeneous vectors") {
  AmbientDims dims{1, 2, 2};
  GradedVector r;  // degree-1 and degree-2 parts in one vector
  r.comps[1] = row({{0, 1}});
  r.comps[2] = row({{1, 1}});
  GradedVector r2;
  r2.comps[1] = row({{1, 1}});

  FlatSubspace a(dims);
  CHECK(a.insert(r));
  CHECK(a.insert(r2));
  CHECK(a.rank() == 2);
  CHECK(a.contains(r));
  GradedVector part;  // a single component of r is NOT in the span
  part.comps[1] = row({{0, 1}});
  CHECK(!a.contains(part));

  GradedSubspace g(dims);
  g.insert_at(1, row({{0, 1}}));
  g.insert_at(1, row({{1, 1}}));
  FlatSubspace b = flatten(g);
  CHECK(b.rank() == 2);

  FlatSubspace s = flat_sum(a, b);
  FlatSubspace i = flat_intersect(a, b);
  FlatSubspace i2 = flat_intersect_alt(a, b);
  CHECK(i == i2);
  CHECK(s.rank() + i.rank() == a.rank() + b.rank());
  CHECK(i.rank() == 1);
  CHECK(i.contains(r2));

  auto wit = flat_witnesses(a, b);
  REQUIRE(wit.size() == 1);
  CHECK(a.contains(wit[0]));
  CHECK(!b.contains(wit[0]));
  // round trip through the flat coordinates
  CHECK(sparse_eq(a.flatten(wit[0]), a.flatten(a.unflatten(a.flatten(wit[0])))));
}

TEST_CASE("echelonize from graded rows") {
  AmbientDims dims{1, 2, 2};
  GradedVector v1, v2;
  v1.comps[1] = row({{0, 1}});
  v1.comps[2] = row({{1, 1}});
  v2.comps[2] = row({{1, 2}});
  GradedSubspace s = echelonize(dims, {v1, v2});
  CHECK(s.dims() == std::vector<Index>{0, 1, 1});
}

}  // TEST_SUITE
