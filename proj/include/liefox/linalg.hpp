#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "liefox/field.hpp"

namespace liefox {

using Index = uint32_t;

// Sparse row over an indexed basis: entries sorted by strictly increasing
// column, all values nonzero.
struct Entry {
  Index col;
  Scalar val;

  bool operator==(const Entry& o) const { return col == o.col && val == o.val; }
};
using SparseVec = std::vector<Entry>;

SparseVec sparse_scale(const SparseVec& v, const Scalar& c);
// dst += c * src
void sparse_axpy(SparseVec& dst, const Scalar& c, const SparseVec& src);
bool sparse_eq(const SparseVec& a, const SparseVec& b);
std::optional<Scalar> sparse_at(const SparseVec& v, Index col);

// Reduced echelon basis of a subspace of a fixed finite-dimensional
// coordinate space. Canonical: two equal subspaces produce bit-identical
// rows regardless of insertion order. Pivot choice is the lowest column.
class EchelonBasis {
 public:
  EchelonBasis() = default;
  explicit EchelonBasis(Index ambient) : ambient_(ambient) {}

  Index ambient() const { return ambient_; }
  Index rank() const { return static_cast<Index>(rows_.size()); }
  const std::vector<SparseVec>& rows() const { return rows_; }
  const std::vector<Index>& pivots() const { return pivots_; }

  // Canonical residue of v modulo the subspace.
  SparseVec reduce(SparseVec v) const;
  // Insert a vector; returns true when the rank grew.
  bool insert(SparseVec v);
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  // Coordinates of v over rows(), if v lies in the subspace.
  std::optional<std::vector<Scalar>> coords(const SparseVec& v) const;
  bool operator==(const EchelonBasis& o) const;

 private:
  Index ambient_ = 0;
  std::vector<SparseVec> rows_;
  std::vector<Index> pivots_;
};

// Echelon process that remembers how every surviving row was combined from
// the inserted generators. Used for kernels, coordinates over non-echelon
// generating families, and sum decompositions.
class TrackedEchelon {
 public:
  explicit TrackedEchelon(Index ambient) : ambient_(ambient) {}

  Index rank() const { return static_cast<Index>(rows_.size()); }
  const std::vector<SparseVec>& rows() const { return rows_; }

  // Feed the next generator (its ordinal is the running count). When the
  // generator is dependent, returns the combination over all generators fed
  // so far that sums to zero (with coefficient at this generator nonzero).
  std::optional<SparseVec> feed(const SparseVec& v);
  size_t fed() const { return fed_; }

  // Express v over the generators fed so far, if possible.
  std::optional<SparseVec> coords_over_generators(const SparseVec& v) const;

 private:
  Index ambient_;
  size_t fed_ = 0;
  std::vector<SparseVec> rows_;
  std::vector<Index> pivots_;
  std::vector<SparseVec> combos_;  // combos_[r]: generator combination giving rows_[r]
};

// Per-degree list of ambient dimensions; index d = homogeneous degree.
using AmbientDims = std::vector<Index>;

// Homogeneous-by-degree vector: degree -> sparse coordinate row.
struct GradedVector {
  std::map<int, SparseVec> comps;

  bool is_zero() const;
  void add(int degree, const SparseVec& v, const Scalar& c);
};

// Graded subspace: one reduced echelon basis per degree 0..cap.
class GradedSubspace {
 public:
  GradedSubspace() = default;
  explicit GradedSubspace(const AmbientDims& dims);

  int cap() const { return static_cast<int>(deg_.size()) - 1; }
  const EchelonBasis& at(int d) const;
  EchelonBasis& at(int d);
  std::vector<Index> dims() const;
  Index total_dim() const;
  AmbientDims ambient_dims() const;

  bool insert(const GradedVector& v);  // true when any degree grew
  bool insert_at(int d, SparseVec row);
  GradedVector reduce(const GradedVector& v) const;
  bool contains(const GradedVector& v) const;
  bool contains_subspace(const GradedSubspace& o) const;
  bool operator==(const GradedSubspace& o) const;

 private:
  std::vector<EchelonBasis> deg_;
  void check_compat(const GradedSubspace& o) const;
  friend GradedSubspace subspace_sum(const GradedSubspace&, const GradedSubspace&);
  friend GradedSubspace subspace_intersect(const GradedSubspace&, const GradedSubspace&);
  friend GradedSubspace subspace_intersect_alt(const GradedSubspace&, const GradedSubspace&);
};

GradedSubspace echelonize(const AmbientDims& dims, const std::vector<GradedVector>& rows);
GradedSubspace subspace_sum(const GradedSubspace& a, const GradedSubspace& b);
// Zassenhaus-style intersection.
GradedSubspace subspace_intersect(const GradedSubspace& a, const GradedSubspace& b);
// Independent route: kernel of the reduction of a's rows modulo b. The two
// intersection routines back each other in double-computed verdicts.
GradedSubspace subspace_intersect_alt(const GradedSubspace& a, const GradedSubspace& b);

struct MembershipResult {
  bool member = false;
  // Per degree: coordinates over the subspace's echelon rows of that degree.
  std::map<int, std::vector<Scalar>> coords;
};
MembershipResult membership_coords(const GradedVector& v, const GradedSubspace& s);

// v = a-part + b-part with the parts drawn from the given subspaces.
std::optional<std::pair<GradedVector, GradedVector>> sum_decompose(const GradedVector& v,
                                                                   const GradedSubspace& a,
                                                                   const GradedSubspace& b);

// Homogeneous lifts extending `base` to `target`, drawn from `source`
// (source defaults to target). Lowest-pivot-first, degree ascending.
struct Lift {
  int degree;
  SparseVec vec;
};
std::vector<Lift> complement_lifts(const GradedSubspace& base, const GradedSubspace& target,
                                   const GradedSubspace* source = nullptr);

// Subspace of the flattened truncated algebra (all degree blocks side by
// side). The general-position representation: unlike GradedSubspace it can
// hold spans of inhomogeneous vectors, e.g. everything derived from an
// inhomogeneous relator. Same canonical echelon, so == decides equality.
class FlatSubspace {
 public:
  FlatSubspace() = default;
  explicit FlatSubspace(AmbientDims dims);

  const AmbientDims& ambient_dims() const { return dims_; }
  Index flat_ambient() const { return basis_.ambient(); }
  const EchelonBasis& basis() const { return basis_; }
  Index rank() const { return basis_.rank(); }

  SparseVec flatten(const GradedVector& v) const;
  GradedVector unflatten(const SparseVec& row) const;

  bool insert(const GradedVector& v) { return basis_.insert(flatten(v)); }
  bool insert_flat(SparseVec row) { return basis_.insert(std::move(row)); }
  bool contains(const GradedVector& v) const { return basis_.contains(flatten(v)); }
  GradedVector reduce(const GradedVector& v) const { return unflatten(basis_.reduce(flatten(v))); }
  bool contains_subspace(const FlatSubspace& o) const;
  bool operator==(const FlatSubspace& o) const;

 private:
  AmbientDims dims_;
  std::vector<Index> offsets_;
  EchelonBasis basis_;
};

FlatSubspace flatten(const GradedSubspace& s);
FlatSubspace flat_sum(const FlatSubspace& a, const FlatSubspace& b);
FlatSubspace flat_intersect(const FlatSubspace& a, const FlatSubspace& b);
// Independent route, mirroring subspace_intersect_alt.
FlatSubspace flat_intersect_alt(const FlatSubspace& a, const FlatSubspace& b);
// Basis vectors of a that fail to lie in b (unflattened). Empty iff a ⊆ b.
std::vector<GradedVector> flat_witnesses(const FlatSubspace& a, const FlatSubspace& b);

}  // namespace liefox
