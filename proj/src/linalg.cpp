#include "liefox/linalg.hpp"

#include <algorithm>

namespace liefox {

SparseVec sparse_scale(const SparseVec& v, const Scalar& c) {
  if (c.is_zero()) return {};
  SparseVec r;
  r.reserve(v.size());
  for (const Entry& e : v) {
    Scalar s = e.val * c;
    if (!s.is_zero()) r.push_back({e.col, s});
  }
  return r;
}

void sparse_axpy(SparseVec& dst, const Scalar& c, const SparseVec& src) {
  if (c.is_zero() || src.empty()) return;
  SparseVec out;
  out.reserve(dst.size() + src.size());
  size_t i = 0, j = 0;
  while (i < dst.size() || j < src.size()) {
    if (j == src.size() || (i < dst.size() && dst[i].col < src[j].col)) {
      out.push_back(dst[i++]);
    } else if (i == dst.size() || src[j].col < dst[i].col) {
      Scalar s = src[j].val * c;
      if (!s.is_zero()) out.push_back({src[j].col, s});
      ++j;
    } else {
      Scalar s = dst[i].val + src[j].val * c;
      if (!s.is_zero()) out.push_back({dst[i].col, s});
      ++i, ++j;
    }
  }
  dst = std::move(out);
}

bool sparse_eq(const SparseVec& a, const SparseVec& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].col != b[i].col || a[i].val != b[i].val) return false;
  return true;
}

std::optional<Scalar> sparse_at(const SparseVec& v, Index col) {
  auto it = std::lower_bound(v.begin(), v.end(), col,
                             [](const Entry& e, Index c) { return e.col < c; });
  if (it == v.end() || it->col != col) return std::nullopt;
  return it->val;
}

SparseVec EchelonBasis::reduce(SparseVec v) const {
  for (size_t k = 0; k < v.size();) {
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), v[k].col);
    if (it != pivots_.end() && *it == v[k].col) {
      size_t r = static_cast<size_t>(it - pivots_.begin());
      Scalar c = -v[k].val;
      sparse_axpy(v, c, rows_[r]);
      // entry at v[k].col vanished; columns before it are untouched
    } else {
      ++k;
    }
  }
  return v;
}

bool EchelonBasis::insert(SparseVec v) {
  v = reduce(std::move(v));
  if (v.empty()) return false;
  if (v.front().col >= ambient_) throw structural_error("row exceeds ambient dimension");
  Scalar lead = v.front().val;
  if (!lead.is_one()) v = sparse_scale(v, lead.inverse());
  Index piv = v.front().col;
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv);
  size_t at = static_cast<size_t>(pos - pivots_.begin());
  // keep the basis fully reduced
  for (size_t r = 0; r < rows_.size(); ++r) {
    if (auto c = sparse_at(rows_[r], piv)) sparse_axpy(rows_[r], -*c, v);
  }
  pivots_.insert(pivots_.begin() + at, piv);
  rows_.insert(rows_.begin() + at, std::move(v));
  return true;
}

std::optional<std::vector<Scalar>> EchelonBasis::coords(const SparseVec& v) const {
  std::vector<Scalar> out(rows_.size());
  SparseVec r = v;
  for (size_t k = 0; k < r.size();) {
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), r[k].col);
    if (it != pivots_.end() && *it == r[k].col) {
      size_t row = static_cast<size_t>(it - pivots_.begin());
      out[row] = r[k].val;
      sparse_axpy(r, -r[k].val, rows_[row]);
    } else {
      return std::nullopt;  // nonzero entry off the pivot columns survives reduction
    }
  }
  return out;
}

bool EchelonBasis::operator==(const EchelonBasis& o) const {
  if (ambient_ != o.ambient_ || rows_.size() != o.rows_.size()) return false;
  for (size_t i = 0; i < rows_.size(); ++i)
    if (!sparse_eq(rows_[i], o.rows_[i])) return false;
  return true;
}

std::optional<SparseVec> TrackedEchelon::feed(const SparseVec& v) {
  SparseVec r = v;
  SparseVec combo{{static_cast<Index>(fed_), Scalar(FieldSpec{}, 1)}};
  ++fed_;
  for (size_t k = 0; k < r.size();) {
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), r[k].col);
    if (it != pivots_.end() && *it == r[k].col) {
      size_t row = static_cast<size_t>(it - pivots_.begin());
      Scalar c = -r[k].val;
      sparse_axpy(r, c, rows_[row]);
      sparse_axpy(combo, c, combos_[row]);
    } else {
      ++k;
    }
  }
  if (r.empty()) return combo;
  Scalar lead = r.front().val;
  if (!lead.is_one()) {
    Scalar inv = lead.inverse();
    r = sparse_scale(r, inv);
    combo = sparse_scale(combo, inv);
  }
  Index piv = r.front().col;
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv);
  size_t at = static_cast<size_t>(pos - pivots_.begin());
  for (size_t row = 0; row < rows_.size(); ++row) {
    if (auto c = sparse_at(rows_[row], piv)) {
      sparse_axpy(rows_[row], -*c, r);
      sparse_axpy(combos_[row], -*c, combo);
    }
  }
  pivots_.insert(pivots_.begin() + at, piv);
  rows_.insert(rows_.begin() + at, std::move(r));
  combos_.insert(combos_.begin() + at, std::move(combo));
  return std::nullopt;
}

std::optional<SparseVec> TrackedEchelon::coords_over_generators(const SparseVec& v) const {
  SparseVec r = v;
  SparseVec combo;
  for (size_t k = 0; k < r.size();) {
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), r[k].col);
    if (it == pivots_.end() || *it != r[k].col) return std::nullopt;
    size_t row = static_cast<size_t>(it - pivots_.begin());
    Scalar c = r[k].val;
    sparse_axpy(r, -c, rows_[row]);
    sparse_axpy(combo, c, combos_[row]);
  }
  return combo;
}

bool GradedVector::is_zero() const {
  for (const auto& [d, v] : comps)
    if (!v.empty()) return false;
  return true;
}

void GradedVector::add(int degree, const SparseVec& v, const Scalar& c) {
  sparse_axpy(comps[degree], c, v);
  if (comps[degree].empty()) comps.erase(degree);
}

GradedSubspace::GradedSubspace(const AmbientDims& dims) {
  deg_.reserve(dims.size());
  for (Index n : dims) deg_.emplace_back(n);
}

const EchelonBasis& GradedSubspace::at(int d) const {
  if (d < 0 || d >= static_cast<int>(deg_.size()))
    throw structural_error("degree out of range");
  return deg_[static_cast<size_t>(d)];
}

EchelonBasis& GradedSubspace::at(int d) {
  if (d < 0 || d >= static_cast<int>(deg_.size()))
    throw structural_error("degree out of range");
  return deg_[static_cast<size_t>(d)];
}

std::vector<Index> GradedSubspace::dims() const {
  std::vector<Index> r;
  r.reserve(deg_.size());
  for (const auto& e : deg_) r.push_back(e.rank());
  return r;
}

Index GradedSubspace::total_dim() const {
  Index t = 0;
  for (const auto& e : deg_) t += e.rank();
  return t;
}

AmbientDims GradedSubspace::ambient_dims() const {
  AmbientDims r;
  r.reserve(deg_.size());
  for (const auto& e : deg_) r.push_back(e.ambient());
  return r;
}

void GradedSubspace::check_compat(const GradedSubspace& o) const {
  if (deg_.size() != o.deg_.size()) throw structural_error("mixed ambient gradings");
  for (size_t d = 0; d < deg_.size(); ++d)
    if (deg_[d].ambient() != o.deg_[d].ambient())
      throw structural_error("mixed ambient bases at degree " + std::to_string(d));
}

bool GradedSubspace::insert(const GradedVector& v) {
  bool grew = false;
  for (const auto& [d, row] : v.comps)
    if (!row.empty() && insert_at(d, row)) grew = true;
  return grew;
}

bool GradedSubspace::insert_at(int d, SparseVec row) { return at(d).insert(std::move(row)); }

GradedVector GradedSubspace::reduce(const GradedVector& v) const {
  GradedVector out;
  for (const auto& [d, row] : v.comps) {
    SparseVec r = at(d).reduce(row);
    if (!r.empty()) out.comps[d] = std::move(r);
  }
  return out;
}

bool GradedSubspace::contains(const GradedVector& v) const {
  for (const auto& [d, row] : v.comps)
    if (!at(d).contains(row)) return false;
  return true;
}

bool GradedSubspace::contains_subspace(const GradedSubspace& o) const {
  check_compat(o);
  for (size_t d = 0; d < deg_.size(); ++d)
    for (const SparseVec& row : o.deg_[d].rows())
      if (!deg_[d].contains(row)) return false;
  return true;
}

bool GradedSubspace::operator==(const GradedSubspace& o) const {
  check_compat(o);
  for (size_t d = 0; d < deg_.size(); ++d)
    if (!(deg_[d] == o.deg_[d])) return false;
  return true;
}

GradedSubspace echelonize(const AmbientDims& dims, const std::vector<GradedVector>& rows) {
  GradedSubspace s(dims);
  for (const GradedVector& r : rows) s.insert(r);
  return s;
}

GradedSubspace subspace_sum(const GradedSubspace& a, const GradedSubspace& b) {
  a.check_compat(b);
  GradedSubspace s = a;
  for (size_t d = 0; d < b.deg_.size(); ++d)
    for (const SparseVec& row : b.deg_[d].rows()) s.deg_[d].insert(row);
  return s;
}

GradedSubspace subspace_intersect(const GradedSubspace& a, const GradedSubspace& b) {
  a.check_compat(b);
  GradedSubspace out(a.ambient_dims());
  for (size_t d = 0; d < a.deg_.size(); ++d) {
    Index n = a.deg_[d].ambient();
    // rows [v | v] for a, [w | 0] for b; echelon in the left block, rows with
    // vanishing left block carry intersection vectors in the right block.
    EchelonBasis left(n);
    std::vector<std::pair<SparseVec, SparseVec>> pending;
    auto feed = [&](const SparseVec& v, SparseVec shadow) {
      SparseVec r = v;
      // manual reduction so the shadow follows the combination
      for (size_t k = 0; k < r.size();) {
        bool hit = false;
        for (size_t p = 0; p < pending.size(); ++p) {
          if (!pending[p].first.empty() && pending[p].first.front().col == r[k].col) {
            Scalar c = -r[k].val;
            sparse_axpy(r, c, pending[p].first);
            sparse_axpy(shadow, c, pending[p].second);
            hit = true;
            break;
          }
        }
        if (!hit) ++k;
      }
      if (r.empty()) {
        if (!shadow.empty()) out.deg_[d].insert(shadow);
        return;
      }
      Scalar inv = r.front().val.inverse();
      r = sparse_scale(r, inv);
      shadow = sparse_scale(shadow, inv);
      pending.emplace_back(std::move(r), std::move(shadow));
      // keep pivot rows ordered by pivot for determinism of the reduction
      std::sort(pending.begin(), pending.end(),
                [](const auto& x, const auto& y) { return x.first.front().col < y.first.front().col; });
      (void)left;
    };
    for (const SparseVec& row : a.deg_[d].rows()) feed(row, row);
    for (const SparseVec& row : b.deg_[d].rows()) feed(row, SparseVec{});
    (void)n;
  }
  return out;
}

GradedSubspace subspace_intersect_alt(const GradedSubspace& a, const GradedSubspace& b) {
  a.check_compat(b);
  GradedSubspace out(a.ambient_dims());
  for (size_t d = 0; d < a.deg_.size(); ++d) {
    const auto& arows = a.deg_[d].rows();
    TrackedEchelon te(a.deg_[d].ambient());
    for (const SparseVec& row : arows) {
      SparseVec residue = b.deg_[d].reduce(row);
      if (auto kernel = te.feed(residue)) {
        // sum of a-rows with these coefficients reduces to zero mod b
        SparseVec vec;
        for (const Entry& e : *kernel) sparse_axpy(vec, e.val, arows[e.col]);
        if (!vec.empty()) out.deg_[d].insert(vec);
      }
    }
  }
  return out;
}

MembershipResult membership_coords(const GradedVector& v, const GradedSubspace& s) {
  MembershipResult res;
  res.member = true;
  for (const auto& [d, row] : v.comps) {
    if (row.empty()) continue;
    auto c = s.at(d).coords(row);
    if (!c) {
      res.member = false;
      res.coords.clear();
      return res;
    }
    res.coords[d] = std::move(*c);
  }
  return res;
}

std::optional<std::pair<GradedVector, GradedVector>> sum_decompose(const GradedVector& v,
                                                                   const GradedSubspace& a,
                                                                   const GradedSubspace& b) {
  GradedVector pa, pb;
  for (const auto& [d, row] : v.comps) {
    if (row.empty()) continue;
    TrackedEchelon te(a.at(d).ambient());
    const auto& ar = a.at(d).rows();
    const auto& br = b.at(d).rows();
    for (const SparseVec& r : ar) te.feed(r);
    for (const SparseVec& r : br) te.feed(r);
    auto combo = te.coords_over_generators(row);
    if (!combo) return std::nullopt;
    for (const Entry& e : *combo) {
      if (e.col < ar.size())
        pa.add(d, ar[e.col], e.val);
      else
        pb.add(d, br[e.col - ar.size()], e.val);
    }
  }
  return std::make_pair(std::move(pa), std::move(pb));
}

std::vector<Lift> complement_lifts(const GradedSubspace& base, const GradedSubspace& target,
                                   const GradedSubspace* source) {
  const GradedSubspace& src = source ? *source : target;
  std::vector<Lift> lifts;
  for (int d = 0; d <= base.cap(); ++d) {
    EchelonBasis work = base.at(d);
    for (const SparseVec& cand : src.at(d).rows()) {
      if (work.insert(cand)) lifts.push_back({d, cand});
    }
    // the chosen lifts together with base must span target at this degree
    for (const SparseVec& row : target.at(d).rows())
      if (!work.contains(row))
        throw structural_error("source rows do not span the target complement at degree " +
                               std::to_string(d));
  }
  return lifts;
}

FlatSubspace::FlatSubspace(AmbientDims dims) : dims_(std::move(dims)) {
  Index total = 0;
  offsets_.reserve(dims_.size());
  for (Index d : dims_) {
    offsets_.push_back(total);
    total += d;
  }
  basis_ = EchelonBasis(total);
}

SparseVec FlatSubspace::flatten(const GradedVector& v) const {
  SparseVec out;
  for (const auto& [d, row] : v.comps) {
    if (d < 0 || static_cast<size_t>(d) >= dims_.size())
      throw structural_error("degree outside the flattened ambient");
    for (const Entry& e : row) {
      if (e.col >= dims_[d]) throw structural_error("column outside the degree block");
      out.push_back({offsets_[d] + e.col, e.val});
    }
  }
  // comps ascend by degree, so columns are already sorted
  return out;
}

GradedVector FlatSubspace::unflatten(const SparseVec& row) const {
  GradedVector v;
  size_t d = 0;
  for (const Entry& e : row) {
    while (d + 1 < offsets_.size() && offsets_[d + 1] <= e.col) ++d;
    v.comps[static_cast<int>(d)].push_back({e.col - offsets_[d], e.val});
  }
  return v;
}

bool FlatSubspace::contains_subspace(const FlatSubspace& o) const {
  for (const SparseVec& r : o.basis_.rows())
    if (!basis_.contains(r)) return false;
  return true;
}

bool FlatSubspace::operator==(const FlatSubspace& o) const {
  return dims_ == o.dims_ && basis_ == o.basis_;
}

FlatSubspace flatten(const GradedSubspace& s) {
  FlatSubspace f(s.ambient_dims());
  for (int d = 0; d <= s.cap(); ++d)
    for (const SparseVec& row : s.at(d).rows()) {
      GradedVector v;
      v.comps[d] = row;
      f.insert(v);
    }
  return f;
}

FlatSubspace flat_sum(const FlatSubspace& a, const FlatSubspace& b) {
  if (a.ambient_dims() != b.ambient_dims())
    throw structural_error("flat subspaces over different ambients");
  FlatSubspace r = a;
  for (const SparseVec& row : b.basis().rows()) r.insert_flat(row);
  return r;
}

FlatSubspace flat_intersect(const FlatSubspace& a, const FlatSubspace& b) {
  if (a.ambient_dims() != b.ambient_dims())
    throw structural_error("flat subspaces over different ambients");
  // paired-coordinate echelon: (v, v) for a-rows, (w, 0) for b-rows; rows
  // whose left half dies leave an intersection vector in the shadow half
  Index n = a.flat_ambient();
  EchelonBasis work(2 * n);
  FlatSubspace out(a.ambient_dims());
  auto widen = [n](const SparseVec& v, bool with_shadow) {
    SparseVec w = v;
    if (with_shadow)
      for (const Entry& e : v) w.push_back({e.col + n, e.val});
    return w;
  };
  for (const SparseVec& row : a.basis().rows()) work.insert(widen(row, true));
  // every b-row whose left block dies certifies one intersection vector, and
  // together those shadows span the intersection (dimension count matches)
  for (const SparseVec& row : b.basis().rows()) {
    SparseVec res = work.reduce(widen(row, false));
    if (res.empty()) continue;
    if (res.front().col >= n) {
      SparseVec shadow;
      for (const Entry& e : res) shadow.push_back({e.col - n, e.val});
      out.insert_flat(std::move(shadow));
    } else {
      work.insert(std::move(res));
    }
  }
  return out;
}

FlatSubspace flat_intersect_alt(const FlatSubspace& a, const FlatSubspace& b) {
  if (a.ambient_dims() != b.ambient_dims())
    throw structural_error("flat subspaces over different ambients");
  TrackedEchelon t(a.flat_ambient());
  std::vector<SparseVec> residues;
  FlatSubspace out(a.ambient_dims());
  for (const SparseVec& row : a.basis().rows()) {
    auto combo = t.feed(b.basis().reduce(row));
    if (!combo) continue;
    SparseVec member;
    for (const Entry& e : *combo) sparse_axpy(member, e.val, a.basis().rows()[e.col]);
    out.insert_flat(std::move(member));
  }
  return out;
}

std::vector<GradedVector> flat_witnesses(const FlatSubspace& a, const FlatSubspace& b) {
  std::vector<GradedVector> out;
  for (const SparseVec& row : a.basis().rows())
    if (!b.basis().contains(row)) out.push_back(a.unflatten(row));
  return out;
}

}  // namespace liefox
