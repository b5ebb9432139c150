#include "liefox/ore.hpp"

#include <limits>
#include <sstream>
#include <utility>

namespace liefox {

std::string ElementaryOp::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::ColSwap:
      os << "swap columns " << i + 1 << " and " << j + 1;
      break;
    case Kind::RowSwap:
      os << "swap rows " << i + 1 << " and " << j + 1;
      break;
    case Kind::RowScale:
      os << "scale row " << i + 1 << " on the right by " << q.str();
      break;
    case Kind::RowAddMul:
      os << "add row " << i + 1 << " scaled by " << q.str() << " to row " << j + 1;
      break;
  }
  return os.str();
}

OreMatrix::OreMatrix(std::shared_ptr<const QuotientContext> q,
                     std::vector<std::vector<UEAElement>> entries)
    : q_(std::move(q)), entries_(std::move(entries)) {
  if (!q_) throw input_error("matrix needs a quotient context");
  if (entries_.empty() || entries_.front().empty())
    throw input_error("matrix needs at least one row and one column");
  for (const auto& row : entries_)
    if (row.size() != entries_.front().size())
      throw input_error("matrix rows must share one width");
  for (auto& row : entries_)
    for (auto& e : row) e = q_->reduce(e);
}

const UEAElement& OreMatrix::at(size_t i, size_t j) const {
  if (i >= rows() || j >= cols()) throw input_error("matrix index out of range");
  return entries_[i][j];
}

OreMatrix OreMatrix::applied(const ElementaryOp& op) const {
  OreMatrix out = *this;
  ElementaryOp rec = op;
  switch (op.kind) {
    case ElementaryOp::Kind::ColSwap:
      if (op.i >= cols() || op.j >= cols() || op.i == op.j)
        throw input_error("column swap needs two distinct columns in range");
      for (auto& row : out.entries_) std::swap(row[op.i], row[op.j]);
      break;
    case ElementaryOp::Kind::RowSwap:
      if (op.i >= rows() || op.j >= rows() || op.i == op.j)
        throw input_error("row swap needs two distinct rows in range");
      std::swap(out.entries_[op.i], out.entries_[op.j]);
      break;
    case ElementaryOp::Kind::RowScale:
      if (op.i >= rows()) throw input_error("row index out of range");
      rec.q = q_->reduce(op.q);
      if (rec.q.is_zero()) throw input_error("scale coefficient vanishes in the quotient");
      for (auto& e : out.entries_[op.i]) e = q_->reduce(e * rec.q);
      break;
    case ElementaryOp::Kind::RowAddMul:
      if (op.i >= op.j || op.j >= rows())
        throw input_error("row addition must feed a strictly lower row");
      rec.q = q_->reduce(op.q);
      if (rec.q.is_zero()) throw input_error("addition coefficient vanishes in the quotient");
      for (size_t c = 0; c < cols(); ++c)
        out.entries_[op.j][c] = q_->reduce(out.entries_[op.j][c] + out.entries_[op.i][c] * rec.q);
      break;
  }
  out.ledger_.push_back(std::move(rec));
  return out;
}

OreMatrix replay(const OreMatrix& origin, const std::vector<ElementaryOp>& ledger) {
  OreMatrix cur = origin;
  for (const ElementaryOp& op : ledger) cur = cur.applied(op);
  return cur;
}

UEAElement quotient_map(const UEAElement& u, const QuotientContext& q) {
  if (q.is_zero(q.ctx()->one()))
    throw input_error("modulus contains the identity: the quotient collapses");
  return q.reduce(u);
}

OrePair ore_pair(const UEAElement& a, const UEAElement& b, const QuotientContext& q,
                 int degree_bound) {
  const ContextPtr& ctx = q.ctx();
  UEAElement ra = q.reduce(a), rb = q.reduce(b);
  if (ra.is_zero() || rb.is_zero())
    throw input_error("Ore pair needs inputs nonzero in the quotient");
  int bound = degree_bound >= 0 ? degree_bound
                                : ctx->cap() - std::max(ra.degree(), rb.degree());
  if (bound > ctx->cap()) bound = ctx->cap();

  struct Unknown {
    int side;  // 0: multiplies a, 1: multiplies b
    int degree;
    Index word;
  };
  std::vector<Unknown> unknowns;
  TrackedEchelon solver(q.modulus().flat_ambient());

  auto unknown_word = [&](const Unknown& u) {
    if (u.degree == 0) return ctx->one();
    UEAElement w(ctx);
    w.add_term(ctx->word_at(u.degree, u.word), ctx->scalar(1));
    return w;
  };
  auto assemble = [&](const SparseVec& combo, int side) {
    UEAElement out(ctx);
    for (const Entry& e : combo) {
      const Unknown& u = unknowns[e.col];
      if (u.side == side) out += unknown_word(u).scaled(e.val);
    }
    return q.reduce(out);
  };
  auto certify = [&](UEAElement c, UEAElement d) -> OrePair {
    c = q.reduce(c);
    d = q.reduce(d);
    if (c.is_zero() || d.is_zero()) throw structural_error("Ore candidate lost a side");
    if (!q.is_zero(ra * c - rb * d)) throw structural_error("Ore pair failed its certificate");
    return {std::move(c), std::move(d)};
  };

  // Iterative deepening over the degree of the unknowns. Every dependent
  // feed yields one kernel vector; a valid pair of this depth is a kernel
  // vector with both sides surviving the quotient, and whenever one vector
  // keeps each side alive separately their sum keeps both.
  std::optional<SparseVec> got_c, got_d;
  for (int D = 0; D <= bound; ++D) {
    Index nw = D == 0 ? 1 : ctx->ambient_dims()[D];
    for (int side = 0; side < 2; ++side)
      for (Index w = 0; w < nw; ++w) {
        Unknown u{side, D, w};
        UEAElement prod = (side == 0 ? ra : rb) * unknown_word(u);
        SparseVec flat = q.modulus().flatten(q.modulus().reduce(to_graded(prod)));
        if (side == 1)
          for (Entry& e : flat) e.val = -e.val;
        unknowns.push_back(u);
        auto combo = solver.feed(flat);
        if (!combo) continue;
        UEAElement c = assemble(*combo, 0), d = assemble(*combo, 1);
        if (!c.is_zero() && !d.is_zero()) return certify(c, d);
        if (!c.is_zero() && !got_c) got_c = *combo;
        if (!d.is_zero() && !got_d) got_d = *combo;
        if (got_c && got_d)
          return certify(assemble(*got_c, 0) + assemble(*got_d, 0),
                         assemble(*got_c, 1) + assemble(*got_d, 1));
      }
  }
  throw exhaustion_error("Ore search exhausted at degree bound " + std::to_string(bound));
}

std::optional<size_t> triangular_rank(const OreMatrix& m) {
  size_t t = 0;
  const size_t diag = std::min(m.rows(), m.cols());
  while (t < diag && !m.at(t, t).is_zero()) ++t;
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < std::min(i, m.cols()); ++j)
      if (!m.at(i, j).is_zero()) return std::nullopt;
  for (size_t i = t; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      if (!m.at(i, j).is_zero()) return std::nullopt;
  return t;
}

namespace {

// Total order on valuations: finite values ascending, then filtration
// exhaustion, then infinite (the zero residue).
long long psi_key(const Valuation& v) {
  switch (v.kind) {
    case Valuation::Kind::Finite:
      return 2LL * v.value;
    case Valuation::Kind::AtLeastDepth:
      return 2LL * v.value + 1;
    case Valuation::Kind::Infinite:
      break;
  }
  return std::numeric_limits<long long>::max();
}

}  // namespace

OreMatrix triangularize_from(const OreMatrix& m, const DeltaFiltration& filt, size_t start_step,
                             int ore_degree_bound) {
  const QuotientContext& q = *m.context();
  OreMatrix cur = m;
  const size_t diag = std::min(cur.rows(), cur.cols());
  if (start_step > diag)
    throw input_error("resume step exceeds the matrix diagonal");
  for (size_t k = 0; k < start_step; ++k)
    if (cur.at(k, k).is_zero())
      throw input_error("resumed triangularization needs nonzero settled pivots");

  // Clear an entry below a live diagonal pivot through a right Ore pair.
  auto eliminate = [&](size_t k, size_t i) {
    OrePair p;
    try {
      p = ore_pair(cur.at(k, k), cur.at(i, k), q, ore_degree_bound);
    } catch (const exhaustion_error& e) {
      throw exhaustion_error(std::string(e.what()) + " while clearing row " +
                             std::to_string(i + 1) + " below pivot (" + std::to_string(k + 1) +
                             "," + std::to_string(k + 1) + ")");
    }
    cur = cur.applied({ElementaryOp::Kind::RowScale, i, 0, p.d});
    cur = cur.applied({ElementaryOp::Kind::RowAddMul, k, i, -p.c});
    if (!cur.at(i, k).is_zero())
      throw structural_error("elimination failed to clear the entry below the pivot");
  };

  // Settled columns may have picked up residues when the quotient changed
  // under the matrix; restore their below-diagonal zeros without pivoting.
  for (size_t k = 0; k < start_step; ++k)
    for (size_t i = k + 1; i < cur.rows(); ++i)
      if (!cur.at(i, k).is_zero()) eliminate(k, i);

  size_t t = start_step;
  for (size_t k = start_step; k < diag; ++k) {
    long long best = 0;
    size_t bi = k, bj = k;
    bool found = false;
    for (size_t i = k; i < cur.rows(); ++i)
      for (size_t j = k; j < cur.cols(); ++j) {
        if (cur.at(i, j).is_zero()) continue;
        long long key = psi_key(valuation_psi(cur.at(i, j), filt, q));
        if (!found || key < best) {
          found = true;
          best = key;
          bi = i;
          bj = j;
        }
      }
    if (!found) break;  // the remaining submatrix vanishes
    if (bi != k) cur = cur.applied({ElementaryOp::Kind::RowSwap, k, bi});
    if (bj != k) cur = cur.applied({ElementaryOp::Kind::ColSwap, k, bj});
    for (size_t i = k + 1; i < cur.rows(); ++i)
      if (!cur.at(i, k).is_zero()) eliminate(k, i);
    ++t;
  }

  auto rank = triangular_rank(cur);
  if (!rank || *rank != t)
    throw structural_error("triangularization reached a non-triangular shape");
  for (size_t k = start_step; k < t; ++k) {
    long long dk = psi_key(valuation_psi(cur.at(k, k), filt, q));
    for (size_t n = 0; n < cur.cols(); ++n)
      if (psi_key(valuation_psi(cur.at(k, n), filt, q)) < dk)
        throw structural_error("diagonal entry fails to minimize the valuation in its row");
  }
  return cur;
}

OreMatrix triangularize(const OreMatrix& m, const DeltaFiltration& filt, int ore_degree_bound) {
  return triangularize_from(m, filt, 0, ore_degree_bound);
}

ScaledCombo combined_row_scaled(const OreMatrix& before, const std::vector<UEAElement>& combo,
                                const ElementaryOp& op, int ore_degree_bound) {
  const QuotientContext& q = *before.context();
  if (combo.size() != before.rows())
    throw input_error("combination length must match the row count");
  std::vector<UEAElement> out = combo;
  for (auto& e : out) e = q.reduce(e);
  UEAElement d = q.ctx()->one();
  switch (op.kind) {
    case ElementaryOp::Kind::ColSwap:
      break;  // columns permute the combined vector, not the combination
    case ElementaryOp::Kind::RowSwap:
      if (op.i >= out.size() || op.j >= out.size()) throw input_error("row index out of range");
      std::swap(out[op.i], out[op.j]);
      break;
    case ElementaryOp::Kind::RowScale: {
      if (op.i >= out.size()) throw input_error("row index out of range");
      UEAElement qq = q.reduce(op.q);
      if (qq.is_zero()) throw input_error("scale coefficient vanishes in the quotient");
      if (out[op.i].is_zero()) break;  // the scaled row does not appear: d = 1
      OrePair p = ore_pair(qq, out[op.i], q, ore_degree_bound);
      d = p.d;
      for (size_t r = 0; r < out.size(); ++r)
        out[r] = r == op.i ? p.c : q.reduce(out[r] * d);
      break;
    }
    case ElementaryOp::Kind::RowAddMul: {
      if (op.i >= op.j || op.j >= out.size())
        throw input_error("row addition must feed a strictly lower row");
      UEAElement qq = q.reduce(op.q);
      out[op.i] = q.reduce(out[op.i] - qq * out[op.j]);
      break;
    }
  }
  return {std::move(d), std::move(out)};
}

std::vector<UEAElement> apply_to_row_vector(const ElementaryOp& op, std::vector<UEAElement> v) {
  if (op.kind == ElementaryOp::Kind::ColSwap) {
    if (op.i >= v.size() || op.j >= v.size()) throw input_error("column index out of range");
    std::swap(v[op.i], v[op.j]);
  }
  return v;
}

}  // namespace liefox
