#pragma once
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "liefox/calculus.hpp"

namespace liefox {

// The four elementary transformations of a matrix over the quotient.
// Row scaling and row addition multiply from the right; addition only
// feeds a row downward (source < target), matching the triangular shape.
struct ElementaryOp {
  enum class Kind { ColSwap, RowSwap, RowScale, RowAddMul };
  Kind kind;
  size_t i = 0;  // ColSwap/RowSwap: first index; RowScale: the row; RowAddMul: source row
  size_t j = 0;  // ColSwap/RowSwap: second index; RowAddMul: target row (i < j)
  UEAElement q;  // RowScale/RowAddMul coefficient, nonzero in the quotient

  std::string describe() const;
};

// Immutable matrix of context-reduced residues with a replayable ledger of
// every elementary transformation applied since its origin.
class OreMatrix {
 public:
  OreMatrix(std::shared_ptr<const QuotientContext> q,
            std::vector<std::vector<UEAElement>> entries);

  size_t rows() const { return entries_.size(); }
  size_t cols() const { return entries_.empty() ? 0 : entries_.front().size(); }
  const UEAElement& at(size_t i, size_t j) const;
  const std::vector<std::vector<UEAElement>>& entries() const { return entries_; }
  const std::vector<ElementaryOp>& ledger() const { return ledger_; }
  const std::shared_ptr<const QuotientContext>& context() const { return q_; }

  // A copy with the transformation applied and recorded.
  OreMatrix applied(const ElementaryOp& op) const;

 private:
  std::shared_ptr<const QuotientContext> q_;
  std::vector<std::vector<UEAElement>> entries_;
  std::vector<ElementaryOp> ledger_;
};

// Applies a recorded ledger to the origin matrix; the entries must then
// match the transformed matrix bit-exactly.
OreMatrix replay(const OreMatrix& origin, const std::vector<ElementaryOp>& ledger);

// Canonical residue of u in the quotient. Verifies the modulus is proper
// (a modulus containing 1 collapses the quotient and is rejected).
UEAElement quotient_map(const UEAElement& u, const QuotientContext& q);

// A certified solution of a·c = b·d with c, d nonzero in the quotient.
struct OrePair {
  UEAElement c, d;
};

// Exact search for an Ore pair by iterative deepening over the degree of
// the unknowns, up to degree_bound (default: cap minus the larger input
// degree). Exhaustion is reported as such - within a truncation it never
// certifies that no pair exists.
OrePair ore_pair(const UEAElement& a, const UEAElement& b, const QuotientContext& q,
                 int degree_bound = -1);

// Largest t with nonzero diagonal prefix a_11..a_tt when the matrix is
// triangular of rank t (zeros below the diagonal, zero rows after t);
// nullopt when the shape does not hold.
std::optional<size_t> triangular_rank(const OreMatrix& m);

// Brings m to triangular shape with every diagonal entry minimizing the
// filtration valuation within its row: pivots minimize psi over the
// remaining submatrix (ties by row then column), below-pivot entries are
// cleared through Ore pairs (row scale + row addition). When a pivot
// already has valuation zero no swaps are spent on its step. The returned
// ledger replays the exact sequence; shape and valuation conditions are
// re-verified before returning.
OreMatrix triangularize(const OreMatrix& m, const DeltaFiltration& filt,
                        int ore_degree_bound = -1);

// Resume a staged triangularization: the first start_step diagonal entries
// are trusted pivots (they must be nonzero in m's quotient). Residues below
// them are cleared first without pivoting, then the remaining block is
// processed as usual. Valuation minimality is enforced for new rows only:
// settled rows answered to the filtration of the stage that placed them.
OreMatrix triangularize_from(const OreMatrix& m, const DeltaFiltration& filt, size_t start_step,
                             int ore_degree_bound = -1);

// Rewrites "alpha is a right combination of the rows" through one
// elementary transformation: returns d != 0 and coefficients with
// alpha^op · d the same combination of the transformed rows. Row swaps
// permute, additions re-balance exactly (d = 1); scaling a row against a
// nonzero coefficient runs an Ore pair.
struct ScaledCombo {
  UEAElement d;
  std::vector<UEAElement> combo;
};
ScaledCombo combined_row_scaled(const OreMatrix& before, const std::vector<UEAElement>& combo,
                                const ElementaryOp& op, int ore_degree_bound = -1);

// The image of a row vector under one transformation: column swaps permute
// the entries, row transformations leave the vector alone.
std::vector<UEAElement> apply_to_row_vector(const ElementaryOp& op,
                                            std::vector<UEAElement> v);

}  // namespace liefox
