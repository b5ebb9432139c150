#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liefox/fox.hpp"
#include "liefox/ore.hpp"

namespace liefox {

// Position of an element inside a descending chain: the last member that
// still contains it. `beyond` marks containment in the final member, where
// the chain gives no lower bound (the element sits at least that deep).
struct ChainPosition {
  int block = 1;
  int step = 1;
  bool beyond = false;
};

ChainPosition relator_filtration_position(const UEAElement& r, const SeriesChain& chain);

// Jacobian of the relators: entry (i,j) is the j-th derivative of r_i, as a
// matrix over the plain enveloping algebra (trivial quotient). Columns run
// over every derivative source: the summands first, then free generators.
OreMatrix jacobian_matrix(const ContextPtr& ctx, const std::vector<UEAElement>& relators,
                          const GradedSubspace& N);

// One checked premise of a verifier, with human-readable detail.
struct HypothesisRecord {
  std::string name;
  bool holds = true;
  std::string detail;
};

// Both sides of one chain-member equality, each computed twice: through the
// enveloping ideal of the left side and through pure Lie-side sums. Dims are
// per degree 0..cap when the relator ideal is graded; totals always.
struct MemberComparison {
  int block = 1;
  int step = 1;
  bool graded = true;
  std::vector<Index> left_dims;   // dims of H ∩ (R + member)
  std::vector<Index> right_dims;  // dims of H ∩ member
  Index left_total = 0;
  Index right_total = 0;
  bool trivial = false;  // R already sits inside this member
  bool equal = true;
  std::optional<UEAElement> witness;  // lies in the left side, outside the right
  std::optional<LieExpr> witness_expr;
};

// An implication over the comparison table (premise observed, conclusion
// observed, premise-implies-conclusion verdict).
struct ImplicationCheck {
  std::string name;
  bool premise = false;
  bool conclusion = false;
  bool holds = true;
};

struct VerificationReport {
  std::vector<HypothesisRecord> hypotheses;
  std::optional<ChainPosition> position;  // of the single relator
  bool hypothesis_holds = true;  // relator escapes H + (next chain member)
  std::vector<MemberComparison> members;
  std::vector<ImplicationCheck> implications;
  bool all_equal = true;
};

// Column selection data from the staged triangularization of the Jacobian.
struct SelectionReport {
  std::vector<size_t> ranks;                       // t_k per quotient level
  std::optional<int> first_nonzero_level;          // K
  std::vector<std::vector<ElementaryOp>> ledgers;  // cumulative per level
  std::vector<Index> selected;                     // columns holding the final pivots
  std::vector<Index> complement;                   // J: every other column
  bool complement_large_enough = true;             // |J| >= columns - relators
};

// One-relator freedom verification: H is the subalgebra generated by the
// chosen summands (exactly all but one). Checks the preconditions, locates
// r in the chain built from sig, decides the hypothesis r outside
// H + (next member), and compares H ∩ (R + member) with H ∩ member at every
// chain member, double-computed, with witnesses on every inequality.
VerificationReport verify_one_relator(const ContextPtr& ctx, const GradedSubspace& N,
                                      const std::vector<int>& sig, const UEAElement& r,
                                      const std::vector<Index>& h_summands);

// Many-relator freedom verification: stages the Jacobian through the level
// quotients, selects the pivot columns, takes H over the complement, then
// runs the same chain comparison. Requires the solvability certificate and
// the caller's explicit assertion.
std::pair<SelectionReport, VerificationReport> verify_many_relators(
    const ContextPtr& ctx, const GradedSubspace& N, const std::vector<int>& sig,
    const std::vector<UEAElement>& relators, bool solvability_asserted,
    int ore_degree_bound = -1);

}  // namespace liefox
