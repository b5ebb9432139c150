#pragma once
#include <optional>

#include "liefox/uea.hpp"

namespace liefox {

// The Lie algebra F (free sum of the summands plus a free part) inside the
// truncated word ambient, built degreewise from left-normed bracket
// monomials over the generators. Tracks, per degree, a spanning family of
// tagged monomials so any member can be printed back as a bracket
// expression: the witness printer of the verifiers.
class LieAmbient {
 public:
  static LieAmbient build(ContextPtr ctx);

  const ContextPtr& ctx() const { return ctx_; }
  const GradedSubspace& space() const { return space_; }
  bool contains(const UEAElement& v) const { return space_.contains(to_graded(v)); }
  // Bracket expression for a member of F; nullopt when v is not a member.
  std::optional<LieExpr> express(const UEAElement& v) const;

 private:
  ContextPtr ctx_;
  GradedSubspace space_;
  struct DegreeTrack {
    std::vector<LieExpr> tags;  // aligned with the ordinals fed into tracked
    TrackedEchelon tracked{0};
  };
  std::vector<DegreeTrack> track_;
};

// Images of single summands / chosen summand unions inside the word ambient.
GradedSubspace summand_space(const ContextPtr& ctx, Index summand);
GradedSubspace summands_space(const ContextPtr& ctx, const std::vector<Index>& which);

std::vector<UEAElement> space_elements(const ContextPtr& ctx, const GradedSubspace& s);

// Degreewise span of pairwise Lie brackets [a, b].
GradedSubspace bracket_span(const ContextPtr& ctx, const GradedSubspace& a,
                            const GradedSubspace& b);

// Smallest bracket-closed subspace containing the generators (each must be
// homogeneous). Positive grading makes one ascending-degree pass complete.
GradedSubspace lie_subalgebra_closure(const ContextPtr& ctx, const std::vector<UEAElement>& gens);

// Smallest Lie ideal of F containing the generators (homogeneous inputs).
GradedSubspace lie_ideal_closure(const ContextPtr& ctx, const std::vector<UEAElement>& gens);

// Lie ideal closure for possibly inhomogeneous generators: saturation over
// the flattened ambient. Exact in the truncated quotient algebra.
FlatSubspace flat_lie_ideal_closure(const ContextPtr& ctx, const std::vector<UEAElement>& gens);

// Kernel of the fold map F -> direct sum of the summands (free generators
// and cross-summand brackets generate it as an ideal).
GradedSubspace cartesian_ideal(const ContextPtr& ctx);

// The ideal named by the presentation (cartesian, explicit generators, or
// none). Explicit generators must evaluate to homogeneous Lie elements.
GradedSubspace ideal_from_spec(const ContextPtr& ctx);

// Lower central powers arranged by a polynilpotent signature: inside block k
// the steps are N_{k,l+1} = [N_{k,l}, N_{k,1}], and each next block starts
// at the previous block's last member. Boundary members appear twice, once
// as (k, m_k+1) and once as (k+1, 1).
struct SeriesChain {
  struct Member {
    int block;  // 1-based k
    int step;   // 1-based l
    GradedSubspace space;
  };
  std::vector<int> sig;
  std::vector<Member> members;

  const GradedSubspace& at(int block, int step) const;
  size_t index_of(int block, int step) const;
};
SeriesChain power_chain(const ContextPtr& ctx, const GradedSubspace& N, std::vector<int> sig);

// Two-sided ideal generated by X inside the truncated enveloping algebra.
GradedSubspace uea_ideal(const ContextPtr& ctx, const GradedSubspace& X);
FlatSubspace uea_ideal_flat(const ContextPtr& ctx, const FlatSubspace& X);

// Unital subalgebra generated by a bracket-closed B: U(B) within the cap,
// including the degree-0 line of constants.
GradedSubspace unital_subalgebra(const ContextPtr& ctx, const GradedSubspace& B);

// k-th power of the augmentation ideal of U(B), truncated.
GradedSubspace u0_power(const ContextPtr& ctx, const GradedSubspace& B, int k);

// Steps until the derived series of F/N vanishes within the cap: smallest j
// with the j-th derived subspace of F contained in N, if reached. This is a
// certificate about the truncation only, never a solvability proof.
std::optional<int> derived_vanishing_step(const ContextPtr& ctx, const GradedSubspace& N);

// Endomorphism killing one summand: every basis vector of summand `kill`
// goes to zero, all other generators stay fixed, words map multiplicatively.
UEAElement kill_summand(const UEAElement& u, Index kill);

struct InvarianceCheck {
  bool passed = true;
  Index summand = 0;   // the kill that escaped, when failed
  UEAElement witness;  // image of a basis vector of N landing outside N
};

// Invariance of N under every summand-killing endomorphism. Single kills
// suffice: killing any subset of summands is their composition.
InvarianceCheck check_elementary_invariance(const ContextPtr& ctx, const GradedSubspace& N);

// Homogeneous free generating set of a subalgebra that meets every summand
// trivially (such subalgebras are free; the lifts give a base).
struct FreeGeneratingSet {
  std::vector<Lift> gens;  // degree + row in the word basis, echelon-complement order
  GradedSubspace derived;  // [B, B]

  std::vector<UEAElement> elements(const ContextPtr& ctx) const;
};
FreeGeneratingSet free_generating_set(const ContextPtr& ctx, const GradedSubspace& B);

// Residues in U(F)/modulus with an optional further quotient. Moduli are
// flattened so relator-derived (possibly inhomogeneous) ideals fit.
class QuotientContext {
 public:
  QuotientContext(ContextPtr ctx, FlatSubspace modulus, bool verify_ideal = false);

  void set_further(FlatSubspace further);

  const ContextPtr& ctx() const { return ctx_; }
  const FlatSubspace& modulus() const { return mod_; }
  const std::optional<FlatSubspace>& further() const { return further_; }

  UEAElement reduce(const UEAElement& u) const;
  bool is_zero(const UEAElement& u) const { return mod_.contains(to_graded(u)); }
  // image under the further quotient vanishes
  bool further_zero(const UEAElement& u) const;

 private:
  ContextPtr ctx_;
  FlatSubspace mod_;
  std::optional<FlatSubspace> further_;
};

// Descending filtration levels Delta_1 ⊇ Delta_2 ⊇ …, each stored together
// with the ambient modulus (membership means membership of the image in the
// quotient). Graded storage when every input is graded, flat otherwise.
class DeltaFiltration {
 public:
  static DeltaFiltration from_graded(std::vector<GradedSubspace> levels);
  static DeltaFiltration from_flat(std::vector<FlatSubspace> levels);

  int depth() const;
  bool in_level(const UEAElement& u, int k) const;  // 1-based k ≤ depth

  bool graded() const { return !g_.empty(); }
  const std::vector<GradedSubspace>& graded_levels() const { return g_; }
  const std::vector<FlatSubspace>& flat_levels() const { return f_; }

 private:
  std::vector<GradedSubspace> g_;
  std::vector<FlatSubspace> f_;
};

// Filtration generated by a descending family X_1 ⊇ X_2 ⊇ …: level k is the
// ideal generated by all products X_{i_1}···X_{i_s} with i_1+…+i_s ≥ k,
// closed under multiplication by the ambient multipliers (a generating set
// of the hosting algebra, e.g. a basis of N for U(N)), plus the modulus.
DeltaFiltration delta_filtration(const ContextPtr& ctx, const std::vector<GradedSubspace>& family,
                                 const std::vector<UEAElement>& ambient_multipliers,
                                 const GradedSubspace* modulus, int depth);
DeltaFiltration delta_filtration_flat(const ContextPtr& ctx,
                                      const std::vector<GradedSubspace>& family,
                                      const std::vector<UEAElement>& ambient_multipliers,
                                      const FlatSubspace& modulus, int depth);

struct Valuation {
  enum class Kind { Infinite, Finite, AtLeastDepth };
  Kind kind = Kind::Infinite;
  int value = 0;  // the finite value, or the exhausted depth

  bool operator==(const Valuation& o) const = default;
  std::string str() const;
};

// Filtration valuation: ∞ on 0 (mod the quotient), 0 when the image under
// the further quotient survives, else the unique level boundary; AtLeastDepth
// reports filtration exhaustion (a truncation artifact, not a value).
Valuation valuation_psi(const UEAElement& u, const DeltaFiltration& filt,
                        const QuotientContext& q);

}  // namespace liefox
