#pragma once
#include <map>
#include <memory>

#include "liefox/adapted.hpp"
#include "liefox/calculus.hpp"

namespace liefox {

// First-syllable decomposition of u: the constant, one whole component per
// summand (words led by that summand, an element of A_i·U(F)), and one
// left-quotiented component per free generator. Reconstruction
//   u = constant + Σ_i part(i) + Σ_j g_j·part(j)
// holds exactly within the cap.
struct FoxImage {
  ContextPtr ctx;
  Scalar constant;
  std::map<Index, UEAElement> parts;  // source id -> component, zeros omitted

  UEAElement part(Index source) const;
};

FoxImage fox_derivatives(const UEAElement& u);
UEAElement fox_reconstruct(const FoxImage& img);

// The element of U(F) representing a free generator source.
UEAElement free_source_element(const ContextPtr& ctx, Index source);

// Left decomposition of f over a free generating set Z of a subalgebra B:
//   f = constant + Σ_z z·part(z)
// with the parts again inside U(B). Exact, via expansion over the words in
// Z (U(B) is free associative on Z).
struct SubalgebraFoxImage {
  ContextPtr ctx;
  Scalar constant;
  std::map<size_t, UEAElement> parts;  // index into the base -> component

  UEAElement part(size_t z) const;
};

SubalgebraFoxImage subalgebra_fox(const ContextPtr& ctx, const UEAElement& f,
                                  const FreeGeneratingSet& base);

// Shared exact machinery around a fixed pair (H, N): the ambient Lie
// algebra, the enveloping ideal of N, the chain-adapted word basis for
// H∩N ⊆ H ⊆ H+N ⊆ F, and the congruence target M = Σ_i ид_F(N∩A_i) + [N,N].
// Non-movable: the monomial table points into the chain.
struct FoxEnvironment {
  ContextPtr ctx;
  GradedSubspace H, N, HN, F;
  GradedSubspace NU;        // enveloping ideal of N
  GradedSubspace UH;        // unital enveloping subalgebra of H
  GradedSubspace ideal_HN;  // Lie ideal of F generated by H∩N
  GradedSubspace M;
  AdaptedChain chain;
  std::unique_ptr<MonomialTable> table;

  static std::unique_ptr<FoxEnvironment> make(ContextPtr ctx, GradedSubspace H, GradedSubspace N);

  FoxEnvironment(const FoxEnvironment&) = delete;
  FoxEnvironment& operator=(const FoxEnvironment&) = delete;

 private:
  FoxEnvironment() = default;
};

// Subalgebra mode inverts derivatives into H∩N, ideal mode into the Lie
// ideal generated by H∩N (targets may then reach outside U(H)).
enum class PreimageMode { Subalgebra, Ideal };

// Builds v with D_k(v) ≡ targets[k] mod N_U for every key k, located in
// H∩N (subalgebra mode) or ид_F(H∩N) (ideal mode). Demands: summand targets
// led by their own summand with tails in U(H) (subalgebra) or U(F) (ideal);
// in subalgebra mode every target inside U(H); and the combined element
// Σ_m targets[m] + Σ_j g_j·targets[j] inside N_U — violation of the last is
// reported as a verification_error naming the first failing degree. The
// returned element's location and every congruence are re-verified by
// membership before returning.
UEAElement construct_preimage(const FoxEnvironment& env,
                              const std::map<Index, UEAElement>& targets, PreimageMode mode);
UEAElement construct_preimage(const ContextPtr& ctx, const std::map<Index, UEAElement>& targets,
                              PreimageMode mode, const GradedSubspace& H,
                              const GradedSubspace& N);

// {v ∈ F_d : D_k(v) ∈ N_U for every source k}, as a subspace concentrated
// in degree d. Computed by an exact kernel solve over the stacked residues
// of all derivatives modulo N_U.
GradedSubspace fox_kernel_subspace(const ContextPtr& ctx, const GradedSubspace& F_space,
                                   const GradedSubspace& NU, int d);
GradedSubspace fox_kernel_subspace(const ContextPtr& ctx, const GradedSubspace& N, int d);

// Splits a Lie element v with D_k(v) ≡ 0 mod N_U for all k outside K into
// v0 ∈ H plus v1 ∈ ид_F(H∩N) with the certificate v − v0 − v1 ∈ M verified
// by membership. A surviving derivative outside K raises verification_error
// naming the source and the first failing degree.
struct FoxDecomposition {
  UEAElement v0, v1;
};
FoxDecomposition theorem4_decompose(const FoxEnvironment& env, const UEAElement& v,
                                    const std::vector<Index>& K);
FoxDecomposition theorem4_decompose(const UEAElement& v, const std::vector<Index>& K,
                                    const GradedSubspace& H, const GradedSubspace& N);

}  // namespace liefox
