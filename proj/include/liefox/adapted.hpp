#pragma once
#include <optional>

#include "liefox/uea.hpp"

namespace liefox {

// Which end of the chain receives the smallest letters. InnerFirst sorts
// words innermost-layer-first; OuterFirst puts the outermost complement
// letters in front. Both give PBW bases of the word ambient; the products a
// monomial denotes differ.
enum class LayerOrder { InnerFirst, OuterFirst };

struct AdaptedLetter {
  int layer;  // 0-based chain position, innermost first
  int degree;
  SparseVec vec;  // row in the word basis of its degree
};

// Basis of the Lie ambient adapted to a nested chain of subspaces: each
// layer's letters extend the union of the inner layers to a basis of that
// chain member, degreewise, optionally drawn from a constrained source
// subspace. Letters are globally ordered by the layer direction, then by
// degree, then by echelon pivot.
class AdaptedChain {
 public:
  // `sources` may be empty (no constraints) or parallel to `chain` with null
  // entries for unconstrained layers. When `full` is given the outermost
  // member must equal it.
  static AdaptedChain build(ContextPtr ctx, std::vector<GradedSubspace> chain,
                            std::vector<const GradedSubspace*> sources, LayerOrder order,
                            const GradedSubspace* full = nullptr);

  const ContextPtr& ctx() const { return ctx_; }
  size_t layer_count() const { return chain_.size(); }
  LayerOrder order() const { return order_; }
  const GradedSubspace& member(size_t layer) const { return chain_.at(layer); }
  const std::vector<AdaptedLetter>& letters() const { return letters_; }
  const UEAElement& letter_element(size_t idx) const { return elems_.at(idx); }

 private:
  ContextPtr ctx_;
  std::vector<GradedSubspace> chain_;
  LayerOrder order_ = LayerOrder::InnerFirst;
  std::vector<AdaptedLetter> letters_;
  std::vector<UEAElement> elems_;
};

// Nondecreasing product of adapted letters. Tags follow the four-layer
// convention (layer_counts innermost-first = (mu, nu, eta, theta)): beta
// needs theta > 0 and nu = mu = 0, alpha needs theta = nu = mu = 0. A
// single-layer chain tags the empty monomial alpha and the rest beta; other
// chain lengths leave every monomial untagged.
struct StandardMonomial {
  enum class Tag { Alpha, Beta, Other };

  std::vector<size_t> letters;    // nondecreasing global letter indices
  std::vector<int> layer_counts;  // members per layer, innermost first
  int degree = 0;
  Tag tag = Tag::Other;
};

// Shorter monomials first; equal length compares letter indices
// lexicographically. Only meaningful within one chain.
bool standard_monomial_less(const StandardMonomial& a, const StandardMonomial& b);

// Per-degree enumeration of the standard monomials of an adapted chain, in
// monomial order, with expansion of elements over them. Tables are built
// lazily per degree; not safe for concurrent use.
class MonomialTable {
 public:
  explicit MonomialTable(const AdaptedChain& chain);  // chain must outlive the table

  const std::vector<StandardMonomial>& monomials(int degree) const;
  UEAElement element(const StandardMonomial& m) const;

  // Coordinates of u's degree-d component over that degree's monomials
  // (monomial index -> coefficient); nullopt when the chain does not span.
  std::optional<std::map<size_t, Scalar>> coords(const UEAElement& u, int d) const;

  // Rank of the span of the degree-d monomials inside the degree-d words.
  // Equals both monomials(d).size() and the word count when the chain is a
  // PBW-compatible flag of the whole ambient.
  Index span_rank(int degree) const;

  struct Census {
    long long alpha = 0, beta = 0, other = 0;
    long long total() const { return alpha + beta + other; }
  };
  Census census(int degree) const;

 private:
  const AdaptedChain* chain_;
  mutable std::vector<std::optional<std::vector<StandardMonomial>>> mono_;
  mutable std::vector<std::optional<TrackedEchelon>> ech_;
  const TrackedEchelon& echelon(int degree) const;
};

}  // namespace liefox
