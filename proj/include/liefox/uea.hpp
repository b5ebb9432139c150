#pragma once
#include <memory>
#include <unordered_map>
#include <vector>

#include "liefox/linalg.hpp"
#include "liefox/presentation.hpp"

namespace liefox {

// One syllable of a reduced word in the enveloping algebra of a free sum:
// either a nonempty PBW monomial inside one summand (source < summand count,
// letters = nondecreasing basis indices) or one free-generator occurrence
// (source = summand count + generator index, letters empty).
struct Syllable {
  Index source = 0;
  std::vector<Index> letters;

  bool operator==(const Syllable& o) const = default;
};

// Reduced alternating word: adjacent syllables never come from the same
// summand (free-generator syllables may repeat freely). The empty word is
// the unit and never appears inside UEAElement terms.
struct Word {
  std::vector<Syllable> syls;
  int degree = 0;

  bool empty() const { return syls.empty(); }
  bool operator==(const Word& o) const { return degree == o.degree && syls == o.syls; }
};

// degree, then letter count, then syllable count, then syllable-lex
bool word_less(const Word& a, const Word& b);

struct WordHash {
  size_t operator()(const Word& w) const;
};

struct GeneratorInfo {
  std::string name;
  int weight;
  Index source;   // syllable source id
  Index letter;   // basis index inside the summand; 0 for free generators
  bool is_free;
};

class UEAElement;

// Immutable evaluation context: validated presentation, generator registry,
// and the full indexed word basis of the truncated enveloping algebra.
class Context : public std::enable_shared_from_this<Context> {
 public:
  static std::shared_ptr<const Context> make(FreeSumPresentation p);

  const FreeSumPresentation& presentation() const { return pres_; }
  const FieldSpec& field() const { return pres_.field; }
  int cap() const { return pres_.cap; }
  size_t summand_count() const { return pres_.summands.size(); }
  size_t free_count() const { return pres_.free_generators.size(); }
  Index source_count() const { return static_cast<Index>(summand_count() + free_count()); }

  const std::vector<GeneratorInfo>& generators() const { return gens_; }
  const GeneratorInfo* find_generator(const std::string& name) const;
  std::string source_name(Index source) const;
  int source_min_weight(Index source) const;

  int syllable_degree(const Syllable& s) const;
  Word make_word(std::vector<Syllable> syls) const;

  const std::vector<Word>& words(int degree) const;
  Index word_index(const Word& w) const;
  const Word& word_at(int degree, Index i) const;
  AmbientDims ambient_dims() const;  // dims[d] = number of degree-d words, dims[0] = 1

  Scalar scalar(long num, long den = 1) const { return Scalar(pres_.field, num, den); }

  UEAElement zero() const;
  UEAElement one() const;
  UEAElement generator_element(const std::string& name) const;
  UEAElement basis_element(Index source, Index letter) const;  // summand basis vector

  // [x_i, x_j] inside a summand, as a map over basis indices
  const std::map<size_t, Scalar>& bracket_row(Index summand, Index i, Index j) const;
  int basis_weight(Index summand, Index i) const;

  std::string render_word(const Word& w) const;

 private:
  FreeSumPresentation pres_;
  std::vector<GeneratorInfo> gens_;
  std::unordered_map<std::string, size_t> by_name_;
  // summand -> degree -> nondecreasing letter tuples of that weight
  std::vector<std::vector<std::vector<std::vector<Index>>>> monomials_;
  std::vector<std::vector<Word>> words_;
  std::unordered_map<Word, Index, WordHash> index_;

  void build_words();
};

using ContextPtr = std::shared_ptr<const Context>;

// Element of the degree-truncated enveloping algebra: scalar constant plus
// finitely many reduced words of degree 1..cap. Products discard words past
// the cap; the positive grading makes every degree-at-most-cap statement
// exact.
class UEAElement {
 public:
  UEAElement() = default;
  explicit UEAElement(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  const ContextPtr& ctx() const { return ctx_; }
  const Scalar& constant() const { return const_; }
  const std::map<Word, Scalar, bool (*)(const Word&, const Word&)>& terms() const { return terms_; }

  bool is_zero() const;
  bool is_constant() const { return terms_.empty(); }
  int degree() const;      // max term degree, 0 for constants
  int min_degree() const;  // min term degree, 0 when a constant part exists

  void set_constant(Scalar c) { const_ = std::move(c); }
  void add_term(const Word& w, const Scalar& c);

  UEAElement& operator+=(const UEAElement& o);
  UEAElement& operator-=(const UEAElement& o);
  friend UEAElement operator+(UEAElement a, const UEAElement& b) { return a += b; }
  friend UEAElement operator-(UEAElement a, const UEAElement& b) { return a -= b; }
  UEAElement operator-() const;
  UEAElement scaled(const Scalar& c) const;
  bool operator==(const UEAElement& o) const;

  std::string str() const;

 private:
  ContextPtr ctx_;
  Scalar const_;
  std::map<Word, Scalar, bool (*)(const Word&, const Word&)> terms_{&word_less};
};

UEAElement multiply(const UEAElement& u, const UEAElement& v);
UEAElement lie_bracket(const UEAElement& u, const UEAElement& v);
inline UEAElement operator*(const UEAElement& u, const UEAElement& v) { return multiply(u, v); }

UEAElement evaluate(const ContextPtr& ctx, const LieExpr& e);
UEAElement evaluate(const ContextPtr& ctx, const std::string& expr_text);

GradedVector to_graded(const UEAElement& u);
UEAElement from_graded(const ContextPtr& ctx, const GradedVector& v);
UEAElement row_element(const ContextPtr& ctx, int degree, const SparseVec& row);

GradedSubspace make_space(const ContextPtr& ctx);  // empty subspace over the word basis

}  // namespace liefox
