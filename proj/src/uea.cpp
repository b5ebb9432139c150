#include "liefox/uea.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace liefox {

bool word_less(const Word& a, const Word& b) {
  if (a.degree != b.degree) return a.degree < b.degree;
  size_t la = 0, lb = 0;
  for (const auto& s : a.syls) la += s.letters.size();
  for (const auto& s : b.syls) lb += s.letters.size();
  if (la != lb) return la < lb;
  if (a.syls.size() != b.syls.size()) return a.syls.size() < b.syls.size();
  for (size_t i = 0; i < a.syls.size(); ++i) {
    const Syllable& x = a.syls[i];
    const Syllable& y = b.syls[i];
    if (x.source != y.source) return x.source < y.source;
    if (x.letters != y.letters) return x.letters < y.letters;
  }
  return false;
}

size_t WordHash::operator()(const Word& w) const {
  size_t h = 1469598103934665603ull;
  auto mix = [&h](size_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(static_cast<size_t>(w.degree));
  for (const auto& s : w.syls) {
    mix(s.source + 1);
    for (Index l : s.letters) mix(l + 2);
    mix(0);
  }
  return h;
}

std::shared_ptr<const Context> Context::make(FreeSumPresentation p) {
  auto report = validate_presentation(p);
  if (!report.ok()) {
    std::string msg = "invalid presentation:";
    for (const auto& d : report.problems) msg += "\n  " + d.where + ": " + d.message;
    throw input_error(msg);
  }
  auto ctx = std::shared_ptr<Context>(new Context());
  ctx->pres_ = std::move(p);

  const auto& pres = ctx->pres_;
  for (size_t i = 0; i < pres.summands.size(); ++i) {
    const auto& s = pres.summands[i];
    for (size_t j = 0; j < s.basis.size(); ++j) {
      ctx->by_name_[s.basis[j]] = ctx->gens_.size();
      ctx->gens_.push_back({s.basis[j], s.weights[j], static_cast<Index>(i),
                            static_cast<Index>(j), false});
    }
  }
  for (size_t j = 0; j < pres.free_generators.size(); ++j) {
    const auto& g = pres.free_generators[j];
    ctx->by_name_[g.name] = ctx->gens_.size();
    ctx->gens_.push_back({g.name, g.weight,
                          static_cast<Index>(pres.summands.size() + j), 0, true});
  }

  ctx->monomials_.resize(pres.summands.size());
  for (size_t i = 0; i < pres.summands.size(); ++i) {
    auto& table = ctx->monomials_[i];
    table.assign(pres.cap + 1, {});
    const auto& weights = pres.summands[i].weights;
    std::vector<Index> cur;
    // nondecreasing tuples, grouped by total weight
    auto rec = [&](auto&& self, size_t min_idx, int remaining) -> void {
      if (!cur.empty()) table[pres.cap - remaining].push_back(cur);
      for (size_t j = min_idx; j < weights.size(); ++j) {
        if (weights[j] > remaining) continue;
        cur.push_back(static_cast<Index>(j));
        self(self, j, remaining - weights[j]);
        cur.pop_back();
      }
    };
    rec(rec, 0, pres.cap);
  }

  ctx->build_words();
  return ctx;
}

void Context::build_words() {
  words_.assign(pres_.cap + 1, {});
  words_[0].push_back(Word{});

  // syllable pool grouped by degree
  std::vector<std::vector<Syllable>> pool(pres_.cap + 1);
  for (size_t i = 0; i < pres_.summands.size(); ++i)
    for (int d = 1; d <= pres_.cap; ++d)
      for (const auto& tuple : monomials_[i][d])
        pool[d].push_back({static_cast<Index>(i), tuple});
  for (size_t j = 0; j < pres_.free_generators.size(); ++j) {
    int w = pres_.free_generators[j].weight;
    if (w <= pres_.cap)
      pool[w].push_back({static_cast<Index>(pres_.summands.size() + j), {}});
  }

  // every word splits uniquely as (shorter word, final syllable)
  for (int d = 1; d <= pres_.cap; ++d) {
    for (int dp = 0; dp < d; ++dp) {
      for (const Word& w : words_[dp]) {
        bool last_is_summand =
            !w.syls.empty() && w.syls.back().source < summand_count();
        for (const Syllable& s : pool[d - dp]) {
          if (last_is_summand && s.source == w.syls.back().source) continue;
          Word nw = w;
          nw.syls.push_back(s);
          nw.degree = d;
          words_[d].push_back(std::move(nw));
        }
      }
    }
    std::sort(words_[d].begin(), words_[d].end(), &word_less);
  }

  for (int d = 0; d <= pres_.cap; ++d)
    for (size_t i = 0; i < words_[d].size(); ++i)
      index_[words_[d][i]] = static_cast<Index>(i);
}

const GeneratorInfo* Context::find_generator(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &gens_[it->second];
}

std::string Context::source_name(Index source) const {
  if (source < summand_count()) return pres_.summands[source].name;
  return pres_.free_generators[source - summand_count()].name;
}

int Context::source_min_weight(Index source) const {
  if (source < summand_count()) {
    const auto& ws = pres_.summands[source].weights;
    return *std::min_element(ws.begin(), ws.end());
  }
  return pres_.free_generators[source - summand_count()].weight;
}

int Context::syllable_degree(const Syllable& s) const {
  if (s.source < summand_count()) {
    int d = 0;
    for (Index l : s.letters) d += pres_.summands[s.source].weights[l];
    return d;
  }
  return pres_.free_generators[s.source - summand_count()].weight;
}

Word Context::make_word(std::vector<Syllable> syls) const {
  Word w;
  int d = 0;
  for (size_t i = 0; i < syls.size(); ++i) {
    const Syllable& s = syls[i];
    if (s.source >= source_count()) throw structural_error("syllable source out of range");
    if (s.source < summand_count()) {
      if (s.letters.empty()) throw structural_error("empty summand syllable");
      if (!std::is_sorted(s.letters.begin(), s.letters.end()))
        throw structural_error("summand syllable letters not nondecreasing");
      if (i > 0 && syls[i - 1].source == s.source)
        throw structural_error("adjacent syllables from one summand");
    } else if (!s.letters.empty()) {
      throw structural_error("free-generator syllable carries letters");
    }
    d += syllable_degree(s);
  }
  w.syls = std::move(syls);
  w.degree = d;
  return w;
}

const std::vector<Word>& Context::words(int degree) const {
  if (degree < 0 || degree > pres_.cap) throw structural_error("degree outside truncation range");
  return words_[degree];
}

Index Context::word_index(const Word& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) throw structural_error("word not in the truncated basis");
  return it->second;
}

const Word& Context::word_at(int degree, Index i) const {
  const auto& ws = words(degree);
  if (i >= ws.size()) throw structural_error("word index out of range");
  return ws[i];
}

AmbientDims Context::ambient_dims() const {
  AmbientDims dims(pres_.cap + 1);
  for (int d = 0; d <= pres_.cap; ++d) dims[d] = static_cast<Index>(words_[d].size());
  return dims;
}

UEAElement Context::zero() const {
  return UEAElement(shared_from_this());
}

UEAElement Context::one() const {
  UEAElement e(shared_from_this());
  e.set_constant(scalar(1));
  return e;
}

UEAElement Context::generator_element(const std::string& name) const {
  const GeneratorInfo* g = find_generator(name);
  if (!g) throw input_error("unknown generator: " + name);
  UEAElement e(shared_from_this());
  if (g->weight > pres_.cap) return e;  // truncates to zero
  Syllable s{g->source, {}};
  if (!g->is_free) s.letters.push_back(g->letter);
  e.add_term(make_word({s}), scalar(1));
  return e;
}

UEAElement Context::basis_element(Index source, Index letter) const {
  if (source >= summand_count()) throw structural_error("basis_element wants a summand source");
  return generator_element(pres_.summands[source].basis.at(letter));
}

const std::map<size_t, Scalar>& Context::bracket_row(Index summand, Index i, Index j) const {
  return pres_.summands.at(summand).c.at(i).at(j);
}

int Context::basis_weight(Index summand, Index i) const {
  return pres_.summands.at(summand).weights.at(i);
}

std::string Context::render_word(const Word& w) const {
  std::string out;
  for (size_t i = 0; i < w.syls.size(); ++i) {
    if (i) out += ".";
    const Syllable& s = w.syls[i];
    if (s.source < summand_count()) {
      for (size_t j = 0; j < s.letters.size(); ++j) {
        if (j) out += "*";
        out += pres_.summands[s.source].basis[s.letters[j]];
      }
    } else {
      out += pres_.free_generators[s.source - summand_count()].name;
    }
  }
  return out;
}

bool UEAElement::is_zero() const {
  return const_.is_zero() && terms_.empty();
}

int UEAElement::degree() const {
  if (terms_.empty()) return 0;
  return terms_.rbegin()->first.degree;
}

int UEAElement::min_degree() const {
  if (!const_.is_zero() || terms_.empty()) return 0;
  return terms_.begin()->first.degree;
}

void UEAElement::add_term(const Word& w, const Scalar& c) {
  if (!ctx_) throw structural_error("element has no context");
  if (w.empty()) {
    const_ += c;
    return;
  }
  if (w.degree > ctx_->cap()) throw structural_error("term past the truncation degree");
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    if (!c.is_zero()) terms_.emplace(w, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

static void require_same_ctx(const UEAElement& a, const UEAElement& b) {
  if (a.ctx() && b.ctx() && a.ctx() != b.ctx())
    throw structural_error("elements from different contexts");
}

UEAElement& UEAElement::operator+=(const UEAElement& o) {
  require_same_ctx(*this, o);
  if (!ctx_) ctx_ = o.ctx_;
  const_ += o.const_;
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

UEAElement& UEAElement::operator-=(const UEAElement& o) {
  require_same_ctx(*this, o);
  if (!ctx_) ctx_ = o.ctx_;
  const_ -= o.const_;
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

UEAElement UEAElement::operator-() const {
  UEAElement r(ctx_);
  r.const_ = -const_;
  for (const auto& [w, c] : terms_) r.terms_.emplace(w, -c);
  return r;
}

UEAElement UEAElement::scaled(const Scalar& c) const {
  UEAElement r(ctx_);
  if (c.is_zero()) return r;
  r.const_ = const_;
  r.const_ *= c;
  for (const auto& [w, v] : terms_) {
    Scalar nv = v;
    nv *= c;
    r.terms_.emplace(w, std::move(nv));
  }
  return r;
}

bool UEAElement::operator==(const UEAElement& o) const {
  if (const_ != o.const_) return false;
  if (terms_.size() != o.terms_.size()) return false;
  auto it = terms_.begin();
  auto jt = o.terms_.begin();
  for (; it != terms_.end(); ++it, ++jt)
    if (!(it->first == jt->first) || it->second != jt->second) return false;
  return true;
}

std::string UEAElement::str() const {
  if (is_zero()) return "0";
  std::string out;
  auto append = [&out](const std::string& part) {
    if (!out.empty()) out += " + ";
    out += part;
  };
  if (!const_.is_zero()) append(const_.str());
  for (const auto& [w, c] : terms_) {
    std::string word = ctx_->render_word(w);
    if (c.is_one())
      append(word);
    else if ((-c).is_one())
      append("-" + word);
    else
      append(c.str() + "*" + word);
  }
  return out;
}

namespace {

// PBW straightening inside one summand: rewrite a letter sequence into a
// combination of nondecreasing sequences using x_b x_a = x_a x_b + [x_b,x_a].
std::map<std::vector<Index>, Scalar> straighten(const Context& ctx, Index summand,
                                                std::vector<Index> seq, Scalar coeff) {
  std::map<std::vector<Index>, Scalar> out;
  std::deque<std::pair<std::vector<Index>, Scalar>> work;
  work.emplace_back(std::move(seq), std::move(coeff));
  while (!work.empty()) {
    auto [s, c] = std::move(work.front());
    work.pop_front();
    size_t t = 0;
    while (t + 1 < s.size() && s[t] <= s[t + 1]) ++t;
    if (t + 1 >= s.size()) {
      auto [it, fresh] = out.emplace(std::move(s), c);
      if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) out.erase(it);
      }
      continue;
    }
    Index b = s[t], a = s[t + 1];
    std::vector<Index> swapped = s;
    std::swap(swapped[t], swapped[t + 1]);
    work.emplace_back(std::move(swapped), c);
    for (const auto& [k, v] : ctx.bracket_row(summand, b, a)) {
      std::vector<Index> replaced;
      replaced.reserve(s.size() - 1);
      replaced.insert(replaced.end(), s.begin(), s.begin() + t);
      replaced.push_back(static_cast<Index>(k));
      replaced.insert(replaced.end(), s.begin() + t + 2, s.end());
      Scalar nc = c;
      nc *= v;
      work.emplace_back(std::move(replaced), std::move(nc));
    }
  }
  return out;
}

void word_mul_into(UEAElement& acc, const Word& a, const Word& b, const Scalar& coeff) {
  const Context& ctx = *acc.ctx();
  if (a.degree + b.degree > ctx.cap()) return;  // the product is homogeneous
  if (a.empty()) {
    acc.add_term(b, coeff);
    return;
  }
  if (b.empty()) {
    acc.add_term(a, coeff);
    return;
  }
  const Syllable& tail = a.syls.back();
  const Syllable& head = b.syls.front();
  bool merge = tail.source == head.source && tail.source < ctx.summand_count();
  if (!merge) {
    Word w = a;
    w.syls.insert(w.syls.end(), b.syls.begin(), b.syls.end());
    w.degree = a.degree + b.degree;
    acc.add_term(w, coeff);
    return;
  }
  std::vector<Index> seq = tail.letters;
  seq.insert(seq.end(), head.letters.begin(), head.letters.end());
  for (auto& [tuple, c] : straighten(ctx, tail.source, std::move(seq), coeff)) {
    Word w;
    w.syls.reserve(a.syls.size() + b.syls.size() - 1);
    w.syls.insert(w.syls.end(), a.syls.begin(), a.syls.end() - 1);
    w.syls.push_back({tail.source, tuple});
    w.syls.insert(w.syls.end(), b.syls.begin() + 1, b.syls.end());
    w.degree = a.degree + b.degree;
    acc.add_term(w, c);
  }
}

}  // namespace

UEAElement multiply(const UEAElement& u, const UEAElement& v) {
  require_same_ctx(u, v);
  ContextPtr ctx = u.ctx() ? u.ctx() : v.ctx();
  if (!ctx) throw structural_error("multiplying context-free elements");
  UEAElement r(ctx);
  Scalar cc = u.constant();
  cc *= v.constant();
  r.set_constant(cc);
  if (!v.constant().is_zero())
    for (const auto& [w, c] : u.terms()) {
      Scalar nc = c;
      nc *= v.constant();
      r.add_term(w, nc);
    }
  if (!u.constant().is_zero())
    for (const auto& [w, c] : v.terms()) {
      Scalar nc = c;
      nc *= u.constant();
      r.add_term(w, nc);
    }
  for (const auto& [wu, cu] : u.terms())
    for (const auto& [wv, cv] : v.terms()) {
      Scalar nc = cu;
      nc *= cv;
      word_mul_into(r, wu, wv, nc);
    }
  return r;
}

UEAElement lie_bracket(const UEAElement& u, const UEAElement& v) {
  return multiply(u, v) - multiply(v, u);
}

UEAElement evaluate(const ContextPtr& ctx, const LieExpr& e) {
  switch (e.kind()) {
    case LieExpr::Kind::Gen:
      return ctx->generator_element(e.name());
    case LieExpr::Kind::Bracket:
      return lie_bracket(evaluate(ctx, e.left()), evaluate(ctx, e.right()));
    case LieExpr::Kind::Scale:
      return evaluate(ctx, e.left()).scaled(e.coeff());
    case LieExpr::Kind::Sum: {
      UEAElement r = ctx->zero();
      for (const auto& t : e.terms()) r += evaluate(ctx, t);
      return r;
    }
  }
  throw structural_error("unreachable expression kind");
}

UEAElement evaluate(const ContextPtr& ctx, const std::string& expr_text) {
  return evaluate(ctx, parse_lie_expr(expr_text, ctx->field()));
}

GradedVector to_graded(const UEAElement& u) {
  GradedVector v;
  if (!u.constant().is_zero()) v.comps[0] = {{0, u.constant()}};
  const Context& ctx = *u.ctx();
  for (const auto& [w, c] : u.terms())
    v.comps[w.degree].push_back({ctx.word_index(w), c});
  for (auto& [d, row] : v.comps)
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
  return v;
}

UEAElement from_graded(const ContextPtr& ctx, const GradedVector& v) {
  UEAElement e(ctx);
  for (const auto& [d, row] : v.comps)
    for (const auto& [col, val] : row) {
      if (d == 0) {
        e.set_constant(val);
        continue;
      }
      e.add_term(ctx->word_at(d, col), val);
    }
  return e;
}

UEAElement row_element(const ContextPtr& ctx, int degree, const SparseVec& row) {
  UEAElement e(ctx);
  for (const auto& [col, val] : row) {
    if (degree == 0)
      e.set_constant(val);
    else
      e.add_term(ctx->word_at(degree, col), val);
  }
  return e;
}

GradedSubspace make_space(const ContextPtr& ctx) {
  return GradedSubspace(ctx->ambient_dims());
}

}  // namespace liefox
