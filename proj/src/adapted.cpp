#include "liefox/adapted.hpp"

#include <algorithm>

namespace liefox {

AdaptedChain AdaptedChain::build(ContextPtr ctx, std::vector<GradedSubspace> chain,
                                 std::vector<const GradedSubspace*> sources, LayerOrder order,
                                 const GradedSubspace* full) {
  if (chain.empty()) throw input_error("adapted chain needs at least one member");
  if (!sources.empty() && sources.size() != chain.size())
    throw input_error("sources must be absent or parallel to the chain");
  for (size_t l = 0; l + 1 < chain.size(); ++l)
    if (!chain[l + 1].contains_subspace(chain[l])) throw input_error("chain not nested");
  if (full && !(chain.back() == *full))
    throw input_error("outermost chain member must equal the full space");

  AdaptedChain out;
  out.ctx_ = ctx;
  out.order_ = order;

  std::vector<std::vector<Lift>> per_layer;
  GradedSubspace base = make_space(ctx);
  for (size_t l = 0; l < chain.size(); ++l) {
    const GradedSubspace* src = sources.empty() ? nullptr : sources[l];
    auto lifts = complement_lifts(base, chain[l], src);
    for (const auto& lf : lifts) {
      if (lf.degree < 1) throw input_error("chain members must live in positive degrees");
      if (src && !chain[l].at(lf.degree).contains(lf.vec))
        throw input_error("layer source escapes the chain member");
    }
    per_layer.push_back(std::move(lifts));
    base = chain[l];
  }
  out.chain_ = std::move(chain);

  std::vector<size_t> layer_seq(per_layer.size());
  for (size_t i = 0; i < layer_seq.size(); ++i) layer_seq[i] = i;
  if (order == LayerOrder::OuterFirst) std::reverse(layer_seq.begin(), layer_seq.end());
  for (size_t l : layer_seq)
    for (auto& lf : per_layer[l]) {
      // complement_lifts is already degree-ascending, pivot-ascending
      out.letters_.push_back({static_cast<int>(l), lf.degree, lf.vec});
      out.elems_.push_back(row_element(ctx, lf.degree, lf.vec));
    }
  return out;
}

bool standard_monomial_less(const StandardMonomial& a, const StandardMonomial& b) {
  if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
  return a.letters < b.letters;
}

namespace {

StandardMonomial::Tag tag_of(const std::vector<int>& counts) {
  using Tag = StandardMonomial::Tag;
  if (counts.size() == 4) {
    int mu = counts[0], nu = counts[1], theta = counts[3];
    if (theta == 0 && nu == 0 && mu == 0) return Tag::Alpha;
    if (theta > 0 && nu == 0 && mu == 0) return Tag::Beta;
    return Tag::Other;
  }
  if (counts.size() == 1) return counts[0] == 0 ? Tag::Alpha : Tag::Beta;
  return Tag::Other;
}

}  // namespace

MonomialTable::MonomialTable(const AdaptedChain& chain)
    : chain_(&chain),
      mono_(chain.ctx()->cap() + 1),
      ech_(chain.ctx()->cap() + 1) {}

const std::vector<StandardMonomial>& MonomialTable::monomials(int degree) const {
  if (degree < 0 || degree > chain_->ctx()->cap())
    throw input_error("degree outside the truncation");
  auto& slot = mono_[degree];
  if (slot) return *slot;

  const auto& letters = chain_->letters();
  std::vector<StandardMonomial> out;
  std::vector<size_t> stack;
  // nondecreasing letter-index sequences with degrees summing to `degree`
  auto rec = [&](auto&& self, size_t start, int rem) -> void {
    if (rem == 0) {
      StandardMonomial m;
      m.letters = stack;
      m.layer_counts.assign(chain_->layer_count(), 0);
      for (size_t idx : stack) {
        m.layer_counts[letters[idx].layer] += 1;
        m.degree += letters[idx].degree;
      }
      m.tag = tag_of(m.layer_counts);
      out.push_back(std::move(m));
      return;
    }
    for (size_t i = start; i < letters.size(); ++i) {
      if (letters[i].degree > rem) continue;
      stack.push_back(i);
      self(self, i, rem - letters[i].degree);
      stack.pop_back();
    }
  };
  rec(rec, 0, degree);
  std::sort(out.begin(), out.end(), standard_monomial_less);
  slot = std::move(out);
  return *slot;
}

UEAElement MonomialTable::element(const StandardMonomial& m) const {
  UEAElement prod = chain_->ctx()->one();
  for (size_t idx : m.letters) prod = prod * chain_->letter_element(idx);
  return prod;
}

const TrackedEchelon& MonomialTable::echelon(int degree) const {
  auto& slot = ech_[degree];
  if (slot) return *slot;
  Index ambient = chain_->ctx()->ambient_dims().at(degree);
  TrackedEchelon ech(ambient);
  for (const auto& m : monomials(degree)) {
    GradedVector gv = to_graded(element(m));
    auto it = gv.comps.find(degree);
    ech.feed(it == gv.comps.end() ? SparseVec{} : it->second);
  }
  slot = std::move(ech);
  return *slot;
}

Index MonomialTable::span_rank(int degree) const {
  if (degree < 0 || degree > chain_->ctx()->cap())
    throw input_error("degree outside the truncation");
  return echelon(degree).rank();
}

std::optional<std::map<size_t, Scalar>> MonomialTable::coords(const UEAElement& u, int d) const {
  if (d < 0 || d > chain_->ctx()->cap()) throw input_error("degree outside the truncation");
  GradedVector gv = to_graded(u);
  auto it = gv.comps.find(d);
  SparseVec row = it == gv.comps.end() ? SparseVec{} : it->second;
  auto combo = echelon(d).coords_over_generators(row);
  if (!combo) return std::nullopt;
  std::map<size_t, Scalar> out;
  for (const auto& e : *combo) out.emplace(static_cast<size_t>(e.col), e.val);
  return out;
}

MonomialTable::Census MonomialTable::census(int degree) const {
  Census c;
  for (const auto& m : monomials(degree)) {
    switch (m.tag) {
      case StandardMonomial::Tag::Alpha: c.alpha += 1; break;
      case StandardMonomial::Tag::Beta: c.beta += 1; break;
      case StandardMonomial::Tag::Other: c.other += 1; break;
    }
  }
  return c;
}

}  // namespace liefox
