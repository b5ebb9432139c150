#include "liefox/calculus.hpp"

#include <algorithm>

namespace liefox {

namespace {

int homogeneous_degree(const UEAElement& g, const char* what) {
  if (!g.constant().is_zero() || g.is_zero() || g.degree() != g.min_degree())
    throw structural_error(std::string(what) + " needs homogeneous nonzero elements");
  return g.degree();
}

std::vector<UEAElement> degree_elements(const ContextPtr& ctx, const GradedSubspace& s, int d) {
  std::vector<UEAElement> out;
  out.reserve(s.at(d).rank());
  for (const SparseVec& row : s.at(d).rows()) out.push_back(row_element(ctx, d, row));
  return out;
}

std::vector<std::pair<int, UEAElement>> generator_multipliers(const ContextPtr& ctx) {
  std::vector<std::pair<int, UEAElement>> out;
  for (const GeneratorInfo& g : ctx->generators())
    if (g.weight <= ctx->cap()) out.emplace_back(g.weight, ctx->generator_element(g.name));
  return out;
}

// Two-sided ideal closure of a graded seed under homogeneous multipliers
// that generate the hosting algebra. One ascending pass is complete because
// every multiplier has positive degree.
GradedSubspace close_ideal_graded(const ContextPtr& ctx, const GradedSubspace& seed,
                                  const std::vector<std::pair<int, UEAElement>>& mults) {
  GradedSubspace I = make_space(ctx);
  std::vector<std::vector<UEAElement>> rows(ctx->cap() + 1);
  for (int d = 1; d <= ctx->cap(); ++d) {
    for (const SparseVec& row : seed.at(d).rows()) I.insert_at(d, row);
    for (const auto& [w, m] : mults) {
      if (w >= d) continue;
      for (const UEAElement& u : rows[d - w]) {
        I.insert(to_graded(m * u));
        I.insert(to_graded(u * m));
      }
    }
    rows[d] = degree_elements(ctx, I, d);
  }
  return I;
}

// Saturation variant over the flattened ambient; handles inhomogeneous
// seeds. Frontier elements that do not grow the span need no reprocessing:
// their products are combinations of products of spanning vectors.
FlatSubspace close_ideal_flat(const ContextPtr& ctx, FlatSubspace seed,
                              const std::vector<std::pair<int, UEAElement>>& mults) {
  std::vector<UEAElement> frontier;
  for (const SparseVec& row : seed.basis().rows())
    frontier.push_back(from_graded(ctx, seed.unflatten(row)));
  while (!frontier.empty()) {
    std::vector<UEAElement> next;
    for (const UEAElement& u : frontier)
      for (const auto& [w, m] : mults) {
        (void)w;
        for (UEAElement p : {m * u, u * m}) {
          if (p.is_zero()) continue;
          if (seed.insert(to_graded(p))) next.push_back(std::move(p));
        }
      }
    frontier = std::move(next);
  }
  return seed;
}

}  // namespace

LieAmbient LieAmbient::build(ContextPtr ctx) {
  LieAmbient la;
  la.ctx_ = ctx;
  la.space_ = make_space(ctx);
  const int cap = ctx->cap();
  la.track_.resize(cap + 1);
  AmbientDims dims = ctx->ambient_dims();
  for (int d = 0; d <= cap; ++d) la.track_[d].tracked = TrackedEchelon(dims[d]);

  // kept[d]: left-normed monomials that grew the span, with their tags
  std::vector<std::vector<std::pair<LieExpr, UEAElement>>> kept(cap + 1);
  for (int d = 1; d <= cap; ++d) {
    auto consider = [&](const LieExpr& tag, const UEAElement& v) {
      if (v.is_zero()) return;
      GradedVector gv = to_graded(v);
      DegreeTrack& tr = la.track_[d];
      size_t before = tr.tracked.rank();
      tr.tags.push_back(tag);
      tr.tracked.feed(gv.comps.at(d));
      if (tr.tracked.rank() > before) {
        la.space_.insert_at(d, gv.comps.at(d));
        kept[d].emplace_back(tag, v);
      }
    };
    for (const GeneratorInfo& g : ctx->generators())
      if (g.weight == d) consider(LieExpr::gen(g.name), ctx->generator_element(g.name));
    for (const GeneratorInfo& g : ctx->generators()) {
      if (g.weight >= d) continue;
      UEAElement ge = ctx->generator_element(g.name);
      for (const auto& [mtag, melem] : kept[d - g.weight])
        consider(LieExpr::bracket(mtag, LieExpr::gen(g.name)), lie_bracket(melem, ge));
    }
  }
  return la;
}

std::optional<LieExpr> LieAmbient::express(const UEAElement& v) const {
  if (!v.constant().is_zero()) return std::nullopt;
  GradedVector gv = to_graded(v);
  std::vector<LieExpr> parts;
  for (const auto& [d, row] : gv.comps) {
    if (row.empty()) continue;
    auto combo = track_[d].tracked.coords_over_generators(row);
    if (!combo) return std::nullopt;
    for (const Entry& e : *combo) {
      if (e.val.is_zero()) continue;
      parts.push_back(e.val.is_one() ? track_[d].tags[e.col]
                                     : LieExpr::scale(e.val, track_[d].tags[e.col]));
    }
  }
  if (parts.size() == 1) return parts[0];
  return LieExpr::sum(std::move(parts));
}

GradedSubspace summand_space(const ContextPtr& ctx, Index summand) {
  GradedSubspace s = make_space(ctx);
  const SummandSpec& sp = ctx->presentation().summands.at(summand);
  for (size_t j = 0; j < sp.basis.size(); ++j)
    if (sp.weights[j] <= ctx->cap())
      s.insert(to_graded(ctx->basis_element(summand, static_cast<Index>(j))));
  return s;
}

GradedSubspace summands_space(const ContextPtr& ctx, const std::vector<Index>& which) {
  GradedSubspace s = make_space(ctx);
  for (Index i : which) {
    GradedSubspace one = summand_space(ctx, i);
    s = subspace_sum(s, one);
  }
  return s;
}

std::vector<UEAElement> space_elements(const ContextPtr& ctx, const GradedSubspace& s) {
  std::vector<UEAElement> out;
  for (int d = 0; d <= s.cap(); ++d)
    for (const SparseVec& row : s.at(d).rows()) out.push_back(row_element(ctx, d, row));
  return out;
}

GradedSubspace bracket_span(const ContextPtr& ctx, const GradedSubspace& a,
                            const GradedSubspace& b) {
  GradedSubspace out = make_space(ctx);
  const int cap = ctx->cap();
  std::vector<std::vector<UEAElement>> ae(cap + 1), be(cap + 1);
  for (int d = 1; d <= cap; ++d) {
    ae[d] = degree_elements(ctx, a, d);
    be[d] = degree_elements(ctx, b, d);
  }
  for (int d1 = 1; d1 < cap; ++d1)
    for (int d2 = 1; d1 + d2 <= cap; ++d2)
      for (const UEAElement& u : ae[d1])
        for (const UEAElement& v : be[d2]) out.insert(to_graded(lie_bracket(u, v)));
  return out;
}

GradedSubspace lie_subalgebra_closure(const ContextPtr& ctx, const std::vector<UEAElement>& gens) {
  GradedSubspace S = make_space(ctx);
  const int cap = ctx->cap();
  std::vector<std::vector<UEAElement>> by_deg(cap + 1);
  for (const UEAElement& g : gens) {
    if (g.is_zero()) continue;
    int d = homogeneous_degree(g, "subalgebra closure");
    if (d <= cap) by_deg[d].push_back(g);
  }
  std::vector<std::vector<UEAElement>> rows(cap + 1);
  for (int d = 1; d <= cap; ++d) {
    for (const UEAElement& g : by_deg[d]) S.insert(to_graded(g));
    for (int d1 = 1; d1 <= d - d1; ++d1) {
      int d2 = d - d1;
      for (const UEAElement& u : rows[d1])
        for (const UEAElement& v : rows[d2]) S.insert(to_graded(lie_bracket(u, v)));
    }
    rows[d] = degree_elements(ctx, S, d);
  }
  return S;
}

GradedSubspace lie_ideal_closure(const ContextPtr& ctx, const std::vector<UEAElement>& gens) {
  GradedSubspace I = make_space(ctx);
  const int cap = ctx->cap();
  std::vector<std::vector<UEAElement>> by_deg(cap + 1);
  for (const UEAElement& g : gens) {
    if (g.is_zero()) continue;
    int d = homogeneous_degree(g, "ideal closure");
    if (d <= cap) by_deg[d].push_back(g);
  }
  auto mults = generator_multipliers(ctx);
  std::vector<std::vector<UEAElement>> rows(cap + 1);
  for (int d = 1; d <= cap; ++d) {
    for (const UEAElement& g : by_deg[d]) I.insert(to_graded(g));
    for (const auto& [w, m] : mults) {
      if (w >= d) continue;
      for (const UEAElement& u : rows[d - w]) I.insert(to_graded(lie_bracket(u, m)));
    }
    rows[d] = degree_elements(ctx, I, d);
  }
  return I;
}

FlatSubspace flat_lie_ideal_closure(const ContextPtr& ctx, const std::vector<UEAElement>& gens) {
  FlatSubspace I(ctx->ambient_dims());
  std::vector<UEAElement> frontier;
  for (const UEAElement& g : gens) {
    if (g.is_zero()) continue;
    if (!g.constant().is_zero())
      throw structural_error("ideal closure needs augmentation-free elements");
    if (I.insert(to_graded(g))) frontier.push_back(g);
  }
  auto mults = generator_multipliers(ctx);
  while (!frontier.empty()) {
    std::vector<UEAElement> next;
    for (const UEAElement& u : frontier)
      for (const auto& [w, m] : mults) {
        (void)w;
        UEAElement b = lie_bracket(u, m);
        if (b.is_zero()) continue;
        if (I.insert(to_graded(b))) next.push_back(std::move(b));
      }
    frontier = std::move(next);
  }
  return I;
}

GradedSubspace cartesian_ideal(const ContextPtr& ctx) {
  std::vector<UEAElement> gens;
  const auto& summands = ctx->presentation().summands;
  for (size_t i = 0; i < summands.size(); ++i)
    for (size_t j = i + 1; j < summands.size(); ++j)
      for (size_t p = 0; p < summands[i].basis.size(); ++p)
        for (size_t q = 0; q < summands[j].basis.size(); ++q) {
          UEAElement br = lie_bracket(ctx->basis_element(static_cast<Index>(i), static_cast<Index>(p)),
                                      ctx->basis_element(static_cast<Index>(j), static_cast<Index>(q)));
          if (!br.is_zero()) gens.push_back(std::move(br));
        }
  for (const FreeGeneratorSpec& g : ctx->presentation().free_generators)
    if (g.weight <= ctx->cap()) gens.push_back(ctx->generator_element(g.name));
  return lie_ideal_closure(ctx, gens);
}

GradedSubspace ideal_from_spec(const ContextPtr& ctx) {
  const IdealSpec& spec = ctx->presentation().ideal;
  switch (spec.kind) {
    case IdealSpec::Kind::None:
      return make_space(ctx);
    case IdealSpec::Kind::Cartesian:
      return cartesian_ideal(ctx);
    case IdealSpec::Kind::Explicit: {
      std::vector<UEAElement> gens;
      for (const std::string& text : spec.generators) {
        UEAElement g = evaluate(ctx, text);
        if (g.is_zero()) continue;
        if (g.degree() != g.min_degree())
          throw input_error("ideal generator '" + text +
                            "' is inhomogeneous; the series chain needs a graded ideal");
        gens.push_back(std::move(g));
      }
      return lie_ideal_closure(ctx, gens);
    }
  }
  throw structural_error("unreachable ideal kind");
}

const GradedSubspace& SeriesChain::at(int block, int step) const {
  return members[index_of(block, step)].space;
}

size_t SeriesChain::index_of(int block, int step) const {
  for (size_t i = 0; i < members.size(); ++i)
    if (members[i].block == block && members[i].step == step) return i;
  throw input_error("chain member (" + std::to_string(block) + "," + std::to_string(step) +
                    ") is outside the signature");
}

SeriesChain power_chain(const ContextPtr& ctx, const GradedSubspace& N, std::vector<int> sig) {
  if (sig.empty()) throw input_error("empty polynilpotent signature");
  for (int m : sig)
    if (m < 1) throw input_error("signature entries must be positive");
  if (!N.contains_subspace(bracket_span(ctx, N, N)))
    throw structural_error("series seed is not bracket-closed");
  SeriesChain ch;
  ch.sig = sig;
  GradedSubspace block = N;
  for (int k = 1; k <= static_cast<int>(sig.size()); ++k) {
    GradedSubspace cur = block;
    ch.members.push_back({k, 1, cur});
    for (int l = 1; l <= sig[k - 1]; ++l) {
      cur = bracket_span(ctx, cur, block);
      ch.members.push_back({k, l + 1, cur});
    }
    block = cur;
  }
  return ch;
}

GradedSubspace uea_ideal(const ContextPtr& ctx, const GradedSubspace& X) {
  return close_ideal_graded(ctx, X, generator_multipliers(ctx));
}

FlatSubspace uea_ideal_flat(const ContextPtr& ctx, const FlatSubspace& X) {
  return close_ideal_flat(ctx, X, generator_multipliers(ctx));
}

GradedSubspace unital_subalgebra(const ContextPtr& ctx, const GradedSubspace& B) {
  if (!B.contains_subspace(bracket_span(ctx, B, B)))
    throw structural_error("enveloping construction needs a bracket-closed subalgebra");
  GradedSubspace U = make_space(ctx);
  U.insert_at(0, {{0, ctx->scalar(1)}});
  const int cap = ctx->cap();
  std::vector<std::vector<UEAElement>> brows(cap + 1), urows(cap + 1);
  for (int d = 1; d <= cap; ++d) brows[d] = degree_elements(ctx, B, d);
  for (int d = 1; d <= cap; ++d) {
    for (const SparseVec& row : B.at(d).rows()) U.insert_at(d, row);
    for (int d1 = 1; d1 < d; ++d1)
      for (const UEAElement& b : brows[d1])
        for (const UEAElement& u : urows[d - d1]) U.insert(to_graded(b * u));
    urows[d] = degree_elements(ctx, U, d);
  }
  return U;
}

GradedSubspace u0_power(const ContextPtr& ctx, const GradedSubspace& B, int k) {
  if (k < 1) throw input_error("augmentation power must be positive");
  GradedSubspace UB = unital_subalgebra(ctx, B);
  const int cap = ctx->cap();
  GradedSubspace P = make_space(ctx);
  for (int d = 1; d <= cap; ++d)
    for (const SparseVec& row : UB.at(d).rows()) P.insert_at(d, row);
  std::vector<std::vector<UEAElement>> brows(cap + 1);
  for (int d = 1; d <= cap; ++d) brows[d] = degree_elements(ctx, B, d);
  for (int j = 2; j <= k; ++j) {
    GradedSubspace next = make_space(ctx);
    for (int d = 2; d <= cap; ++d)
      for (int d1 = 1; d1 < d; ++d1)
        for (const UEAElement& b : brows[d1])
          for (const SparseVec& row : P.at(d - d1).rows())
            next.insert(to_graded(b * row_element(ctx, d - d1, row)));
    P = std::move(next);
  }
  return P;
}

std::optional<int> derived_vanishing_step(const ContextPtr& ctx, const GradedSubspace& N) {
  std::vector<UEAElement> gens;
  for (const GeneratorInfo& g : ctx->generators())
    if (g.weight <= ctx->cap()) gens.push_back(ctx->generator_element(g.name));
  GradedSubspace D = lie_subalgebra_closure(ctx, gens);  // F itself
  if (N.contains_subspace(D)) return 0;
  for (int j = 1;; ++j) {
    GradedSubspace next = bracket_span(ctx, D, D);
    if (N.contains_subspace(next)) return j;
    if (next == D) return std::nullopt;
    D = std::move(next);
  }
}

UEAElement kill_summand(const UEAElement& u, Index kill) {
  const ContextPtr& ctx = u.ctx();
  UEAElement out(ctx);
  out.set_constant(u.constant());
  for (const auto& [w, c] : u.terms()) {
    bool dead = false;
    for (const Syllable& s : w.syls)
      if (s.source == kill) {
        dead = true;
        break;
      }
    if (dead) continue;  // a zero factor kills the whole word
    UEAElement term(ctx);
    term.add_term(w, c);
    out += term;
  }
  return out;
}

InvarianceCheck check_elementary_invariance(const ContextPtr& ctx, const GradedSubspace& N) {
  InvarianceCheck res;
  for (Index kill = 0; kill < static_cast<Index>(ctx->summand_count()); ++kill) {
    for (int d = 1; d <= ctx->cap(); ++d) {
      for (const SparseVec& row : N.at(d).rows()) {
        UEAElement img = kill_summand(row_element(ctx, d, row), kill);
        if (img.is_zero()) continue;
        if (!N.contains(to_graded(img))) {
          res.passed = false;
          res.summand = kill;
          res.witness = img;
          return res;
        }
      }
    }
  }
  return res;
}

std::vector<UEAElement> FreeGeneratingSet::elements(const ContextPtr& ctx) const {
  std::vector<UEAElement> out;
  out.reserve(gens.size());
  for (const Lift& l : gens) out.push_back(row_element(ctx, l.degree, l.vec));
  return out;
}

FreeGeneratingSet free_generating_set(const ContextPtr& ctx, const GradedSubspace& B) {
  GradedSubspace derived = bracket_span(ctx, B, B);
  if (!B.contains_subspace(derived))
    throw structural_error("free generating set needs a bracket-closed subalgebra");
  for (size_t i = 0; i < ctx->summand_count(); ++i) {
    GradedSubspace meet = subspace_intersect(B, summand_space(ctx, static_cast<Index>(i)));
    if (meet.total_dim() != 0)
      throw structural_error("subalgebra meets summand '" +
                             ctx->presentation().summands[i].name +
                             "' nontrivially and is not guaranteed free");
  }
  FreeGeneratingSet out;
  out.gens = complement_lifts(derived, B, &B);
  out.derived = std::move(derived);
  return out;
}

QuotientContext::QuotientContext(ContextPtr ctx, FlatSubspace modulus, bool verify_ideal)
    : ctx_(std::move(ctx)), mod_(std::move(modulus)) {
  if (verify_ideal) {
    auto mults = generator_multipliers(ctx_);
    for (const SparseVec& row : mod_.basis().rows()) {
      UEAElement u = from_graded(ctx_, mod_.unflatten(row));
      for (const auto& [w, m] : mults) {
        (void)w;
        if (!mod_.contains(to_graded(m * u)) || !mod_.contains(to_graded(u * m)))
          throw structural_error("quotient modulus is not a two-sided ideal");
      }
    }
  }
}

void QuotientContext::set_further(FlatSubspace further) {
  if (!further.contains_subspace(mod_))
    throw structural_error("further quotient must refine the modulus");
  further_ = std::move(further);
}

UEAElement QuotientContext::reduce(const UEAElement& u) const {
  return from_graded(ctx_, mod_.reduce(to_graded(u)));
}

bool QuotientContext::further_zero(const UEAElement& u) const {
  if (!further_) return mod_.contains(to_graded(u));
  return further_->contains(to_graded(u));
}

DeltaFiltration DeltaFiltration::from_graded(std::vector<GradedSubspace> levels) {
  DeltaFiltration f;
  f.g_ = std::move(levels);
  return f;
}

DeltaFiltration DeltaFiltration::from_flat(std::vector<FlatSubspace> levels) {
  DeltaFiltration f;
  f.f_ = std::move(levels);
  return f;
}

int DeltaFiltration::depth() const {
  return static_cast<int>(g_.empty() ? f_.size() : g_.size());
}

bool DeltaFiltration::in_level(const UEAElement& u, int k) const {
  if (k < 1 || k > depth()) throw input_error("filtration level out of range");
  GradedVector v = to_graded(u);
  return g_.empty() ? f_[k - 1].contains(v) : g_[k - 1].contains(v);
}

namespace {

// span of all products X_{i_1}···X_{i_s} with i_1+…+i_s ≥ j, no ideal
// closure yet; G_j = Σ_{i≥j} X_i + Σ_{i<j} X_i·G_{j−i} by first-factor split
std::vector<GradedSubspace> product_spans(const ContextPtr& ctx,
                                          const std::vector<GradedSubspace>& family, int depth) {
  for (size_t i = 0; i + 1 < family.size(); ++i)
    if (!family[i].contains_subspace(family[i + 1]))
      throw structural_error("filtration family is not nested");
  const int cap = ctx->cap();
  std::vector<GradedSubspace> G;
  for (int j = 1; j <= depth; ++j) {
    GradedSubspace g = make_space(ctx);
    for (size_t i = j; i <= family.size(); ++i)
      for (int d = 1; d <= cap; ++d)
        for (const SparseVec& row : family[i - 1].at(d).rows()) g.insert_at(d, row);
    for (int i = 1; i < j && i <= static_cast<int>(family.size()); ++i) {
      const GradedSubspace& X = family[i - 1];
      const GradedSubspace& rest = G[j - i - 1];
      for (int d1 = 1; d1 < cap; ++d1)
        for (const UEAElement& x : degree_elements(ctx, X, d1))
          for (int d2 = 1; d1 + d2 <= cap; ++d2)
            for (const SparseVec& row : rest.at(d2).rows())
              g.insert(to_graded(x * row_element(ctx, d2, row)));
    }
    G.push_back(std::move(g));
  }
  return G;
}

std::vector<std::pair<int, UEAElement>> multiplier_list(const std::vector<UEAElement>& mults) {
  std::vector<std::pair<int, UEAElement>> out;
  for (const UEAElement& m : mults) {
    if (m.is_zero()) continue;
    out.emplace_back(homogeneous_degree(m, "ambient multiplier"), m);
  }
  return out;
}

}  // namespace

DeltaFiltration delta_filtration(const ContextPtr& ctx, const std::vector<GradedSubspace>& family,
                                 const std::vector<UEAElement>& ambient_multipliers,
                                 const GradedSubspace* modulus, int depth) {
  if (depth < 1) throw input_error("filtration depth must be positive");
  auto mults = multiplier_list(ambient_multipliers);
  std::vector<GradedSubspace> G = product_spans(ctx, family, depth);
  std::vector<GradedSubspace> levels;
  for (int j = 1; j <= depth; ++j) {
    GradedSubspace seed = modulus ? subspace_sum(G[j - 1], *modulus) : G[j - 1];
    GradedSubspace level = close_ideal_graded(ctx, seed, mults);
    if (modulus) level = subspace_sum(level, *modulus);
    levels.push_back(std::move(level));
  }
  return DeltaFiltration::from_graded(std::move(levels));
}

DeltaFiltration delta_filtration_flat(const ContextPtr& ctx,
                                      const std::vector<GradedSubspace>& family,
                                      const std::vector<UEAElement>& ambient_multipliers,
                                      const FlatSubspace& modulus, int depth) {
  if (depth < 1) throw input_error("filtration depth must be positive");
  auto mults = multiplier_list(ambient_multipliers);
  std::vector<GradedSubspace> G = product_spans(ctx, family, depth);
  std::vector<FlatSubspace> levels;
  for (int j = 1; j <= depth; ++j) {
    FlatSubspace seed = flat_sum(flatten(G[j - 1]), modulus);
    levels.push_back(close_ideal_flat(ctx, std::move(seed), mults));
  }
  return DeltaFiltration::from_flat(std::move(levels));
}

std::string Valuation::str() const {
  switch (kind) {
    case Kind::Infinite:
      return "inf";
    case Kind::Finite:
      return std::to_string(value);
    case Kind::AtLeastDepth:
      return ">=" + std::to_string(value);
  }
  return "?";
}

Valuation valuation_psi(const UEAElement& u, const DeltaFiltration& filt,
                        const QuotientContext& q) {
  if (q.is_zero(u)) return {Valuation::Kind::Infinite, 0};
  if (!q.further_zero(u)) return {Valuation::Kind::Finite, 0};
  if (!filt.in_level(u, 1))
    throw structural_error(
        "element dies in the further quotient but misses the first filtration level");
  for (int k = 1; k < filt.depth(); ++k)
    if (!filt.in_level(u, k + 1)) return {Valuation::Kind::Finite, k};
  return {Valuation::Kind::AtLeastDepth, filt.depth()};
}

}  // namespace liefox
