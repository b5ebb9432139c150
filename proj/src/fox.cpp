#include "liefox/fox.hpp"

#include <algorithm>
#include <string>

namespace liefox {

namespace {

void add_scaled(std::map<Index, UEAElement>& parts, const ContextPtr& ctx, Index k,
                const UEAElement& e, const Scalar& c) {
  auto [it, fresh] = parts.try_emplace(k, UEAElement(ctx));
  (void)fresh;
  it->second += e.scaled(c);
}

// first degree whose residue row is nonzero, or -1 when the reduction is 0
int first_residue_degree(const GradedVector& residue) {
  for (const auto& [d, row] : residue.comps)
    if (!row.empty()) return d;
  return -1;
}

}  // namespace

UEAElement FoxImage::part(Index source) const {
  auto it = parts.find(source);
  return it == parts.end() ? UEAElement(ctx) : it->second;
}

UEAElement SubalgebraFoxImage::part(size_t z) const {
  auto it = parts.find(z);
  return it == parts.end() ? UEAElement(ctx) : it->second;
}

UEAElement free_source_element(const ContextPtr& ctx, Index source) {
  for (const auto& g : ctx->generators())
    if (g.is_free && g.source == source) return ctx->generator_element(g.name);
  throw input_error("source " + std::to_string(source) + " is not a free generator");
}

FoxImage fox_derivatives(const UEAElement& u) {
  const ContextPtr& ctx = u.ctx();
  if (!ctx) throw input_error("derivatives of an element without a context");
  FoxImage img{ctx, u.constant(), {}};
  const Index ns = static_cast<Index>(ctx->summand_count());
  for (const auto& [w, c] : u.terms()) {
    const Syllable& head = w.syls.front();
    auto [it, fresh] = img.parts.try_emplace(head.source, UEAElement(ctx));
    (void)fresh;
    if (head.source < ns) {
      it->second.add_term(w, c);  // summand-led words stay whole
    } else {
      std::vector<Syllable> rest(w.syls.begin() + 1, w.syls.end());
      if (rest.empty())
        it->second += ctx->one().scaled(c);
      else
        it->second.add_term(ctx->make_word(std::move(rest)), c);
    }
  }
  return img;
}

UEAElement fox_reconstruct(const FoxImage& img) {
  const ContextPtr& ctx = img.ctx;
  UEAElement out(ctx);
  out += ctx->one().scaled(img.constant);
  const Index ns = static_cast<Index>(ctx->summand_count());
  for (const auto& [k, part] : img.parts) {
    if (k < ns)
      out += part;
    else
      out += free_source_element(ctx, k) * part;
  }
  return out;
}

namespace {

// all words over the base alphabet with the given total degree,
// shorter first, then lexicographic
std::vector<std::vector<size_t>> base_words(const std::vector<int>& zdeg, int degree) {
  std::vector<std::vector<size_t>> out;
  std::vector<size_t> cur;
  auto rec = [&](auto&& self, int rem) -> void {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (size_t i = 0; i < zdeg.size(); ++i) {
      if (zdeg[i] > rem) continue;
      cur.push_back(i);
      self(self, rem - zdeg[i]);
      cur.pop_back();
    }
  };
  rec(rec, degree);
  std::sort(out.begin(), out.end(), [](const std::vector<size_t>& a, const std::vector<size_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

}  // namespace

SubalgebraFoxImage subalgebra_fox(const ContextPtr& ctx, const UEAElement& f,
                                  const FreeGeneratingSet& base) {
  std::vector<UEAElement> z = base.elements(ctx);
  std::vector<int> zdeg;
  zdeg.reserve(base.gens.size());
  for (const Lift& l : base.gens) zdeg.push_back(l.degree);

  SubalgebraFoxImage img{ctx, f.constant(), {}};
  GradedVector fv = to_graded(f);
  AmbientDims dims = ctx->ambient_dims();
  for (const auto& [d, row] : fv.comps) {
    if (d == 0) continue;
    std::vector<std::vector<size_t>> words = base_words(zdeg, d);
    TrackedEchelon ech(dims[d]);
    std::vector<UEAElement> elems;
    elems.reserve(words.size());
    for (const auto& wd : words) {
      UEAElement prod = ctx->one();
      for (size_t i : wd) prod = prod * z[i];
      elems.push_back(std::move(prod));
      GradedVector gv = to_graded(elems.back());
      auto it = gv.comps.find(d);
      ech.feed(it == gv.comps.end() ? SparseVec{} : it->second);
    }
    auto combo = ech.coords_over_generators(row);
    if (!combo)
      throw structural_error("element is outside the subalgebra: membership first fails at degree " +
                             std::to_string(d));
    for (const Entry& e : *combo) {
      const auto& wd = words[e.col];
      UEAElement tail = ctx->one();
      for (size_t i = 1; i < wd.size(); ++i) tail = tail * z[wd[i]];
      auto [it, fresh] = img.parts.try_emplace(wd[0], UEAElement(ctx));
      (void)fresh;
      it->second += tail.scaled(e.val);
    }
  }
  return img;
}

std::unique_ptr<FoxEnvironment> FoxEnvironment::make(ContextPtr ctx, GradedSubspace H,
                                                     GradedSubspace N) {
  std::unique_ptr<FoxEnvironment> env(new FoxEnvironment());
  env->ctx = ctx;
  env->F = LieAmbient::build(ctx).space();
  env->H = std::move(H);
  env->N = std::move(N);
  env->HN = subspace_intersect(env->H, env->N);
  env->NU = uea_ideal(ctx, env->N);
  env->UH = unital_subalgebra(ctx, env->H);
  env->ideal_HN = lie_ideal_closure(ctx, space_elements(ctx, env->HN));
  std::vector<UEAElement> mgens;
  for (Index i = 0; i < ctx->summand_count(); ++i) {
    GradedSubspace cut = subspace_intersect(env->N, summand_space(ctx, i));
    for (UEAElement& e : space_elements(ctx, cut)) mgens.push_back(std::move(e));
  }
  env->M = subspace_sum(lie_ideal_closure(ctx, mgens), bracket_span(ctx, env->N, env->N));
  GradedSubspace sum = subspace_sum(env->H, env->N);
  env->chain = AdaptedChain::build(ctx, {env->HN, env->H, sum, env->F},
                                   {nullptr, nullptr, &env->N, nullptr}, LayerOrder::InnerFirst,
                                   &env->F);
  env->table = std::make_unique<MonomialTable>(env->chain);
  return env;
}

namespace {

// Σ_m targets[m] + Σ_j g_j·targets[j]
UEAElement combined_target(const FoxEnvironment& env, const std::map<Index, UEAElement>& targets) {
  UEAElement out(env.ctx);
  const Index ns = static_cast<Index>(env.ctx->summand_count());
  for (const auto& [k, t] : targets) {
    if (k >= env.ctx->source_count()) throw input_error("target source out of range");
    if (k < ns)
      out += t;
    else
      out += free_source_element(env.ctx, k) * t;
  }
  return out;
}

// Shape demands on a target family. `derived` marks families produced by
// the construction itself, where a violation is a broken invariant rather
// than bad input.
void validate_targets(const FoxEnvironment& env, const std::map<Index, UEAElement>& targets,
                      PreimageMode mode, bool derived) {
  auto reject = [&](const std::string& msg) -> void {
    if (derived) throw structural_error("regrouped family lost admissibility: " + msg);
    throw input_error(msg);
  };
  const Index ns = static_cast<Index>(env.ctx->summand_count());
  for (const auto& [k, t] : targets) {
    if (k >= env.ctx->source_count()) reject("target source out of range");
    if (t.is_zero()) continue;
    if (k < ns) {
      if (!env.H.contains_subspace(summand_space(env.ctx, k)))
        reject("target names summand '" + env.ctx->source_name(k) +
               "' which is not part of the subalgebra");
      if (!t.constant().is_zero())
        reject("summand target for '" + env.ctx->source_name(k) + "' has a constant part");
      for (const auto& [w, c] : t.terms())
        if (w.syls.front().source != k)
          reject("summand target for '" + env.ctx->source_name(k) +
                 "' is not led by its own summand");
    } else if (!env.H.contains(to_graded(free_source_element(env.ctx, k)))) {
      reject("target names free generator '" + env.ctx->source_name(k) +
             "' which is not part of the subalgebra");
    }
    if (mode == PreimageMode::Subalgebra && !env.UH.contains(to_graded(t)))
      reject("target for '" + env.ctx->source_name(k) +
             "' escapes the enveloping algebra of the subalgebra");
  }
}

// Left-normed bracket rebuild of an element of N_U ∩ U(H) expanded over the
// adapted monomials (all of which start with an intersection letter).
UEAElement preimage_from_combined(const FoxEnvironment& env, const UEAElement& u1) {
  UEAElement v(env.ctx);
  GradedVector gv = to_graded(u1);
  for (const auto& [d, row] : gv.comps) {
    if (d == 0) throw structural_error("combined target keeps a constant despite the congruence");
    auto co = env.table->coords(u1, d);
    if (!co) throw structural_error("combined target escapes the adapted basis");
    for (const auto& [idx, val] : *co) {
      const StandardMonomial& m = env.table->monomials(d)[idx];
      if (m.layer_counts[0] < 1 || m.layer_counts[2] != 0 || m.layer_counts[3] != 0)
        throw structural_error(
            "combined target expansion has support outside the intersection-led block");
      UEAElement b = env.chain.letter_element(m.letters[0]);
      for (size_t i = 1; i < m.letters.size(); ++i)
        b = lie_bracket(b, env.chain.letter_element(m.letters[i]));
      v += b.scaled(val);
    }
  }
  return v;
}

// Ideal mode: rewrite every target modulo the relator ideal as a sum of
// subalgebra-shaped coefficients times outer-letter tails, run the
// subalgebra construction per tail, and bracket the results back in.
// Summand targets keep each word's leading syllable intact and expand only
// the remainder, so the grouped coefficients stay led by their own summand.
UEAElement preimage_ideal(const FoxEnvironment& env, const std::map<Index, UEAElement>& targets) {
  const Index ns = static_cast<Index>(env.ctx->summand_count());
  std::map<std::vector<size_t>, std::map<Index, UEAElement>> families;

  // Expand `body` over the adapted monomials, drop the pieces inside the
  // relator ideal, and bank prefix·(inner part) under each monomial's
  // outer-letter tail.
  auto scatter = [&](Index k, const UEAElement* prefix, const UEAElement& body) {
    if (!body.constant().is_zero()) {
      UEAElement head = prefix ? *prefix : env.ctx->one();
      add_scaled(families[{}], env.ctx, k, head, body.constant());
    }
    GradedVector gv = to_graded(body);
    for (const auto& [d, row] : gv.comps) {
      if (d == 0) continue;
      auto co = env.table->coords(body, d);
      if (!co) throw structural_error("target escapes the adapted basis");
      for (const auto& [idx, val] : *co) {
        const StandardMonomial& m = env.table->monomials(d)[idx];
        // monomials containing an intersection or source-constrained letter
        // lie in the relator ideal: dropping them preserves every congruence
        if (m.layer_counts[0] > 0 || m.layer_counts[2] > 0) continue;
        std::vector<size_t> tail;
        UEAElement w = env.ctx->one();
        for (size_t li : m.letters) {
          if (env.chain.letters()[li].layer == 1)
            w = w * env.chain.letter_element(li);
          else
            tail.push_back(li);
        }
        if (prefix) w = (*prefix) * w;
        add_scaled(families[tail], env.ctx, k, w, val);
      }
    }
  };

  for (const auto& [k, t] : targets) {
    if (t.is_zero()) continue;
    if (k < ns) {
      for (const auto& [w, c] : t.terms()) {
        UEAElement lead(env.ctx);
        lead.add_term(env.ctx->make_word({w.syls.front()}), c);
        UEAElement tail_elem = env.ctx->one();
        if (w.syls.size() > 1) {
          std::vector<Syllable> rest(w.syls.begin() + 1, w.syls.end());
          tail_elem = UEAElement(env.ctx);
          tail_elem.add_term(env.ctx->make_word(std::move(rest)), env.ctx->scalar(1));
        }
        scatter(k, &lead, tail_elem);
      }
    } else {
      scatter(k, nullptr, t);
    }
  }

  UEAElement v(env.ctx);
  for (const auto& [tail, fam] : families) {
    validate_targets(env, fam, PreimageMode::Subalgebra, /*derived=*/true);
    UEAElement u1 = combined_target(env, fam);
    if (!env.NU.contains(to_graded(u1)))
      throw structural_error("regrouped family misses the relator ideal");
    UEAElement vl = preimage_from_combined(env, u1);
    for (size_t li : tail) vl = lie_bracket(vl, env.chain.letter_element(li));
    v += vl;
  }
  return v;
}

}  // namespace

UEAElement construct_preimage(const FoxEnvironment& env,
                              const std::map<Index, UEAElement>& targets, PreimageMode mode) {
  validate_targets(env, targets, mode, /*derived=*/false);
  UEAElement u1 = combined_target(env, targets);
  int bad = first_residue_degree(env.NU.reduce(to_graded(u1)));
  if (bad >= 0)
    throw verification_error("combined target misses the relator ideal: first failure at degree " +
                             std::to_string(bad));
  UEAElement v = mode == PreimageMode::Subalgebra ? preimage_from_combined(env, u1)
                                                  : preimage_ideal(env, targets);
  const GradedSubspace& location = mode == PreimageMode::Subalgebra ? env.HN : env.ideal_HN;
  if (!location.contains(to_graded(v)))
    throw structural_error("constructed preimage lands outside its claimed location");
  FoxImage dv = fox_derivatives(v);
  for (const auto& [k, t] : targets) {
    if (!env.NU.contains(to_graded(dv.part(k) - t)))
      throw structural_error("constructed preimage fails the congruence at source '" +
                             env.ctx->source_name(k) + "'");
  }
  return v;
}

UEAElement construct_preimage(const ContextPtr& ctx, const std::map<Index, UEAElement>& targets,
                              PreimageMode mode, const GradedSubspace& H,
                              const GradedSubspace& N) {
  auto env = FoxEnvironment::make(ctx, H, N);
  return construct_preimage(*env, targets, mode);
}

GradedSubspace fox_kernel_subspace(const ContextPtr& ctx, const GradedSubspace& F_space,
                                   const GradedSubspace& NU, int d) {
  if (d < 1 || d > ctx->cap()) throw input_error("degree outside the truncation");
  AmbientDims dims = ctx->ambient_dims();
  const Index ns = static_cast<Index>(ctx->summand_count());

  // residue degree and block offset per source
  std::vector<int> rdeg(ctx->source_count());
  std::vector<Index> off(ctx->source_count() + 1, 0);
  for (Index k = 0; k < ctx->source_count(); ++k) {
    rdeg[k] = k < ns ? d : d - ctx->source_min_weight(k);
    Index width = rdeg[k] >= 0 ? dims[rdeg[k]] : 0;
    off[k + 1] = off[k] + width;
  }

  const EchelonBasis& Fd = F_space.at(d);
  TrackedEchelon ech(off.back());
  GradedSubspace out = make_space(ctx);
  for (const SparseVec& row : Fd.rows()) {
    FoxImage img = fox_derivatives(row_element(ctx, d, row));
    SparseVec stacked;
    for (const auto& [k, part] : img.parts) {
      if (rdeg[k] < 0) continue;
      GradedVector pv = to_graded(part);
      auto it = pv.comps.find(rdeg[k]);
      if (it == pv.comps.end()) continue;
      for (const Entry& e : NU.at(rdeg[k]).reduce(it->second))
        stacked.push_back({off[k] + e.col, e.val});
    }
    if (auto combo = ech.feed(stacked)) {
      SparseVec kernel_row;
      for (const Entry& e : *combo) sparse_axpy(kernel_row, e.val, Fd.rows()[e.col]);
      out.insert_at(d, std::move(kernel_row));
    }
  }
  return out;
}

GradedSubspace fox_kernel_subspace(const ContextPtr& ctx, const GradedSubspace& N, int d) {
  return fox_kernel_subspace(ctx, LieAmbient::build(ctx).space(), uea_ideal(ctx, N), d);
}

FoxDecomposition theorem4_decompose(const FoxEnvironment& env, const UEAElement& v,
                                    const std::vector<Index>& K) {
  if (!env.F.contains(to_graded(v))) throw input_error("decomposition input is not a Lie element");
  std::vector<bool> selected(env.ctx->source_count(), false);
  for (Index k : K) {
    if (k >= env.ctx->source_count()) throw input_error("selected source out of range");
    selected[k] = true;
  }
  FoxImage img = fox_derivatives(v);
  for (const auto& [k, part] : img.parts) {
    if (selected[k]) continue;
    int bad = first_residue_degree(env.NU.reduce(to_graded(part)));
    if (bad >= 0)
      throw verification_error("derivative survives outside the selected blocks: source '" +
                               env.ctx->source_name(k) + "', first failure at degree " +
                               std::to_string(bad));
  }
  auto split = sum_decompose(to_graded(v), env.H, env.N);
  if (!split) throw structural_error("element passes the derivative test but escapes H+N");
  UEAElement v0 = from_graded(env.ctx, split->first);
  FoxImage rest = fox_derivatives(v - v0);
  std::map<Index, UEAElement> targets;
  for (Index k : K) targets[k] = rest.part(k);
  UEAElement v1 = construct_preimage(env, targets, PreimageMode::Ideal);
  if (!env.M.contains(to_graded(v - v0 - v1)))
    throw structural_error("certificate failure: the remainder escapes the congruence ideal");
  return {std::move(v0), std::move(v1)};
}

FoxDecomposition theorem4_decompose(const UEAElement& v, const std::vector<Index>& K,
                                    const GradedSubspace& H, const GradedSubspace& N) {
  auto env = FoxEnvironment::make(v.ctx(), H, N);
  return theorem4_decompose(*env, v, K);
}

}  // namespace liefox
