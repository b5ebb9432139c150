#include "liefox/theorems.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace liefox {

namespace {

std::string member_tag(int block, int step) {
  return "(" + std::to_string(block) + "," + std::to_string(step) + ")";
}

bool is_homogeneous(const UEAElement& u) {
  return u.constant().is_zero() && !u.is_zero() && u.min_degree() == u.degree();
}

// Lie ideal generated by the relators, kept graded when every relator is
// homogeneous so comparisons can report per-degree dimensions.
struct RelatorIdeal {
  bool graded = true;
  GradedSubspace Rg;
  FlatSubspace Rflat;
};

RelatorIdeal relator_ideal(const ContextPtr& ctx, const std::vector<UEAElement>& relators) {
  RelatorIdeal out;
  out.graded = std::all_of(relators.begin(), relators.end(), is_homogeneous);
  if (out.graded) {
    out.Rg = lie_ideal_closure(ctx, relators);
    out.Rflat = flatten(out.Rg);
  } else {
    out.Rflat = flat_lie_ideal_closure(ctx, relators);
  }
  return out;
}

// Shared state for the chain comparisons: both sides of every member
// equality are computed twice, once through the enveloping-ideal route and
// once through the pure Lie route, and the two must agree.
struct Comparer {
  ContextPtr ctx;
  const GradedSubspace* H;
  FlatSubspace Hflat;
  GradedSubspace F;
  FlatSubspace Fflat;
  LieAmbient amb;
  const RelatorIdeal* R;

  Comparer(ContextPtr c, const GradedSubspace& h, const RelatorIdeal& ideal)
      : ctx(std::move(c)), H(&h), amb(LieAmbient::build(ctx)), R(&ideal) {
    Hflat = flatten(h);
    F = amb.space();
    Fflat = flatten(F);
  }

  MemberComparison compare(const SeriesChain::Member& mem) const {
    MemberComparison out;
    out.block = mem.block;
    out.step = mem.step;
    out.graded = R->graded;
    const std::string tag = member_tag(mem.block, mem.step);
    if (R->graded) {
      GradedSubspace sum = subspace_sum(R->Rg, mem.space);
      out.trivial = mem.space.contains_subspace(R->Rg);
      GradedSubspace left = subspace_intersect_alt(*H, sum);
      GradedSubspace left_env =
          subspace_intersect(*H, subspace_intersect(F, uea_ideal(ctx, sum)));
      if (!(left == left_env))
        throw structural_error(
            "the enveloping route and the Lie route disagree on the left side at member " + tag);
      GradedSubspace right = subspace_intersect_alt(*H, mem.space);
      GradedSubspace right_env =
          subspace_intersect(*H, subspace_intersect(F, uea_ideal(ctx, mem.space)));
      if (!(right == right_env))
        throw structural_error(
            "the enveloping route and the Lie route disagree on the right side at member " + tag);
      out.left_dims = left.dims();
      out.right_dims = right.dims();
      out.left_total = left.total_dim();
      out.right_total = right.total_dim();
      out.equal = (left == right);
      if (!out.equal) {
        for (int d = 1; d <= ctx->cap() && !out.witness; ++d)
          for (const SparseVec& row : left.at(d).rows()) {
            UEAElement w = row_element(ctx, d, row);
            if (!right.contains(to_graded(w))) {
              out.witness = std::move(w);
              break;
            }
          }
      }
    } else {
      FlatSubspace memflat = flatten(mem.space);
      FlatSubspace sum = flat_sum(R->Rflat, memflat);
      out.trivial = memflat.contains_subspace(R->Rflat);
      FlatSubspace left = flat_intersect_alt(Hflat, sum);
      FlatSubspace left_env =
          flat_intersect(Hflat, flat_intersect(Fflat, uea_ideal_flat(ctx, sum)));
      if (!(left == left_env))
        throw structural_error(
            "the enveloping route and the Lie route disagree on the left side at member " + tag);
      FlatSubspace right = flat_intersect_alt(Hflat, memflat);
      FlatSubspace right_env =
          flat_intersect(Hflat, flat_intersect(Fflat, uea_ideal_flat(ctx, memflat)));
      if (!(right == right_env))
        throw structural_error(
            "the enveloping route and the Lie route disagree on the right side at member " + tag);
      out.left_total = left.rank();
      out.right_total = right.rank();
      out.equal = (left == right);
      if (!out.equal) {
        auto ws = flat_witnesses(left, right);
        if (!ws.empty()) out.witness = from_graded(ctx, ws.front());
      }
    }
    if (!out.equal) {
      // the right side sits inside the left, so a witness must exist
      if (!out.witness) throw structural_error("unequal member without a witness at " + tag);
      out.witness_expr = amb.express(*out.witness);
    }
    return out;
  }
};

// Preconditions shared by both verifiers: the ideal meets every summand
// trivially and is invariant under the summand-killing endomorphisms.
void check_ideal_shape(const ContextPtr& ctx, const GradedSubspace& N,
                       std::vector<HypothesisRecord>& recs) {
  for (Index i = 0; i < static_cast<Index>(ctx->summand_count()); ++i) {
    GradedSubspace meet = subspace_intersect(N, summand_space(ctx, i));
    if (meet.total_dim() != 0)
      throw verification_error("the ideal meets summand '" + ctx->source_name(i) +
                               "' nontrivially");
  }
  recs.push_back({"ideal meets every summand trivially", true, ""});
  InvarianceCheck inv = check_elementary_invariance(ctx, N);
  if (!inv.passed)
    throw verification_error("the ideal is not invariant under killing summand '" +
                             ctx->source_name(inv.summand) + "': escaped image " +
                             inv.witness.str());
  recs.push_back({"ideal invariant under summand kills", true, ""});
}

void check_relator_in_ideal(const FlatSubspace& Nflat, const UEAElement& r) {
  if (r.is_zero()) throw input_error("relator is zero");
  if (!Nflat.contains(to_graded(r)))
    throw verification_error("relator lies outside the ideal: " + r.str());
}

std::vector<UEAElement> generator_multipliers(const ContextPtr& ctx) {
  std::vector<UEAElement> out;
  for (const GeneratorInfo& g : ctx->generators())
    if (g.weight <= ctx->cap()) out.push_back(ctx->generator_element(g.name));
  return out;
}

// First degree where the stabilized derived series still escapes N, for the
// refusal message when the vanishing certificate fails.
int derived_survivor_degree(const ContextPtr& ctx, const GradedSubspace& N) {
  GradedSubspace D = lie_subalgebra_closure(ctx, generator_multipliers(ctx));
  for (;;) {
    GradedSubspace next = bracket_span(ctx, D, D);
    if (next == D) break;
    D = std::move(next);
  }
  for (int d = 1; d <= ctx->cap(); ++d)
    for (const SparseVec& row : D.at(d).rows())
      if (!N.contains(to_graded(row_element(ctx, d, row)))) return d;
  return 0;
}

}  // namespace

ChainPosition relator_filtration_position(const UEAElement& r, const SeriesChain& chain) {
  if (r.is_zero()) throw input_error("relator is zero");
  GradedVector rg = to_graded(r);
  std::optional<size_t> last;
  for (size_t i = 0; i < chain.members.size(); ++i)
    if (flatten(chain.members[i].space).contains(rg)) last = i;
  if (!last) throw verification_error("relator lies outside the ideal: " + r.str());
  ChainPosition pos;
  pos.block = chain.members[*last].block;
  pos.step = chain.members[*last].step;
  pos.beyond = (*last + 1 == chain.members.size());
  return pos;
}

OreMatrix jacobian_matrix(const ContextPtr& ctx, const std::vector<UEAElement>& relators,
                          const GradedSubspace& N) {
  if (relators.empty()) throw input_error("no relators given");
  FlatSubspace Nflat = flatten(N);
  std::vector<std::vector<UEAElement>> entries;
  entries.reserve(relators.size());
  for (const UEAElement& r : relators) {
    check_relator_in_ideal(Nflat, r);
    FoxImage img = fox_derivatives(r);
    std::vector<UEAElement> row;
    row.reserve(static_cast<size_t>(ctx->source_count()));
    for (Index j = 0; j < ctx->source_count(); ++j) row.push_back(img.part(j));
    entries.push_back(std::move(row));
  }
  auto trivial = std::make_shared<QuotientContext>(ctx, FlatSubspace(ctx->ambient_dims()));
  return OreMatrix(std::move(trivial), std::move(entries));
}

VerificationReport verify_one_relator(const ContextPtr& ctx, const GradedSubspace& N,
                                      const std::vector<int>& sig, const UEAElement& r,
                                      const std::vector<Index>& h_summands) {
  VerificationReport rep;
  const size_t n = ctx->summand_count();
  if (n <= 2) throw verification_error("the free sum needs more than two summands");
  rep.hypotheses.push_back({"more than two summands", true, std::to_string(n) + " summands"});

  std::vector<Index> hs = h_summands;
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  if (hs.size() != n - 1 ||
      std::any_of(hs.begin(), hs.end(), [&](Index i) { return i >= static_cast<Index>(n); }))
    throw verification_error("the subalgebra must be spanned by exactly all but one summand");
  {
    std::string names;
    for (Index i : hs) names += (names.empty() ? "" : ", ") + ctx->source_name(i);
    rep.hypotheses.push_back({"subalgebra spans all but one summand", true, names});
  }

  check_ideal_shape(ctx, N, rep.hypotheses);
  FlatSubspace Nflat = flatten(N);
  check_relator_in_ideal(Nflat, r);
  rep.hypotheses.push_back({"relator lies in the ideal", true, r.str()});

  SeriesChain chain = power_chain(ctx, N, sig);
  ChainPosition pos = relator_filtration_position(r, chain);
  rep.position = pos;
  if (pos.block != 1 || pos.beyond)
    throw verification_error(
        "the relator must occupy a settled first-block chain position; found member " +
        member_tag(pos.block, pos.step) + (pos.beyond ? " with the chain exhausted" : ""));
  rep.hypotheses.push_back(
      {"relator position in the first block", true, "member " + member_tag(pos.block, pos.step)});

  GradedSubspace H = lie_subalgebra_closure(ctx, space_elements(ctx, summands_space(ctx, hs)));
  const GradedSubspace& next = chain.at(1, pos.step + 1);
  bool inside = flat_sum(flatten(H), flatten(next)).contains(to_graded(r));
  rep.hypothesis_holds = !inside;
  rep.hypotheses.push_back({"relator escapes the subalgebra plus the next chain member", !inside,
                            "next member " + member_tag(1, pos.step + 1)});

  RelatorIdeal R = relator_ideal(ctx, {r});
  Comparer cmp(ctx, H, R);
  rep.members.reserve(chain.members.size());
  for (const SeriesChain::Member& mem : chain.members) rep.members.push_back(cmp.compare(mem));

  if (inside) {
    // the subalgebra component of the relator separates the two sides at
    // the member following the relator's position
    auto split = sum_decompose(to_graded(r), H, next);
    if (!split) throw structural_error("membership without a matching decomposition");
    UEAElement h = from_graded(ctx, split->first);
    if (h.is_zero()) throw structural_error("the subalgebra component of the relator vanished");
    if (flatten(next).contains(to_graded(h)))
      throw structural_error("the subalgebra component fell into the next chain member");
    MemberComparison& mc = rep.members[chain.index_of(1, pos.step + 1)];
    if (mc.equal)
      throw structural_error("hypothesis failure without an inequality at the next member");
    mc.witness = h;
    mc.witness_expr = cmp.amb.express(h);
  }

  auto add_implication = [&](std::string name, bool premise, bool conclusion) {
    rep.implications.push_back({std::move(name), premise, conclusion, !premise || conclusion});
  };
  bool block1_equal = true;
  for (const MemberComparison& mc : rep.members)
    if (mc.block == 1 && !mc.equal) block1_equal = false;
  add_implication("hypothesis forces equality across the first block", rep.hypothesis_holds,
                  block1_equal);
  auto second = std::find_if(rep.members.begin(), rep.members.end(),
                             [](const MemberComparison& mc) { return mc.block == 2; });
  if (second != rep.members.end()) {
    bool tail_equal = true;
    for (auto it = second + 1; it != rep.members.end(); ++it)
      if (!it->equal) tail_equal = false;
    add_implication("equality at the second block start propagates onward", second->equal,
                    tail_equal);
  }
  {
    auto first_unequal = std::find_if(
        rep.members.begin(), rep.members.end(),
        [](const MemberComparison& mc) { return mc.block == 1 && !mc.equal; });
    bool premise = first_unequal != rep.members.end();
    bool tail_unequal = premise;
    if (premise)
      for (auto it = first_unequal + 1; it != rep.members.end(); ++it)
        if (it->equal) tail_unequal = false;
    add_implication("inequality propagates down the chain", premise, tail_unequal);
  }

  rep.all_equal = std::all_of(rep.members.begin(), rep.members.end(),
                              [](const MemberComparison& mc) { return mc.equal; });
  return rep;
}

std::pair<SelectionReport, VerificationReport> verify_many_relators(
    const ContextPtr& ctx, const GradedSubspace& N, const std::vector<int>& sig,
    const std::vector<UEAElement>& relators, bool solvability_asserted, int ore_degree_bound) {
  SelectionReport sel;
  VerificationReport rep;
  if (relators.empty()) throw input_error("no relators given");
  const size_t n = ctx->summand_count();
  const size_t m = relators.size();
  const Index cols = ctx->source_count();
  if (m >= n)
    throw verification_error("needs fewer relators than summands: " + std::to_string(m) +
                             " relators against " + std::to_string(n) + " summands");
  rep.hypotheses.push_back(
      {"fewer relators than summands", true, std::to_string(m) + " < " + std::to_string(n)});

  check_ideal_shape(ctx, N, rep.hypotheses);
  FlatSubspace Nflat = flatten(N);
  for (const UEAElement& r : relators) check_relator_in_ideal(Nflat, r);
  rep.hypotheses.push_back(
      {"every relator lies in the ideal", true, std::to_string(m) + " relators"});

  auto step = derived_vanishing_step(ctx, N);
  if (!step)
    throw verification_error("the derived series of the quotient still survives at degree " +
                             std::to_string(derived_survivor_degree(ctx, N)) +
                             " within the cap");
  rep.hypotheses.push_back({"derived series of the quotient vanishes within the cap", true,
                            "at step " + std::to_string(*step)});
  if (!solvability_asserted)
    throw verification_error(
        "solvability must be asserted explicitly: the vanishing certificate covers degrees up "
        "to the cap only");
  rep.hypotheses.push_back({"solvability asserted by the caller", true, ""});

  SeriesChain chain = power_chain(ctx, N, sig);
  const int s = static_cast<int>(sig.size());
  RelatorIdeal R = relator_ideal(ctx, relators);

  // Relators inside the deepest member settle every comparison by plain
  // containment; nothing needs selecting and the whole column set survives.
  bool all_deep = true;
  {
    FlatSubspace deepflat = flatten(chain.members.back().space);
    for (const UEAElement& r : relators)
      if (!deepflat.contains(to_graded(r))) {
        all_deep = false;
        break;
      }
  }

  OreMatrix jac = jacobian_matrix(ctx, relators, N);
  std::vector<Index> perm(static_cast<size_t>(cols));
  std::iota(perm.begin(), perm.end(), 0);
  size_t t_final = 0;

  if (all_deep) {
    sel.ranks.assign(static_cast<size_t>(s) + 1, 0);
    sel.ledgers.assign(static_cast<size_t>(s) + 1, {});
  } else {
    std::vector<ElementaryOp> led;
    size_t t_prev = 0;
    for (int k = 0; k <= s; ++k) {
      const GradedSubspace& boundary = (k == 0) ? chain.at(1, 1) : chain.at(k, sig[k - 1] + 1);
      FlatSubspace modulus = uea_ideal_flat(ctx, flat_sum(R.Rflat, flatten(boundary)));
      auto qk = std::make_shared<QuotientContext>(ctx, modulus);
      DeltaFiltration filt;
      if (k == 0) {
        qk->set_further(modulus);
        filt = DeltaFiltration::from_flat({modulus});
      } else {
        qk->set_further(uea_ideal_flat(ctx, flat_sum(R.Rflat, flatten(chain.at(k, 1)))));
        std::vector<GradedSubspace> family;
        for (int l = 1; l <= sig[k - 1]; ++l) family.push_back(chain.at(k, l));
        filt = delta_filtration_flat(ctx, family, generator_multipliers(ctx), modulus,
                                     sig[k - 1] + 1);
      }
      OreMatrix staged = replay(OreMatrix(qk, jac.entries()), led);
      OreMatrix tri = [&] {
        try {
          return triangularize_from(staged, filt, t_prev, ore_degree_bound);
        } catch (const exhaustion_error& e) {
          throw exhaustion_error(std::string(e.what()) + " at selection level " +
                                 std::to_string(k));
        }
      }();
      size_t rank = *triangular_rank(tri);
      sel.ranks.push_back(rank);
      if (!sel.first_nonzero_level && rank > 0) sel.first_nonzero_level = k;
      sel.ledgers.push_back(tri.ledger());
      led = tri.ledger();
      t_prev = rank;
    }
    for (const ElementaryOp& op : led)
      if (op.kind == ElementaryOp::Kind::ColSwap) std::swap(perm[op.i], perm[op.j]);
    t_final = t_prev;
  }

  sel.selected.assign(perm.begin(), perm.begin() + static_cast<long>(t_final));
  std::sort(sel.selected.begin(), sel.selected.end());
  for (Index c = 0; c < cols; ++c)
    if (!std::binary_search(sel.selected.begin(), sel.selected.end(), c))
      sel.complement.push_back(c);
  sel.complement_large_enough = sel.complement.size() + m >= static_cast<size_t>(cols);

  std::vector<Index> h_summands;
  for (Index c : sel.complement)
    if (c < static_cast<Index>(n)) h_summands.push_back(c);
  GradedSubspace H =
      h_summands.empty()
          ? make_space(ctx)
          : lie_subalgebra_closure(ctx, space_elements(ctx, summands_space(ctx, h_summands)));

  Comparer cmp(ctx, H, R);
  rep.members.reserve(chain.members.size());
  for (const SeriesChain::Member& mem : chain.members) rep.members.push_back(cmp.compare(mem));
  rep.hypothesis_holds = true;
  rep.all_equal = std::all_of(rep.members.begin(), rep.members.end(),
                              [](const MemberComparison& mc) { return mc.equal; });
  return {std::move(sel), std::move(rep)};
}

}  // namespace liefox
