#include "detstrata/verdicts.hpp"

#include <algorithm>
#include <sstream>

#include "detstrata/errors.hpp"
#include "detstrata/io.hpp"
#include "json.hpp"

namespace detstrata {

namespace {

using nlohmann::ordered_json;

const std::string kCompthm = "module_deformation_equivalence";
const std::string kCodimBound = "codimension_bound";
const std::string kSmooth = "smooth_component";
const std::string kSmoothMorphism = "smooth_morphism_component";
const std::string kCodimTwo = "codim_two_quotient";
const std::string kGlicci = "glicci_general_element";

template <typename T, typename Pred>
void require(const Fact<T>& f, const std::string& name, Pred ok, const std::string& want) {
  if (!f.verified) throw HypothesisNotVerified(name + " not decided within bounds", true);
  if (!ok(f.value)) throw HypothesisNotVerified(name + " fails: needs " + want);
}

void require_hom_k(const Hypotheses& h) {
  require(h.homAMM_is_k, "0Hom_A(M,M) = k", [](bool v) { return v; }, "0Hom_A(M,M) = k");
}

void require_ext1_zero(const Hypotheses& h) {
  require(h.ext1A_MM, "0Ext^1_A(M,M) = 0", [](std::size_t v) { return v == 0; },
          "vanishing, found " + std::to_string(h.ext1A_MM.value));
}

bool ext2_vanishes(const Hypotheses& h) { return h.ext2A_MM && h.ext2A_MM->verified && h.ext2A_MM->value == 0; }

void set_smooth_point(PartialVerdict& pv, const Hypotheses& h) {
  pv.verdicts.generically_smooth = true;
  pv.verdicts.is_component = true;
  pv.verdicts.codim_in_GradAlg = CodimEstimate{0, 0, true};
  pv.verdicts.dim_GradAlg = static_cast<std::int64_t>(h.hom_I_A.value);
}

std::string method_tag(const ExtValue& e) {
  if (e.method == "artinian") return "linear-algebra";
  if (e.method == "certified") return "groebner";
  return "truncated";
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

bool degree_gap(const DegreeMatrixSpec& spec, int alpha) {
  const int t = static_cast<int>(spec.t());
  const int m = std::min(alpha, t);
  for (int i = m; i <= t; ++i)
    if (spec.a.at(static_cast<std::size_t>(i - m)) < spec.b.at(static_cast<std::size_t>(i - 1))) return false;
  return true;
}

bool SufficientConditionScan::fires(const std::string& clause) const {
  for (const ScanEntry& e : entries)
    if (e.clause == clause) return e.fires;
  return false;
}

SufficientConditionScan sufficient_condition_scan(const DegreeMatrixSpec& spec) {
  spec.validate();
  SufficientConditionScan s;
  const int c = spec.c();
  const std::size_t t = spec.t();
  s.dim_A = spec.n + 1 - c;
  s.gap2 = degree_gap(spec, 2);
  s.gap3 = degree_gap(spec, 3);
  if (s.gap3) s.alpha = 3;
  else if (s.gap2) s.alpha = 2;
  if (s.alpha)
    for (int j = 2; j <= c; ++j) s.singular_codim_bounds.push_back(std::min(2 * *s.alpha - 1, j + 2));

  const bool corner_gap = spec.a.front() > spec.b.back();
  s.entries.push_back({"dimension_formula", s.dim_A >= 2 && s.gap2,
                       "n - c >= 1 and a_{i-2} >= b_i: dim W_s = λ_c + ΣK"});
  s.entries.push_back({"codimension_bound_clause", s.dim_A >= 2 && s.gap2,
                       "dim A >= 2 and a_{i-2} >= b_i: 0Ext^1_A(M,M) = 0 and the codimension bound applies"});
  s.entries.push_back({"smooth_component_clause", s.dim_A >= 3 && s.gap3,
                       "dim A >= 3 and a_{i-min(3,t)} >= b_i: smooth point and component of dimension λ"});
  s.entries.push_back({"smooth_morphism_clause", s.dim_A >= 3 && s.gap3,
                       "dim A >= 3 and a_{i-min(3,t)} >= b_i: e_M is smooth"});
  s.entries.push_back({"glicci_clause", s.dim_A >= 3 && s.gap3,
                       "dim X >= 2 and a_{i-min(3,t)} >= b_i: the general element is glicci"});

  bool zero_dim = false;
  if (spec.n == c && corner_gap && t >= 2) {
    const int lo = spec.a.at(t - 2);
    if (c >= 3 && c <= 5) zero_dim = spec.a.at(t + static_cast<std::size_t>(c) - 2) > lo;
    else if (c > 5) zero_dim = spec.a.at(t + 3) > lo;
  }
  s.entries.push_back({"zero_dimensional_dimension_clause", zero_dim,
                       "n = c, a_0 > b_t and a_{t+c-2} > a_{t-2} (a_{t+3} for c > 5): dim W = λ_c + ΣK"});

  bool linear = t == 2 && spec.n == c && c > 2;
  for (std::size_t i = 0; i < t && linear; ++i)
    for (std::size_t j = 0; j < spec.columns() && linear; ++j) linear = spec.degree(i, j) == 1;
  s.entries.push_back({"known_exception", linear,
                       "linear 2 x (c+1) with n = c > 2: dim W is strictly below λ_c + ΣK"});
  return s;
}

PartialVerdict module_deformation_equivalence(const Hypotheses& h, const StratumInvariants& inv) {
  require_hom_k(h);
  require_ext1_zero(h);
  PartialVerdict pv{kCompthm, {}, {}};
  pv.verdicts.dim_Ws = inv.lambda;
  if (ext2_vanishes(h)) {
    pv.verdicts.every_def_from_matrix = true;
    set_smooth_point(pv, h);
    pv.notes.push_back("0Ext^2_A(M,M) = 0: Def_{A/R} is formally smooth");
  } else if (!h.ext2A_MM || !h.ext2A_MM->verified) {
    pv.notes.push_back("0Ext^2_A(M,M) not decided; every-deformation clause left open");
  }
  return pv;
}

PartialVerdict codimension_bound(const Hypotheses& h, const StratumInvariants& inv) {
  require_hom_k(h);
  require_ext1_zero(h);
  PartialVerdict pv{kCodimBound, {}, {}};
  pv.verdicts.dim_Ws = inv.lambda;
  const std::int64_t gap = static_cast<std::int64_t>(h.hom_I_A.value) - inv.lambda;
  CodimEstimate est{0, gap, false};
  pv.notes.push_back("0hom(I,A) - λ = " + std::to_string(gap) + " <= ext^2(M,M) = " +
                     std::to_string(h.ext2_MM_bound.value));
  if (h.ext1A_conormal && h.ext1A_conormal->verified && h.ext1A_conormal->value == 0) {
    est = CodimEstimate{gap, gap, true};
    pv.verdicts.generically_smooth = true;
    pv.verdicts.dim_GradAlg = static_cast<std::int64_t>(h.hom_I_A.value);
    pv.notes.push_back("0Ext^1_A(I/I^2,A) = 0: GradAlg(H) is smooth at (A), codimension exact");
  }
  pv.verdicts.codim_in_GradAlg = est;
  return pv;
}

PartialVerdict smooth_component(const Hypotheses& h, const StratumInvariants& inv) {
  require_hom_k(h);
  require_ext1_zero(h);
  if (!h.ext2A_MM || !h.ext2A_MM->verified)
    throw HypothesisNotVerified("0Ext^2_A(M,M) = 0 not decided within bounds", true);
  if (h.ext2A_MM->value != 0)
    throw HypothesisNotVerified("0Ext^2_A(M,M) = 0 fails: found " + std::to_string(h.ext2A_MM->value));
  PartialVerdict pv{kSmooth, {}, {}};
  pv.verdicts.dim_Ws = inv.lambda;
  pv.verdicts.every_def_from_matrix = true;
  set_smooth_point(pv, h);
  return pv;
}

PartialVerdict smooth_morphism_component(const Hypotheses& h, const StratumInvariants& inv) {
  require_hom_k(h);
  require(h.delta0_surjective, "0Ext^2_A(M,M) -> 0Ext^2_R(M,M) injective", [](bool v) { return v; },
          "injectivity");
  if (!h.ext1A_MM.verified) throw HypothesisNotVerified("0ext^1_A(M,M) not decided within bounds", true);
  PartialVerdict pv{kSmoothMorphism, {}, {}};
  pv.verdicts.dim_Ws = inv.lambda - static_cast<std::int64_t>(h.ext1A_MM.value);
  pv.verdicts.every_def_from_matrix = true;
  set_smooth_point(pv, h);
  pv.notes.push_back("dim = λ - 0ext^1_A(M,M) = " + std::to_string(inv.lambda) + " - " +
                     std::to_string(h.ext1A_MM.value));
  return pv;
}

PartialVerdict codim_two_quotient(const Hypotheses& h, const DegreeMatrixSpec& spec) {
  if (h.c != 2) throw HypothesisNotVerified("codimension is " + std::to_string(h.c) + ", needs 2");
  const int n = spec.n;
  auto hilbert = [n](int d) { return static_cast<std::int64_t>(graded_piece_dimension(d, n)); };
  PartialVerdict pv{kCodimTwo, {}, {}};
  pv.verdicts.dim_Ws = lambda_quotient_c2(hilbert, spec);
  pv.verdicts.every_def_from_matrix = true;
  set_smooth_point(pv, h);
  return pv;
}

PartialVerdict glicci_general_element(const Hypotheses& h, const StratumInvariants&) {
  if (h.artinian || h.dim_A <= 0) throw HypothesisNotVerified("A is artinian; X = Proj(A) is empty");
  require(h.h1_condition, "0Hom_R(I, H^1_m(A)) = 0", [](bool v) { return v; }, "vanishing");
  require_hom_k(h);
  require(h.delta0_surjective, "0Ext^2_A(M,M) -> 0Ext^2_R(M,M) injective", [](bool v) { return v; },
          "injectivity");
  PartialVerdict pv{kGlicci, {}, {}};
  pv.verdicts.glicci_general_element = true;
  pv.verdicts.is_component = true;
  return pv;
}

const std::vector<std::string>& theorem_names() {
  static const std::vector<std::string> names = {kCompthm, kCodimBound, kSmooth, kSmoothMorphism, kCodimTwo, kGlicci};
  return names;
}

Hypotheses collect_hypotheses(HomExtContext& ctx, const CodimensionReport& codim) {
  if (!codim.standard) throw NotStandard("sampled matrix is not standard determinantal");
  const DegreeMatrixSpec& spec = ctx.matrix().spec();
  Hypotheses h;
  h.c = spec.c();
  h.dim_A = spec.n + 1 - h.c;
  h.artinian = codim.artinian;
  const FiveTermDegreeZero& f = ctx.five_term();
  h.homAMM_is_k = {f.hom_A_MM == 1, true, "linear-algebra", "0hom_A(M,M) = " + std::to_string(f.hom_A_MM)};
  h.ext1A_MM = {f.ext1_A, true, "linear-algebra", "0ext^1_R(M,M) - rank delta0"};
  h.delta0_injective = {f.delta0_injective, true, "linear-algebra", {}};
  h.delta0_surjective = {f.delta0_surjective, true, "linear-algebra", {}};
  h.hom_I_A = {f.hom_I_A, true, "linear-algebra", {}};
  h.ext2_MM_bound = {f.ker_ext2, true, "linear-algebra", "dim E2 - rank delta0"};
  h.depth_A = {h.dim_A, true, "closed-form", "n + 1 - (length of the Eagon-Northcott resolution)"};
  if (h.dim_A >= 2 || h.dim_A == 0)
    h.h1_condition = {true, true, "closed-form", "H^1_m(A) = 0 since depth A = " + std::to_string(h.dim_A)};
  else
    h.h1_condition = {false, false, "truncated", "depth A = 1; 0Hom_R(I, H^1_m(A)) is not computed"};

  if (h.c == 2) {
    h.ext2A_MM = Fact<std::size_t>{0, true, "closed-form", "c = 2: M is a twisted canonical module"};
  } else if (ctx.options().max_level >= 3) {
    ExtValue e = ctx.ext_A_MM(2);
    h.ext2A_MM = Fact<std::size_t>{e.dimension, e.exact, method_tag(e),
                                   e.method + " resolution to internal degree " + std::to_string(e.degree_bound)};
  }
  if (ctx.options().max_level >= 2) {
    ConormalExt cn = ctx.ext1_A_conormal();
    h.ext1A_conormal = Fact<std::size_t>{cn.ext1.dimension, cn.ext1.exact, method_tag(cn.ext1),
                                         cn.ext1.method + " resolution to internal degree " +
                                             std::to_string(cn.ext1.degree_bound)};
  }
  return h;
}

namespace {

void merge_value(std::optional<std::int64_t>& into, const std::optional<std::int64_t>& from, const std::string& what,
                 const std::string& who, std::vector<std::string>& findings) {
  if (!from) return;
  if (into && *into != *from) {
    findings.push_back(what + " disagrees: " + std::to_string(*into) + " vs " + std::to_string(*from) + " from " + who);
    return;
  }
  into = from;
}

void merge_flag(std::optional<bool>& into, const std::optional<bool>& from, const std::string& what,
                const std::string& who, std::vector<std::string>& findings) {
  if (!from) return;
  if (into && *into != *from) {
    findings.push_back(what + " disagrees with " + who);
    return;
  }
  into = from;
}

void merge_codim(std::optional<CodimEstimate>& into, const std::optional<CodimEstimate>& from, const std::string& who,
                 std::vector<std::string>& findings) {
  if (!from) return;
  if (!into) {
    into = from;
    return;
  }
  CodimEstimate m{std::max(into->lower, from->lower), std::min(into->upper, from->upper), into->exact || from->exact};
  if (m.lower > m.upper) {
    findings.push_back("codimension estimate from " + who + " does not meet the earlier interval");
    return;
  }
  if (m.exact && m.lower != m.upper) m.exact = false;
  if (into->exact && from->exact && into->lower != from->lower) {
    findings.push_back("exact codimension disagrees with " + who);
    return;
  }
  if (into->exact) m = *into;
  else if (from->exact) m = *from;
  into = m;
}

bool requested(const std::vector<std::string>& list, const std::string& name) {
  return list.empty() || std::find(list.begin(), list.end(), name) != list.end();
}

}  // namespace

void apply_verdicts(StratumReport& r, const std::vector<std::string>& theorems) {
  for (const std::string& t : theorems)
    if (std::find(theorem_names().begin(), theorem_names().end(), t) == theorem_names().end())
      throw InvalidInput("unknown theorem '" + t + "'");
  const Hypotheses& h = r.hypotheses;
  struct Rule {
    const std::string* name;
    PartialVerdict (*run)(const StratumReport&);
  };
  const Rule rules[] = {
      {&kCompthm, [](const StratumReport& s) { return module_deformation_equivalence(s.hypotheses, s.invariants); }},
      {&kCodimBound, [](const StratumReport& s) { return codimension_bound(s.hypotheses, s.invariants); }},
      {&kSmooth, [](const StratumReport& s) { return smooth_component(s.hypotheses, s.invariants); }},
      {&kSmoothMorphism, [](const StratumReport& s) { return smooth_morphism_component(s.hypotheses, s.invariants); }},
      {&kCodimTwo, [](const StratumReport& s) { return codim_two_quotient(s.hypotheses, s.spec); }},
      {&kGlicci, [](const StratumReport& s) { return glicci_general_element(s.hypotheses, s.invariants); }},
  };
  bool any_undecided = false;
  for (const Rule& rule : rules) {
    if (!requested(theorems, *rule.name)) continue;
    try {
      PartialVerdict pv = rule.run(r);
      r.provenance.fired.push_back(pv.theorem);
      for (const std::string& note : pv.notes) r.provenance.notes.push_back(pv.theorem + ": " + note);
      merge_value(r.verdicts.dim_Ws, pv.verdicts.dim_Ws, "dim W_s", pv.theorem, r.findings);
      merge_value(r.verdicts.dim_GradAlg, pv.verdicts.dim_GradAlg, "dim GradAlg(H)", pv.theorem, r.findings);
      merge_codim(r.verdicts.codim_in_GradAlg, pv.verdicts.codim_in_GradAlg, pv.theorem, r.findings);
      merge_flag(r.verdicts.generically_smooth, pv.verdicts.generically_smooth, "generically_smooth", pv.theorem,
                 r.findings);
      merge_flag(r.verdicts.is_component, pv.verdicts.is_component, "is_component", pv.theorem, r.findings);
      merge_flag(r.verdicts.every_def_from_matrix, pv.verdicts.every_def_from_matrix, "every_def_from_matrix",
                 pv.theorem, r.findings);
      merge_flag(r.verdicts.glicci_general_element, pv.verdicts.glicci_general_element, "glicci_general_element",
                 pv.theorem, r.findings);
    } catch (const HypothesisNotVerified& e) {
      r.provenance.refused.push_back({*rule.name, e.what(), e.undecided()});
      any_undecided = any_undecided || e.undecided();
    }
  }
  // Explicit requests must be decided; otherwise only an empty outcome counts.
  r.undecided = any_undecided && (!theorems.empty() || r.provenance.fired.empty());

  const Verdicts& v = r.verdicts;
  if (v.dim_Ws && v.dim_GradAlg && v.codim_in_GradAlg && v.codim_in_GradAlg->exact &&
      *v.dim_GradAlg - *v.dim_Ws != v.codim_in_GradAlg->lower)
    r.findings.push_back("dim GradAlg(H) - dim W_s differs from the exact codimension");
  if (h.homAMM_is_k.value && h.ext1A_MM.verified && h.ext1A_MM.value == 0 &&
      static_cast<std::int64_t>(h.hom_I_A.value) - r.invariants.lambda > static_cast<std::int64_t>(h.ext2_MM_bound.value))
    r.findings.push_back("0hom(I,A) - λ exceeds the ext^2(M,M) bound");
  if (h.c == 2 && h.ext1A_MM.verified && h.ext1A_MM.value != 0)
    r.findings.push_back("c = 2 but 0Ext^1_A(M,M) = " + std::to_string(h.ext1A_MM.value));
  if (!h.homAMM_is_k.value || h.ext1A_MM.value != 0) {
    bool near_linear = true;
    for (std::size_t i = 0; i < r.spec.t() && near_linear; ++i)
      for (std::size_t j = 0; j + 1 < r.spec.columns() && near_linear; ++j) near_linear = r.spec.degree(i, j) <= 1;
    r.provenance.notes.push_back(std::string("hypotheses of module_deformation_equivalence fail; ") +
                                 (near_linear ? "near-linear matrix" : "counterexample candidate to the near-linear picture"));
  }
  r.provenance.notes.push_back("verdicts attach to the sampled matrix; verified open conditions hold for the general element");
}

StratumReport verify(const DegreeMatrixSpec& spec, const VerifyOptions& options) {
  spec.validate();
  if (!nonempty(spec)) throw EmptyStratum("empty stratum: a_{i-1} >= b_i fails or all equalities hold");
  StratumReport r;
  r.spec = spec;
  StandardSample ss = sample_standard(spec, options.max_tries);
  r.codim = ss.codim;
  r.seeds_tried = ss.seeds_tried;
  if (!ss.codim.standard)
    throw NotStandard("no standard sample in " + std::to_string(ss.seeds_tried.size()) + " tries");
  r.invariants = stratum_invariants(spec, &ss.matrix);
  HomExtContext ctx(ss.matrix, options.homext);
  r.hypotheses = collect_hypotheses(ctx, ss.codim);
  r.invariants.aut_B = aut_B(spec, r.hypotheses.homAMM_is_k.value);
  r.ext1_R = ctx.ext1_R_MM().dimension;
  if (r.invariants.dim_via_HM && *r.invariants.dim_via_HM != static_cast<std::int64_t>(ctx.ext1_R_MM().dimension))
    r.findings.push_back("Σ H_M(a_j) - Σ H_M(b_i) + 1 differs from 0ext^1_R(M,M)");
  if (r.invariants.lambda != static_cast<std::int64_t>(ctx.ext1_R_MM().dimension))
    r.findings.push_back("λ differs from 0ext^1_R(M,M) = " + std::to_string(ctx.ext1_R_MM().dimension));
  if (options.homext.max_level >= 2) {
    ExtValue e1 = ctx.ext_A_MM(1);
    if (e1.exact && e1.dimension != r.hypotheses.ext1A_MM.value)
      r.findings.push_back("0ext^1_A(M,M) from the A-resolution is " + std::to_string(e1.dimension) +
                           ", five-term count gives " + std::to_string(r.hypotheses.ext1A_MM.value));
    r.provenance.notes.push_back("0ext^1_A(M,M) by resolution over A: " + std::to_string(e1.dimension) + " (" +
                                 e1.method + ")");
  }
  const FiveTermDegreeZero& f = ctx.five_term();
  if (f.first_inclusion_strict)
    r.provenance.notes.push_back("Def_{M/R}(D) -> 0Hom(I,A) is not an isomorphism (rank " + std::to_string(f.rank_eM) +
                                 " of " + std::to_string(f.ext1_R) + ", target " + std::to_string(f.hom_I_A) + ")");
  if (f.second_inclusion_strict)
    r.provenance.notes.push_back("0Hom(I,A) -> 0Hom_R(I,Hom_A(M,M)) is not an isomorphism (rank " +
                                 std::to_string(f.rank_i) + ", dim E2 " + std::to_string(f.dim_E2) + ")");
  r.scan = sufficient_condition_scan(spec);
  apply_verdicts(r, options.theorems);
  return r;
}

namespace {

ordered_json tagged(std::int64_t v, const std::string& method) { return {{"value", v}, {"method", method}}; }

template <typename T>
ordered_json fact_json(const Fact<T>& f) {
  ordered_json j;
  j["value"] = f.value;
  j["verified"] = f.verified;
  j["method"] = f.method;
  if (!f.note.empty()) j["note"] = f.note;
  return j;
}


}  // namespace

std::string to_json(const StratumReport& r, int indent) {
  ordered_json j;
  j["schema_version"] = StratumReport::kSchemaVersion;
  j["spec"] = spec_to_json(r.spec);
  j["seeds_tried"] = r.seeds_tried;

  ordered_json inv;
  inv["lambda_c"] = tagged(r.invariants.lambda_c, "closed-form");
  inv["K"] = {{"value", r.invariants.K}, {"method", "closed-form"}};
  inv["lambda"] = tagged(r.invariants.lambda, "closed-form");
  if (r.invariants.dim_via_HM) inv["dim_via_HM"] = tagged(*r.invariants.dim_via_HM, "linear-algebra");
  inv["aut_B"] = {{"value", r.invariants.aut_B.value},
                  {"method", "closed-form"},
                  {"hom_MM_verified", r.invariants.aut_B.hom_MM_verified}};
  inv["nonempty"] = r.invariants.nonempty;
  inv["ext1_R"] = tagged(static_cast<std::int64_t>(r.ext1_R), "linear-algebra");
  j["invariants"] = inv;

  ordered_json cd;
  cd["codim_maximal"] = tagged(r.codim.codim_maximal, "groebner");
  cd["codim_submaximal"] = tagged(r.codim.codim_submaximal, "groebner");
  cd["standard"] = r.codim.standard;
  cd["good"] = to_string(r.codim.good);
  cd["artinian"] = r.codim.artinian;
  j["codimension"] = cd;

  const Hypotheses& h = r.hypotheses;
  ordered_json hy;
  hy["c"] = tagged(h.c, "closed-form");
  hy["dim_A"] = tagged(h.dim_A, "closed-form");
  hy["homAMM_is_k"] = fact_json(h.homAMM_is_k);
  hy["ext1A_MM"] = fact_json(h.ext1A_MM);
  if (h.ext2A_MM) hy["ext2A_MM"] = fact_json(*h.ext2A_MM);
  hy["delta0_injective"] = fact_json(h.delta0_injective);
  hy["delta0_surjective"] = fact_json(h.delta0_surjective);
  if (h.ext1A_conormal) hy["ext1A_conormal"] = fact_json(*h.ext1A_conormal);
  hy["hom_I_A"] = fact_json(h.hom_I_A);
  hy["ext2_MM_bound"] = fact_json(h.ext2_MM_bound);
  hy["depth_A"] = fact_json(h.depth_A);
  hy["h1_condition"] = fact_json(h.h1_condition);
  j["hypotheses"] = hy;

  const Verdicts& v = r.verdicts;
  ordered_json vd = ordered_json::object();
  if (v.dim_Ws) vd["dim_Ws"] = tagged(*v.dim_Ws, "closed-form");
  if (v.codim_in_GradAlg) {
    const CodimEstimate& c = *v.codim_in_GradAlg;
    if (c.exact) vd["codim_in_GradAlg"] = {{"exact", c.lower}, {"method", "linear-algebra"}};
    else vd["codim_in_GradAlg"] = {{"interval", {c.lower, c.upper}}, {"method", "linear-algebra"}};
  }
  if (v.dim_GradAlg) vd["dim_GradAlg"] = tagged(*v.dim_GradAlg, "linear-algebra");
  if (v.generically_smooth) vd["generically_smooth"] = *v.generically_smooth;
  if (v.is_component) vd["is_component"] = *v.is_component;
  if (v.every_def_from_matrix) vd["every_def_from_matrix"] = *v.every_def_from_matrix;
  if (v.glicci_general_element) vd["glicci_general_element"] = *v.glicci_general_element;
  j["verdicts"] = vd;

  ordered_json pr;
  pr["fired"] = r.provenance.fired;
  ordered_json ref = ordered_json::array();
  for (const Refusal& x : r.provenance.refused)
    ref.push_back({{"theorem", x.theorem}, {"reason", x.reason}, {"undecided", x.undecided}});
  pr["refused"] = ref;
  pr["notes"] = r.provenance.notes;
  j["provenance"] = pr;

  ordered_json sc;
  sc["dim_A"] = tagged(r.scan.dim_A, "closed-form");
  sc["gap2"] = r.scan.gap2;
  sc["gap3"] = r.scan.gap3;
  if (r.scan.alpha) sc["alpha"] = tagged(*r.scan.alpha, "closed-form");
  sc["singular_codim_bounds"] = {{"value", r.scan.singular_codim_bounds}, {"method", "closed-form"}};
  ordered_json ent = ordered_json::array();
  for (const ScanEntry& e : r.scan.entries) ent.push_back({{"clause", e.clause}, {"fires", e.fires}, {"detail", e.detail}});
  sc["clauses"] = ent;
  j["scan"] = sc;

  j["findings"] = r.findings;
  j["undecided"] = r.undecided;
  return j.dump(indent);
}

std::string to_text(const StratumReport& r) {
  std::ostringstream os;
  const DegreeMatrixSpec& s = r.spec;
  os << "stratum " << s.to_text() << " p=" << s.p << " seed=" << s.seed << "\n";
  os << "  lambda_c " << r.invariants.lambda_c << ", K (";
  for (std::size_t i = 0; i < r.invariants.K.size(); ++i) os << (i ? "," : "") << r.invariants.K[i];
  os << "), lambda " << r.invariants.lambda << "\n";
  os << "  codim I_t " << r.codim.codim_maximal << ", codim I_{t-1} " << r.codim.codim_submaximal << ", "
     << to_string(r.codim.good) << (r.codim.artinian ? ", artinian" : "") << "\n";
  const Hypotheses& h = r.hypotheses;
  auto fact = [&os](const std::string& name, const auto& f) {
    os << "  " << name << " = " << f.value << (f.verified ? "" : " (undecided)") << " [" << f.method << "]\n";
  };
  os << "hypotheses\n";
  fact("0Hom_A(M,M) = k", h.homAMM_is_k);
  fact("0ext^1_A(M,M)", h.ext1A_MM);
  if (h.ext2A_MM) fact("0ext^2_A(M,M)", *h.ext2A_MM);
  fact("delta0 injective", h.delta0_injective);
  fact("delta0 surjective", h.delta0_surjective);
  if (h.ext1A_conormal) fact("0ext^1_A(I/I^2,A)", *h.ext1A_conormal);
  fact("0hom(I,A)", h.hom_I_A);
  fact("ext^2(M,M) bound", h.ext2_MM_bound);
  fact("depth A", h.depth_A);
  os << "verdicts\n";
  const Verdicts& v = r.verdicts;
  if (v.dim_Ws) os << "  dim W_s = " << *v.dim_Ws << "\n";
  if (v.codim_in_GradAlg) {
    const CodimEstimate& c = *v.codim_in_GradAlg;
    if (c.exact) os << "  codim in GradAlg(H) = " << c.lower << "\n";
    else os << "  codim in GradAlg(H) in [" << c.lower << ", " << c.upper << "]\n";
  }
  if (v.dim_GradAlg) os << "  dim GradAlg(H) at (A) = " << *v.dim_GradAlg << "\n";
  auto flag = [&os](const char* name, const std::optional<bool>& b) {
    if (b) os << "  " << name << " = " << (*b ? "true" : "false") << "\n";
  };
  flag("generically smooth", v.generically_smooth);
  flag("component", v.is_component);
  flag("every deformation from the matrix", v.every_def_from_matrix);
  flag("general element glicci", v.glicci_general_element);
  if (r.provenance.fired.empty()) os << "  none\n";
  os << "fired:";
  for (const auto& t : r.provenance.fired) os << " " << t;
  os << "\nrefused\n";
  for (const Refusal& x : r.provenance.refused)
    os << "  " << x.theorem << ": " << x.reason << (x.undecided ? " (undecided)" : "") << "\n";
  os << "notes\n";
  for (const auto& n : r.provenance.notes) os << "  " << n << "\n";
  os << "sufficient conditions (dim A " << r.scan.dim_A << ")";
  if (r.scan.alpha)
    os << ", alpha " << *r.scan.alpha << " singular codim bounds " << join_ints(r.scan.singular_codim_bounds);
  os << "\n";
  for (const ScanEntry& e : r.scan.entries)
    if (e.fires) os << "  " << e.clause << ": " << e.detail << "\n";
  if (!r.findings.empty()) {
    os << "findings\n";
    for (const auto& f : r.findings) os << "  " << f << "\n";
  }
  if (r.undecided) os << "undecided within bounds\n";
  return os.str();
}

}  // namespace detstrata
