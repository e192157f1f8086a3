#include <algorithm>

#include "detstrata/errors.hpp"
#include "detstrata/verdicts.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace detstrata;

namespace {

DegreeMatrixSpec make_spec(int n, std::vector<int> b, std::vector<int> a, std::uint64_t seed = 1) {
  DegreeMatrixSpec s;
  s.n = n;
  s.b = std::move(b);
  s.a = std::move(a);
  s.seed = seed;
  return s;
}

bool fired(const StratumReport& r, const std::string& name) {
  return std::find(r.provenance.fired.begin(), r.provenance.fired.end(), name) != r.provenance.fired.end();
}

const Refusal* refusal(const StratumReport& r, const std::string& name) {
  for (const Refusal& x : r.provenance.refused)
    if (x.theorem == name) return &x;
  return nullptr;
}

// A hypothesis record where everything holds and is verified.
Hypotheses all_good(int c, int dim_A) {
  Hypotheses h;
  h.c = c;
  h.dim_A = dim_A;
  h.homAMM_is_k = {true, true, "linear-algebra", {}};
  h.ext1A_MM = {0, true, "linear-algebra", {}};
  h.ext2A_MM = Fact<std::size_t>{0, true, "linear-algebra", {}};
  h.delta0_injective = {true, true, "linear-algebra", {}};
  h.delta0_surjective = {true, true, "linear-algebra", {}};
  h.ext1A_conormal = Fact<std::size_t>{0, true, "linear-algebra", {}};
  h.hom_I_A = {10, true, "linear-algebra", {}};
  h.ext2_MM_bound = {0, true, "linear-algebra", {}};
  h.depth_A = {dim_A, true, "closed-form", {}};
  h.h1_condition = {true, true, "closed-form", {}};
  return h;
}

// Every number outside the echoed input sits in an object carrying a method tag.
void check_tagged(const nlohmann::json& j, bool tagged, const std::string& path) {
  if (j.is_number()) {
    INFO(path);
    CHECK(tagged);
    return;
  }
  if (j.is_array()) {
    for (const auto& x : j) check_tagged(x, tagged, path + "[]");
    return;
  }
  if (!j.is_object()) return;
  const bool here = j.contains("method");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (path.empty() && (it.key() == "spec" || it.key() == "seeds_tried" || it.key() == "schema_version")) continue;
    check_tagged(it.value(), here, path + "." + it.key());
  }
}

}  // namespace

TEST_SUITE("verdicts") {
  TEST_CASE("gates refuse on false facts and flag undecided ones") {
    StratumInvariants inv;
    inv.lambda = 10;
    Hypotheses h = all_good(3, 2);
    CHECK(module_deformation_equivalence(h, inv).verdicts.dim_Ws == 10);
    CHECK(smooth_component(h, inv).verdicts.is_component == true);

    Hypotheses bad = h;
    bad.ext1A_MM.value = 2;
    try {
      module_deformation_equivalence(bad, inv);
      FAIL("expected a refusal");
    } catch (const HypothesisNotVerified& e) {
      CHECK_FALSE(e.undecided());
    }
    CHECK(smooth_morphism_component(bad, inv).verdicts.dim_Ws == 8);

    Hypotheses open = h;
    open.ext2A_MM->verified = false;
    try {
      smooth_component(open, inv);
      FAIL("expected a refusal");
    } catch (const HypothesisNotVerified& e) {
      CHECK(e.undecided());
    }
    // part (i) still fires; part (ii) is left open
    auto pv = module_deformation_equivalence(open, inv);
    CHECK(pv.verdicts.dim_Ws == 10);
    CHECK_FALSE(pv.verdicts.every_def_from_matrix.has_value());

    Hypotheses no_ext2 = h;
    no_ext2.ext2A_MM.reset();
    CHECK_THROWS_AS(smooth_component(no_ext2, inv), HypothesisNotVerified);
  }

  TEST_CASE("codimension interval and its exact refinement") {
    StratumInvariants inv;
    inv.lambda = 16;
    Hypotheses h = all_good(3, 0);
    h.hom_I_A.value = 20;
    h.ext2_MM_bound.value = 10;
    auto exact = codimension_bound(h, inv).verdicts.codim_in_GradAlg;
    REQUIRE(exact);
    CHECK(*exact == CodimEstimate{4, 4, true});
    h.ext1A_conormal->value = 3;
    auto interval = codimension_bound(h, inv).verdicts.codim_in_GradAlg;
    REQUIRE(interval);
    CHECK(*interval == CodimEstimate{0, 4, false});
    h.ext1A_conormal->verified = false;
    CHECK_FALSE(codimension_bound(h, inv).verdicts.codim_in_GradAlg->exact);
  }

  TEST_CASE("codimension two gate") {
    auto s = make_spec(1, {-2, -1}, {0, 0, 0});
    // λ(R)_2 for k[x0,x1]: 3*(3+2) - 9 - (1+0+2+1) + 1
    CHECK(codim_two_quotient(all_good(2, 0), s).verdicts.dim_Ws == 3);
    CHECK_THROWS_AS(codim_two_quotient(all_good(3, 0), make_spec(3, {0, 0}, {1, 1, 1, 1})), HypothesisNotVerified);
  }

  TEST_CASE("glicci gate") {
    StratumInvariants inv;
    CHECK(glicci_general_element(all_good(3, 2), inv).verdicts.glicci_general_element == true);
    Hypotheses art = all_good(3, 0);
    art.artinian = true;
    try {
      glicci_general_element(art, inv);
      FAIL("expected a refusal");
    } catch (const HypothesisNotVerified& e) {
      CHECK_FALSE(e.undecided());
    }
    Hypotheses depth1 = all_good(3, 1);
    depth1.h1_condition = {false, false, "truncated", {}};
    try {
      glicci_general_element(depth1, inv);
      FAIL("expected a refusal");
    } catch (const HypothesisNotVerified& e) {
      CHECK(e.undecided());
    }
  }

  TEST_CASE("sufficient condition scan") {
    auto deep = sufficient_condition_scan(make_spec(5, {0, 0}, {1, 1, 1, 1}));
    CHECK(deep.dim_A == 3);
    CHECK(deep.fires("smooth_component_clause"));
    CHECK(deep.fires("glicci_clause"));
    REQUIRE(deep.alpha == 3);
    CHECK(deep.singular_codim_bounds == std::vector<int>{4, 5});

    auto linear = sufficient_condition_scan(make_spec(3, {0, 0}, {1, 1, 1, 1}));
    CHECK(linear.fires("known_exception"));
    CHECK_FALSE(linear.fires("zero_dimensional_dimension_clause"));  // a_3 = a_0

    auto zero = sufficient_condition_scan(make_spec(3, {0, 0}, {1, 1, 1, 2}));
    CHECK(zero.fires("zero_dimensional_dimension_clause"));
    CHECK_FALSE(zero.fires("known_exception"));

    // interior gap failure: a_0 < b_2 for a 2-row matrix breaks α = 2
    auto gapless = sufficient_condition_scan(make_spec(4, {0, 3}, {1, 1, 4, 4}));
    CHECK_FALSE(gapless.gap2);
    CHECK_FALSE(gapless.alpha.has_value());
  }

  TEST_CASE("linear 2x4 plus a cubic column: smooth morphism verdict") {
    auto r = verify(make_spec(2, {0, 0}, {1, 1, 1, 3}));
    CHECK(r.findings.empty());
    CHECK(fired(r, "smooth_morphism_component"));
    CHECK(r.verdicts.dim_Ws == 6);
    CHECK(r.verdicts.is_component == true);
    const Refusal* x = refusal(r, "module_deformation_equivalence");
    REQUIRE(x);
    CHECK_FALSE(x->undecided);
    CHECK_FALSE(r.undecided);
    CHECK(refusal(r, "glicci_general_element"));
  }

  TEST_CASE("linear 2x4 plus a quadratic column: no verdict") {
    auto r = verify(make_spec(2, {0, 0}, {1, 1, 1, 2}));
    CHECK(r.findings.empty());
    CHECK(r.provenance.fired.empty());
    CHECK_FALSE(r.verdicts.dim_Ws.has_value());
    CHECK_FALSE(r.undecided);
    const bool strict_note = std::any_of(r.provenance.notes.begin(), r.provenance.notes.end(),
                                         [](const std::string& n) { return n.find("not an isomorphism") != std::string::npos; });
    CHECK(strict_note);
  }

  TEST_CASE("rows of degree two and one: codimension four") {
    auto r = verify(make_spec(2, {-1, 0}, {1, 1, 1, 1}));
    CHECK(r.findings.empty());
    CHECK(fired(r, "codimension_bound"));
    CHECK_FALSE(fired(r, "smooth_component"));
    REQUIRE(r.verdicts.codim_in_GradAlg);
    CHECK(r.verdicts.codim_in_GradAlg->upper == 4);
    CHECK(r.verdicts.dim_Ws == 16);
    REQUIRE(r.hypotheses.ext2A_MM);
    CHECK(r.hypotheses.ext2A_MM->value == 10);
  }

  TEST_CASE("a column of degree six on the plane: component of dimension 18") {
    auto r = verify(make_spec(2, {0, 0}, {1, 1, 3, 6}));
    CHECK(r.findings.empty());
    CHECK(fired(r, "smooth_component"));
    CHECK(fired(r, "module_deformation_equivalence"));
    CHECK(r.verdicts.dim_Ws == 18);
    CHECK(r.verdicts.is_component == true);
    REQUIRE(r.verdicts.codim_in_GradAlg);
    CHECK(r.verdicts.codim_in_GradAlg->exact);
    CHECK(r.verdicts.codim_in_GradAlg->lower == 0);
  }

  TEST_CASE("codimension two strata pass unconditionally") {
    auto r = verify(make_spec(3, {0, 0}, {1, 1, 2}));
    CHECK(r.findings.empty());
    CHECK(fired(r, "codim_two_quotient"));
    CHECK(r.verdicts.dim_Ws == r.invariants.lambda_c);
    CHECK(r.verdicts.dim_GradAlg == r.verdicts.dim_Ws);
    CHECK(fired(r, "glicci_general_element"));
  }

  TEST_CASE("points: smooth morphism with the glicci gate undecided") {
    auto r = verify(make_spec(3, {0, 0}, {1, 1, 1, 1}));
    CHECK(r.findings.empty());
    CHECK(fired(r, "smooth_morphism_component"));
    CHECK(r.verdicts.dim_Ws == 12);
    const Refusal* g = refusal(r, "glicci_general_element");
    REQUIRE(g);
    CHECK(g->undecided);
    CHECK_FALSE(r.undecided);  // something fired
    VerifyOptions only;
    only.theorems = {"glicci_general_element"};
    CHECK(verify(make_spec(3, {0, 0}, {1, 1, 1, 1}), only).undecided);
  }

  TEST_CASE("good deep case: glicci general element") {
    auto r = verify(make_spec(5, {0, 0}, {1, 1, 1, 1}));
    CHECK(r.findings.empty());
    CHECK(r.verdicts.glicci_general_element == true);
    CHECK(fired(r, "smooth_component"));
    CHECK(r.scan.fires("smooth_component_clause"));
  }

  TEST_CASE("errors and option validation") {
    CHECK_THROWS_AS(verify(make_spec(2, {0, 5}, {1, 1, 1})), EmptyStratum);
    VerifyOptions bad;
    bad.theorems = {"no_such_theorem"};
    CHECK_THROWS_AS(verify(make_spec(2, {0, 0}, {1, 1, 1}), bad), InvalidInput);
  }

  TEST_CASE("json report carries methods and is deterministic") {
    auto s = make_spec(2, {0, 0}, {1, 1, 1, 3});
    const std::string a = to_json(verify(s));
    CHECK(a == to_json(verify(s)));
    auto j = nlohmann::json::parse(a);
    CHECK(j["schema_version"] == 1);
    CHECK(j["verdicts"]["dim_Ws"]["value"] == 6);
    check_tagged(j, false, "");
    CHECK_FALSE(to_text(verify(s)).empty());
  }
}
