#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "detstrata/errors.hpp"
#include "detstrata/formulas.hpp"
#include "detstrata/ghost.hpp"
#include "detstrata/io.hpp"
#include "detstrata/registry.hpp"
#include "detstrata/verdicts.hpp"
#include "json.hpp"

using namespace detstrata;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kEmpty = 2, kUndecided = 3, kBadInput = 4 };

struct Common {
  std::vector<int> b, a;
  std::optional<int> n;
  std::optional<std::uint32_t> p;
  std::optional<std::uint64_t> seed;
  std::string bounds;  // "LEVEL" or "LEVEL,DEGREE"
  std::string format = "text";
  std::string explicit_file;
};

void add_common(CLI::App* cmd, Common& c, bool needs_spec = true) {
  if (needs_spec) {
    cmd->add_option("--b", c.b, "row degrees b_1,..,b_t")->delimiter(',');
    cmd->add_option("--a", c.a, "column degrees a_0,..,a_{t+c-2}")->delimiter(',');
    cmd->add_option("--n", c.n, "R = k[x0..xn] (default 2)");
    cmd->add_option("--explicit", c.explicit_file, "spec JSON file, may carry explicit entries");
  }
  cmd->add_option("--p", c.p, "prime (default 10007)");
  cmd->add_option("--seed", c.seed, "sampling seed (default $DETSTRATA_SEED, else 1)");
  cmd->add_option("--bounds", c.bounds, "LEVEL[,DEGREE]: homological level and internal degree cap");
  cmd->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("DETSTRATA_SEED"); s && *s) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw InvalidInput("DETSTRATA_SEED is not an integer");
    }
  }
  return 1;
}

DegreeMatrixSpec make_spec(const Common& c) {
  DegreeMatrixSpec s;
  if (!c.explicit_file.empty()) {
    s = read_spec_file(c.explicit_file);
    if (!c.b.empty()) s.b = c.b;
    if (!c.a.empty()) s.a = c.a;
  } else {
    if (c.b.empty() || c.a.empty()) throw InvalidInput("--b and --a (or --explicit) are required");
    s.b = c.b;
    s.a = c.a;
    s.seed = default_seed();
  }
  if (c.n) s.n = *c.n;
  if (c.p) s.p = *c.p;
  if (c.seed) s.seed = *c.seed;
  s.validate();
  return s;
}

HomExtOptions make_bounds(const Common& c) {
  HomExtOptions o;
  if (c.bounds.empty()) return o;
  std::stringstream ss(c.bounds);
  std::string part;
  std::vector<int> v;
  while (std::getline(ss, part, ',')) {
    try {
      v.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw InvalidInput("--bounds expects LEVEL[,DEGREE]");
    }
  }
  if (v.empty() || v.size() > 2 || v[0] < 1) throw InvalidInput("--bounds expects LEVEL[,DEGREE]");
  o.max_level = v[0];
  if (v.size() == 2) o.degree_bound = v[1];
  return o;
}

std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

int cmd_stratum_info(const Common& c) {
  const DegreeMatrixSpec s = make_spec(c);
  if (!nonempty(s)) {
    std::cout << "empty stratum " << s.to_text() << "\n";
    return kEmpty;
  }
  StandardSample ss = sample_standard(s);
  StratumInvariants inv = stratum_invariants(s, ss.codim.standard ? &ss.matrix : nullptr);
  if (c.format == "json") {
    ordered_json j;
    j["spec"] = spec_to_json(s);
    auto tag = [](std::int64_t v, const char* m) { return ordered_json{{"value", v}, {"method", m}}; };
    j["lambda_c"] = tag(inv.lambda_c, "closed-form");
    j["K"] = {{"value", inv.K}, {"method", "closed-form"}};
    j["ell"] = {{"value", inv.ell}, {"method", "closed-form"}};
    j["h"] = {{"value", inv.h}, {"method", "closed-form"}};
    j["lambda"] = tag(inv.lambda, "closed-form");
    if (inv.dim_via_HM) j["dim_via_HM"] = tag(*inv.dim_via_HM, "linear-algebra");
    j["standard_sample"] = ss.codim.standard;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "stratum " << s.to_text() << "\n";
    std::cout << "lambda_" << s.c() << " = " << inv.lambda_c << "\n";
    for (std::size_t k = 0; k < inv.K.size(); ++k) std::cout << "K_" << k + 3 << " = " << inv.K[k] << "\n";
    if (!inv.ell.empty()) std::cout << "ell = " << join(inv.ell) << ", h = " << join(inv.h) << "\n";
    std::cout << "lambda = " << inv.lambda << "\n";
    if (inv.dim_via_HM)
      std::cout << "sum H_M(a_j) - sum H_M(b_i) + 1 = " << *inv.dim_via_HM << "\n";
    else
      std::cout << "no standard sample in " << ss.seeds_tried.size() << " tries; H_M route skipped\n";
    std::cout << "dim W_s = " << inv.lambda << " when 0Hom_A(M,M) = k and 0Ext^1_A(M,M) = 0\n";
  }
  return kOk;
}

int cmd_verify(const Common& c, const std::vector<std::string>& theorems) {
  const DegreeMatrixSpec s = make_spec(c);
  VerifyOptions o;
  o.homext = make_bounds(c);
  o.theorems = theorems;
  StratumReport r = verify(s, o);
  std::cout << (c.format == "json" ? to_json(r) + "\n" : to_text(r));
  if (r.undecided) {
    std::cerr << "undecided:";
    for (const Refusal& x : r.provenance.refused)
      if (x.undecided) std::cerr << " " << x.theorem << " (" << x.reason << ")";
    std::cerr << "\n";
    return kUndecided;
  }
  return r.findings.empty() ? kOk : kMismatch;
}

// Resolution of the chosen module over R or, truncated, over A.
int cmd_betti(const Common& c, const std::string& ring, const std::string& of) {
  const DegreeMatrixSpec s = make_spec(c);
  if (!nonempty(s) && s.explicit_entries.empty()) {
    std::cout << "empty stratum " << s.to_text() << "\n";
    return kEmpty;
  }
  StandardSample ss = sample_standard(s);
  const GradedMatrix& m = ss.matrix;
  const HomExtOptions bounds = make_bounds(c);

  std::vector<Polynomial> minors;
  std::vector<int> degs;
  for (const Polynomial& f : m.maximal_minors())
    if (!f.is_zero()) {
      minors.push_back(f);
      degs.push_back(f.degree());
    }
  GradedModulePresentation pres;
  if (of == "A") {
    pres.target = GradedFreeModule({0});
    pres.source = GradedFreeModule(degs);
    for (const Polynomial& f : minors) pres.columns.emplace_back(std::vector<Polynomial>{f});
  } else if (of == "M") {
    pres = m.presentation();
  } else {
    HomExtContext ctx(m, bounds);
    pres = ctx.ideal_presentation();
    if (ring == "R") {
      // I/I^2 over R: add I e_k for every generator e_k of I
      std::vector<int> src = pres.source.twists();
      for (std::size_t k = 0; k < degs.size(); ++k)
        for (const Polynomial& f : minors) {
          ModuleElement e = ModuleElement::zero(degs.size());
          e.components[k] = f;
          pres.columns.push_back(e);
          src.push_back(degs[k] + f.degree());
        }
      pres.source = GradedFreeModule(src);
    }
  }
  ResolutionOptions ro;
  if (ring == "A") {
    ro.quotient_ideal = minors;
    ro.max_level = bounds.max_level;
    ro.max_degree = bounds.degree_bound;
  } else if (bounds.degree_bound) {
    ro.max_degree = bounds.degree_bound;
  }
  FreeResolution res = minimal_free_resolution(m.ring(), pres, ro);
  const bool compare_en = ring == "R" && of == "A";
  const BettiTable en = eagon_northcott_betti(s);
  const std::string method = res.truncated ? "truncated" : "groebner";
  if (c.format == "json") {
    ordered_json j;
    j["spec"] = spec_to_json(s);
    j["ring"] = ring;
    j["of"] = of;
    j["standard"] = ss.codim.standard;
    j["truncated"] = res.truncated;
    j["table"] = betti_to_json(res.betti, method);
    if (compare_en) {
      j["eagon_northcott"] = betti_to_json(en, "closed-form");
      j["eagon_northcott_minimal"] = en == res.betti;
      j["ghosts"] = nlohmann::json::parse(to_json(detect_ghosts(res.betti)));
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "minimal resolution of " << of << " over " << ring << " for " << s.to_text()
              << (ss.codim.standard ? "" : " (sample not standard)") << (res.truncated ? " [truncated]" : "")
              << "\n"
              << res.betti.to_text();
    if (compare_en) {
      std::cout << "Eagon-Northcott shape " << (en == res.betti ? "is minimal" : "is not minimal") << "\n";
      if (!(en == res.betti)) std::cout << betti_diff_text(en, res.betti);
    }
  }
  return kOk;
}

int cmd_ghost(const Common& c, std::size_t i, std::size_t j) {
  const DegreeMatrixSpec s = make_spec(c);
  GenerizationReport r = verify_generization(s, i, j);
  std::cout << (c.format == "json" ? to_json(r) + "\n" : to_text(r));
  return r.ok() ? kOk : kMismatch;
}

int cmd_reproduce(const Common& c, std::vector<std::string> ids, const std::string& golden, bool list) {
  if (list) {
    for (const RegistryEntry& e : registry()) {
      std::cout << e.id << ": " << e.summary << " [";
      for (std::size_t k = 0; k < e.instances.size(); ++k) std::cout << (k ? ", " : "") << e.instances[k].label;
      std::cout << "]\n";
    }
    return kOk;
  }
  if (ids.empty()) throw InvalidInput("reproduce needs an example id, 'all' or --list");
  if (ids.size() == 1 && ids[0] == "all") {
    ids.clear();
    for (const RegistryEntry& e : registry()) ids.push_back(e.id);
  }
  ReproduceOptions o;
  if (!golden.empty()) o.golden_dir = golden;
  o.seed = c.seed;
  o.prime = c.p;
  bool ok = true;
  ordered_json all = ordered_json::array();
  for (const std::string& id : ids) {
    ReproduceResult r = reproduce(id, o);
    ok = ok && r.ok();
    if (c.format == "json")
      all.push_back(ordered_json::parse(to_json(r)));
    else
      std::cout << to_text(r) << std::flush;
  }
  if (c.format == "json") std::cout << all.dump(2) << "\n";
  return ok ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Determinantal strata: dimension formulas, Hom/Ext hypotheses, verdicts and ghost terms"};
  app.require_subcommand(1);

  Common info_c, ver_c, betti_c, ghost_c, rep_c;
  auto* info = app.add_subcommand("stratum-info", "closed-form invariants of W_s(b;a)");
  add_common(info, info_c);

  auto* ver = app.add_subcommand("verify", "Hom/Ext battery and theorem verdicts");
  add_common(ver, ver_c);
  std::vector<std::string> theorems;
  ver->add_option("--theorems", theorems, "comma-separated subset of the theorem names")->delimiter(',');

  auto* betti = app.add_subcommand("betti", "minimal Betti table");
  add_common(betti, betti_c);
  std::string ring = "R", of = "A";
  betti->add_option("--ring", ring, "R or A")->check(CLI::IsMember({"R", "A"}));
  betti->add_option("--of", of, "A, M or I_conormal")->check(CLI::IsMember({"A", "M", "I_conormal"}));

  auto* ghost = app.add_subcommand("ghost", "generize at a corner a_j = b_i and compare resolutions");
  add_common(ghost, ghost_c);
  std::size_t gi = 0, gj = 0;
  ghost->add_option("--i", gi, "row, 1-based")->required();
  ghost->add_option("--j", gj, "column, 0-based")->required();

  auto* rep = app.add_subcommand("reproduce", "recompute a registry example and diff against its golden file");
  add_common(rep, rep_c, false);
  std::vector<std::string> ids;
  std::string golden;
  bool list = false;
  rep->add_option("ids", ids, "example ids, or 'all'");
  rep->add_option("--golden", golden, "golden directory (default $DETSTRATA_DATA/golden)");
  rep->add_flag("--list", list, "list registry examples");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*info) return cmd_stratum_info(info_c);
    if (*ver) return cmd_verify(ver_c, theorems);
    if (*betti) return cmd_betti(betti_c, ring, of);
    if (*ghost) return cmd_ghost(ghost_c, gi, gj);
    if (*rep) return cmd_reproduce(rep_c, ids, golden, list);
  } catch (const EmptyStratum& e) {
    std::cout << "empty stratum: " << e.what() << "\n";
    return kEmpty;
  } catch (const TruncationExceeded& e) {
    std::cerr << "undecided within bounds: " << e.what() << "\n";
    return kUndecided;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kOk;
}
