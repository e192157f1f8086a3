#include "detstrata/registry.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "detstrata/errors.hpp"
#include "detstrata/formulas.hpp"
#include "detstrata/ghost.hpp"
#include "detstrata/graded.hpp"
#include "detstrata/io.hpp"
#include "detstrata/verdicts.hpp"

#ifndef DETSTRATA_GOLDEN_DIR
#define DETSTRATA_GOLDEN_DIR "data/golden"
#endif

namespace detstrata {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

DegreeMatrixSpec spec(int n, std::vector<int> b, std::vector<int> a, std::uint64_t seed = 1) {
  DegreeMatrixSpec s;
  s.n = n;
  s.b = std::move(b);
  s.a = std::move(a);
  s.seed = seed;
  return s;
}

// The (u v; w B) family over rows b = (b1, b2, b2): column 0 holds w = (w, 0)
// in rows 0 and 1; the corner entry u stays sampled so the ghost code can set
// it to 0 or 1.
DegreeMatrixSpec bordered(int n, std::vector<int> b, std::vector<int> a, const std::string& w) {
  DegreeMatrixSpec s = spec(n, std::move(b), std::move(a), 3);
  s.explicit_entries.assign(3, std::vector<std::optional<std::string>>(s.a.size()));
  s.explicit_entries[0][0] = w;
  s.explicit_entries[1][0] = "0";
  return s;
}

RegistryInstance inst(std::string label, DegreeMatrixSpec s) { return {std::move(label), std::move(s), std::nullopt}; }

std::vector<RegistryEntry> build_registry() {
  std::vector<RegistryEntry> r;
  HomExtOptions level3;
  level3.max_level = 3;
  HomExtOptions level2;
  level2.max_level = 2;

  r.push_back({"thm41-ex-i",
               "2x4 on P^2, columns of degree 1, 1, 2, m",
               {inst("m=5", spec(2, {0, 0}, {1, 1, 2, 5})), inst("m=6", spec(2, {0, 0}, {1, 1, 2, 6}))},
               level2});
  r.push_back({"thm41-ex-ii",
               "2x5 on P^3, columns of degree 1, 1, 1, 2, m",
               {inst("m=5", spec(3, {0, 0}, {1, 1, 1, 2, 5})), inst("m=6", spec(3, {0, 0}, {1, 1, 1, 2, 6}))},
               level2});
  r.push_back({"boij-i", "2x4 on P^2, a quadratic and a linear row", {inst("base", spec(2, {-1, 0}, {1, 1, 1, 1}))},
               level3});
  r.push_back({"boij-ii",
               "3x5 on P^2, one quadratic and two linear rows",
               {inst("base", spec(2, {-1, 0, 0}, {1, 1, 1, 1, 1}))},
               level2});
  r.push_back({"thm43-ex-i",
               "2x4 on P^2, columns of degree 1, 1, 3, m",
               {inst("m=5", spec(2, {0, 0}, {1, 1, 3, 5})), inst("m=6", spec(2, {0, 0}, {1, 1, 3, 6})),
                inst("m=7", spec(2, {0, 0}, {1, 1, 3, 7}))},
               level3});
  r.push_back({"thm43-ex-ii", "2x4 on P^2, a cubic and a linear row", {inst("base", spec(2, {-2, 0}, {1, 1, 1, 1}))},
               level3});
  r.push_back({"blin-i",
               "2x4 on P^2, linear but for one column of degree m",
               {inst("m=3", spec(2, {0, 0}, {1, 1, 1, 3})), inst("m=4", spec(2, {0, 0}, {1, 1, 1, 4}))},
               level2});
  r.push_back({"blin-ii",
               "2x5 on P^3, linear but for one column of degree m",
               {inst("m=3", spec(3, {0, 0}, {1, 1, 1, 1, 3})), inst("m=4", spec(3, {0, 0}, {1, 1, 1, 1, 4}))},
               level2});
  for (int c = 3; c <= 6; ++c) {
    std::vector<int> a(static_cast<std::size_t>(c + 1), 1);
    r.push_back({"points-c" + std::to_string(c),
                 std::to_string(c + 1) + " general points in P^" + std::to_string(c) + ", 2x" + std::to_string(c + 1) +
                     " linear",
                 {inst("c=" + std::to_string(c), spec(c, {0, 0}, a))},
                 level3});
  }
  auto ghost = [](std::string label, DegreeMatrixSpec s) {
    return RegistryInstance{std::move(label), std::move(s), std::make_pair(std::size_t{3}, std::size_t{0})};
  };
  r.push_back({"ex53-i",
               "3x4 on P^1 bordered by (u v; w B), B linear over quadratic, w = (0, x0)",
               {ghost("base", bordered(1, {-2, -1, -1}, {-1, 0, 0, 0}, "x0"))},
               level2});
  r.push_back({"ex53-ii",
               "3x5 on P^2 bordered by (u v; w B), B linear over cubic, w = (0, x0^2)",
               {ghost("base", bordered(2, {-3, -1, -1}, {-1, 0, 0, 0, 0}, "x0^2"))},
               level2});
  r.push_back({"ex54",
               "3x5 on P^2 bordered by (u v; w B), B linear over quadratic, w = (0, x0)",
               {ghost("base", bordered(2, {-2, -1, -1}, {-1, 0, 0, 0, 0}, "x0"))},
               level2});
  return r;
}

json optional_size(const std::optional<Fact<std::size_t>>& f) {
  if (!f || !f->verified) return nullptr;
  return f->value;
}

json size_fact(const Fact<std::size_t>& f) {
  if (!f.verified) return nullptr;
  return f.value;
}

template <typename T>
json maybe(const std::optional<T>& v) {
  if (!v) return nullptr;
  return *v;
}

json ghosts_json(const GhostLedger& l) {
  json out = json::array();
  for (const GhostEntry& e : l.entries) {
    const std::size_t left = e.count - e.removable;
    if (left) out.push_back({{"i", e.i}, {"j", e.j}, {"count", left}});
  }
  return out;
}

// Lazily computed inputs for one instance.
class FieldSource {
 public:
  FieldSource(const RegistryEntry& entry, const RegistryInstance& instance) : entry_(entry), instance_(instance) {}

  json get(const std::string& field) {
    const DegreeMatrixSpec& s = instance_.spec;
    if (field == "lambda") return lambda(s);
    if (field == "lambda_c") return lambda_c(s);
    if (field == "K") return K_values(s);
    if (field == "h_vector") return h_vector(matrix());
    if (field == "K_by_hom") return K_by_hom(matrix());
    if (field == "dim_via_HM") return dimension_via_hilbert(matrix());
    if (field == "ext1_R") return report().ext1_R;
    if (field == "hom_I_A") return size_fact(report().hypotheses.hom_I_A);
    if (field == "ext1_A") return size_fact(report().hypotheses.ext1A_MM);
    if (field == "ext2_A") return optional_size(report().hypotheses.ext2A_MM);
    if (field == "conormal_ext1") return optional_size(report().hypotheses.ext1A_conormal);
    if (field == "conormal_ext1_nonzero") {
      const auto& f = report().hypotheses.ext1A_conormal;
      if (!f || !f->verified) return nullptr;
      return f->value != 0;
    }
    if (field == "dim_Ws") return maybe(report().verdicts.dim_Ws);
    if (field == "dim_GradAlg") return maybe(report().verdicts.dim_GradAlg);
    if (field == "codim") {
      const auto& c = report().verdicts.codim_in_GradAlg;
      if (!c) return nullptr;
      if (c->exact) return c->lower;
      return {{"lower", c->lower}, {"upper", c->upper}};
    }
    if (field == "is_component") return maybe(report().verdicts.is_component);
    if (field == "generically_smooth") return maybe(report().verdicts.generically_smooth);
    if (field == "every_def_from_matrix") return maybe(report().verdicts.every_def_from_matrix);
    if (field == "fired") return report().provenance.fired;
    if (field == "special_betti") return betti_to_json(generization().special_table);
    if (field == "general_betti") return betti_to_json(generization().general_table);
    if (field == "persistent_ghosts") return ghosts_json(generization().general_ghosts);
    if (field == "removes_exactly_corner_ghosts") return generization().removes_exactly_corner_ghosts;
    if (field == "hilbert_agree") return generization().hilbert_agree;
    throw InvalidInput("unknown registry field '" + field + "'");
  }

 private:
  // Ghost instances keep the u = 1 matrix, the other examples a standard sample.
  const GradedMatrix& matrix() {
    if (!matrix_) {
      if (instance_.corner) {
        const GenerizationReport& g = generization();
        if (!g.general) throw NotStandard("no u = 1 sample for " + instance_.spec.to_text());
        matrix_ = *g.general;
      } else {
        StandardSample ss = sample_standard(instance_.spec);
        if (!ss.codim.standard) throw NotStandard("no standard sample for " + instance_.spec.to_text());
        matrix_ = ss.matrix;
      }
    }
    return *matrix_;
  }

  const StratumReport& report() {
    if (!report_) {
      VerifyOptions o;
      o.homext = entry_.bounds;
      report_ = verify(instance_.spec, o);
    }
    return *report_;
  }

  const GenerizationReport& generization() {
    if (!instance_.corner) throw InvalidInput(entry_.id + " has no corner to generize");
    if (!ghost_) ghost_ = verify_generization(instance_.spec, instance_.corner->first, instance_.corner->second);
    return *ghost_;
  }

  const RegistryEntry& entry_;
  const RegistryInstance& instance_;
  std::optional<GradedMatrix> matrix_;
  std::optional<StratumReport> report_;
  std::optional<GenerizationReport> ghost_;
};

}  // namespace

const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> r = build_registry();
  return r;
}

const RegistryEntry& registry_entry(const std::string& id) {
  for (const RegistryEntry& e : registry())
    if (e.id == id) return e;
  throw InvalidInput("unknown example id '" + id + "'");
}

const std::vector<std::string>& registry_fields() {
  static const std::vector<std::string> f = {
      "h_vector",      "lambda",        "lambda_c",          "K",
      "K_by_hom",      "dim_via_HM",    "ext1_R",            "hom_I_A",
      "ext1_A",        "ext2_A",        "conormal_ext1",     "conormal_ext1_nonzero",
      "dim_Ws",        "dim_GradAlg",   "codim",             "is_component",
      "generically_smooth", "every_def_from_matrix", "fired", "special_betti",
      "general_betti", "persistent_ghosts", "removes_exactly_corner_ghosts", "hilbert_agree"};
  return f;
}

ordered_json compute_fields(const RegistryEntry& entry, const RegistryInstance& instance,
                            const std::vector<std::string>& fields) {
  FieldSource src(entry, instance);
  ordered_json out = ordered_json::object();
  for (const std::string& f : fields) out[f] = src.get(f);
  return out;
}

std::vector<std::int64_t> K_by_hom(const GradedMatrix& m) {
  const DegreeMatrixSpec& s = m.spec();
  const std::size_t t = s.t();
  std::vector<std::int64_t> out;
  for (int i = 3; i <= s.c(); ++i) {
    // B_{i-1} = coker(F -> G_{i-1}) uses columns 0..t+i-3; the target twist is a_{t+i-2}.
    const std::size_t cols = t + static_cast<std::size_t>(i) - 2;
    const int top = s.a[cols];
    std::vector<int> tw, sw;
    for (std::size_t q = 0; q < t; ++q) tw.push_back(s.b[q] - top);
    for (std::size_t j = 0; j < cols; ++j) sw.push_back(s.a[j] - top);
    GradedModulePresentation pres;
    pres.target = GradedFreeModule(tw);
    pres.source = GradedFreeModule(sw);
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<Polynomial> comp;
      for (std::size_t q = 0; q < t; ++q) comp.push_back(m.entry(q, j));
      pres.columns.emplace_back(std::move(comp));
    }
    std::int64_t src = 0, dst = 0;
    for (int e : sw) src += static_cast<std::int64_t>(graded_piece_dimension(-e, s.n));
    for (int e : tw) dst += static_cast<std::int64_t>(graded_piece_dimension(-e, s.n));
    const auto rank = dst - static_cast<std::int64_t>(cokernel_dimension(m.ring(), pres, 0));
    out.push_back(src - rank);
  }
  return out;
}

std::vector<std::size_t> h_vector(const GradedMatrix& m) {
  std::vector<ModuleElement> rel;
  for (const Polynomial& f : m.maximal_minors())
    if (!f.is_zero()) rel.emplace_back(std::vector<Polynomial>{f});
  // The socle degree sits below the largest Eagon-Northcott twist.
  const int bound = std::max(1, eagon_northcott_betti(m.spec()).degree_range().second + 1);
  GradedQuotient a(m.ring(), GradedFreeModule({0}), rel, bound);
  auto top = a.top_degree();
  if (!top) throw InvalidInput("h-vector needs an artinian quotient");
  std::vector<std::size_t> h;
  for (int d = 0; d <= *top; ++d) h.push_back(a.dimension(d));
  return h;
}

std::string default_golden_dir() {
  if (const char* env = std::getenv("DETSTRATA_DATA"); env && *env)
    return (std::filesystem::path(env) / "golden").string();
  return DETSTRATA_GOLDEN_DIR;
}

json load_golden(const std::string& id, const std::string& dir) {
  const auto path = std::filesystem::path(dir) / (id + ".json");
  std::ifstream in(path);
  if (!in) throw InvalidInput("no golden file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

bool ReproduceResult::ok() const {
  return !instances.empty() && std::all_of(instances.begin(), instances.end(), [](const auto& i) { return i.ok(); });
}

namespace {

struct Expected {
  std::vector<std::string> fields;
  std::vector<json> values;
  std::vector<std::string> origins;
};

Expected expected_fields(const json& golden_instance) {
  Expected e;
  for (const auto& [name, v] : golden_instance.at("fields").items()) {
    e.fields.push_back(name);
    e.values.push_back(v.at("value"));
    e.origins.push_back(v.value("origin", "stated"));
  }
  return e;
}

std::vector<FieldDiff> compare(const Expected& e, const ordered_json& actual) {
  std::vector<FieldDiff> d;
  for (std::size_t k = 0; k < e.fields.size(); ++k) {
    const json got = actual.at(e.fields[k]);
    if (got != e.values[k]) d.push_back({e.fields[k], e.origins[k], e.values[k], got});
  }
  return d;
}

}  // namespace

ReproduceResult reproduce(const std::string& id, const ReproduceOptions& options) {
  const RegistryEntry& entry = registry_entry(id);
  const json golden = load_golden(id, options.golden_dir);
  ReproduceResult result;
  result.id = id;
  for (const json& g : golden.at("instances")) {
    const std::string label = g.at("label").get<std::string>();
    auto it = std::find_if(entry.instances.begin(), entry.instances.end(),
                           [&](const RegistryInstance& x) { return x.label == label; });
    if (it == entry.instances.end()) throw InvalidInput(id + ": golden instance '" + label + "' is not registered");
    InstanceOutcome out;
    out.label = label;
    const Expected want = expected_fields(g);
    RegistryInstance run = *it;
    if (options.seed) run.spec.seed = *options.seed;
    if (options.prime) run.spec.p = *options.prime;
    // the golden spec, when given, must name the registered degree matrix
    if (g.contains("spec")) {
      const DegreeMatrixSpec gs = spec_from_json(g.at("spec"));
      if (gs.b != it->spec.b || gs.a != it->spec.a || gs.n != it->spec.n)
        out.diffs.push_back({"spec", "stated", g.at("spec"), spec_to_json(it->spec)});
    }
    const auto start = std::chrono::steady_clock::now();
    auto attempt = [&](std::uint32_t p) {
      run.spec.p = p;
      out.prime = p;
      out.actual = compute_fields(entry, run, want.fields);
      return compare(want, out.actual);
    };
    try {
      auto d = attempt(run.spec.p);
      if (!d.empty() && run.spec.p != kRetryPrime) {
        out.first_diffs = d;
        d = attempt(kRetryPrime);
      }
      out.diffs.insert(out.diffs.end(), d.begin(), d.end());
    } catch (const Error& e) {
      out.error = e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.instances.push_back(std::move(out));
  }
  return result;
}

std::string to_text(const ReproduceResult& r) {
  std::ostringstream os;
  for (const InstanceOutcome& i : r.instances) {
    os << r.id << " " << i.label << ": " << (i.ok() ? "pass" : "FAIL") << " (p = " << i.prime << ", "
       << static_cast<long>(i.seconds * 1000) << " ms)\n";
    if (!i.error.empty()) os << "  error: " << i.error << "\n";
    if (i.characteristic_sensitive()) {
      os << "  mismatch at the first prime, matched at " << i.prime << ":\n";
      for (const FieldDiff& d : i.first_diffs)
        os << "    " << d.field << ": expected " << d.expected.dump() << ", got " << d.actual.dump() << "\n";
    }
    for (const FieldDiff& d : i.diffs)
      os << "  " << d.field << " [" << d.origin << "]: expected " << d.expected.dump() << ", got " << d.actual.dump()
         << "\n";
  }
  return os.str();
}

std::string to_json(const ReproduceResult& r, int indent) {
  ordered_json j;
  j["id"] = r.id;
  j["ok"] = r.ok();
  ordered_json list = ordered_json::array();
  auto diffs = [](const std::vector<FieldDiff>& ds) {
    ordered_json a = ordered_json::array();
    for (const FieldDiff& d : ds)
      a.push_back({{"field", d.field}, {"origin", d.origin}, {"expected", d.expected}, {"actual", d.actual}});
    return a;
  };
  for (const InstanceOutcome& i : r.instances) {
    ordered_json x;
    x["label"] = i.label;
    x["ok"] = i.ok();
    x["prime"] = i.prime;
    x["diffs"] = diffs(i.diffs);
    if (!i.first_diffs.empty()) x["first_prime_diffs"] = diffs(i.first_diffs);
    if (!i.error.empty()) x["error"] = i.error;
    x["actual"] = i.actual;
    list.push_back(x);
  }
  j["instances"] = list;
  return j.dump(indent);
}

}  // namespace detstrata
