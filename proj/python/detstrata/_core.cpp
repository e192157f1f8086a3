#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "detstrata/errors.hpp"
#include "detstrata/formulas.hpp"
#include "detstrata/ghost.hpp"
#include "detstrata/io.hpp"
#include "detstrata/registry.hpp"
#include "detstrata/verdicts.hpp"

namespace py = pybind11;
using namespace detstrata;
using nlohmann::ordered_json;

namespace {

// Specs and results cross the boundary as JSON text; the Python side decodes.
DegreeMatrixSpec parse(const std::string& spec) { return spec_from_json(nlohmann::json::parse(spec)); }

std::string stratum_info(const std::string& spec) {
  const DegreeMatrixSpec s = parse(spec);
  ordered_json j;
  j["spec"] = spec_to_json(s);
  j["nonempty"] = nonempty(s);
  if (!nonempty(s)) return j.dump();
  StandardSample ss = sample_standard(s);
  StratumInvariants inv = stratum_invariants(s, ss.codim.standard ? &ss.matrix : nullptr);
  j["lambda_c"] = inv.lambda_c;
  j["K"] = inv.K;
  j["ell"] = inv.ell;
  j["h"] = inv.h;
  j["lambda"] = inv.lambda;
  j["dim_via_HM"] = inv.dim_via_HM ? ordered_json(*inv.dim_via_HM) : ordered_json();
  j["standard_sample"] = ss.codim.standard;
  return j.dump();
}

std::string verify_json(const std::string& spec, const std::vector<std::string>& theorems, int level) {
  VerifyOptions o;
  o.homext.max_level = level;
  o.theorems = theorems;
  return to_json(verify(parse(spec), o), -1);
}

std::string betti_json(const std::string& spec) {
  const DegreeMatrixSpec s = parse(spec);
  StandardSample ss = sample_standard(s);
  ordered_json j;
  j["computed"] = betti_to_json(quotient_betti(ss.matrix));
  j["eagon_northcott"] = betti_to_json(eagon_northcott_betti(s));
  j["standard_sample"] = ss.codim.standard;
  return j.dump();
}

std::string ghost_json(const std::string& spec, std::size_t i, std::size_t j, std::size_t trials) {
  return to_json(verify_generization(parse(spec), i, j, trials), -1);
}

std::vector<std::string> registry_ids() {
  std::vector<std::string> ids;
  for (const RegistryEntry& e : registry()) ids.push_back(e.id);
  return ids;
}

std::string reproduce_json(const std::string& id) { return to_json(reproduce(id), -1); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  // later registrations are tried first, so the subclass goes last
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  m.def("lambda_", [](const std::string& s) { return lambda(parse(s)); });
  m.def("lambda_c", [](const std::string& s) { return lambda_c(parse(s)); });
  m.def("K_values", [](const std::string& s) { return K_values(parse(s)); });
  m.def("nonempty", [](const std::string& s) { return nonempty(parse(s)); });
  m.def("stratum_info", &stratum_info);
  m.def("verify", &verify_json);
  m.def("betti", &betti_json);
  m.def("ghost", &ghost_json);
  m.def("registry_ids", &registry_ids);
  m.def("reproduce", &reproduce_json);
}
