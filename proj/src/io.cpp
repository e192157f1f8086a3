#include "detstrata/io.hpp"

#include <fstream>
#include <sstream>

#include "detstrata/errors.hpp"

namespace detstrata {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json spec_to_json(const DegreeMatrixSpec& s) {
  ordered_json j;
  j["n"] = s.n;
  j["p"] = s.p;
  j["b"] = s.b;
  j["a"] = s.a;
  j["seed"] = s.seed;
  j["allow_constants"] = s.allow_constants;
  if (!s.explicit_entries.empty()) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : s.explicit_entries) {
      ordered_json r = ordered_json::array();
      for (const auto& cell : row) r.push_back(cell ? ordered_json(*cell) : ordered_json(nullptr));
      rows.push_back(r);
    }
    j["explicit_entries"] = rows;
  }
  return j;
}

DegreeMatrixSpec spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("b") || !j.contains("a")) throw InvalidInput("spec needs \"b\" and \"a\"");
  DegreeMatrixSpec s;
  try {
    s.b = j.at("b").get<std::vector<int>>();
    s.a = j.at("a").get<std::vector<int>>();
    if (j.contains("n")) s.n = j.at("n").get<int>();
    if (j.contains("p")) s.p = j.at("p").get<std::uint32_t>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("allow_constants")) s.allow_constants = j.at("allow_constants").get<bool>();
    if (j.contains("explicit_entries")) {
      for (const auto& row : j.at("explicit_entries")) {
        std::vector<std::optional<std::string>> r;
        for (const auto& cell : row) {
          if (cell.is_null())
            r.emplace_back();
          else
            r.emplace_back(cell.get<std::string>());
        }
        s.explicit_entries.push_back(std::move(r));
      }
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed spec: ") + e.what());
  }
  s.validate();
  return s;
}

DegreeMatrixSpec read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return spec_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

ordered_json betti_to_json(const BettiTable& t, const std::string& method) {
  ordered_json out = ordered_json::array();
  for (const auto& [key, beta] : t.entries()) {
    ordered_json e = {{"i", key.first}, {"j", key.second}, {"beta", beta}};
    if (!method.empty()) e["method"] = method;
    out.push_back(e);
  }
  return out;
}

BettiTable betti_from_json(const json& j) {
  BettiTable t;
  try {
    for (const auto& e : j) t.add(e.at("i").get<int>(), e.at("j").get<int>(), e.at("beta").get<std::size_t>());
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed Betti table: ") + e.what());
  }
  return t;
}

}  // namespace detstrata
