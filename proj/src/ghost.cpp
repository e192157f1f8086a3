#include "detstrata/ghost.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

#include "detstrata/errors.hpp"
#include "detstrata/formulas.hpp"

namespace detstrata {

namespace {

using nlohmann::ordered_json;

GroebnerBasis ideal_basis(const PolyRing& r, const std::vector<Polynomial>& gens) {
  std::vector<ModuleElement> els;
  for (const Polynomial& f : gens)
    if (!f.is_zero()) els.push_back(ModuleElement({f}));
  return buchberger(r, GradedFreeModule({0}), els);
}

// a - b entrywise; nullopt if some entry goes negative.
std::optional<BettiTable> difference(const BettiTable& a, const BettiTable& b) {
  for (const auto& [key, v] : b.entries())
    if (a.at(key.first, key.second) < v) return std::nullopt;
  BettiTable d;
  for (const auto& [key, v] : a.entries()) {
    const std::size_t rest = v - b.at(key.first, key.second);
    if (rest) d.add(key.first, key.second, rest);
  }
  return d;
}

// Pair counts p(i, j) with diff(i, j) = p(i-1, j) + p(i, j); nullopt when
// diff is not a union of consecutive pairs.
std::optional<BettiTable> consecutive_pairs(const BettiTable& diff) {
  BettiTable pairs;
  const int len = diff.length();
  if (len < 0) return pairs;
  auto [lo, hi] = diff.degree_range();
  for (int j = lo; j <= hi; ++j) {
    std::size_t carry = 0;
    for (int i = 0; i <= len + 1; ++i) {
      const std::size_t d = diff.at(i, j);
      if (d < carry) return std::nullopt;
      carry = d - carry;
      if (carry) pairs.add(i, j, carry);
    }
    if (carry) return std::nullopt;
  }
  return pairs;
}

bool is_corner(const DegreeMatrixSpec& spec, std::size_t i, std::size_t j) {
  const std::size_t t = spec.t();
  const std::size_t last = spec.columns() - 1;
  return (i == 1 || i == t) && (j == 0 || j == last) && i >= 1 && i <= t && spec.a.at(j) == spec.b.at(i - 1);
}

DegreeMatrixSpec with_entry(const DegreeMatrixSpec& spec, std::size_t row, std::size_t col, const std::string& text) {
  DegreeMatrixSpec s = spec;
  s.explicit_entries.resize(s.t());
  for (auto& r : s.explicit_entries) r.resize(s.columns());
  s.explicit_entries[row][col] = text;
  return s;
}

std::string twist_text(int j, std::size_t count) {
  std::string s = "R(" + std::to_string(-j) + ")";
  if (count > 1) s += "^" + std::to_string(count);
  return s;
}

ordered_json table_json(const BettiTable& t) {
  ordered_json out = ordered_json::array();
  for (const auto& [key, v] : t.entries())
    out.push_back({{"i", key.first}, {"j", key.second}, {"value", v}, {"method", "groebner"}});
  return out;
}

ordered_json ledger_json(const GhostLedger& l) {
  ordered_json entries = ordered_json::array();
  for (const GhostEntry& e : l.entries)
    entries.push_back({{"i", e.i}, {"j", e.j}, {"count", e.count}, {"removable", e.removable}, {"method", "groebner"}});
  return {{"entries", entries},
          {"total", {{"value", l.total()}, {"method", "groebner"}}},
          {"persistent", {{"value", l.persistent()}, {"method", "groebner"}}},
          {"consistent", l.consistent()}};
}

}  // namespace

std::size_t GhostLedger::total() const {
  std::size_t s = 0;
  for (const GhostEntry& e : entries) s += e.count;
  return s;
}

std::size_t GhostLedger::persistent() const {
  std::size_t s = 0;
  for (const GhostEntry& e : entries) s += e.count - e.removable;
  return s;
}

bool GhostLedger::consistent() const {
  GhostLedger fresh = detect_ghosts(table);
  if (fresh.entries.size() != entries.size()) return false;
  for (std::size_t k = 0; k < entries.size(); ++k)
    if (fresh.entries[k].i != entries[k].i || fresh.entries[k].j != entries[k].j ||
        fresh.entries[k].count != entries[k].count)
      return false;
  return true;
}

GhostLedger detect_ghosts(const BettiTable& table) {
  GhostLedger l;
  l.table = table;
  for (const auto& [key, v] : table.entries()) {
    const std::size_t next = table.at(key.first + 1, key.second);
    if (next) l.entries.push_back({key.first, key.second, std::min(v, next), 0});
  }
  return l;
}

std::vector<std::pair<std::size_t, std::size_t>> corner_overlaps(const DegreeMatrixSpec& spec) {
  spec.validate();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t t = spec.t();
  for (std::size_t i : {std::size_t{1}, t})
    for (std::size_t j : {std::size_t{0}, spec.columns() - 1})
      if (is_corner(spec, i, j) &&
          std::find(out.begin(), out.end(), std::make_pair(i, j)) == out.end())
        out.emplace_back(i, j);
  return out;
}

DegreeMatrixSpec reduce_degree_matrix(const DegreeMatrixSpec& spec, std::size_t i, std::size_t j) {
  spec.validate();
  if (i < 1 || i > spec.t() || j >= spec.columns() || !is_corner(spec, i, j))
    throw NotACornerOverlap("(" + std::to_string(i) + "," + std::to_string(j) +
                            ") is not a corner with a_j = b_i, j in {0, t+c-2}, i in {1, t}");
  if (spec.t() < 3) throw InvalidInput("the reduced matrix would have fewer than two rows");
  DegreeMatrixSpec r = spec;
  r.b.erase(r.b.begin() + static_cast<std::ptrdiff_t>(i - 1));
  r.a.erase(r.a.begin() + static_cast<std::ptrdiff_t>(j));
  if (!r.explicit_entries.empty()) {
    r.explicit_entries.resize(spec.t());
    r.explicit_entries.erase(r.explicit_entries.begin() + static_cast<std::ptrdiff_t>(i - 1));
    for (auto& row : r.explicit_entries)
      if (row.size() > j) row.erase(row.begin() + static_cast<std::ptrdiff_t>(j));
  }
  return r;
}

BettiTable attributable_ghosts(const DegreeMatrixSpec& spec, std::size_t i, std::size_t j) {
  DegreeMatrixSpec r = reduce_degree_matrix(spec, i, j);
  auto d = difference(eagon_northcott_betti(spec), eagon_northcott_betti(r));
  if (!d || !consecutive_pairs(*d))
    throw InvalidInput("Eagon-Northcott difference is not a union of consecutive pairs");
  return *d;
}

void classify_ghosts(GhostLedger& ledger, const DegreeMatrixSpec& spec) {
  for (GhostEntry& e : ledger.entries) e.removable = 0;
  if (spec.t() < 3) return;  // the reduced matrix needs two rows
  for (auto [i, j] : corner_overlaps(spec)) {
    auto pairs = consecutive_pairs(attributable_ghosts(spec, i, j));
    for (GhostEntry& e : ledger.entries) e.removable = std::max(e.removable, std::min(e.count, pairs->at(e.i, e.j)));
  }
}

BettiTable quotient_betti(const GradedMatrix& m) {
  GradedModulePresentation pres;
  pres.target = GradedFreeModule({0});
  std::vector<int> degs;
  for (const Polynomial& f : m.maximal_minors()) {
    if (f.is_zero()) continue;
    degs.push_back(f.degree());
    pres.columns.push_back(ModuleElement({f}));
  }
  pres.source = GradedFreeModule(degs);
  return minimal_free_resolution(m.ring(), pres).betti;
}

GradedMatrix bordered_matrix(const DegreeMatrixSpec& spec, std::size_t i, std::size_t j, const GradedMatrix& reduced) {
  if (!is_corner(spec, i, j)) throw NotACornerOverlap("bordering needs a corner with a_j = b_i");
  const PolyRing& r = reduced.ring();
  const std::size_t row = i - 1;
  std::vector<std::vector<Polynomial>> e(spec.t(), std::vector<Polynomial>(spec.columns()));
  for (std::size_t k = 0, rk = 0; k < spec.t(); ++k) {
    if (k == row) continue;
    for (std::size_t l = 0, rl = 0; l < spec.columns(); ++l) {
      if (l == j) continue;
      e[k][l] = reduced.entry(rk, rl);
      ++rl;
    }
    ++rk;
  }
  e[row][j] = r.constant(1);
  DegreeMatrixSpec s = spec;
  s.explicit_entries.clear();
  return GradedMatrix(s, r, std::move(e));
}

GenerizationReport verify_generization(const DegreeMatrixSpec& spec, std::size_t i, std::size_t j,
                                       std::size_t bordered_trials) {
  GenerizationReport rep;
  rep.spec = spec;
  rep.row = i;
  rep.col = j;
  rep.reduced = reduce_degree_matrix(spec, i, j);
  if (!nonempty(spec)) throw EmptyStratum("the stratum " + spec.to_text() + " is empty");
  if (!nonempty(rep.reduced)) throw EmptyStratum("the reduced stratum " + rep.reduced.to_text() + " is empty");
  const std::size_t row = i - 1;

  StandardSample ss = sample_standard(with_entry(spec, row, j, "0"));
  rep.special = ss.matrix;
  rep.special_codim = ss.codim;
  const PolyRing& ring = rep.special->ring();
  auto entries = rep.special->entries();
  entries[row][j] = ring.constant(1);
  rep.general = GradedMatrix(rep.special->spec(), ring, entries);
  rep.general_codim = codimension_check(*rep.general);
  if (!rep.special_codim.standard) rep.findings.push_back("the u = 0 sample is not standard");
  if (!rep.general_codim.standard) rep.findings.push_back("the u = 1 sample is not standard");

  rep.en_full = eagon_northcott_betti(spec);
  rep.en_reduced = eagon_northcott_betti(rep.reduced);
  rep.attributable = attributable_ghosts(spec, i, j);
  rep.special_table = quotient_betti(*rep.special);
  rep.general_table = quotient_betti(*rep.general);
  if (auto removed = difference(rep.special_table, rep.general_table)) {
    rep.removed = *removed;
    rep.removes_exactly_corner_ghosts = rep.removed == rep.attributable;
  } else {
    rep.findings.push_back("the u = 1 table has a summand missing from the u = 0 table");
  }
  if (!rep.removes_exactly_corner_ghosts)
    rep.findings.push_back("the removed summands differ from the corner ghosts of the Eagon-Northcott complex");
  rep.special_ghosts = detect_ghosts(rep.special_table);
  classify_ghosts(rep.special_ghosts, spec);
  rep.general_ghosts = detect_ghosts(rep.general_table);
  classify_ghosts(rep.general_ghosts, rep.reduced);

  GroebnerBasis gs = ideal_basis(ring, rep.special->maximal_minors());
  GroebnerBasis gg = ideal_basis(ring, rep.general->maximal_minors());
  auto [lo, hi] = rep.en_full.degree_range();
  (void)lo;
  rep.hilbert_checked_to = hi + ring.n() + 1;
  rep.hilbert_agree = true;
  for (int d = 0; d <= rep.hilbert_checked_to; ++d)
    rep.hilbert_agree = rep.hilbert_agree && gs.quotient_dimension(d) == gg.quotient_dimension(d);
  if (!rep.hilbert_agree) rep.findings.push_back("Hilbert functions of the u = 0 and u = 1 members differ");

  // Eliminate the unit: the complement has entries g_kl - g_kj g_il.
  const std::size_t t = spec.t();
  std::vector<std::vector<Polynomial>> schur;
  for (std::size_t k = 0; k < t; ++k) {
    if (k == row) continue;
    std::vector<Polynomial> line;
    for (std::size_t l = 0; l < spec.columns(); ++l) {
      if (l == j) continue;
      line.push_back(ring.subtract(entries[k][l], ring.multiply(entries[k][j], entries[row][l])));
    }
    schur.push_back(std::move(line));
  }
  DegreeMatrixSpec rs = rep.reduced;
  rs.explicit_entries.clear();
  GradedMatrix eliminated(rs, ring, std::move(schur));
  rep.schur_complement_equal = ideal_basis(ring, eliminated.maximal_minors()) == gg;
  if (!rep.schur_complement_equal) rep.findings.push_back("I_t of the u = 1 matrix differs from I_{t-1} after elimination");

  DegreeMatrixSpec sampler = rep.reduced;
  sampler.explicit_entries.clear();
  for (std::size_t k = 0; k < bordered_trials; ++k) {
    sampler.seed = spec.seed + 1000 + k;
    GradedMatrix a = sample_matrix(sampler);
    GradedMatrix b = bordered_matrix(spec, i, j, a);
    ++rep.bordered_trials;
    if (ideal_basis(ring, b.maximal_minors()) == ideal_basis(ring, a.maximal_minors())) ++rep.bordered_equal;
  }
  if (rep.bordered_equal != rep.bordered_trials) rep.findings.push_back("bordered identity failed");

  bool outside = false;
  for (const auto& [key, v] : rep.special_table.entries()) outside = outside || v > rep.en_reduced.at(key.first, key.second);
  rep.nonemptiness = rep.special_codim.standard && outside ? "witnessed" : "not witnessed";
  return rep;
}

std::string summands_text(const BettiTable& table, int i) {
  std::vector<std::pair<int, std::size_t>> terms;
  for (const auto& [key, v] : table.entries())
    if (key.first == i) terms.emplace_back(key.second, v);
  std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::string s;
  for (const auto& [j, v] : terms) s += (s.empty() ? "" : " + ") + twist_text(j, v);
  return s.empty() ? "0" : s;
}

std::string betti_diff_text(const BettiTable& before, const BettiTable& after) {
  const int len = std::max(before.length(), after.length());
  std::vector<std::string> left, right, marks;
  for (int i = 0; i <= len; ++i) {
    left.push_back(summands_text(before, i));
    right.push_back(summands_text(after, i));
    std::string m;
    for (const auto& [key, v] : before.entries()) {
      if (key.first != i) continue;
      const std::size_t w = after.at(i, key.second);
      if (v > w) m += (m.empty() ? "removed " : ", ") + twist_text(key.second, v - w);
    }
    for (const auto& [key, v] : after.entries()) {
      if (key.first != i) continue;
      const std::size_t w = before.at(i, key.second);
      if (v > w) m += (m.empty() ? "added " : ", added ") + twist_text(key.second, v - w);
    }
    marks.push_back(m);
  }
  std::size_t wl = 0, wr = 0;
  for (int i = 0; i <= len; ++i) {
    wl = std::max(wl, left[static_cast<std::size_t>(i)].size());
    wr = std::max(wr, right[static_cast<std::size_t>(i)].size());
  }
  std::ostringstream os;
  for (int i = 0; i <= len; ++i) {
    const auto k = static_cast<std::size_t>(i);
    os << std::to_string(i) << ": " << left[k] << std::string(wl - left[k].size(), ' ') << "  |  " << right[k];
    if (!marks[k].empty()) os << std::string(wr - right[k].size(), ' ') << "  " << marks[k];
    os << "\n";
  }
  return os.str();
}

std::string to_json(const GhostLedger& ledger, int indent) { return ledger_json(ledger).dump(indent); }

std::string to_json(const GenerizationReport& r, int indent) {
  ordered_json j;
  j["spec"] = r.spec.to_text();
  j["reduced"] = r.reduced.to_text();
  j["corner"] = {{"i", r.row}, {"j", r.col}};
  j["special_table"] = table_json(r.special_table);
  j["general_table"] = table_json(r.general_table);
  j["en_full"] = table_json(r.en_full);
  j["en_reduced"] = table_json(r.en_reduced);
  j["attributable"] = table_json(r.attributable);
  j["removed"] = table_json(r.removed);
  j["special_ghosts"] = ledger_json(r.special_ghosts);
  j["general_ghosts"] = ledger_json(r.general_ghosts);
  j["hilbert_agree"] = r.hilbert_agree;
  j["hilbert_checked_to"] = {{"value", r.hilbert_checked_to}, {"method", "groebner"}};
  j["removes_exactly_corner_ghosts"] = r.removes_exactly_corner_ghosts;
  j["schur_complement_equal"] = r.schur_complement_equal;
  j["bordered"] = {{"trials", r.bordered_trials}, {"equal", r.bordered_equal}, {"method", "groebner"}};
  j["nonemptiness"] = r.nonemptiness;
  j["findings"] = r.findings;
  j["ok"] = r.ok();
  return j.dump(indent);
}

std::string to_text(const GenerizationReport& r) {
  std::ostringstream os;
  os << "corner (" << r.row << "," << r.col << ") of " << r.spec.to_text() << " -> " << r.reduced.to_text() << "\n";
  os << "minimal resolutions, u = 0 | u = 1\n" << betti_diff_text(r.special_table, r.general_table);
  os << "corner ghosts of the Eagon-Northcott complex\n";
  for (int i = 0; i <= r.attributable.length(); ++i)
    if (r.attributable.total(i)) os << "  " << i << ": " << summands_text(r.attributable, i) << "\n";
  os << "ghosts left after generization:";
  if (r.general_ghosts.entries.empty()) os << " none";
  for (const GhostEntry& e : r.general_ghosts.entries)
    os << " " << twist_text(e.j, e.count) << " in degrees " << e.i << "," << e.i + 1;
  os << "\n";
  os << "Hilbert functions agree through degree " << r.hilbert_checked_to << ": " << (r.hilbert_agree ? "yes" : "no")
     << "\n";
  os << "removes exactly the corner ghosts: " << (r.removes_exactly_corner_ghosts ? "yes" : "no") << "\n";
  os << "elimination of the unit gives the same ideal: " << (r.schur_complement_equal ? "yes" : "no") << "\n";
  os << "bordered identity: " << r.bordered_equal << "/" << r.bordered_trials << "\n";
  os << "W_s(b;a) minus the reduced stratum: " << r.nonemptiness << "\n";
  for (const auto& f : r.findings) os << "finding: " << f << "\n";
  return os.str();
}

}  // namespace detstrata
