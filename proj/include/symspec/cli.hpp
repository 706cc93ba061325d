#pragma once

// Command execution and rendering behind the symspec tool. Reports are plain
// data; rendering is deterministic so repeated runs are byte-identical.
//
// Exit codes: 0 all checks pass, 1 a verification finding, 2 usage or model
// input error, 3 internal invariant violation.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "symspec/errors.hpp"
#include "symspec/model.hpp"
#include "symspec/model_io.hpp"
#include "symspec/suites.hpp"

namespace symspec::cli {

enum class Command { models, cohomology, pages, verify, harmonic };
enum class Format { table, json };

enum ExitCode : int { kPass = 0, kFinding = 1, kUsage = 2, kInternal = 3 };

struct RunConfig {
  Command command = Command::pages;
  std::string model_source;
  std::optional<int> max_page;
  Format format = Format::table;
  std::vector<std::string> suites;
};

inline Format parse_format(const std::string& s) {
  if (s == "table") return Format::table;
  if (s == "json") return Format::json;
  throw UsageError("unknown format '" + s + "' (expected table or json)");
}

inline std::vector<std::string> parse_suites(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto& known = suite_names();
    if (std::find(known.begin(), known.end(), item) == known.end()) {
      std::string list;
      for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
      throw UsageError("unknown suite '" + item + "'; available: " + list);
    }
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  if (out.empty()) throw UsageError("no suites given");
  return out;
}

/// A builtin name, or else a path to a JSON model file.
inline Model load_model(const std::string& source) {
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), source) != names.end()) return builtin(source);
  if (!std::filesystem::is_regular_file(source)) {
    std::string list;
    for (const auto& k : names) list += (list.empty() ? "" : ", ") + k;
    throw ModelError(ModelError::Kind::unknown_builtin,
                     "'" + source + "' is neither a builtin model (" + list + ") nor a readable file");
  }
  std::ifstream file(source, std::ios::binary);
  std::stringstream text;
  text << file.rdbuf();
  return parse_model(text.str());
}

struct Report {
  Command command = Command::pages;
  std::vector<std::string> available_models;  // models list only

  // Model metadata.
  std::string model_name;
  int generators = 0;
  int n = 0;
  std::string omega;
  std::vector<std::size_t> betti;
  ClosednessProfile closedness;
  bool nilpotent = false;

  std::map<int, DimTable> pages;
  std::optional<int> stabilization_page;
  std::vector<Check> verdicts;
  std::optional<HarmonicVerdict> harmonic;

  int exit_code() const {
    for (const auto& v : verdicts) {
      if (!v.pass) return kFinding;
    }
    return kPass;
  }
};

inline Report run(const RunConfig& config) {
  Report report;
  report.command = config.command;
  if (config.command == Command::models) {
    report.available_models = builtin_names();
    return report;
  }

  Model model = load_model(config.model_source);
  const int n = model.n();
  if (config.max_page && *config.max_page < 0) throw UsageError("--max-page must be nonnegative");
  const int max_page = config.max_page.value_or(n + 1);
  Analysis a(model, max_page);

  report.model_name = model.name();
  report.generators = model.generators();
  report.n = n;
  report.omega = model.omega().str();
  report.betti = a.cohomology().betti();
  report.closedness = a.cohomology().closedness();
  report.nilpotent = is_nilpotent(model);

  switch (config.command) {
    case Command::models:
    case Command::cohomology:
      break;
    case Command::pages:
      for (int r = 0; r <= max_page; ++r) report.pages[r] = a.spectral().page(r).dims();
      report.stabilization_page = a.spectral().stabilization_page();
      break;
    case Command::verify:
      report.stabilization_page = a.spectral().stabilization_page();
      report.verdicts = run_suites(a, config.suites);
      break;
    case Command::harmonic: {
      HarmonicVerdict v = harmonic_verdict(a.cohomology(), a.spectral());
      report.harmonic = v;
      report.verdicts.push_back(oracle_agreement(v));
      break;
    }
  }
  return report;
}

inline const char* command_name(Command c) {
  switch (c) {
    case Command::models: return "models";
    case Command::cohomology: return "cohomology";
    case Command::pages: return "pages";
    case Command::verify: return "verify";
    case Command::harmonic: return "harmonic";
  }
  return "";
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json oracle_json(const OracleResult& r) {
  nlohmann::json out;
  out["harmonic"] = r.harmonic;
  out["witness"] = r.witness;
  out["witness_degree"] = r.witness_degree >= 0 ? nlohmann::json(r.witness_degree) : nlohmann::json(nullptr);
  return out;
}

inline nlohmann::json pages_json(const std::map<int, DimTable>& pages) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [r, table] : pages) {
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [pq, dim] : table) entries[std::to_string(pq.first) + "," + std::to_string(pq.second)] = dim;
    out[std::to_string(r)] = entries;
  }
  return out;
}

/// Inverse of pages_json.
inline std::map<int, DimTable> parse_pages_json(const nlohmann::json& pages) {
  std::map<int, DimTable> out;
  for (const auto& [r, entries] : pages.items()) {
    DimTable table;
    for (const auto& [key, dim] : entries.items()) {
      auto comma = key.find(',');
      if (comma == std::string::npos) throw UsageError("malformed page key '" + key + "'");
      table[{std::stoi(key.substr(0, comma)), std::stoi(key.substr(comma + 1))}] = dim.get<std::size_t>();
    }
    out[std::stoi(r)] = table;
  }
  return out;
}

inline nlohmann::json to_json(const Report& report) {
  nlohmann::json out;
  out["command"] = command_name(report.command);
  if (report.command == Command::models) {
    out["models"] = report.available_models;
    return out;
  }
  nlohmann::json model;
  model["name"] = report.model_name;
  model["generators"] = report.generators;
  model["n"] = report.n;
  model["omega"] = report.omega;
  model["betti"] = report.betti;
  model["closed_type"] = report.closedness.closed_type();
  model["t_min"] = report.closedness.t_min ? nlohmann::json(*report.closedness.t_min) : nlohmann::json(nullptr);
  model["nilpotent"] = report.nilpotent;
  out["model"] = model;
  out["pages"] = pages_json(report.pages);
  out["stabilization_page"] =
      report.stabilization_page ? nlohmann::json(*report.stabilization_page) : nlohmann::json(nullptr);
  out["verdicts"] = nlohmann::json::array();
  for (const auto& v : report.verdicts) out["verdicts"].push_back({{"name", v.name}, {"pass", v.pass}, {"witness", v.witness}});
  if (report.harmonic) {
    const auto& h = *report.harmonic;
    out["harmonic"] = {{"applicable", h.applicable},
                       {"enforced", h.enforced()},
                       {"harmonic", h.harmonic()},
                       {"direct", oracle_json(h.direct)},
                       {"hodge_lepage_components", oracle_json(h.prop6)},
                       {"page2_tau", oracle_json(h.thm5)}};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table

/// One block per page: rows q = n..0, columns p = 0..n, "·" for zero entries.
inline std::string render_page(int r, const DimTable& table, int n) {
  std::size_t width = 1;
  for (const auto& [pq, dim] : table) width = std::max(width, std::to_string(dim).size());
  std::ostringstream out;
  out << "E_" << r << "\n";
  out << "  q\\p";
  for (int p = 0; p <= n; ++p) out << ' ' << std::setw(static_cast<int>(width)) << p;
  out << "\n";
  for (int q = n; q >= 0; --q) {
    out << "  " << std::setw(3) << q;
    for (int p = 0; p <= n; ++p) {
      auto it = table.find({p, q});
      // "·" is two bytes wide in UTF-8 but one column on screen.
      std::string cell = it == table.end() ? "·" : std::to_string(it->second);
      std::size_t shown = it == table.end() ? 1 : cell.size();
      out << ' ' << std::string(width - shown, ' ') << cell;
    }
    out << "\n";
  }
  return out.str();
}

inline std::string render_table(const Report& report) {
  std::ostringstream out;
  if (report.command == Command::models) {
    for (const auto& name : report.available_models) out << name << "\n";
    return out.str();
  }
  out << "model " << report.model_name << " (" << report.generators << " generators, n = " << report.n << ")\n";
  out << "omega = " << report.omega << "\n";
  if (report.command == Command::cohomology) {
    out << "betti";
    for (auto b : report.betti) out << ' ' << b;
    out << "\n";
    for (std::size_t t = 0; t < report.closedness.class_nonzero.size(); ++t) {
      out << "[omega^" << t + 1 << "] " << (report.closedness.class_nonzero[t] ? "nonzero" : "zero") << "\n";
    }
    out << "t_min " << (report.closedness.t_min ? std::to_string(*report.closedness.t_min) : "none") << "\n";
    out << "closed-type " << (report.closedness.closed_type() ? "yes" : "no") << "\n";
    out << "nilpotent " << (report.nilpotent ? "yes" : "no") << "\n";
  }
  for (const auto& [r, table] : report.pages) out << "\n" << render_page(r, table, report.n);
  if (report.stabilization_page) out << "\nstabilization page " << *report.stabilization_page << "\n";
  if (report.harmonic) {
    const auto& h = *report.harmonic;
    out << "\nverdict: " << (h.harmonic() ? "harmonic" : "not harmonic")
        << (h.applicable ? "" : " (not applicable: model is not closed-type)") << "\n";
    out << "  direct, δ-closed representatives:      " << describe(h.direct) << "\n";
    out << "  closed Hodge-Lepage components:        " << describe(h.prop6) << "\n";
    out << "  Theorem 5, τ_2^{n-q} isomorphisms:     " << describe(h.thm5) << "\n";
  }
  if (!report.verdicts.empty()) out << "\n";
  for (const auto& v : report.verdicts) {
    out << (v.pass ? "PASS  " : "FAIL  ") << v.name;
    if (!v.witness.empty()) out << "  [" << v.witness << "]";
    out << "\n";
  }
  return out.str();
}

inline std::string render(const Report& report, Format format) {
  if (format == Format::json) return to_json(report).dump(2) + "\n";
  return render_table(report);
}

struct Outcome {
  int exit_code = kPass;
  std::string out;
  std::string err;
};

/// run + render, mapping each error class to its exit code.
inline Outcome execute(const RunConfig& config) {
  try {
    Report report = run(config);
    return {report.exit_code(), render(report, config.format), {}};
  } catch (const UsageError& e) {
    return {kUsage, {}, std::string("usage error: ") + e.what() + "\n"};
  } catch (const ModelError& e) {
    return {kUsage, {}, std::string("model error: ") + e.what() + "\n"};
  } catch (const InvariantViolation& e) {
    return {kInternal, {}, std::string("internal invariant violated: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {kInternal, {}, std::string("internal error: ") + e.what() + "\n"};
  }
}

}  // namespace symspec::cli
