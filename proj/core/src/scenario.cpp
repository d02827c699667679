#include "richards/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "richards/errors.hpp"

namespace richards {

using nlohmann::json;

std::vector<double> Scenario::initial_profile() const {
  const double theta_top0 = soil.theta_r() + bc_top_offset_init;
  const double theta_bot0 = bc_bottom.start;
  const int Nz = grid.Nz;
  std::vector<double> out(Nz);
  switch (ic.kind) {
    case IcKind::Linear:
      for (int i = 0; i < Nz; ++i)
        out[i] = theta_top0 + grid.z(i) * (theta_bot0 - theta_top0) / grid.Z;
      break;
    case IcKind::LinearReflected:
      for (int i = 0; i < Nz; ++i)
        out[i] = theta_top0 + grid.z(i) * (theta_top0 - theta_bot0) / grid.Z;
      break;
    case IcKind::Quadratic:
      for (int i = 0; i < Nz; ++i) {
        const double zr = grid.z(i) / grid.Z;
        out[i] = (theta_bot0 - theta_top0) * zr * zr + theta_top0;
      }
      break;
    case IcKind::Table: {
      size_t k = 0;
      for (int i = 0; i < Nz; ++i) {
        const double z = grid.z(i);
        while (k + 2 < ic.z.size() && ic.z[k + 1] < z) ++k;
        const double z0 = ic.z[k], z1 = ic.z[k + 1];
        const double w = (z - z0) / (z1 - z0);
        out[i] = (1.0 - w) * ic.theta[k] + w * ic.theta[k + 1];
      }
      break;
    }
  }
  return out;
}

std::vector<double> Scenario::bottom_series() const {
  std::vector<double> out(grid.Nt);
  for (int n = 0; n < grid.Nt; ++n) {
    if (bc_bottom.kind == BottomBcKind::Constant) {
      out[n] = bc_bottom.start;
    } else {
      const double w = grid.t(n) / grid.T;
      out[n] = (1.0 - w) * bc_bottom.start + w * bc_bottom.end;
    }
  }
  return out;
}

ControlSignal Scenario::initial_control() const {
  return {grid, std::vector<double>(grid.Nt, bc_top_offset_init)};
}

ControlProblem Scenario::problem() const {
  ControlProblem p{soil,
                   uptake,
                   DiffusivityRegularization{pgd.epsilon},
                   grid,
                   initial_profile(),
                   bottom_series(),
                   pgd.lambda,
                   pgd.track_normalized,
                   pgd.picard()};
  return p;
}

std::vector<std::string> Scenario::validate() const {
  std::vector<std::string> v;
  const auto soil_report = soil.validate_quasi_unsaturated();
  for (const auto& s : soil_report.violations) v.push_back("soil: " + s);
  for (const auto& s : uptake.validate()) v.push_back(s);

  if (!(grid.Z > 0.0)) v.push_back("grid.Z > 0 violated");
  if (!(grid.T > 0.0)) v.push_back("grid.T > 0 violated");
  if (grid.Nz < 3) v.push_back("grid.Nz >= 3 violated");
  if (grid.Nt < 2) v.push_back("grid.Nt >= 2 violated");

  if (!(pgd.maxit >= 1)) v.push_back("pgd.maxit >= 1 violated");
  if (!(pgd.tol > 0.0)) v.push_back("pgd.tol > 0 violated");
  if (!(pgd.lambda > 0.0)) v.push_back("pgd.lambda > 0 violated");
  if (!(pgd.epsilon > 0.0)) v.push_back("pgd.epsilon > 0 violated");
  if (!(pgd.picard_tol > 0.0)) v.push_back("pgd.picard_tol > 0 violated");
  if (!(pgd.picard_maxit >= 1)) v.push_back("pgd.picard_maxit >= 1 violated");
  if (!(pgd.linesearch.max_evals >= 2)) v.push_back("pgd.linesearch.max_evals >= 2 violated");
  if (!(pgd.linesearch.bracket_scale > 0.0)) v.push_back("pgd.linesearch.bracket_scale > 0 violated");

  if (soil_report.valid) {
    const double tr = soil.theta_r();
    const double tS = soil.theta_S();
    if (!(pgd.epsilon < tS - tr)) v.push_back("pgd.epsilon < theta_S - theta_r violated");
    if (!(bc_top_offset_init >= 0.0 && bc_top_offset_init < tS - tr))
      v.push_back("bc_top_offset_init outside [0, theta_S - theta_r)");
    auto check_bc = [&](double value, const char* which) {
      if (!(value >= tr && value < tS)) {
        std::ostringstream os;
        os << "bc_bottom." << which << " = " << value << " outside [theta_r, theta_S)";
        v.push_back(os.str());
      }
    };
    check_bc(bc_bottom.start, "start");
    if (bc_bottom.kind == BottomBcKind::LinearInTime) check_bc(bc_bottom.end, "end");
    if (ic.kind == IcKind::Table) {
      for (double th : ic.theta) {
        if (!(th >= tr && th < tS)) {
          v.push_back("ic.theta entries must lie in [theta_r, theta_S)");
          break;
        }
      }
    }
  }
  if (ic.kind == IcKind::Table) {
    if (ic.z.size() < 2 || ic.z.size() != ic.theta.size())
      v.push_back("ic table needs matching z/theta arrays with at least two rows");
    else {
      if (!std::is_sorted(ic.z.begin(), ic.z.end())) v.push_back("ic.z must be increasing");
      if (ic.z.front() > 0.0 || ic.z.back() < grid.Z) v.push_back("ic.z must span [0, Z]");
    }
  }
  return v;
}

std::vector<std::string> builtin_scenario_names() {
  return {"haverkamp-ex1", "haverkamp-ex2", "berino-ex3", "glendale-ex4"};
}

namespace {

Scenario base_scenario(SoilModel soil, double Z, double T) {
  Scenario s;
  s.soil = std::move(soil);
  s.grid = {Z, T, 141, 241};
  s.uptake = {0.0, -350.0, -400.0, -820.0, 0.1 / Z};
  s.pgd = PgdConfig{};  // maxit 100, tol 1e-5, lambda 0.1, epsilon 1e-3
  return s;
}

}  // namespace

Scenario builtin_scenario(const std::string& name) {
  const HaverkampSoil sand{0.075, 0.287, 1.611e6, 3.96, 1.175e6, 4.74, 34.0};
  const VanGenuchtenSoil berino{0.0286, 0.3658, 0.0280, 2.2390, 22.5416};
  const VanGenuchtenSoil glendale{0.1060, 0.4686, 0.0104, 1.3954, 0.5458};

  if (name == "haverkamp-ex1") {
    Scenario s = base_scenario(SoilModel{sand}, 70.0, 3.0);
    s.name = name;
    s.ic.kind = IcKind::Linear;
    s.bc_bottom = {BottomBcKind::Constant, 0.9 * sand.theta_r + 0.1 * sand.theta_S, 0.0};
    return s;
  }
  if (name == "haverkamp-ex2") {
    Scenario s = base_scenario(SoilModel{sand}, 70.0, 3.0);
    s.name = name;
    s.ic.kind = IcKind::LinearReflected;
    s.bc_bottom = {BottomBcKind::LinearInTime, 0.9 * sand.theta_r + 0.1 * sand.theta_S,
                   0.7 * sand.theta_r + 0.3 * sand.theta_S};
    return s;
  }
  if (name == "berino-ex3") {
    Scenario s = base_scenario(SoilModel{berino}, 50.0, 12.0);
    s.name = name;
    s.ic.kind = IcKind::Quadratic;
    s.bc_bottom = {BottomBcKind::LinearInTime, 0.3 * berino.theta_r + 0.7 * berino.theta_S,
                   0.1 * berino.theta_r + 0.9 * berino.theta_S};
    return s;
  }
  if (name == "glendale-ex4") {
    Scenario s = base_scenario(SoilModel{glendale}, 30.0, 36.0);
    s.name = name;
    s.ic.kind = IcKind::Quadratic;
    s.bc_bottom = {BottomBcKind::LinearInTime, 0.5 * glendale.theta_r + 0.5 * glendale.theta_S,
                   0.7 * glendale.theta_r + 0.3 * glendale.theta_S};
    return s;
  }
  throw UnknownScenario("unknown scenario '" + name + "'; built-ins: haverkamp-ex1, haverkamp-ex2, berino-ex3, glendale-ex4");
}

// ---------------------------------------------------------------------------
// JSON config document
// ---------------------------------------------------------------------------

namespace {

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  for (const char* key : required) {
    if (!obj.contains(key)) throw SchemaError(where + ": missing required key '" + key + "'");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& k = it.key();
    const bool known = std::any_of(required.begin(), required.end(),
                                   [&](const char* r) { return k == r; }) ||
                       std::any_of(optional.begin(), optional.end(),
                                   [&](const char* o) { return k == o; });
    if (!known) throw SchemaError(where + ": unknown key '" + k + "'");
  }
}

double get_number(const json& obj, const std::string& where, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw SchemaError(where + "." + key + ": expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& where, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw SchemaError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

SoilModel parse_soil(const json& j) {
  require_keys(j, "soil", {"family"}, {"theta_r", "theta_S", "alpha", "beta2", "A", "beta1", "K_S", "n"});
  const std::string family = j.at("family").is_string() ? j.at("family").get<std::string>() : "";
  if (family == "haverkamp") {
    require_keys(j, "soil", {"family", "theta_r", "theta_S", "alpha", "beta2", "A", "beta1", "K_S"}, {});
    return SoilModel{HaverkampSoil{get_number(j, "soil", "theta_r"), get_number(j, "soil", "theta_S"),
                                   get_number(j, "soil", "alpha"), get_number(j, "soil", "beta2"),
                                   get_number(j, "soil", "A"), get_number(j, "soil", "beta1"),
                                   get_number(j, "soil", "K_S")}};
  }
  if (family == "van_genuchten") {
    require_keys(j, "soil", {"family", "theta_r", "theta_S", "alpha", "n", "K_S"}, {});
    return SoilModel{VanGenuchtenSoil{get_number(j, "soil", "theta_r"), get_number(j, "soil", "theta_S"),
                                      get_number(j, "soil", "alpha"), get_number(j, "soil", "n"),
                                      get_number(j, "soil", "K_S")}};
  }
  throw SchemaError("soil.family: expected 'haverkamp' or 'van_genuchten'");
}

IcKind parse_ic_kind(const std::string& kind) {
  if (kind == "linear") return IcKind::Linear;
  if (kind == "linear_reflected") return IcKind::LinearReflected;
  if (kind == "quadratic") return IcKind::Quadratic;
  if (kind == "table") return IcKind::Table;
  throw SchemaError("ic.kind: expected 'linear', 'linear_reflected', 'quadratic' or 'table'");
}

const char* ic_kind_name(IcKind kind) {
  switch (kind) {
    case IcKind::Linear: return "linear";
    case IcKind::LinearReflected: return "linear_reflected";
    case IcKind::Quadratic: return "quadratic";
    case IcKind::Table: return "table";
  }
  return "?";
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("config is not valid JSON: ") + e.what());
  }

  require_keys(j, "scenario", {"name", "soil", "uptake", "grid", "ic", "bc_bottom"},
               {"bc_top_offset_init", "pgd", "paper_literal_ic"});

  Scenario s;
  if (!j.at("name").is_string()) throw SchemaError("name: expected a string");
  s.name = j.at("name").get<std::string>();
  s.soil = parse_soil(j.at("soil"));

  const json& ju = j.at("uptake");
  require_keys(ju, "uptake", {"h1", "h2", "h3", "h4", "varphi"}, {});
  s.uptake.h1 = get_number(ju, "uptake", "h1");
  s.uptake.h2 = get_number(ju, "uptake", "h2");
  s.uptake.h3 = get_number(ju, "uptake", "h3");
  s.uptake.h4 = get_number(ju, "uptake", "h4");

  const json& jg = j.at("grid");
  require_keys(jg, "grid", {"Z", "T"}, {"Nz", "Nt"});
  s.grid.Z = get_number(jg, "grid", "Z");
  s.grid.T = get_number(jg, "grid", "T");
  s.grid.Nz = jg.contains("Nz") ? get_int(jg, "grid", "Nz") : 141;
  s.grid.Nt = jg.contains("Nt") ? get_int(jg, "grid", "Nt") : 241;

  // varphi needs Z for the "auto" spelling (0.1/Z)
  if (ju.at("varphi").is_string()) {
    if (ju.at("varphi").get<std::string>() != "auto")
      throw SchemaError("uptake.varphi: expected a number or \"auto\"");
    s.uptake.varphi = 0.1 / s.grid.Z;
  } else {
    s.uptake.varphi = get_number(ju, "uptake", "varphi");
  }

  const json& ji = j.at("ic");
  require_keys(ji, "ic", {"kind"}, {"z", "theta"});
  if (!ji.at("kind").is_string()) throw SchemaError("ic.kind: expected a string");
  s.ic.kind = parse_ic_kind(ji.at("kind").get<std::string>());
  if (s.ic.kind == IcKind::Table) {
    require_keys(ji, "ic", {"kind", "z", "theta"}, {});
    if (!ji.at("z").is_array() || !ji.at("theta").is_array())
      throw SchemaError("ic.z / ic.theta: expected arrays");
    s.ic.z = ji.at("z").get<std::vector<double>>();
    s.ic.theta = ji.at("theta").get<std::vector<double>>();
  } else if (ji.contains("z") || ji.contains("theta")) {
    throw SchemaError("ic: z/theta tables are only valid with kind 'table'");
  }

  const json& jb = j.at("bc_bottom");
  require_keys(jb, "bc_bottom", {"kind"}, {"value", "start", "end"});
  if (!jb.at("kind").is_string()) throw SchemaError("bc_bottom.kind: expected a string");
  const std::string bkind = jb.at("kind").get<std::string>();
  if (bkind == "constant") {
    require_keys(jb, "bc_bottom", {"kind", "value"}, {});
    s.bc_bottom = {BottomBcKind::Constant, get_number(jb, "bc_bottom", "value"), 0.0};
  } else if (bkind == "linear") {
    require_keys(jb, "bc_bottom", {"kind", "start", "end"}, {});
    s.bc_bottom = {BottomBcKind::LinearInTime, get_number(jb, "bc_bottom", "start"),
                   get_number(jb, "bc_bottom", "end")};
  } else {
    throw SchemaError("bc_bottom.kind: expected 'constant' or 'linear'");
  }

  if (j.contains("bc_top_offset_init")) {
    const json& jt = j.at("bc_top_offset_init");
    require_keys(jt, "bc_top_offset_init", {"kind", "value"}, {});
    if (!jt.at("kind").is_string() || jt.at("kind").get<std::string>() != "constant")
      throw SchemaError("bc_top_offset_init.kind: only 'constant' is supported");
    s.bc_top_offset_init = get_number(jt, "bc_top_offset_init", "value");
  }

  if (j.contains("pgd")) {
    const json& jp = j.at("pgd");
    require_keys(jp, "pgd", {},
                 {"maxit", "tol", "lambda", "epsilon", "picard_tol", "picard_maxit",
                  "linesearch", "track_normalized"});
    if (jp.contains("maxit")) s.pgd.maxit = get_int(jp, "pgd", "maxit");
    if (jp.contains("tol")) s.pgd.tol = get_number(jp, "pgd", "tol");
    if (jp.contains("lambda")) s.pgd.lambda = get_number(jp, "pgd", "lambda");
    if (jp.contains("epsilon")) s.pgd.epsilon = get_number(jp, "pgd", "epsilon");
    if (jp.contains("picard_tol")) s.pgd.picard_tol = get_number(jp, "pgd", "picard_tol");
    if (jp.contains("picard_maxit")) s.pgd.picard_maxit = get_int(jp, "pgd", "picard_maxit");
    if (jp.contains("track_normalized")) {
      if (!jp.at("track_normalized").is_boolean())
        throw SchemaError("pgd.track_normalized: expected a boolean");
      s.pgd.track_normalized = jp.at("track_normalized").get<bool>();
    }
    if (jp.contains("linesearch")) {
      const json& jl = jp.at("linesearch");
      require_keys(jl, "pgd.linesearch", {}, {"max_evals", "bracket_scale"});
      if (jl.contains("max_evals")) s.pgd.linesearch.max_evals = get_int(jl, "pgd.linesearch", "max_evals");
      if (jl.contains("bracket_scale"))
        s.pgd.linesearch.bracket_scale = get_number(jl, "pgd.linesearch", "bracket_scale");
    }
  }

  if (j.contains("paper_literal_ic")) {
    if (!j.at("paper_literal_ic").is_boolean())
      throw SchemaError("paper_literal_ic: expected a boolean");
    // escape hatch: downgrade the reflected (extrapolating) linear profile to
    // plain interpolation when the flag is off
    if (!j.at("paper_literal_ic").get<bool>() && s.ic.kind == IcKind::LinearReflected)
      s.ic.kind = IcKind::Linear;
  }

  const auto violations = s.validate();
  if (!violations.empty()) {
    std::string msg = "scenario '" + s.name + "' failed validation:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  json j;
  j["name"] = s.name;
  if (const auto* h = s.soil.haverkamp()) {
    j["soil"] = {{"family", "haverkamp"}, {"theta_r", h->theta_r}, {"theta_S", h->theta_S},
                 {"alpha", h->alpha},     {"beta2", h->beta2},     {"A", h->A},
                 {"beta1", h->beta1},     {"K_S", h->K_S}};
  } else {
    const auto* v = s.soil.van_genuchten();
    j["soil"] = {{"family", "van_genuchten"}, {"theta_r", v->theta_r}, {"theta_S", v->theta_S},
                 {"alpha", v->alpha},         {"n", v->n},             {"K_S", v->K_S}};
  }
  j["uptake"] = {{"h1", s.uptake.h1}, {"h2", s.uptake.h2}, {"h3", s.uptake.h3},
                 {"h4", s.uptake.h4}, {"varphi", s.uptake.varphi}};
  j["grid"] = {{"Z", s.grid.Z}, {"T", s.grid.T}, {"Nz", s.grid.Nz}, {"Nt", s.grid.Nt}};
  j["ic"] = {{"kind", ic_kind_name(s.ic.kind)}};
  if (s.ic.kind == IcKind::Table) {
    j["ic"]["z"] = s.ic.z;
    j["ic"]["theta"] = s.ic.theta;
  }
  if (s.bc_bottom.kind == BottomBcKind::Constant) {
    j["bc_bottom"] = {{"kind", "constant"}, {"value", s.bc_bottom.start}};
  } else {
    j["bc_bottom"] = {{"kind", "linear"}, {"start", s.bc_bottom.start}, {"end", s.bc_bottom.end}};
  }
  j["bc_top_offset_init"] = {{"kind", "constant"}, {"value", s.bc_top_offset_init}};
  j["pgd"] = {{"maxit", s.pgd.maxit},
              {"tol", s.pgd.tol},
              {"lambda", s.pgd.lambda},
              {"epsilon", s.pgd.epsilon},
              {"picard_tol", s.pgd.picard_tol},
              {"picard_maxit", s.pgd.picard_maxit},
              {"linesearch",
               {{"max_evals", s.pgd.linesearch.max_evals},
                {"bracket_scale", s.pgd.linesearch.bracket_scale}}},
              {"track_normalized", s.pgd.track_normalized}};
  return j.dump(2) + "\n";
}

}  // namespace richards
