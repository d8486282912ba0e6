#include "sdg/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "sdg/error.hpp"

namespace sdg {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::ConfigError, "key '" + key + "': " + why);
}

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) bad(where, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) bad(where.empty() ? k : where + "." + k, "unknown key");
  }
}

template <class T>
T get(const json& j, const std::string& key, const std::string& path) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(path, "wrong type or missing");
  }
}

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

Point parse_point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) bad(path, "expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Box parse_box(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) bad(path, "expected [x0, y0, x1, y1]");
  for (const auto& v : j)
    if (!v.is_number()) bad(path, "expected numbers");
  return {{j[0].get<double>(), j[1].get<double>()}, {j[2].get<double>(), j[3].get<double>()}};
}

BoundaryKind parse_kind(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected \"dirichlet\" or \"neumann\"");
  const auto s = j.get<std::string>();
  if (s == "dirichlet") return BoundaryKind::Dirichlet;
  if (s == "neumann") return BoundaryKind::Neumann;
  bad(path, "expected \"dirichlet\" or \"neumann\", got \"" + s + "\"");
}

std::vector<double> parse_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) bad(path, "expected an array of numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

struct BoundaryRule {
  Box where;
  BoundaryKind kind;
  double value;  // pressure for Dirichlet, K grad p . n for Neumann
};

// Inline problem with constant coefficients and data.
Benchmark parse_problem(const json& j) {
  const std::string P = "problem";
  only_keys(j, P, {"name", "outline", "fractures", "permeability", "xi", "source", "fracture_source", "boundary",
                   "default_boundary", "initial_h"});
  Benchmark b;
  b.name = j.contains("name") ? get<std::string>(j, "name", join(P, "name")) : "inline";
  b.description = "inline problem";
  ProblemSpec& p = b.problem;
  p.name = b.name;
  if (!j.contains("outline") || !j["outline"].is_array() || j["outline"].empty()) {
    bad(join(P, "outline"), "expected a non-empty array of boxes");
  }
  for (std::size_t i = 0; i < j["outline"].size(); ++i) {
    p.domain.outline.push_back(parse_box(j["outline"][i], join(P, "outline[" + std::to_string(i) + "]")));
  }
  if (j.contains("fractures")) {
    const json& fs = j["fractures"];
    if (!fs.is_array()) bad(join(P, "fractures"), "expected an array");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const std::string F = join(P, "fractures[" + std::to_string(i) + "]");
      only_keys(fs[i], F, {"name", "vertices", "kappa_n", "kappa_t", "thickness", "tips"});
      Fracture f;
      f.name = fs[i].contains("name") ? get<std::string>(fs[i], "name", join(F, "name")) : "gamma" + std::to_string(i);
      if (!fs[i].contains("vertices") || !fs[i]["vertices"].is_array()) bad(join(F, "vertices"), "required");
      for (std::size_t v = 0; v < fs[i]["vertices"].size(); ++v) {
        f.vertices.push_back(parse_point(fs[i]["vertices"][v], join(F, "vertices")));
      }
      if (f.vertices.size() < 2) bad(join(F, "vertices"), "need at least two points");
      const std::size_t nseg = f.vertices.size() - 1;
      auto per_segment = [&](const std::string& key) {
        if (!fs[i].contains(key)) bad(join(F, key), "required");
        auto v = fs[i][key].is_number() ? std::vector<double>(nseg, fs[i][key].get<double>())
                                        : parse_numbers(fs[i][key], join(F, key));
        if (v.size() != nseg) bad(join(F, key), "need one value per segment");
        for (double x : v)
          if (!(x > 0.0)) bad(join(F, key), "must be positive");
        return v;
      };
      f.kappa_n = per_segment("kappa_n");
      f.kappa_t = fs[i].contains("kappa_t") ? per_segment("kappa_t") : f.kappa_n;
      if (fs[i].contains("thickness")) {
        f.thickness = get<double>(fs[i], "thickness", join(F, "thickness"));
        if (!(f.thickness > 0.0)) bad(join(F, "thickness"), "must be positive");
      }
      std::array<TipCondition, 2> tips{};
      if (fs[i].contains("tips")) {
        const json& t = fs[i]["tips"];
        if (!t.is_array() || t.size() != 2) bad(join(F, "tips"), "expected two tip conditions");
        for (std::size_t s = 0; s < 2; ++s) {
          const std::string T = join(F, "tips[" + std::to_string(s) + "]");
          only_keys(t[s], T, {"kind", "value"});
          if (!t[s].contains("kind")) bad(join(T, "kind"), "required");
          tips[s].kind = parse_kind(t[s]["kind"], join(T, "kind"));
          if (t[s].contains("value")) tips[s].value = get<double>(t[s], "value", join(T, "value"));
        }
      }
      p.domain.fractures.push_back(std::move(f));
      p.tips.push_back(tips);
    }
  }
  if (j.contains("permeability")) {
    const double k = get<double>(j, "permeability", join(P, "permeability"));
    if (!(k > 0.0)) bad(join(P, "permeability"), "must be positive");
    p.permeability = [k](Point, int) { return Tensor2::isotropic(k); };
  }
  if (j.contains("xi")) p.xi = get<double>(j, "xi", join(P, "xi"));
  if (j.contains("source")) {
    const double f = get<double>(j, "source", join(P, "source"));
    p.source = [f](Point, int) { return f; };
  }
  if (j.contains("fracture_source")) {
    const double f = get<double>(j, "fracture_source", join(P, "fracture_source"));
    p.fracture_source = [f](Point, int) { return f; };
  }
  BoundaryRule fallback{{}, BoundaryKind::Dirichlet, 0.0};
  if (j.contains("default_boundary")) {
    const std::string D = join(P, "default_boundary");
    only_keys(j["default_boundary"], D, {"kind", "value"});
    if (!j["default_boundary"].contains("kind")) bad(join(D, "kind"), "required");
    fallback.kind = parse_kind(j["default_boundary"]["kind"], join(D, "kind"));
    if (j["default_boundary"].contains("value")) fallback.value = get<double>(j["default_boundary"], "value", join(D, "value"));
  }
  std::vector<BoundaryRule> rules;
  if (j.contains("boundary")) {
    if (!j["boundary"].is_array()) bad(join(P, "boundary"), "expected an array");
    for (std::size_t i = 0; i < j["boundary"].size(); ++i) {
      const std::string R = join(P, "boundary[" + std::to_string(i) + "]");
      const json& r = j["boundary"][i];
      only_keys(r, R, {"where", "kind", "value"});
      if (!r.contains("where")) bad(join(R, "where"), "required");
      if (!r.contains("kind")) bad(join(R, "kind"), "required");
      rules.push_back({parse_box(r["where"], join(R, "where")), parse_kind(r["kind"], join(R, "kind")),
                       r.contains("value") ? get<double>(r, "value", join(R, "value")) : 0.0});
    }
  }
  auto rule_at = [rules, fallback](Point x) {
    for (const BoundaryRule& r : rules)
      if (r.where.contains(x, 1e-12)) return r;
    return fallback;
  };
  p.boundary.kind = [rule_at](Point m) { return rule_at(m).kind; };
  p.boundary.pressure = [rule_at](Point x, int) { return rule_at(x).value; };
  p.boundary.flux = [rule_at](Point x) {
    const BoundaryRule r = rule_at(x);
    return r.kind == BoundaryKind::Neumann ? r.value : 0.0;
  };
  if (j.contains("initial_h")) b.initial_h = get<double>(j, "initial_h", join(P, "initial_h"));
  try {
    p.validate();
  } catch (const Error& e) {
    bad(P, e.what());
  }
  return b;
}

}  // namespace

Benchmark RunConfig::resolve() const {
  Benchmark b = problem ? *problem : make_benchmark(benchmark);
  if (initial_h) b.initial_h = *initial_h;
  return b;
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed JSON: ") + e.what());
  }
  only_keys(j, "", {"benchmark", "problem", "order", "initial_h", "amr", "solver", "output", "seed"});
  RunConfig c;
  if (j.contains("benchmark") == j.contains("problem")) bad("benchmark", "give exactly one of 'benchmark' or 'problem'");
  if (j.contains("benchmark")) {
    c.benchmark = get<std::string>(j, "benchmark", "benchmark");
    const auto names = benchmark_names();
    if (std::find(names.begin(), names.end(), c.benchmark) == names.end()) {
      bad("benchmark", "unknown benchmark '" + c.benchmark + "'");
    }
  } else {
    c.problem = parse_problem(j["problem"]);
  }
  if (j.contains("order")) {
    c.amr.order = get<int>(j, "order", "order");
    if (c.amr.order < 1) bad("order", "must be >= 1");
  }
  if (j.contains("initial_h")) {
    c.initial_h = get<double>(j, "initial_h", "initial_h");
    if (!(*c.initial_h > 0.0)) bad("initial_h", "must be positive");
  }
  if (j.contains("amr")) {
    const json& a = j["amr"];
    only_keys(a, "amr", {"mode", "theta", "max_dofs", "max_iterations"});
    if (a.contains("mode")) {
      const auto m = get<std::string>(a, "mode", "amr.mode");
      if (m == "adaptive") c.amr.mode = RefinementMode::Adaptive;
      else if (m == "uniform") c.amr.mode = RefinementMode::Uniform;
      else bad("amr.mode", "expected \"adaptive\" or \"uniform\"");
    }
    if (a.contains("theta")) {
      c.amr.theta = get<double>(a, "theta", "amr.theta");
      if (!(c.amr.theta > 0.0 && c.amr.theta <= 1.0)) bad("amr.theta", "must lie in (0, 1]");
    }
    if (a.contains("max_dofs")) {
      const auto v = get<long long>(a, "max_dofs", "amr.max_dofs");
      if (v <= 0) bad("amr.max_dofs", "must be positive");
      c.amr.max_dofs = static_cast<std::size_t>(v);
    }
    if (a.contains("max_iterations")) {
      c.amr.max_iterations = get<int>(a, "max_iterations", "amr.max_iterations");
      if (c.amr.max_iterations < 0) bad("amr.max_iterations", "must be >= 0");
    }
  }
  if (j.contains("solver")) {
    const auto s = get<std::string>(j, "solver", "solver");
    if (s == "condensed") c.amr.solver.method = SolverMethod::Condensed;
    else if (s == "full-lu") c.amr.solver.method = SolverMethod::FullLU;
    else bad("solver", "expected \"condensed\" or \"full-lu\"");
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    only_keys(o, "output", {"dir", "export_mesh", "export_fields", "dump_system"});
    if (o.contains("dir")) c.out_dir = get<std::string>(o, "dir", "output.dir");
    if (o.contains("export_mesh")) c.export_mesh = get<bool>(o, "export_mesh", "output.export_mesh");
    if (o.contains("export_fields")) c.export_fields = get<bool>(o, "export_fields", "output.export_fields");
    if (o.contains("dump_system")) c.dump_system = get<bool>(o, "dump_system", "output.dump_system");
  }
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed", "seed");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace sdg
