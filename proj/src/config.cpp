#include "gradquad/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gradquad/errors.hpp"

namespace gradquad {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    if (!known) fail(path + "." + it.key(), "unknown key");
  }
}

const json& get_object(const json& obj, const std::string& path,
                       const char* key) {
  if (!obj.contains(key)) fail(path + "." + key, "required section missing");
  const json& v = obj.at(key);
  if (!v.is_object()) fail(path + "." + key, "expected an object");
  return v;
}

double get_num(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(path + "." + key, "required number missing");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double opt_num(const json& obj, const std::string& path, const char* key,
               double dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

int opt_int(const json& obj, const std::string& path, const char* key,
            int dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

int get_int(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(path + "." + key, "required integer missing");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

bool opt_bool(const json& obj, const std::string& path, const char* key,
              bool dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string get_str(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(path + "." + key, "required string missing");
  const json& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::string opt_str(const json& obj, const std::string& path, const char* key,
                    const std::string& dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

CoefficientB parse_coefficient(const json& b, const std::string& path) {
  const std::string kind = get_str(b, path, "kind");
  if (kind == "constant") {
    check_keys(b, path, {"kind", "value"});
    return CoefficientB::constant(get_num(b, path, "value"));
  }
  if (kind == "tabulated") {
    check_keys(b, path, {"kind", "values"});
    if (!b.contains("values") || !b.at("values").is_array())
      fail(path + ".values", "expected an array of numbers");
    const json& arr = b.at("values");
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number())
        fail(path + ".values[" + std::to_string(i) + "]", "expected a number");
      v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    return CoefficientB::tabulated(std::move(v));
  }
  if (kind == "formula") {
    check_keys(b, path, {"kind", "id", "params"});
    const std::string id = get_str(b, path, "id");
    const json& params = get_object(b, path, "params");
    std::map<std::string, double> p;
    for (auto it = params.begin(); it != params.end(); ++it) {
      if (!it.value().is_number())
        fail(path + ".params." + it.key(), "expected a number");
      p[it.key()] = it.value().get<double>();
    }
    return CoefficientB::formula(id, std::move(p));
  }
  fail(path + ".kind", "unknown coefficient kind \"" + kind + "\"");
}

NonlinearityG parse_nonlinearity(const json& g, const std::string& path) {
  const std::string kind = get_str(g, path, "kind");
  if (kind == "exp") {
    check_keys(g, path, {"kind", "beta"});
    const double beta = get_num(g, path, "beta");
    if (!(beta > 0.0)) fail(path + ".beta", "must be > 0");
    return NonlinearityG::exponential(beta);
  }
  if (kind == "gelfand_pullback") {
    check_keys(g, path, {"kind", "b"});
    return NonlinearityG::gelfand_pullback(get_num(g, path, "b"));
  }
  if (kind == "power_shift") {
    check_keys(g, path, {"kind", "p"});
    return NonlinearityG::power_shift(get_num(g, path, "p"));
  }
  if (kind == "h1_boundary") {
    check_keys(g, path, {"kind", "b", "C"});
    const double b = get_num(g, path, "b");
    const double c = opt_num(g, path, "C", 1.0);
    if (!(b > 0.0)) fail(path + ".b", "must be > 0");
    if (!(c > 0.0)) fail(path + ".C", "must be > 0");
    return NonlinearityG::custom(
        "h1_boundary",
        [b, c](double s) { return -c * std::expm1(-b * s); },
        [b, c](double s) { return c * b * std::exp(-b * s); },
        /*nondecreasing=*/true, /*convex=*/false, /*h1_liminf=*/1.0);
  }
  if (kind == "scaled_exp") {
    check_keys(g, path, {"kind", "beta", "scale"});
    const double beta = get_num(g, path, "beta");
    const double scale = get_num(g, path, "scale");
    if (!(beta > 0.0)) fail(path + ".beta", "must be > 0");
    if (!(scale > 0.0)) fail(path + ".scale", "must be > 0");
    return NonlinearityG::custom(
        "scaled_exp",
        [beta, scale](double s) { return scale * std::exp(beta * s); },
        [beta, scale](double s) { return scale * beta * std::exp(beta * s); },
        /*nondecreasing=*/true, /*convex=*/true,
        /*h1_liminf=*/std::numeric_limits<double>::infinity());
  }
  fail(path + ".kind", "unknown nonlinearity kind \"" + kind + "\"");
}

ThresholdRequest parse_threshold_request(const json& t, const std::string& path) {
  ThresholdRequest req;
  const std::string regime = get_str(t, path, "regime");
  if (regime == "constant_b_pos" || regime == "constant_b_neg") {
    check_keys(t, path, {"regime", "b", "beta"});
    req.regime = regime == "constant_b_pos" ? ThresholdRegime::constant_b_pos
                                            : ThresholdRegime::constant_b_neg;
    req.b = get_num(t, path, "b");
    req.beta = get_num(t, path, "beta");
    return req;
  }
  if (regime == "general_b") {
    check_keys(t, path, {"regime", "b_lo", "b_hi", "delta", "eta"});
    req.regime = ThresholdRegime::general_b;
    req.b_lo = get_num(t, path, "b_lo");
    req.b_hi = get_num(t, path, "b_hi");
    const bool limit = req.b_lo == req.b_hi;
    if (!limit && (!t.contains("delta") || !t.contains("eta")))
      fail(path, "general_b with b_lo < b_hi needs both delta and eta");
    req.delta = opt_num(t, path, "delta",
                        std::numeric_limits<double>::quiet_NaN());
    req.eta = opt_num(t, path, "eta",
                      std::numeric_limits<double>::quiet_NaN());
    return req;
  }
  fail(path + ".regime", "unknown regime \"" + regime + "\"");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: expected a JSON object");
  check_keys(root, "config",
             {"problem", "grid", "solve", "branch", "outputs", "stability",
              "thresholds"});

  RunConfig cfg;

  if (root.contains("grid")) {
    const json& g = get_object(root, "config", "grid");
    check_keys(g, "grid", {"M", "R"});
    cfg.grid_m = get_int(g, "grid", "M");
    if (cfg.grid_m < 2) fail("grid.M", "must be at least 2");
    cfg.problem.domain.radius = opt_num(g, "grid", "R", 1.0);
    if (!(cfg.problem.domain.radius > 0.0)) fail("grid.R", "must be > 0");
  }

  if (root.contains("problem")) {
    const json& p = get_object(root, "config", "problem");
    check_keys(p, "problem", {"domain", "dimension", "b", "g", "lambda"});
    const std::string domain = get_str(p, "problem", "domain");
    if (domain == "ball")
      cfg.problem.domain.kind = DomainKind::ball;
    else if (domain == "interval")
      cfg.problem.domain.kind = DomainKind::interval;
    else
      fail("problem.domain", "expected \"ball\" or \"interval\"");
    cfg.problem.dimension = get_num(p, "problem", "dimension");
    cfg.problem.lambda = get_num(p, "problem", "lambda");
    cfg.problem.coefficient =
        parse_coefficient(get_object(p, "problem", "b"), "problem.b");
    cfg.problem.nonlinearity =
        parse_nonlinearity(get_object(p, "problem", "g"), "problem.g");
    cfg.has_problem = true;
  }

  if (root.contains("solve")) {
    const json& s = get_object(root, "config", "solve");
    check_keys(s, "solve",
               {"newton_tol", "newton_max", "monotone_tol", "monotone_max",
                "backtracking", "backtrack_factor", "min_step", "sup_ceiling"});
    cfg.solve.newton_tol = opt_num(s, "solve", "newton_tol", cfg.solve.newton_tol);
    cfg.solve.newton_max = opt_int(s, "solve", "newton_max", cfg.solve.newton_max);
    cfg.solve.monotone_tol =
        opt_num(s, "solve", "monotone_tol", cfg.solve.monotone_tol);
    cfg.solve.monotone_max =
        opt_int(s, "solve", "monotone_max", cfg.solve.monotone_max);
    cfg.solve.backtracking =
        opt_bool(s, "solve", "backtracking", cfg.solve.backtracking);
    cfg.solve.backtrack_factor =
        opt_num(s, "solve", "backtrack_factor", cfg.solve.backtrack_factor);
    cfg.solve.min_step = opt_num(s, "solve", "min_step", cfg.solve.min_step);
    cfg.solve.sup_ceiling =
        opt_num(s, "solve", "sup_ceiling", cfg.solve.sup_ceiling);
    if (!(cfg.solve.newton_tol > 0.0)) fail("solve.newton_tol", "must be > 0");
    if (cfg.solve.newton_max < 1) fail("solve.newton_max", "must be >= 1");
    if (!(cfg.solve.monotone_tol > 0.0)) fail("solve.monotone_tol", "must be > 0");
    if (cfg.solve.monotone_max < 1) fail("solve.monotone_max", "must be >= 1");
    if (!(cfg.solve.backtrack_factor > 0.0) ||
        !(cfg.solve.backtrack_factor < 1.0))
      fail("solve.backtrack_factor", "must lie in (0, 1)");
    if (!(cfg.solve.min_step > 0.0)) fail("solve.min_step", "must be > 0");
    if (!(cfg.solve.sup_ceiling > 0.0)) fail("solve.sup_ceiling", "must be > 0");
  }

  if (root.contains("branch")) {
    const json& b = get_object(root, "config", "branch");
    check_keys(b, "branch",
               {"lambda_list", "auto", "lambda_star_tol", "lq_exponent",
                "warm_start", "cold_check_stride", "certificates", "auto_start",
                "auto_ratio"});
    cfg.branch_auto = opt_bool(b, "branch", "auto", false);
    if (b.contains("lambda_list")) {
      if (cfg.branch_auto)
        fail("branch.auto", "conflicts with an explicit lambda_list");
      const json& arr = b.at("lambda_list");
      if (!arr.is_array()) fail("branch.lambda_list", "expected an array");
      if (arr.empty())
        fail("branch.lambda_list",
             "must not be empty; use \"auto\": true for the automatic schedule");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
          fail("branch.lambda_list[" + std::to_string(i) + "]",
               "expected a number");
        cfg.lambda_list.push_back(arr[i].get<double>());
      }
    }
    cfg.lambda_star_tol =
        opt_num(b, "branch", "lambda_star_tol", cfg.lambda_star_tol);
    if (!(cfg.lambda_star_tol > 0.0)) fail("branch.lambda_star_tol", "must be > 0");
    cfg.branch.lq_exponent =
        opt_num(b, "branch", "lq_exponent", cfg.branch.lq_exponent);
    if (!(cfg.branch.lq_exponent > 0.0)) fail("branch.lq_exponent", "must be > 0");
    cfg.branch.warm_start =
        opt_bool(b, "branch", "warm_start", cfg.branch.warm_start);
    cfg.branch.cold_check_stride =
        opt_int(b, "branch", "cold_check_stride", cfg.branch.cold_check_stride);
    if (cfg.branch.cold_check_stride < 0)
      fail("branch.cold_check_stride", "must be >= 0");
    cfg.branch.certificates =
        opt_bool(b, "branch", "certificates", cfg.branch.certificates);
    cfg.branch.auto_start =
        opt_num(b, "branch", "auto_start", cfg.branch.auto_start);
    if (!(cfg.branch.auto_start > 0.0)) fail("branch.auto_start", "must be > 0");
    cfg.branch.auto_ratio =
        opt_num(b, "branch", "auto_ratio", cfg.branch.auto_ratio);
    if (!(cfg.branch.auto_ratio > 1.0)) fail("branch.auto_ratio", "must be > 1");
  }

  if (root.contains("outputs")) {
    const json& o = get_object(root, "config", "outputs");
    check_keys(o, "outputs", {"csv_path", "json_path", "precision"});
    cfg.outputs.csv_path = opt_str(o, "outputs", "csv_path", "");
    cfg.outputs.json_path = opt_str(o, "outputs", "json_path", "");
    cfg.outputs.precision = opt_int(o, "outputs", "precision", 12);
    if (cfg.outputs.precision < 1 || cfg.outputs.precision > 17)
      fail("outputs.precision", "must lie in [1, 17]");
  }

  if (root.contains("stability")) {
    const json& s = get_object(root, "config", "stability");
    check_keys(s, "stability", {"epsilon"});
    if (s.contains("epsilon")) {
      const double eps = get_num(s, "stability", "epsilon");
      if (!(eps > 0.0)) fail("stability.epsilon", "must be > 0");
      cfg.stability_epsilon = eps;
    }
  }

  if (root.contains("thresholds")) {
    const json& arr = root.at("thresholds");
    if (!arr.is_array()) fail("thresholds", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "thresholds[" + std::to_string(i) + "]";
      if (!arr[i].is_object()) fail(path, "expected an object");
      cfg.thresholds.push_back(parse_threshold_request(arr[i], path));
    }
  }

  cfg.branch.solve = cfg.solve;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace gradquad
