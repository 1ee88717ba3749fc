#include "hemi/problem.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hemi/direct_opt.hpp"

namespace hemi {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("key '" + key + "': not a finite number: '" + text + "'");
  }
  return value;
}

long parse_integer(const std::string& key, const std::string& text) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("key '" + key + "': not an integer: '" + text + "'");
  }
  return value;
}

using Setter = std::function<void(ProblemConfig&, const std::string&, const std::string&)>;

template <typename Getter>
Setter real_at(Getter get) {
  return [get](ProblemConfig& c, const std::string& k, const std::string& v) { get(c) = parse_double(k, v); };
}

template <typename Getter>
Setter int_at(Getter get) {
  return [get](ProblemConfig& c, const std::string& k, const std::string& v) {
    get(c) = static_cast<int>(parse_integer(k, v));
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"f0_x", real_at([](ProblemConfig& c) -> double& { return c.load.f0.x(); })},
      {"f0_y", real_at([](ProblemConfig& c) -> double& { return c.load.f0.y(); })},
      {"fN_x", real_at([](ProblemConfig& c) -> double& { return c.load.fN.x(); })},
      {"fN_y", real_at([](ProblemConfig& c) -> double& { return c.load.fN.y(); })},
      {"h_tau", real_at([](ProblemConfig& c) -> double& { return c.law.h_tau; })},
      {"q_max", real_at([](ProblemConfig& c) -> double& { return c.law.q_max; })},
      {"p_const", real_at([](ProblemConfig& c) -> double& { return c.law.p_const; })},
      {"lambda", real_at([](ProblemConfig& c) -> double& { return c.material.lambda; })},
      {"eta", real_at([](ProblemConfig& c) -> double& { return c.material.eta; })},
      {"h_denominator", int_at([](ProblemConfig& c) -> int& { return c.h_denominator; })},
      {"method",
       [](ProblemConfig& c, const std::string&, const std::string& v) {
         try {
           c.method = parse_method(v);
         } catch (const InputError& e) {
           throw ConfigError(e.what());
         }
       }},
      {"seed",
       [](ProblemConfig& c, const std::string& k, const std::string& v) {
         const long s = parse_integer(k, v);
         if (s < 0) throw ConfigError("seed must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"opt_f_tol", real_at([](ProblemConfig& c) -> double& { return c.opt.f_tol; })},
      {"opt_x_tol", real_at([](ProblemConfig& c) -> double& { return c.opt.x_tol; })},
      {"opt_max_iters", int_at([](ProblemConfig& c) -> int& { return c.opt.max_iters; })},
      {"opt_reset_period", int_at([](ProblemConfig& c) -> int& { return c.opt.reset_period; })},
      {"opt_initial_step", real_at([](ProblemConfig& c) -> double& { return c.opt.line_search.initial_step; })},
      {"opt_growth", real_at([](ProblemConfig& c) -> double& { return c.opt.line_search.growth; })},
      {"opt_max_expansions", int_at([](ProblemConfig& c) -> int& { return c.opt.line_search.max_expansions; })},
      {"opt_tolerance", real_at([](ProblemConfig& c) -> double& { return c.opt.line_search.tolerance; })},
      {"al_eps_init", real_at([](ProblemConfig& c) -> double& { return c.al.eps_init; })},
      {"al_eps_factor", real_at([](ProblemConfig& c) -> double& { return c.al.eps_factor; })},
      {"al_eps_min", real_at([](ProblemConfig& c) -> double& { return c.al.eps_min; })},
      {"al_eps_max", real_at([](ProblemConfig& c) -> double& { return c.al.eps_max; })},
      {"al_outer_max", int_at([](ProblemConfig& c) -> int& { return c.al.outer_max; })},
      {"al_outer_tol", real_at([](ProblemConfig& c) -> double& { return c.al.outer_tol; })},
      {"al_newton_tol", real_at([](ProblemConfig& c) -> double& { return c.al.newton_tol; })},
      {"al_newton_max", int_at([](ProblemConfig& c) -> int& { return c.al.newton_max; })},
      {"al_damping", real_at([](ProblemConfig& c) -> double& { return c.al.damping; })},
      {"pdas_eps_stab", real_at([](ProblemConfig& c) -> double& { return c.pdas.eps_stab; })},
      {"pdas_max_outer", int_at([](ProblemConfig& c) -> int& { return c.pdas.max_outer; })},
      {"pdas_cycle_history", int_at([](ProblemConfig& c) -> int& { return c.pdas.cycle_history; })},
  };
  return table;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool valid_denominator(int n) { return n >= 2 && n <= 4096; }

void ProblemConfig::validate() const {
  try {
    material.validate();
    law.validate();
    al.validate();
    pdas.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  if (!load.f0.allFinite() || !load.fN.allFinite()) throw ConfigError("loads must be finite");
  if (!valid_denominator(h_denominator)) throw ConfigError("h_denominator must lie in [2, 4096]");
  const auto& ls = opt.line_search;
  if (!(opt.f_tol > 0.0) || !(opt.x_tol > 0.0) || opt.max_iters <= 0 || opt.reset_period < 0 ||
      !(ls.initial_step > 0.0) || !(ls.growth > 1.0) || ls.max_expansions <= 0 || !(ls.tolerance > 0.0)) {
    throw ConfigError("invalid Powell configuration");
  }
}

ProblemConfig parse_config(std::istream& in) {
  ProblemConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
    it->second(config, key, value);
  }
  config.validate();
  return config;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string format_config(const ProblemConfig& c) {
  std::ostringstream out;
  out << "f0_x = " << num(c.load.f0.x()) << "\n"
      << "f0_y = " << num(c.load.f0.y()) << "\n"
      << "fN_x = " << num(c.load.fN.x()) << "\n"
      << "fN_y = " << num(c.load.fN.y()) << "\n"
      << "h_tau = " << num(c.law.h_tau) << "\n"
      << "q_max = " << num(c.law.q_max) << "\n"
      << "p_const = " << num(c.law.p_const) << "\n"
      << "lambda = " << num(c.material.lambda) << "\n"
      << "eta = " << num(c.material.eta) << "\n"
      << "h_denominator = " << c.h_denominator << "\n"
      << "method = " << to_string(c.method) << "\n"
      << "seed = " << c.seed << "\n"
      << "opt_f_tol = " << num(c.opt.f_tol) << "\n"
      << "opt_x_tol = " << num(c.opt.x_tol) << "\n"
      << "opt_max_iters = " << c.opt.max_iters << "\n"
      << "opt_reset_period = " << c.opt.reset_period << "\n"
      << "opt_initial_step = " << num(c.opt.line_search.initial_step) << "\n"
      << "opt_growth = " << num(c.opt.line_search.growth) << "\n"
      << "opt_max_expansions = " << c.opt.line_search.max_expansions << "\n"
      << "opt_tolerance = " << num(c.opt.line_search.tolerance) << "\n"
      << "al_eps_init = " << num(c.al.eps_init) << "\n"
      << "al_eps_factor = " << num(c.al.eps_factor) << "\n"
      << "al_eps_min = " << num(c.al.eps_min) << "\n"
      << "al_eps_max = " << num(c.al.eps_max) << "\n"
      << "al_outer_max = " << c.al.outer_max << "\n"
      << "al_outer_tol = " << num(c.al.outer_tol) << "\n"
      << "al_newton_tol = " << num(c.al.newton_tol) << "\n"
      << "al_newton_max = " << c.al.newton_max << "\n"
      << "al_damping = " << num(c.al.damping) << "\n"
      << "pdas_eps_stab = " << num(c.pdas.eps_stab) << "\n"
      << "pdas_max_outer = " << c.pdas.max_outer << "\n"
      << "pdas_cycle_history = " << c.pdas.cycle_history << "\n";
  return out.str();
}

ProblemConfig example_config(int id) {
  ProblemConfig c;
  c.material = MaterialLaw{4.0, 4.0};
  c.load.fN = Eigen::Vector2d::Zero();
  switch (id) {
    case 1:
      c.load.f0 = {-0.5, -1.0};
      c.law = ContactLaw{0.1, 10.0, 0.1};
      break;
    case 2:
      c.load.f0 = {-0.5, -1.0};
      c.law = ContactLaw{0.7, 0.0, 0.1};
      break;
    case 3:
      c.load.f0 = {-0.5, -1.0};
      c.law = ContactLaw{0.5, 0.0, 0.5};
      break;
    case 4:
      c.load.f0 = {0.5, -1.0};
      c.law = ContactLaw{10.0, 0.0, 0.1};
      break;
    case 5:
      c.load.f0 = {-0.8, -0.8};
      c.law = ContactLaw{0.3, 2.0, 0.5};
      break;
    default:
      throw ConfigError("unknown example id " + std::to_string(id));
  }
  return c;
}

std::shared_ptr<const DiscreteSystem> build_system(const ProblemConfig& config, int n) {
  if (!valid_denominator(n)) throw ConfigError("mesh denominator out of range: " + std::to_string(n));
  return std::make_shared<const DiscreteSystem>(assemble_system(n, config.material, config.load));
}

SolveResult solve(const ProblemConfig& config, Method method, const ReducedSystem& reduced,
                  const std::optional<Eigen::VectorXd>& warm_start) {
  switch (method) {
    case Method::Opt: return solve_direct(reduced, config.law, config.opt, warm_start);
    case Method::AL: return solve_al(reduced, config.law, config.al, warm_start);
    case Method::PDAS: return solve_pdas(reduced, config.law, config.pdas, warm_start);
  }
  throw InputError("unknown method");
}

SolveResult solve(const ProblemConfig& config, Method method, int n) {
  const ReducedSystem reduced(build_system(config, n));
  return solve(config, method, reduced);
}

}  // namespace hemi
