#include "mgt/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "mgt/conservative.hpp"
#include "mgt/dissipative.hpp"
#include "mgt/errors.hpp"
#include "mgt/kernels.hpp"
#include "mgt/report.hpp"
#include "mgt/roots.hpp"

namespace mgt {

namespace {

using nlohmann::json;

struct Output {
  std::string dir = ".";
  std::string prefix;
  std::string path(const std::string& fallback, const std::string& ext) const {
    const std::string stem = prefix.empty() ? fallback : prefix;
    return (std::filesystem::path(dir) / (stem + ext)).string();
  }
};

struct Engine {
  double nodes_per_period = EngineOptions{}.nodes_per_period;
  double physical_nodes_per_period = EngineOptions{}.physical_nodes_per_period;
  double tail_tolerance = EngineOptions{}.tail_tolerance;
  unsigned workers = 0;
  double eps0 = 0.0;
  double N0 = 0.0;
  double slope_tolerance = 0.15;

  LabOptions lab() const {
    LabOptions o;
    o.engine.nodes_per_period = nodes_per_period;
    o.engine.physical_nodes_per_period = physical_nodes_per_period;
    o.engine.tail_tolerance = tail_tolerance;
    o.engine.workers = workers;
    o.eps0 = eps0;
    o.N0 = N0;
    o.slope_tolerance = slope_tolerance;
    return o;
  }
};

void add_output(CLI::App* sub, Output& o) {
  sub->add_option("--output-dir", o.dir, "directory for reports")->capture_default_str();
  sub->add_option("--prefix", o.prefix, "file stem of the reports (default: subcommand)");
}

void add_engine(CLI::App* sub, Engine& e, bool cutoffs) {
  sub->add_option("--nodes-per-period", e.nodes_per_period)->capture_default_str();
  sub->add_option("--physical-nodes-per-period", e.physical_nodes_per_period)->capture_default_str();
  sub->add_option("--tail-tolerance", e.tail_tolerance)->capture_default_str();
  sub->add_option("--workers", e.workers, "worker threads, 0 = hardware concurrency")
      ->capture_default_str();
  sub->add_option("--slope-tolerance", e.slope_tolerance)->capture_default_str();
  if (cutoffs) {
    sub->add_option("--eps0", e.eps0, "small-frequency cutoff, 0 = automatic")->capture_default_str();
    sub->add_option("--N0", e.N0, "large-frequency cutoff, 0 = automatic")->capture_default_str();
  }
}

json scalar_or_string(const std::string& s) {
  if (s.empty()) return s;
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.front() == '[') {
    const json arr = json::parse(s, nullptr, false);
    if (!arr.is_discarded()) return arr;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) {
      if (s.find_first_of(".eE") == std::string::npos && std::abs(v) < 9e15) {
        return static_cast<std::int64_t>(v);
      }
      return v;
    }
  } catch (const std::exception&) {
  }
  return s;
}

json config_echo(const CLI::App* sub) {
  json j = json::object();
  j["command"] = sub->get_name();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (opt->get_type_size_max() == 0) {
      j[name] = opt->count() > 0;
      continue;
    }
    if (opt->count() == 0) {
      j[name] = scalar_or_string(opt->get_default_str());
      continue;
    }
    const auto& res = opt->results();
    if (opt->get_expected_max() > 1) {
      json arr = json::array();
      for (const auto& r : res) arr.push_back(scalar_or_string(r));
      j[name] = arr;
    } else {
      j[name] = scalar_or_string(res.back());
    }
  }
  return j;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || used == 0) throw DomainError("cannot parse exponent '" + s + "'");
  return v;
}

int emit_report(const RateReport& r, const json& echo, const Output& o, const std::string& stem,
                std::ostream& out) {
  write_file_atomic(o.path(stem, ".csv"), to_csv(r));
  write_file_atomic(o.path(stem, ".json"), to_json(r, echo).dump(2) + "\n");
  out << r.experiment << ": predicted " << r.predicted_slope << ", measured " << r.measured_slope
      << " (" << to_string(r.mode) << ", tolerance " << r.slope_tolerance << ") "
      << (r.pass ? "PASS" : "FAIL") << "\n";
  for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
  return r.pass ? ExitPass : ExitRateFailure;
}

// Config files hold TOML-style `key = value` lines, either flat or under a
// `[subcommand]` section.  Keys become flags unless given on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  if (args.empty()) return args;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path);
  } catch (const CLI::FileError& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  const std::string& sub = args.front();
  std::vector<std::string> extra;
  for (const auto& it : items) {
    const bool flat = it.parents.empty();
    const bool mine = it.parents.size() == 1 && it.parents.front() == sub;
    if ((!flat && !mine) || it.name == "++" || it.name == "--") continue;
    std::string key = it.name;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") continue;
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    if (it.inputs.size() == 1 && (it.inputs.front() == "true" || it.inputs.front() == "false")) {
      if (it.inputs.front() == "true") extra.push_back(flag);
      continue;
    }
    extra.push_back(flag);
    for (const auto& v : it.inputs) extra.push_back(v);
  }
  std::vector<std::string> merged(args.begin(), args.end());
  merged.insert(merged.end(), extra.begin(), extra.end());
  return merged;
}

struct RootsCmd {
  double tau = 0.0, delta = 0.0, rho_min = 1e-3, rho_max = 1e3;
  int points = 61;
  Output out;
};

int cmd_roots(const RootsCmd& c, const json& echo, std::ostream& out) {
  const MgtParams p{c.tau, c.delta};
  p.validate();
  if (!(c.rho_min > 0.0 && c.rho_max > c.rho_min)) throw DomainError("need 0 < rho-min < rho-max");
  if (c.points < 2) throw DomainError("points must be >= 2");
  std::ostringstream csv;
  csv << std::setprecision(17)
      << "rho,lambda1,muR,muI,discriminant,three_real,small_residual,large_residual\n";
  const double step = std::log(c.rho_max / c.rho_min) / (c.points - 1);
  auto residual = [](const RootTriple& a, const RootTriple& b) {
    return std::max({std::abs(a.lambda1 - b.lambda1), std::abs(a.muR - b.muR),
                     std::abs(a.muI - b.muI)});
  };
  for (int i = 0; i < c.points; ++i) {
    const double rho = c.rho_min * std::exp(step * i);
    const RootTriple r = solve_characteristic(p, rho);
    const double rs = residual(r, small_freq_expansion(p, rho, {Zone::SmallFreq, 2}));
    const double rl = residual(r, large_freq_expansion(p, rho, {Zone::LargeFreq, 2}));
    csv << rho << ',' << r.lambda1 << ',' << r.muR << ',' << r.muI << ',' << r.discriminant << ','
        << (r.three_real ? 1 : 0) << ',' << rs << ',' << rl << '\n';
  }
  json summary;
  summary["experiment"] = "roots";
  summary["config_echo"] = echo;
  json checks = json::array();
  for (Zone z : {Zone::SmallFreq, Zone::LargeFreq}) {
    for (RootComponent rc : {RootComponent::Lambda1, RootComponent::MuR, RootComponent::MuI}) {
      json j;
      j["zone"] = to_string(z);
      j["component"] = to_string(rc);
      j["printed_order"] = printed_remainder_order(z, rc, 2);
      try {
        const OrderCheckResult oc = expansion_order_check(p, z, rc);
        j["slope"] = std::isfinite(oc.slope) ? json(oc.slope) : json(nullptr);
        j["saturated"] = oc.saturated;
        j["exact"] = oc.exact;
        j["points_used"] = oc.points_used;
      } catch (const Error& e) {
        j["error"] = e.what();
      }
      out << "  " << to_string(z) << " " << to_string(rc) << ": printed order "
          << j["printed_order"] << ", fitted slope " << (j.contains("slope") ? j["slope"].dump() : "n/a")
          << "\n";
      checks.push_back(j);
    }
  }
  summary["expansion_order_checks"] = checks;
  write_file_atomic(c.out.path("roots", ".csv"), csv.str());
  write_file_atomic(c.out.path("roots", ".json"), summary.dump(2) + "\n");
  out << "roots: " << c.points << " frequencies written\n";
  return ExitPass;
}

struct KernelsCmd {
  double tau = 0.0, delta = 0.0, t_max = 10.0, tolerance = 1e-6;
  std::vector<int> ells{0, 1, 2};
  std::vector<double> rhos{0.05, 0.5, 40.0};
  int samples = 101;
  Output out;
};

int cmd_kernels(const KernelsCmd& c, const json& echo, std::ostream& out) {
  const MgtParams p{c.tau, c.delta};
  p.validate();
  if (c.samples < 2) throw DomainError("samples must be >= 2");
  if (!(c.t_max > 0.0)) throw DomainError("t-max must be > 0");
  std::vector<double> times(c.samples);
  for (int i = 0; i < c.samples; ++i) times[i] = c.t_max * i / (c.samples - 1);
  std::ostringstream csv;
  csv << std::setprecision(17) << "ell,rho,t,kernel,oracle\n";
  json rows = json::array();
  bool pass = true;
  for (int ell : c.ells) {
    if (ell < 0 || ell > 2) throw DomainError("kernel index ell must be 0, 1 or 2");
    for (double rho : c.rhos) {
      if (!(rho > 0.0)) throw DomainError("kernel frequencies must be > 0");
      const KernelEvalContext ctx = KernelEvalContext::at(p, rho);
      const bool general = ctx.degenerate();
      std::array<double, 3> y0{0.0, 0.0, 0.0};
      y0[ell] = 1.0;
      const OdeTrajectory tr = ode_oracle(y0, rho, times, p);
      double dev = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double k = general ? eval_kernel_general(ell, times[i], ctx)
                                 : eval_kernel_hat({ell, KernelPart::Total}, times[i], ctx);
        const double o = tr.y[i][0];
        dev = std::max(dev, std::abs(k - o));
        scale = std::max(scale, std::abs(o));
        csv << ell << ',' << rho << ',' << times[i] << ',' << k << ',' << o << '\n';
      }
      const double rel = dev / std::max(scale, 1e-300);
      pass = pass && rel < c.tolerance;
      rows.push_back({{"ell", ell}, {"rho", rho}, {"max_relative_deviation", rel},
                      {"formula", general ? "general" : "printed"}});
      out << "  ell=" << ell << " rho=" << rho << ": max relative deviation " << rel
          << (general ? " (general formula)" : "") << "\n";
    }
  }
  json summary{{"experiment", "kernels"}, {"config_echo", echo}, {"tolerance", c.tolerance},
               {"pass", pass}, {"checks", rows}, {"warnings", json::array()}};
  write_file_atomic(c.out.path("kernels", ".csv"), csv.str());
  write_file_atomic(c.out.path("kernels", ".json"), summary.dump(2) + "\n");
  out << "kernels: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? ExitPass : ExitRateFailure;
}

struct ConservativeCmd {
  double tau = 0.0, delta = 0.0, s = 0.0, data_width = 2.0;
  int n = 3;
  std::string vertex;
  std::string p = "1", q = "2";
  int level_min = 4, level_max = 10;
  Engine engine;
  Output out;
};

ExponentPair conservative_point(const ConservativeCmd& c) {
  if (!c.vertex.empty()) return ExponentPair::vertex(c.n, c.vertex);
  const double p = parse_exponent(c.p), q = parse_exponent(c.q);
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("p and q must be >= 1");
  ExponentPair e{1.0 / p, 1.0 / q, c.n};
  e.validate();
  return e;
}

int cmd_conservative(const ConservativeCmd& c, const json& echo, std::ostream& out) {
  if (c.delta != 0.0) throw DomainError("the conservative equation has delta = 0");
  const ExponentPair point = conservative_point(c);
  if (!admissible_region(point, Region::Triangle)) conservative_exponent_exact(point);
  const RateReport r = run_conservative_experiment(
      c.tau, FrequencyData::gaussian(c.data_width), point, c.s,
      dyadic_times(c.level_min, c.level_max), c.engine.lab());
  return emit_report(r, echo, c.out, "conservative", out);
}

struct DecayCmd {
  std::string equation = "dissipative";
  double tau = 0.0, delta = 1.0, s = 0.0, data_width = 1.0;
  int n = 3;
  std::string p = "1", q = "2", zone = "full", vertex;
  bool refined = false;
  int level_min = 4, level_max = 10;
  Engine engine;
  Output out;
};

int cmd_decay(const DecayCmd& c, const CLI::App* sub, const json& echo, std::ostream& out) {
  if (c.equation == "conservative") {
    ConservativeCmd cc;
    cc.tau = c.tau;
    cc.delta = sub->get_option("--delta")->count() > 0 ? c.delta : 0.0;
    cc.s = c.s;
    cc.n = c.n;
    cc.vertex = c.vertex;
    cc.p = c.p;
    cc.q = c.q;
    cc.level_min = c.level_min;
    cc.level_max = c.level_max;
    cc.data_width = sub->get_option("--data-width")->count() > 0 ? c.data_width : 2.0;
    cc.engine = c.engine;
    cc.out = c.out;
    if (c.refined) throw UsageError("--refined applies to the dissipative equation only");
    const ExponentPair point = conservative_point(cc);
    conservative_exponent_exact(point);
    return cmd_conservative(cc, echo, out);
  }
  if (!c.vertex.empty()) throw UsageError("--vertex applies to the conservative equation only");
  const MgtParams params{c.tau, c.delta};
  params.validate();
  ExponentQuery q{c.n, parse_exponent(c.p), parse_exponent(c.q), c.s, c.refined};
  q.validate();
  const RateReport r = run_decay_experiment(
      params, FrequencyData::gaussian(c.data_width), q, dyadic_times(c.level_min, c.level_max),
      c.zone == "small" ? ZoneSelect::SmallOnly : ZoneSelect::Full, c.engine.lab());
  return emit_report(r, echo, c.out, "decay", out);
}

struct TableCmd {
  std::vector<int> n;
  std::vector<std::string> p, q;
  std::vector<double> s;
  bool refined = false;
  Output out;
};

int cmd_table(const TableCmd& c, const json& echo, std::ostream& out) {
  if (c.n.empty() || c.p.empty() || c.q.empty() || c.s.empty()) {
    throw UsageError("table needs nonempty --n, --p, --q and --s lists");
  }
  std::ostringstream csv;
  csv << std::setprecision(17) << "n,p,q,s,dissipative,branch,conservative\n";
  json rows = json::array();
  for (int n : c.n) {
    for (const auto& ps : c.p) {
      for (const auto& qs : c.q) {
        for (double s : c.s) {
          const double p = parse_exponent(ps), q = parse_exponent(qs);
          std::string dis = "n/a", branch = "n/a", con = "n/a";
          try {
            const ExponentQuery eq{n, p, q, s, c.refined};
            dis = fmt(predicted_exponent(eq));
            branch = predicted_branch(eq);
          } catch (const Error&) {
          }
          try {
            if (p >= 1.0 && q >= 1.0) {
              const ExponentPair pt{1.0 / p, 1.0 / q, n};
              if (admissible_region(pt, Region::Triangle)) {
                con = fmt(conservative_predicted_exponent(pt));
              }
            }
          } catch (const Error&) {
          }
          csv << n << ',' << ps << ',' << qs << ',' << s << ',' << dis << ',' << branch << ','
              << con << '\n';
          rows.push_back({{"n", n}, {"p", ps}, {"q", qs}, {"s", s}, {"dissipative", dis},
                          {"branch", branch}, {"conservative", con}});
        }
      }
    }
  }
  json summary{{"experiment", "table"}, {"config_echo", echo}, {"rows", rows}};
  write_file_atomic(c.out.path("table", ".csv"), csv.str());
  write_file_atomic(c.out.path("table", ".json"), summary.dump(2) + "\n");
  out << csv.str();
  return ExitPass;
}

struct LemmasCmd {
  int n = 3;
  double beta = 0.0, c1 = 1.0, c2 = 1.0;
  std::string oscillation = "sincos", phase = "cos";
  int level_min = 4, level_max = 10;
  Engine engine;
  Output out;
};

int cmd_lemmas(const LemmasCmd& c, const json& echo, std::ostream& out) {
  LemmaQuery q;
  q.n = c.n;
  q.beta = c.beta;
  q.c1 = c.c1;
  q.c2 = c.c2;
  q.oscillation = c.oscillation == "sinc" ? Oscillation::SincKernel
                  : c.oscillation == "exp" ? Oscillation::ExpKernel
                                           : Oscillation::SinCos;
  q.phase = c.phase == "sin" ? Phase::Sin : Phase::Cos;
  q.validate();
  const RateReport r = lemma_l1_check(q, dyadic_times(c.level_min, c.level_max), c.engine.lab());
  return emit_report(r, echo, c.out, "lemmas", out);
}

void add_levels(CLI::App* sub, int& lo, int& hi) {
  sub->add_option("--level-min", lo, "first time 2^level")->capture_default_str();
  sub->add_option("--level-max", hi, "last time 2^level")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for the linear MGT equation"};
  app.require_subcommand(1);
  const auto exponent_check = CLI::Validator(
      [](std::string& v) {
        try {
          parse_exponent(v);
        } catch (const Error& e) {
          return std::string(e.what());
        }
        return std::string();
      },
      "REAL|inf");

  RootsCmd rc;
  auto* roots = app.add_subcommand("roots", "characteristic roots and expansion residuals");
  roots->add_option("--config", "TOML-style configuration file");
  roots->add_option("--tau", rc.tau)->required();
  roots->add_option("--delta", rc.delta)->capture_default_str();
  roots->add_option("--rho-min", rc.rho_min)->capture_default_str();
  roots->add_option("--rho-max", rc.rho_max)->capture_default_str();
  roots->add_option("--points", rc.points)->capture_default_str();
  add_output(roots, rc.out);

  KernelsCmd kc;
  auto* kernels = app.add_subcommand("kernels", "kernel formula against the ODE oracle");
  kernels->add_option("--config", "TOML-style configuration file");
  kernels->add_option("--tau", kc.tau)->required();
  kernels->add_option("--delta", kc.delta)->capture_default_str();
  kernels->add_option("--ell", kc.ells)->capture_default_str();
  kernels->add_option("--rho", kc.rhos)->capture_default_str();
  kernels->add_option("--t-max", kc.t_max)->capture_default_str();
  kernels->add_option("--samples", kc.samples)->capture_default_str();
  kernels->add_option("--tolerance", kc.tolerance)->capture_default_str();
  add_output(kernels, kc.out);

  DecayCmd dc;
  auto* decay = app.add_subcommand("decay", "L^p-L^q decay experiment");
  decay->add_option("--config", "TOML-style configuration file");
  decay->add_option("--equation", dc.equation)
      ->check(CLI::IsMember({"dissipative", "conservative"}))
      ->capture_default_str();
  decay->add_option("--tau", dc.tau)->required();
  decay->add_option("--delta", dc.delta)->capture_default_str();
  decay->add_option("--n", dc.n)->capture_default_str();
  decay->add_option("--p", dc.p)->check(exponent_check)->capture_default_str();
  decay->add_option("--q", dc.q)->check(exponent_check)->capture_default_str();
  decay->add_option("--s", dc.s)->capture_default_str();
  decay->add_option("--vertex", dc.vertex, "conservative vertex P1..P5 instead of p, q")
      ->check(CLI::IsMember({"P1", "P2", "P3", "P4", "P5"}));
  decay->add_flag("--refined", dc.refined, "subtract the diffusion-wave profile");
  decay->add_option("--zone", dc.zone)->check(CLI::IsMember({"small", "full"}))->capture_default_str();
  decay->add_option("--data-width", dc.data_width, "data exp(-a rho^2)")->capture_default_str();
  add_levels(decay, dc.level_min, dc.level_max);
  add_engine(decay, dc.engine, true);
  add_output(decay, dc.out);

  ConservativeCmd cc;
  auto* cons = app.add_subcommand("conservative", "decay experiment for delta = 0");
  cons->add_option("--config", "TOML-style configuration file");
  cons->add_option("--tau", cc.tau)->required();
  cons->add_option("--delta", cc.delta)->capture_default_str();
  cons->add_option("--n", cc.n)->capture_default_str();
  cons->add_option("--p", cc.p)->check(exponent_check)->capture_default_str();
  cons->add_option("--q", cc.q)->check(exponent_check)->capture_default_str();
  cons->add_option("--vertex", cc.vertex, "vertex P1..P5 instead of p, q")
      ->check(CLI::IsMember({"P1", "P2", "P3", "P4", "P5"}));
  cons->add_option("--s", cc.s)->capture_default_str();
  cons->add_option("--data-width", cc.data_width, "data exp(-a rho^2)")->capture_default_str();
  add_levels(cons, cc.level_min, cc.level_max);
  add_engine(cons, cc.engine, false);
  add_output(cons, cc.out);

  TableCmd tc;
  auto* table = app.add_subcommand("table", "predicted exponents over a parameter grid");
  table->add_option("--config", "TOML-style configuration file");
  table->add_option("--n", tc.n)->required()->expected(1, -1);
  table->add_option("--p", tc.p)->required()->expected(1, -1)->check(exponent_check);
  table->add_option("--q", tc.q)->required()->expected(1, -1)->check(exponent_check);
  table->add_option("--s", tc.s)->required()->expected(1, -1);
  table->add_flag("--refined", tc.refined, "profile-subtracted exponents");
  add_output(table, tc.out);

  LemmasCmd lc;
  auto* lemmas = app.add_subcommand("lemmas", "L^1 rates of the oscillating multipliers");
  lemmas->add_option("--config", "TOML-style configuration file");
  lemmas->add_option("--n", lc.n)->capture_default_str();
  lemmas->add_option("--beta", lc.beta)->capture_default_str();
  lemmas->add_option("--c1", lc.c1)->capture_default_str();
  lemmas->add_option("--c2", lc.c2)->capture_default_str();
  lemmas->add_option("--oscillation", lc.oscillation)
      ->check(CLI::IsMember({"sinc", "sincos", "exp"}))
      ->capture_default_str();
  lemmas->add_option("--phase", lc.phase)->check(CLI::IsMember({"sin", "cos"}))->capture_default_str();
  add_levels(lemmas, lc.level_min, lc.level_max);
  add_engine(lemmas, lc.engine, false);
  add_output(lemmas, lc.out);

  std::vector<std::string> args;
  try {
    args = expand_config(args_in);
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << "\n";
    return ExitConfigError;
  }
  std::vector<char*> argv;
  std::string prog = "mgtlab";
  argv.push_back(prog.data());
  for (auto& a : args) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ExitPass;
  } catch (const CLI::ParseError& e) {
    err << "configuration error: " << e.what() << "\n";
    return ExitConfigError;
  }

  try {
    if (roots->parsed()) return cmd_roots(rc, config_echo(roots), out);
    if (kernels->parsed()) return cmd_kernels(kc, config_echo(kernels), out);
    if (decay->parsed()) return cmd_decay(dc, decay, config_echo(decay), out);
    if (cons->parsed()) return cmd_conservative(cc, config_echo(cons), out);
    if (table->parsed()) return cmd_table(tc, config_echo(table), out);
    if (lemmas->parsed()) return cmd_lemmas(lc, config_echo(lemmas), out);
  } catch (const DomainError& e) {
    err << "configuration error: " << e.what() << "\n";
    return ExitConfigError;
  } catch (const UsageError& e) {
    err << "configuration error: " << e.what() << "\n";
    return ExitConfigError;
  } catch (const OutOfScopeError& e) {
    err << "configuration error: " << e.what() << "\n";
    return ExitConfigError;
  } catch (const DegenerateConfigurationError& e) {
    err << "configuration error: " << e.what() << "\n";
    return ExitConfigError;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return ExitRateFailure;
  }
  return ExitConfigError;
}

}  // namespace mgt
