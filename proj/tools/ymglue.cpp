#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ymg/catalog.hpp"
#include "ymg/gainopt.hpp"
#include "ymg/glue.hpp"
#include "ymg/verify.hpp"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + item + "' in --" + what);
    }
    if (used != item.size()) throw ConfigError("bad number '" + item + "' in --" + what);
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--" + what + " needs at least one value");
  return out;
}

// key=value lines become "--key value" ahead of the real arguments, so later flags win.
std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config") throw ConfigError(path + ":" + std::to_string(lineno) + ": bad key");
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  std::string suite = "all";
  std::string format = "csv";
  std::string out;
  unsigned long long seed = 20240611ULL;
  int radial_n = 64;
  int s3_level = 12;
};

int run_verify(const VerifyArgs& a) {
  ymg::VerifyOptions o;
  o.seed = a.seed;
  o.res = {a.radial_n, a.s3_level};
  const auto rows = ymg::verify_suite(a.suite, o);
  Output out(a.out);
  bool ok = true;
  if (a.format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"suite", r.suite}, {"name", r.name}, {"closed_form", r.closed_form}, {"numeric", r.numeric},
                     {"abs_err", r.abs_err}, {"tolerance", r.tolerance}, {"pass", r.pass}});
    out.os() << arr.dump(2) << "\n";
  } else {
    out.os() << "suite,name,closed_form,numeric,abs_err,tolerance,pass\n";
    for (const auto& r : rows)
      out.os() << r.suite << ",\"" << r.name << "\"," << num(r.closed_form) << "," << num(r.numeric) << ","
               << num(r.abs_err) << "," << num(r.tolerance) << "," << (r.pass ? "pass" : "FAIL") << "\n";
  }
  for (const auto& r : rows)
    if (!r.pass) {
      ok = false;
      std::cerr << "FAIL " << r.suite << ": " << r.name << " closed=" << num(r.closed_form)
                << " numeric=" << num(r.numeric) << " err=" << num(r.abs_err) << "\n";
    }
  return ok ? kExitOk : kExitFail;
}

// -------------------------------------------------------------------- glue

struct GlueArgs {
  std::string connection = "asd:1";
  std::string construction = "bc";
  std::string rho = "0.2,0.1,0.05";
  double tau = 0.35;
  std::string c0 = "auto";
  double a = 1.1;
  double b = 0.9;
  std::string profile = "affine";
  double width = 0.01;
  int radial_n = 64;
  int s3_level = 12;
  std::string format = "csv";
  std::string out;
  unsigned long long seed = 20240611ULL;
};

json result_json(const ymg::GlueResult& r) {
  return {{"rho", r.rho},
          {"tau", r.tau},
          {"c0", r.c0},
          {"a", r.a},
          {"b", r.b},
          {"delta_ym", r.delta_ym},
          {"gain_measured", r.gain_measured},
          {"gain_predicted", r.gain_predicted},
          {"gain_leading", r.gain_leading},
          {"chern_jump", r.chern_jump},
          {"direct_delta", r.direct_delta},
          {"identity_residual", r.identity_residual},
          {"quadrature_residual", r.quadrature_residual},
          {"flagged", r.flagged}};
}

int run_glue(const GlueArgs& g) {
  const std::vector<double> rhos = parse_list(g.rho, "rho");
  if (g.radial_n < 2 || g.s3_level < 1) throw ConfigError("resolutions must be positive");
  if (g.construction != "bc" && g.construction != "taubes") throw ConfigError("--construction must be bc or taubes");
  if (g.format != "csv" && g.format != "json") throw ConfigError("--format must be csv or json");

  ymg::NamedConnection conn;
  ymg::CutoffProfile profile;
  const double tau = g.construction == "taubes" ? 0.5 : g.tau;
  ymg::Su2TwoForm f0;
  try {
    conn = ymg::connection_by_name(g.connection);
    if (g.profile == "affine")
      profile = ymg::affine_profile(tau);
    else if (g.profile == "smooth")
      profile = ymg::smooth_profile(tau, g.width);
    else
      throw ConfigError("--profile must be affine or smooth");
    f0 = ymg::curvature(conn.field, ymg::Vec4{0, 0, 0, 0});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(ymg::norm2(ymg::p_minus(f0)) > 0.0))
    throw ConfigError("connection '" + g.connection + "' has P_-F(0) = 0; the gluing needs P_-F(0) != 0");

  ymg::UnitQuat g0 = ymg::choose_g0(f0);
  const double s = ymg::rotated_pairing(f0, g0);
  double c0 = 0;
  if (g.c0 == "auto") {
    c0 = ymg::optimal_c0_from(ymg::gain_coefficients(profile), s);
  } else {
    c0 = parse_list(g.c0, "c0").at(0);
  }

  ymg::GlueRules rules;
  rules.res = {g.radial_n, g.s3_level};

  // validate every grid point before any quadrature
  for (double rho : rhos) {
    try {
      if (g.construction == "bc") {
        ymg::GlueParamsBC p{rho, tau, c0, g0, profile};
        ymg::build_bc_glued(conn.field, p);
      } else {
        ymg::GlueParamsTaubes p{rho, g.a, g.b, g0, profile};
        ymg::build_taubes_glued(conn.field, p);
      }
    } catch (const std::exception& e) {
      throw ConfigError(std::string("rho=") + num(rho) + ": " + e.what());
    }
  }

  std::vector<ymg::GlueResult> results(rhos.size());
  std::vector<std::string> errors(rhos.size());
  auto work = [&](size_t i) {
    try {
      if (g.construction == "bc") {
        results[i] = ymg::energy_delta_bc(conn.field, {rhos[i], tau, c0, g0, profile}, rules);
      } else {
        results[i] = ymg::energy_delta_taubes(conn.field, {rhos[i], g.a, g.b, g0, profile}, rules);
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };
  const size_t workers = std::max<size_t>(1, std::min<size_t>(std::thread::hardware_concurrency(), rhos.size()));
  if (workers == 1) {
    for (size_t i = 0; i < rhos.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (size_t i = w; i < rhos.size(); i += workers) work(i);
      });
    for (auto& t : pool) t.join();
  }
  for (size_t i = 0; i < rhos.size(); ++i)
    if (!errors[i].empty()) {
      std::cerr << "rho=" << num(rhos[i]) << ": " << errors[i] << "\n";
      return kExitFail;
    }

  std::vector<double> gains;
  for (const auto& r : results) gains.push_back(r.gain_measured);
  const double fit = ymg::fit_rho4(rhos, gains);
  const double predicted_coeff = results.front().gain_predicted / std::pow(rhos.front(), 4);
  const double leading_coeff = results.front().gain_leading / std::pow(rhos.front(), 4);

  Output out(g.out);
  if (g.format == "json") {
    json doc;
    doc["connection"] = g.connection;
    doc["construction"] = g.construction;
    doc["seed"] = g.seed;
    doc["g0"] = {g0.w, g0.xi, g0.xj, g0.xk};
    doc["pairing"] = s;
    doc["rows"] = json::array();
    for (const auto& r : results) doc["rows"].push_back(result_json(r));
    doc["rho4_coefficient"] = fit;
    doc["predicted_coefficient"] = predicted_coeff;
    doc["leading_coefficient"] = leading_coeff;
    out.os() << doc.dump(2) << "\n";
  } else {
    out.os() << "rho,tau,c0,a,b,delta_ym,gain_measured,gain_predicted,gain_leading,chern_jump,direct_delta,"
                "identity_residual,quadrature_residual,flagged\n";
    for (const auto& r : results)
      out.os() << num(r.rho) << "," << num(r.tau) << "," << num(r.c0) << "," << num(r.a) << "," << num(r.b) << ","
               << num(r.delta_ym) << "," << num(r.gain_measured) << "," << num(r.gain_predicted) << ","
               << num(r.gain_leading) << "," << num(r.chern_jump) << "," << num(r.direct_delta) << ","
               << num(r.identity_residual) << "," << num(r.quadrature_residual) << "," << (r.flagged ? 1 : 0)
               << "\n";
    out.os() << "# rho4_coefficient," << num(fit) << "\n";
    out.os() << "# predicted_coefficient," << num(predicted_coeff) << "\n";
    out.os() << "# leading_coefficient," << num(leading_coeff) << "\n";
  }
  for (const auto& r : results)
    if (r.flagged) std::cerr << "warning: quadrature residual flagged at rho=" << num(r.rho) << "\n";
  return kExitOk;
}

// --------------------------------------------------------------------- phi

struct PhiArgs {
  double tau_min = 0.3;
  double tau_max = 0.4;
  double step = 0.01;
  std::string profile = "affine";
  double width = 0.01;
  std::string format = "csv";
  std::string out;
};

int run_phi(const PhiArgs& a) {
  if (!(a.step > 0.0)) throw ConfigError("--step must be positive");
  if (!(a.tau_min > 0.0 && a.tau_min < a.tau_max && a.tau_max < 1.0))
    throw ConfigError("need 0 < tau-min < tau-max < 1");
  if (a.profile != "affine" && a.profile != "smooth") throw ConfigError("--profile must be affine or smooth");
  if (a.format != "csv" && a.format != "json") throw ConfigError("--format must be csv or json");
  const long n = static_cast<long>(std::floor((a.tau_max - a.tau_min) / a.step + 1e-9));
  struct Row {
    double tau, phi, c0;
    bool sign_change;
  };
  std::vector<Row> rows;
  for (long k = 0; k <= n; ++k) {
    const double t = a.tau_min + k * a.step;
    ymg::CutoffProfile p;
    try {
      p = a.profile == "affine" ? ymg::affine_profile(t) : ymg::smooth_profile(t, a.width);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    const ymg::GainCoefficients c = ymg::gain_coefficients(p);
    const double phi = a.profile == "affine" ? ymg::phi_closed_affine(t) : ymg::phi_from(c);
    const bool change = !rows.empty() && (std::signbit(phi) != std::signbit(rows.back().phi));
    rows.push_back({t, phi, ymg::optimal_c0_from(c, 1.0), change});
  }
  Output out(a.out);
  if (a.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back({{"tau", r.tau}, {"phi", r.phi}, {"c0_star", r.c0}, {"sign_change", r.sign_change}});
    out.os() << arr.dump(2) << "\n";
  } else {
    out.os() << "tau,phi,c0_star,sign_change\n";
    for (const auto& r : rows)
      out.os() << num(r.tau) << "," << num(r.phi) << "," << num(r.c0) << "," << (r.sign_change ? 1 : 0) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Instanton gluing experiments and lemma checks"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run a lemma verification suite");
  verify->add_option("--suite", va.suite)->check(CLI::IsMember({"algebra", "appendix", "gauge", "instanton", "all"}));
  verify->add_option("--format", va.format)->check(CLI::IsMember({"csv", "json"}));
  verify->add_option("--out", va.out);
  verify->add_option("--seed", va.seed);
  verify->add_option("--radial-n", va.radial_n)->check(CLI::PositiveNumber);
  verify->add_option("--s3-level", va.s3_level)->check(CLI::PositiveNumber);

  GlueArgs ga;
  std::string config_path;
  auto* glue = app.add_subcommand("glue", "glue an instanton into a connection over a grid of rho");
  glue->add_option("--config", config_path, "key=value file; flags override it");
  glue->add_option("--connection", ga.connection, "zero | sd:L | asd:L | poly-bump:P");
  glue->add_option("--construction", ga.construction, "bc | taubes");
  glue->add_option("--rho", ga.rho, "comma-separated list");
  glue->add_option("--tau", ga.tau);
  glue->add_option("--c0", ga.c0, "number or auto");
  glue->add_option("--a", ga.a);
  glue->add_option("--b", ga.b);
  glue->add_option("--profile", ga.profile, "affine | smooth");
  glue->add_option("--width", ga.width, "transition width of the smooth profile");
  glue->add_option("--radial-n", ga.radial_n);
  glue->add_option("--s3-level", ga.s3_level);
  glue->add_option("--format", ga.format);
  glue->add_option("--out", ga.out);
  glue->add_option("--seed", ga.seed);

  PhiArgs pa;
  auto* phi = app.add_subcommand("phi", "tabulate phi(tau) and the optimal c0 for s = 1");
  phi->add_option("--tau-min", pa.tau_min);
  phi->add_option("--tau-max", pa.tau_max);
  phi->add_option("--step", pa.step);
  phi->add_option("--profile", pa.profile);
  phi->add_option("--width", pa.width);
  phi->add_option("--format", pa.format);
  phi->add_option("--out", pa.out);

  try {
    app.parse(argc, argv);
    if (glue->parsed() && !config_path.empty()) {
      // reparse with the file's entries first
      int at = 1;
      while (at < argc && std::string(argv[at]) != "glue") ++at;
      std::vector<std::string> args(argv, argv + at + 1);
      for (auto& s : config_args(config_path)) args.push_back(s);
      for (int i = at + 1; i < argc; ++i) args.push_back(argv[i]);
      ga = GlueArgs{};
      std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
      app.clear();
      app.parse(rev);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (verify->parsed()) return run_verify(va);
    if (glue->parsed()) return run_glue(ga);
    if (phi->parsed()) return run_phi(pa);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitOk;
}
