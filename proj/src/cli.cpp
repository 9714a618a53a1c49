#include "fermiwork/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "fermiwork/cm_io.hpp"
#include "fermiwork/covariance.hpp"
#include "fermiwork/fock.hpp"
#include "fermiwork/gaussian.hpp"
#include "fermiwork/passivity.hpp"

namespace fermiwork {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_config_double(const std::string& token, const std::string& key, int line_no) {
  std::istringstream in(token);
  double x;
  if (!(in >> x) || !(in >> std::ws).eof())
    throw ParseError("bad number '" + token + "' for key '" + key + "'", line_no);
  return x;
}

std::vector<double> parse_value_list(const std::string& value, const std::string& key,
                                     int line_no) {
  std::vector<double> out;
  if (trim(value).empty()) return out;
  if (value.find(':') != std::string::npos) {
    // start:step:stop inclusive range
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(value);
    while (std::getline(in, cur, ':')) parts.push_back(trim(cur));
    if (parts.size() != 3)
      throw ParseError("range for key '" + key + "' must be start:step:stop", line_no);
    const double start = parse_config_double(parts[0], key, line_no);
    const double step = parse_config_double(parts[1], key, line_no);
    const double stop = parse_config_double(parts[2], key, line_no);
    if (!(step > 0.0))
      throw ParseError("range step for key '" + key + "' must be > 0", line_no);
    const double slack = 1e-9 * std::max(1.0, std::abs(stop));
    for (int i = 0; start + i * step <= stop + slack; ++i) out.push_back(start + i * step);
    return out;
  }
  std::string cur;
  std::istringstream in(value);
  while (std::getline(in, cur, ',')) {
    cur = trim(cur);
    if (cur.empty())
      throw ParseError("empty element in list for key '" + key + "'", line_no);
    out.push_back(parse_config_double(cur, key, line_no));
  }
  return out;
}

const char* yesno(bool b) { return b ? "yes" : "no"; }

/// Resolves the state for ergotropy-style commands: either a covariance file
/// or thermal parameters from --betas with --omegas / --omega.
struct ResolvedInput {
  ModeSystem modes;
  CovarianceMatrix cm;
  bool thermal;
  std::vector<double> betas;
};

ModeSystem modes_from_config(const RunConfig& cfg, std::size_t n_expected) {
  if (!cfg.omegas.empty()) {
    if (cfg.omegas.size() != n_expected)
      throw ArgumentError("expected " + std::to_string(n_expected) + " frequencies, got " +
                          std::to_string(cfg.omegas.size()));
    return ModeSystem(cfg.omegas);
  }
  if (cfg.omega_common > 0.0)
    return ModeSystem(std::vector<double>(n_expected, cfg.omega_common));
  throw ArgumentError("provide per-mode --omegas or a common --omega");
}

ResolvedInput resolve_input(const RunConfig& cfg) {
  const bool have_file = !cfg.input_path.empty();
  const bool have_betas = !cfg.betas.empty();
  if (have_file == have_betas)
    throw ArgumentError("provide either a covariance file or --betas with --omegas/--omega");
  if (have_file) {
    CmFile file = read_cm_file(cfg.input_path);
    return ResolvedInput{std::move(file.modes), std::move(file.cm), false, {}};
  }
  ModeSystem modes = modes_from_config(cfg, cfg.betas.size());
  CovarianceMatrix cm = thermal_cm(cfg.betas, modes);
  return ResolvedInput{std::move(modes), std::move(cm), true, cfg.betas};
}

double method_ergotropy(const std::string& method, const ResolvedInput& in,
                        const RunConfig& cfg) {
  if (method == "gaussian") return gaussian_ergotropy(in.cm, in.modes);
  if (method == "sampler")
    return energy_cm(in.cm, in.modes) -
           random_orthogonal_search(in.cm, in.modes, cfg.trials, cfg.seed);
  if (method == "fock") {
    if (in.modes.n_modes() > kMaxFockModes)
      throw CapacityError("fock method needs n <= " + std::to_string(kMaxFockModes) +
                          " modes; use --method gaussian or sampler instead");
    const FockState rho =
        in.thermal ? thermal_state(in.betas, in.modes) : cm_to_density(in.cm);
    return ergotropy(rho, in.modes);
  }
  throw ArgumentError("unknown method '" + method + "' (fock | gaussian | sampler)");
}

void write_trace_csv(const std::string& path, const MinimizationTrace& trace) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << "stage,param,energy,a,b,e1,e2\n";
  for (const auto& stage : trace.stages) {
    const Eigen::MatrixXd& g = stage.cm.matrix();
    out << stage.name << ',' << format_number(stage.param) << ','
        << format_number(stage.energy) << ',' << format_number(g(0, 1)) << ','
        << format_number(g(2, 3)) << ',' << format_number(g(0, 3)) << ','
        << format_number(g(1, 2)) << "\n";
  }
  if (!out) throw ParseError("write to '" + path + "' failed");
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig cfg;
  bool seen[4] = {false, false, false, false};
  int line_no = 0;
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value', got '" + trim(line) + "'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::vector<double>* target = nullptr;
    int slot = -1;
    if (key == "beta_a") { target = &cfg.beta_a; slot = 0; }
    else if (key == "beta_b") { target = &cfg.beta_b; slot = 1; }
    else if (key == "omega_a") { target = &cfg.omega_a; slot = 2; }
    else if (key == "omega_b") { target = &cfg.omega_b; slot = 3; }
    else throw ParseError("unknown key '" + key + "'", line_no);
    if (seen[slot]) throw ParseError("duplicate key '" + key + "'", line_no);
    seen[slot] = true;
    *target = parse_value_list(value, key, line_no);
  }
  return cfg;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  std::ifstream file(cfg.input_path);
  if (!file) throw ParseError("cannot open '" + cfg.input_path + "'");
  RawCmFile raw = parse_cm_text_raw(file);
  const CmDiagnostics d = diagnose_cm(raw.gamma);
  out << "modes: " << raw.modes.n_modes() << "\n";
  out << "antisymmetric: " << yesno(d.antisymmetric);
  if (!d.antisymmetric)
    out << " (violation " << format_number(d.max_antisymmetry_violation) << " at entry "
        << d.violation_row << "," << d.violation_col << ")";
  out << "\n";
  out << "max_singular_value: " << format_number(d.max_singular_value) << "\n";
  out << "physical: " << yesno(d.physical) << "\n";
  if (!d.physical) return kExitValidationError;
  CovarianceMatrix cm(std::move(raw.gamma));
  out << "pure: " << yesno(is_pure(cm)) << "\n";
  const CanonicalForm cf = canonical_form(cm);
  out << "canonical_values:";
  for (double v : cf.values) out << ' ' << format_number(v);
  out << "\n";
  out << "energy: " << format_number(energy_cm(cm, raw.modes)) << "\n";
  return kExitOk;
}

int cmd_minimize(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  CmFile file = read_cm_file(cfg.input_path);
  if (file.modes.n_modes() != 2)
    throw ArgumentError("minimize expects a two-mode covariance file");
  const MinimizationTrace trace = gaussian_minimize(file.cm, file.modes);
  for (const auto& stage : trace.stages) {
    out << stage.name << ":";
    if (stage.name == "squeeze") out << " r* = " << format_number(stage.param) << ",";
    if (stage.name == "beamsplit") out << " theta* = " << format_number(stage.param) << ",";
    out << " energy " << format_number(stage.energy) << "\n";
  }
  const CanonicalForm cf = canonical_form(trace.final_cm());
  out << "williamson_values:";
  for (double v : cf.values) out << ' ' << format_number(v);
  out << "\n";
  out << "gaussian_ergotropy: " << format_number(gaussian_ergotropy(file.cm, file.modes))
      << "\n";
  if (!cfg.trace_path.empty()) write_trace_csv(cfg.trace_path, trace);
  return kExitOk;
}

int cmd_ergotropy(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const ResolvedInput in = resolve_input(cfg);
  std::vector<std::string> methods = cfg.methods;
  if (methods.empty()) methods = {"fock", "gaussian"};
  std::vector<double> results;
  for (const auto& method : methods) {
    const double w = method_ergotropy(method, in, cfg);
    results.push_back(w);
    out << method << "_ergotropy: " << format_number(w) << "\n";
  }
  if (results.size() > 1) {
    double worst = 0.0;
    for (std::size_t i = 0; i < results.size(); ++i)
      for (std::size_t j = i + 1; j < results.size(); ++j)
        worst = std::max(worst, std::abs(results[i] - results[j]));
    out << "max_discrepancy: " << format_number(worst) << "\n";
  }
  return kExitOk;
}

int cmd_activate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.betas.empty()) throw ArgumentError("activate needs --betas");
  const ModeSystem modes = modes_from_config(cfg, cfg.betas.size());
  const ActivationReport report = make_activation_report(cfg.betas, modes, cfg.max_copies);
  out << "passive: " << yesno(report.passive) << "\n";
  if (report.witness) {
    const int n = modes.n_modes();
    const auto& w = *report.witness;
    out << "witness: " << bitstring_label(w.s, n) << " <-> " << bitstring_label(w.s_prime, n)
        << "\n";
    double z = 1.0;
    for (int k = 0; k < n; ++k) z *= 1.0 + std::exp(-cfg.betas[k] * modes.omega(k));
    out << "activation_work: " << format_number(w.work_gain) << "\n";
    out << "activation_work_unnormalized: " << format_number(w.work_gain * z) << "\n";
    out << "protocol_check:\n";
    for (const auto& c : protocol_check(w.s, w.s_prime, cfg.betas, modes).conditions)
      out << "  " << c.name << ": " << (c.satisfied ? "ok" : "fail") << " (" << c.detail
          << ")\n";
  } else {
    out << "witness: none\n";
    bool uniform = true;
    for (double b : cfg.betas) uniform = uniform && b == cfg.betas.front();
    if (uniform) out << "note: globally thermal\n";
  }
  if (report.k_used)
    out << "activation_number: " << *report.k_used << "\n";
  else
    out << "activation_number: none within " << cfg.max_copies << " copies\n";
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  std::ifstream file(cfg.config_path);
  if (!file) throw ParseError("cannot open '" + cfg.config_path + "'");
  const SweepConfig grid = parse_sweep_config(file);
  out << "beta_a,beta_b,omega_a,omega_b,E,fock_erg,gauss_erg,passive,gauss_passive,boundary\n";
  for (double ba : grid.beta_a)
    for (double bb : grid.beta_b)
      for (double wa : grid.omega_a)
        for (double wb : grid.omega_b) {
          const ModeSystem modes({wa, wb});
          const std::vector<double> betas{ba, bb};
          const CovarianceMatrix cm = thermal_cm(betas, modes);
          const FockState rho = thermal_state(betas, modes);
          const double e = energy_cm(cm, modes);
          const double fock_erg = ergotropy(rho, modes);
          const double gauss_erg = gaussian_ergotropy(cm, modes);
          const bool passive = is_passive(rho, modes, cfg.tol);
          const bool gauss_passive = is_gaussian_passive(cm, modes, cfg.tol);
          // Positive exactly when the frequency ratio exceeds the temperature
          // ratio, the Gaussian-active side of the two-mode boundary.
          const double boundary = wa / wb - bb / ba;
          out << format_number(ba) << ',' << format_number(bb) << ',' << format_number(wa)
              << ',' << format_number(wb) << ',' << format_number(e) << ','
              << format_number(fock_erg) << ',' << format_number(gauss_erg) << ','
              << (passive ? '1' : '0') << ',' << (gauss_passive ? '1' : '0') << ','
              << format_number(boundary) << "\n";
        }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Extractable-work classifier for non-interacting fermionic modes"};
  app.name("fermiwork");
  app.require_subcommand(1);

  auto add_state_options = [&](CLI::App* sub) {
    sub->add_option("--betas", cfg.betas, "inverse temperatures, comma separated")
        ->delimiter(',');
    sub->add_option("--omegas", cfg.omegas, "per-mode frequencies, comma separated")
        ->delimiter(',');
    sub->add_option("--omega", cfg.omega_common, "common frequency for every mode");
  };

  CLI::App* validate = app.add_subcommand("validate", "diagnose a covariance file");
  validate->add_option("input", cfg.input_path, "covariance file")->required();

  CLI::App* minimize =
      app.add_subcommand("minimize", "two-mode Gaussian energy minimization pipeline");
  minimize->add_option("input", cfg.input_path, "two-mode covariance file")->required();
  minimize->add_option("--trace", cfg.trace_path, "write the stage CSV to this path");

  CLI::App* ergotropy = app.add_subcommand("ergotropy", "extractable work of a state");
  ergotropy->add_option("input", cfg.input_path, "covariance file");
  add_state_options(ergotropy);
  ergotropy
      ->add_option("--method", cfg.methods, "fock | gaussian | sampler (repeat or comma list)")
      ->delimiter(',');
  ergotropy->add_option("--trials", cfg.trials, "sampler trial count");
  ergotropy->add_option("--seed", cfg.seed, "sampler seed");

  CLI::App* activate = app.add_subcommand("activate", "thermal-product activation analysis");
  add_state_options(activate);
  activate->add_option("--max-copies", cfg.max_copies, "largest tensor power to try");

  CLI::App* sweep = app.add_subcommand("sweep", "two-mode thermal grid sweep CSV");
  sweep->add_option("--config", cfg.config_path, "grid file (key = value)")->required();
  sweep->add_option("--tol", cfg.tol, "passivity threshold");
  ergotropy->add_option("--tol", cfg.tol, "passivity threshold");

  std::vector<const char*> argv;
  argv.push_back("fermiwork");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(cfg, out, err);
    if (app.got_subcommand(minimize)) return cmd_minimize(cfg, out, err);
    if (app.got_subcommand(ergotropy)) return cmd_ergotropy(cfg, out, err);
    if (app.got_subcommand(activate)) return cmd_activate(cfg, out, err);
    if (app.got_subcommand(sweep)) return cmd_sweep(cfg, out, err);
    err << "error: no subcommand\n";
    return kExitIoError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidationError;
  }
}

}  // namespace fermiwork
