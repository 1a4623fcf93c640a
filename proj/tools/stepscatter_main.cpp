// Command-line front end for the smooth-step scattering library.
//
// Subcommands:
//   potential     tabulate x, the mapped coordinate z, the Jacobian rho, V(x)
//   transform     alias of `potential`
//   wavefunction  tabulate the analytic stationary wavefunction and its
//                 second-derivative defect against the wave equation
//   transmission  tabulate transmission/reflection over an energy grid,
//                 optionally cross-checked against the RK4 reference
//   verify        run the built-in self-check battery, JSON report
//
// Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 verification
// mismatch.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "heunstep/errors.hpp"
#include "heunstep/heun_engine.hpp"
#include "heunstep/oracle.hpp"
#include "heunstep/scattering.hpp"
#include "heunstep/step_geometry.hpp"

namespace {

using heunstep::ComplexValue;
using heunstep::PhysicalConfig;
using ordered_json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CommonOpts {
  double v0 = 0.0;
  double v1 = 1.0;
  double x0 = 0.0;
  double mass = 1.0;
  double hbar = 1.0;
  std::vector<double> sigmas;
};

void add_common(CLI::App* sc, CommonOpts& o) {
  sc->add_option("--v0", o.v0, "flat level of the potential on the left tail")
      ->capture_default_str();
  sc->add_option("--v1", o.v1, "height of the smooth step")
      ->capture_default_str();
  sc->add_option("--sigma", o.sigmas,
                 "step slope parameter, negative (repeatable where a table "
                 "over several slopes makes sense; default -1)");
  sc->add_option("--x0", o.x0, "horizontal offset of the step")
      ->capture_default_str();
  sc->add_option("--mass", o.mass, "particle mass")->capture_default_str();
  sc->add_option("--hbar", o.hbar, "reduced Planck constant")
      ->capture_default_str();
}

void add_output(CLI::App* sc, std::string& format, std::string& output) {
  sc->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sc->add_option("--output", output, "write output to this file instead of "
                                     "stdout");
}

PhysicalConfig make_config(const CommonOpts& o, double sigma) {
  PhysicalConfig cfg;
  cfg.v0 = o.v0;
  cfg.v1 = o.v1;
  cfg.sigma = sigma;
  cfg.x0 = o.x0;
  cfg.mass = o.mass;
  cfg.hbar = o.hbar;
  heunstep::validate_config(cfg);
  return cfg;
}

double single_sigma(const CommonOpts& o) {
  if (o.sigmas.empty()) return -1.0;
  if (o.sigmas.size() != 1) {
    throw UsageError("this subcommand accepts exactly one --sigma");
  }
  return o.sigmas.front();
}

std::vector<double> sigma_list(const CommonOpts& o) {
  if (o.sigmas.empty()) return {-1.0};
  return o.sigmas;
}

ComplexValue parse_complex(const std::string& text, const char* flag) {
  const auto bad = [&] {
    throw UsageError(std::string(flag) + " expects RE or RE,IM");
  };
  std::string re_part = text;
  std::string im_part = "0";
  if (const auto comma = text.find(','); comma != std::string::npos) {
    re_part = text.substr(0, comma);
    im_part = text.substr(comma + 1);
  }
  const auto to_double = [&](const std::string& s) {
    if (s.empty()) bad();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) bad();
    return v;
  };
  return {to_double(re_part), to_double(im_part)};
}

std::map<std::string, double> parse_tolerances(
    const std::vector<std::string>& kv_list,
    const std::map<std::string, double>& defaults) {
  std::map<std::string, double> tol = defaults;
  for (const std::string& kv : kv_list) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--tolerance expects NAME=VALUE");
    }
    const std::string name = kv.substr(0, eq);
    if (tol.find(name) == tol.end()) {
      std::string known;
      for (const auto& [k, v] : defaults) {
        known += known.empty() ? k : ", " + k;
      }
      throw UsageError("unknown tolerance `" + name + "`; known: " + known);
    }
    char* end = nullptr;
    const std::string val = kv.substr(eq + 1);
    const double parsed = std::strtod(val.c_str(), &end);
    if (val.empty() || end != val.c_str() + val.size() || !(parsed > 0.0)) {
      throw UsageError("--tolerance value must be a positive number");
    }
    tol[name] = parsed;
  }
  return tol;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw UsageError("cannot open output file `" + path + "`");
  }
  out << text;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw UsageError("point count must be positive");
  if (count == 1) return {lo};
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    xs[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return xs;
}

// ---------------------------------------------------------------------------

int run_table(const CommonOpts& common, double x_min, double x_max,
              int x_count, const std::string& format,
              const std::string& output) {
  const PhysicalConfig cfg = make_config(common, single_sigma(common));
  const std::vector<double> xs = linspace(x_min, x_max, x_count);

  std::string text;
  if (format == "csv") {
    text = "x,z,rho,V\n";
    for (double x : xs) {
      const auto pt = heunstep::transform_point(x, cfg);
      text += fmt(x) + "," + fmt(pt.z) + "," + fmt(pt.rho) + "," +
              fmt(heunstep::potential_v(x, cfg)) + "\n";
    }
  } else {
    ordered_json rows = ordered_json::array();
    for (double x : xs) {
      const auto pt = heunstep::transform_point(x, cfg);
      rows.push_back({{"x", x},
                      {"z", pt.z},
                      {"rho", pt.rho},
                      {"V", heunstep::potential_v(x, cfg)}});
    }
    text = rows.dump(2) + "\n";
  }
  write_output(text, output);
  return 0;
}

int run_wavefunction(const CommonOpts& common, double energy,
                     const std::string& c1_text, const std::string& c2_text,
                     std::optional<double> x_min, std::optional<double> x_max,
                     int x_count, const std::string& format,
                     const std::string& output) {
  const PhysicalConfig cfg = make_config(common, single_sigma(common));
  const ComplexValue c1 = parse_complex(c1_text, "--c1");
  const ComplexValue c2 = parse_complex(c2_text, "--c2");
  const double span = 10.0 * std::abs(cfg.sigma);
  const double lo = x_min.value_or(cfg.x0 - span);
  const double hi = x_max.value_or(cfg.x0 + span);
  const std::vector<double> xs = linspace(lo, hi, x_count);

  const double tm = 2.0 * cfg.mass / (cfg.hbar * cfg.hbar);
  const double h = 1e-4;
  struct Row {
    double x, re, im, abs2, residual;
  };
  std::vector<Row> rows;
  rows.reserve(xs.size());
  for (double x : xs) {
    const ComplexValue psi = heunstep::wavefunction_psi(x, cfg, energy, c1, c2);
    const ComplexValue psi_p =
        heunstep::wavefunction_psi(x + h, cfg, energy, c1, c2);
    const ComplexValue psi_m =
        heunstep::wavefunction_psi(x - h, cfg, energy, c1, c2);
    const ComplexValue d2 = (psi_p - 2.0 * psi + psi_m) / (h * h);
    const double w = tm * (heunstep::potential_v(x, cfg) - energy);
    const double local =
        (std::abs(psi_p) + std::abs(psi) + std::abs(psi_m)) / 3.0;
    const double denom = (1.0 + std::abs(w)) * local +
                         std::numeric_limits<double>::min();
    const double residual = std::abs(d2 - w * psi) / denom;
    rows.push_back({x, psi.real(), psi.imag(), std::norm(psi), residual});
  }

  std::string text;
  if (format == "csv") {
    text = "x,re_psi,im_psi,abs2_psi,residual\n";
    for (const Row& r : rows) {
      text += fmt(r.x) + "," + fmt(r.re) + "," + fmt(r.im) + "," +
              fmt(r.abs2) + "," + fmt(r.residual) + "\n";
    }
  } else {
    ordered_json arr = ordered_json::array();
    for (const Row& r : rows) {
      arr.push_back({{"x", r.x},
                     {"re_psi", r.re},
                     {"im_psi", r.im},
                     {"abs2_psi", r.abs2},
                     {"residual", r.residual}});
    }
    text = arr.dump(2) + "\n";
  }
  write_output(text, output);
  return 0;
}

int run_transmission(const CommonOpts& common,
                     const std::vector<double>& energy_list,
                     std::optional<double> e_min, std::optional<double> e_max,
                     int e_count, bool with_oracle,
                     const std::vector<std::string>& tol_kv,
                     const std::string& format, const std::string& output) {
  const auto tol =
      parse_tolerances(tol_kv, {{"oracle", 1e-4}});
  std::vector<double> energies = energy_list;
  if (e_min.has_value() != e_max.has_value()) {
    throw UsageError("--energy-min and --energy-max must be given together");
  }
  if (e_min.has_value()) {
    const auto grid = linspace(*e_min, *e_max, e_count);
    energies.insert(energies.end(), grid.begin(), grid.end());
  }
  if (energies.empty()) {
    throw UsageError(
        "transmission needs --energy values or an --energy-min/--energy-max "
        "range");
  }

  struct Row {
    double sigma, energy;
    std::optional<double> t, r, t_oracle, delta;
    const char* regime;
  };
  std::vector<Row> rows;
  bool mismatch = false;
  for (double sigma : sigma_list(common)) {
    const PhysicalConfig cfg = make_config(common, sigma);
    for (double energy : energies) {
      Row row{sigma, energy, {}, {}, {}, {}, nullptr};
      const bool incident_open = energy > cfg.v0;
      const bool transmitted_open = energy > cfg.v0 + cfg.v1;
      if (incident_open && transmitted_open) {
        row.regime = "above_barrier";
        row.t = heunstep::transmission(cfg, energy);
        row.r = heunstep::reflection(cfg, energy);
      } else if (incident_open) {
        row.regime = "below_barrier";
      } else {
        row.regime = "closed";
      }
      if (with_oracle && incident_open) {
        row.t_oracle = heunstep::oracle_transmission(cfg, energy).T;
        if (row.t) {
          row.delta = std::abs(*row.t - *row.t_oracle);
          if (*row.delta > tol.at("oracle")) mismatch = true;
        }
      }
      rows.push_back(row);
    }
  }

  const auto cell = [](const std::optional<double>& v) {
    return v ? fmt(*v) : std::string();
  };
  std::string text;
  if (format == "csv") {
    text = with_oracle ? "sigma,E,T,R,regime,T_oracle,delta_T\n"
                       : "sigma,E,T,R,regime\n";
    for (const Row& r : rows) {
      text += fmt(r.sigma) + "," + fmt(r.energy) + "," + cell(r.t) + "," +
              cell(r.r) + "," + r.regime;
      if (with_oracle) {
        text += "," + cell(r.t_oracle) + "," + cell(r.delta);
      }
      text += "\n";
    }
  } else {
    const auto jcell = [](const std::optional<double>& v) {
      return v ? ordered_json(*v) : ordered_json(nullptr);
    };
    ordered_json arr = ordered_json::array();
    for (const Row& r : rows) {
      ordered_json obj{{"sigma", r.sigma}, {"E", r.energy},
                       {"T", jcell(r.t)},  {"R", jcell(r.r)},
                       {"regime", r.regime}};
      if (with_oracle) {
        obj["T_oracle"] = jcell(r.t_oracle);
        obj["delta_T"] = jcell(r.delta);
      }
      arr.push_back(obj);
    }
    text = arr.dump(2) + "\n";
  }
  write_output(text, output);
  return mismatch ? 3 : 0;
}

int run_verify(const CommonOpts& common, double energy,
               const std::vector<std::string>& tol_kv, bool inject_q,
               const std::string& output) {
  const std::map<std::string, double> defaults = {
      {"termination_identity", 1e-10}, {"series_termination", 1e-10},
      {"solution_equivalence", 1e-8},  {"flux_identity", 1e-8},
      {"oracle_match", 1e-4},          {"abrupt_limit", 1e-3},
  };
  const auto tol = parse_tolerances(tol_kv, defaults);
  const PhysicalConfig cfg = make_config(common, single_sigma(common));

  ordered_json checks = ordered_json::array();
  bool all_pass = true;
  const auto add = [&](const char* name, double residual, double tolerance) {
    const bool pass = residual <= tolerance;
    all_pass = all_pass && pass;
    checks.push_back({{"name", name},
                      {"residual", residual},
                      {"tolerance", tolerance},
                      {"pass", pass}});
  };

  heunstep::HeunParameters p = heunstep::build_heun_parameters(cfg, energy);
  if (inject_q) p.q += 1e-3;

  // 1. The accessory parameter must satisfy the series-termination identity.
  add("termination_identity",
      std::abs(heunstep::termination_residual(p)) /
          (1.0 + std::abs(p.alpha_beta())),
      tol.at("termination_identity"));

  // 2. The canonical power-series coefficients past c1 must vanish.
  {
    const auto pc = heunstep::canonical_map(p);
    const auto series = heunstep::expand_series(pc, 8);
    double cmax = 0.0;
    for (const ComplexValue& c : series.coefficients) {
      cmax = std::max(cmax, std::abs(c));
    }
    const double r = std::max(std::abs(series.coefficients.at(2)),
                              std::abs(series.coefficients.at(3))) /
                     cmax;
    add("series_termination", r, tol.at("series_termination"));
  }

  // 3. Independent evaluation routes for both basis solutions must agree.
  {
    double worst = 0.0;
    const auto rel = [](ComplexValue a, ComplexValue b) {
      return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
    };
    for (double z : {1.25, 1.75, 2.5, 3.5}) {
      const ComplexValue u1a = heunstep::fundamental_u1(p, z);
      const ComplexValue u1b = heunstep::fundamental_u1_series(p, z);
      const ComplexValue u1c = heunstep::fundamental_u1_clausen(p, z);
      const ComplexValue u2a = heunstep::fundamental_u2(p, z);
      const ComplexValue u2b = heunstep::fundamental_u2_clausen(p, z);
      worst = std::max({worst, rel(u1a, u1b), rel(u1a, u1c), rel(u2a, u2b)});
    }
    add("solution_equivalence", worst, tol.at("solution_equivalence"));
  }

  // 4. The asymptotic amplitudes must conserve probability flux.
  {
    const auto k = heunstep::wavenumbers(cfg, energy);
    const auto amp = heunstep::amplitudes(cfg, energy);
    const double in = k.k1 * std::norm(amp.A);
    const double out = k.k1 * std::norm(amp.B) + k.k2 * std::norm(amp.C);
    add("flux_identity", std::abs(in - out) / in, tol.at("flux_identity"));
  }

  // 5. The closed-form transmission must match the RK4 reference.
  {
    const double analytic = heunstep::transmission(cfg, energy);
    const auto oracle = heunstep::oracle_transmission(cfg, energy);
    add("oracle_match", std::abs(analytic - oracle.T), tol.at("oracle_match"));
  }

  // 6. A very steep step must reproduce the abrupt-step transmission.
  {
    PhysicalConfig steep = cfg;
    steep.sigma = -1e-4;
    const auto k = heunstep::wavenumbers(cfg, energy);
    add("abrupt_limit",
        std::abs(heunstep::transmission(steep, energy) -
                 heunstep::abrupt_step_t(k.k1, k.k2)),
        tol.at("abrupt_limit"));
  }

  ordered_json report{{"checks", checks}, {"all_pass", all_pass}};
  write_output(report.dump(2) + "\n", output);
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering toolkit for an exactly solvable smooth potential "
               "step",
               "stepscatter"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string format = "csv";
  std::string output;

  CLI::App* pot = app.add_subcommand(
      "potential", "Tabulate the coordinate map and the potential");
  CLI::App* tra = app.add_subcommand(
      "transform", "Alias of `potential`: tabulate the coordinate map");
  double x_min = -10.0, x_max = 10.0;
  int x_count = 101;
  for (CLI::App* sc : {pot, tra}) {
    add_common(sc, common);
    add_output(sc, format, output);
    sc->add_option("--x-min", x_min, "left edge of the x grid")
        ->capture_default_str();
    sc->add_option("--x-max", x_max, "right edge of the x grid")
        ->capture_default_str();
    sc->add_option("--x-count", x_count, "number of grid points")
        ->capture_default_str();
  }

  CLI::App* wav = app.add_subcommand(
      "wavefunction",
      "Tabulate the analytic wavefunction and its equation defect");
  double wave_energy = 2.0;
  std::string c1_text = "0";
  std::string c2_text = "1";
  std::optional<double> wave_x_min, wave_x_max;
  int wave_x_count = 201;
  add_common(wav, common);
  add_output(wav, format, output);
  wav->add_option("--energy", wave_energy, "total energy E")
      ->capture_default_str();
  wav->add_option("--c1", c1_text,
                  "coefficient of the first basis solution (RE or RE,IM)")
      ->capture_default_str();
  wav->add_option("--c2", c2_text,
                  "coefficient of the second basis solution (RE or RE,IM)")
      ->capture_default_str();
  wav->add_option("--x-min", wave_x_min,
                  "left edge of the x grid (default x0 - 10|sigma|)");
  wav->add_option("--x-max", wave_x_max,
                  "right edge of the x grid (default x0 + 10|sigma|)");
  wav->add_option("--x-count", wave_x_count, "number of grid points")
      ->capture_default_str();

  CLI::App* trn = app.add_subcommand(
      "transmission", "Tabulate transmission and reflection over energies");
  std::vector<double> energy_list;
  std::optional<double> e_min, e_max;
  int e_count = 25;
  bool with_oracle = false;
  std::vector<std::string> tol_kv;
  add_common(trn, common);
  add_output(trn, format, output);
  trn->add_option("--energy", energy_list, "explicit energy values "
                                           "(repeatable)");
  trn->add_option("--energy-min", e_min, "start of an energy sweep");
  trn->add_option("--energy-max", e_max, "end of an energy sweep");
  trn->add_option("--energy-count", e_count, "points in the energy sweep")
      ->capture_default_str();
  trn->add_flag("--oracle", with_oracle,
                "cross-check every open-channel row against the RK4 "
                "reference integrator");
  trn->add_option("--tolerance", tol_kv,
                  "NAME=VALUE override (known name: oracle)");

  CLI::App* ver = app.add_subcommand(
      "verify", "Run the self-check battery and print a JSON report");
  double verify_energy = 2.0;
  std::vector<std::string> verify_tol_kv;
  bool inject_q = false;
  add_common(ver, common);
  ver->add_option("--output", output,
                  "write the JSON report to this file instead of stdout");
  ver->add_option("--energy", verify_energy, "total energy E")
      ->capture_default_str();
  ver->add_option("--tolerance", verify_tol_kv,
                  "NAME=VALUE override for a named check");
  ver->add_flag("--inject-q-perturbation", inject_q)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (pot->parsed() || tra->parsed()) {
      return run_table(common, x_min, x_max, x_count, format, output);
    }
    if (wav->parsed()) {
      return run_wavefunction(common, wave_energy, c1_text, c2_text,
                              wave_x_min, wave_x_max, wave_x_count, format,
                              output);
    }
    if (trn->parsed()) {
      return run_transmission(common, energy_list, e_min, e_max, e_count,
                              with_oracle, tol_kv, format, output);
    }
    if (ver->parsed()) {
      return run_verify(common, verify_energy, verify_tol_kv, inject_q,
                        output);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const heunstep::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
