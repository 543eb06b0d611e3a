// Command-line front end: subcommand dispatch, JSON config ingestion,
// parallel sweeps, CSV/JSON emission, manifest files.
//
// Exit codes: 0 success, 2 config/validation error, 3 numerical failure,
// 4 I/O error. `oracle --compare` exits 1 when the comparison gate fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fieldent/casimir.hpp"
#include "fieldent/dielectric.hpp"
#include "fieldent/errors.hpp"
#include "fieldent/fitting.hpp"
#include "fieldent/gaussian.hpp"
#include "fieldent/io.hpp"
#include "fieldent/medium.hpp"
#include "fieldent/oracle.hpp"
#include "fieldent/parallel.hpp"
#include "fieldent/plates.hpp"
#include "fieldent/version.hpp"

namespace {

using nlohmann::json;

struct OutputOptions {
  std::string out = "-";
  std::string format = "csv";
  unsigned workers = 0;
  std::string config_path;
};

void add_output_options(CLI::App* cmd, OutputOptions* o) {
  cmd->add_option("--out", o->out, "Output path ('-' = stdout)");
  cmd->add_option("--format", o->format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--workers", o->workers, "Worker threads (0 = all cores)");
  cmd->add_option("--config", o->config_path,
                  "JSON config; snake_case keys mirror the flags, flags win");
}

// Applies a JSON config object to every option of the subcommand that was not
// given on the command line (flags override config values).
void apply_json_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file: " + path);
  json j;
  in >> j;
  if (!j.is_object())
    throw fieldent::invalid_state_error("config: file must hold a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string flag = it.key();
    for (auto& c : flag)
      if (c == '_') c = '-';
    CLI::Option* opt = cmd->get_option_no_throw("--" + flag);
    if (opt == nullptr)
      throw fieldent::invalid_state_error("config: unknown key '" + it.key() + "'");
    if (opt->count() > 0) continue;  // command line wins
    auto feed = [&](const json& v) {
      if (v.is_string())
        opt->add_result(v.get<std::string>());
      else if (v.is_boolean())
        opt->add_result(v.get<bool>() ? "true" : "false");
      else
        opt->add_result(v.dump());
    };
    if (it.value().is_array())
      for (const auto& v : it.value()) feed(v);
    else
      feed(it.value());
    opt->run_callback();
  }
}

struct ModelFlags {
  std::string model = "lorentz";
  double omega_p = 0.1, omega_0 = 1.0, gamma_p = 0.0;
  double omega_c = 0.0, gamma_c = 0.0;
  double A = 0.0, f = 0.0, eps0 = 1.0;
};

void add_model_flags(CLI::App* cmd, ModelFlags* m) {
  cmd->add_option("--model", m->model,
                  "vacuum | plasma | lorentz | drude | lorentz-drude | spatial-dispersion");
  cmd->add_option("--omega-p", m->omega_p, "Oscillator coupling");
  cmd->add_option("--omega-0", m->omega_0, "Resonance frequency");
  cmd->add_option("--gamma-p", m->gamma_p, "Oscillator damping");
  cmd->add_option("--omega-c", m->omega_c, "Drude coupling");
  cmd->add_option("--gamma-c", m->gamma_c, "Drude relaxation");
  cmd->add_option("--A", m->A, "Spatial-dispersion k^2 coefficient");
  cmd->add_option("--f", m->f, "Spatial-dispersion oscillator strength");
  cmd->add_option("--eps0", m->eps0, "Spatial-dispersion overall scale");
}

fieldent::SusceptibilityModel resolve_model(const ModelFlags& f) {
  json j = {{"model", f.model},   {"omega_p", f.omega_p}, {"omega_0", f.omega_0},
            {"gamma_p", f.gamma_p}, {"omega_c", f.omega_c}, {"gamma_c", f.gamma_c},
            {"A", f.A},           {"f", f.f},             {"eps0", f.eps0}};
  return fieldent::model_from_json(j);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw fieldent::invalid_state_error("grid: need 0 < min < max and count >= 2");
  std::vector<double> g((std::size_t)count);
  for (int i = 0; i < count; ++i)
    g[(std::size_t)i] = lo * std::pow(hi / lo, (double)i / (count - 1));
  return g;
}

std::vector<int> integer_log_grid(int lo, int hi, int count) {
  auto raw = log_grid(lo, hi, count);
  std::vector<int> g;
  for (double v : raw) {
    const int L = (int)std::lround(v);
    if (g.empty() || L > g.back()) g.push_back(L);
  }
  return g;
}

struct Emitter {
  std::vector<std::string> header;
  std::vector<std::vector<fieldent::Cell>> rows;
  json extra = json::object();  // merged into JSON output (e.g. "fit")

  std::string render(const std::string& format, const std::string& kind) const {
    if (format == "csv") {
      std::ostringstream os;
      fieldent::write_csv(os, header, rows);
      return os.str();
    }
    json j;
    j["kind"] = kind;
    json recs = json::array();
    for (const auto& row : rows) {
      json r = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) {
        const auto& c = row[i];
        if (std::holds_alternative<long long>(c))
          r[header[i]] = std::get<long long>(c);
        else if (std::holds_alternative<double>(c))
          r[header[i]] = std::get<double>(c);
        else
          r[header[i]] = std::get<std::string>(c);
      }
      recs.push_back(r);
    }
    j["records"] = recs;
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    return j.dump(2) + "\n";
  }
};

json fit_to_json(const fieldent::FitResult& f) {
  json j;
  j["exponent"] = f.exponent;
  j["prefactor"] = f.prefactor;
  j["offset"] = f.offset ? json(*f.offset) : json(nullptr);
  j["r_squared"] = f.r_squared;
  j["window_min"] = f.window.first;
  j["window_max"] = f.window.second;
  return j;
}

int write_output(const OutputOptions& out, const std::string& data, const CLI::App& cmd,
                 const json& resolved, double wall_seconds) {
  if (out.out == "-") {
    std::cout << data;
    return 0;
  }
  try {
    fieldent::write_text_file(out.out, data);
    json manifest;
    manifest["tool"] = "fieldent";
    manifest["version"] = fieldent::kVersion;
    manifest["subcommand"] = cmd.get_name();
    manifest["resolved_config"] = resolved;
    manifest["wall_time_seconds"] = wall_seconds;
    manifest["output"] = out.out;
    fieldent::write_text_file(out.out + ".manifest.json", manifest.dump(2) + "\n");
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

// Every option currently set on the subcommand, with snake_case keys.
json resolved_config(const CLI::App& cmd) {
  json j = json::object();
  for (const CLI::Option* opt : cmd.get_options()) {
    std::string name = opt->get_lnames().empty() ? "" : opt->get_lnames()[0];
    if (name.empty() || name == "help" || name == "config") continue;
    for (auto& c : name)
      if (c == '-') c = '_';
    const auto& results = opt->results();
    if (results.empty()) continue;
    j[name] = results.size() == 1 ? json(results[0]) : json(results);
  }
  return j;
}

json defaults_table() {
  json j;
  j["mode_tol"] = 1e-10;
  j["radial_tol"] = 1e-8;
  j["plate_tol"] = 1e-11;
  j["quadrature_default_tol"] = 1e-9;
  j["kperp_tol"] = 1e-5;
  j["ref_factor"] = 8;
  j["heff_k_max"] = 60.0;
  j["heff_k_points"] = 4001;
  j["contour_nodes"] = 64;
  j["contour_varsigma"] = 0.0;
  j["contour_x_max"] = 4096.0;
  j["oracle_ir_mass_periodic"] = 1e-4;
  j["log_grid_points_per_decade_default"] = 64;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fieldent: Gaussian mixed states of a scalar field in dispersive media"};
  app.require_subcommand(0, 1);
  bool print_defaults = false;
  app.add_flag("--print-defaults", print_defaults, "Print the physics defaults table and exit");

  // ---- modes ----------------------------------------------------------
  auto* modes = app.add_subcommand("modes", "Per-mode correlators and diagnostics");
  ModelFlags modes_model;
  OutputOptions modes_out;
  double k_min = 1e-3, k_max = 1e3;
  int k_count = 61;
  double mode_tol = 1e-10;
  add_model_flags(modes, &modes_model);
  add_output_options(modes, &modes_out);
  modes->add_option("--k-min", k_min, "Smallest momentum");
  modes->add_option("--k-max", k_max, "Largest momentum");
  modes->add_option("--k-count", k_count, "Number of log-spaced momenta");
  modes->add_option("--tol", mode_tol, "Per-mode quadrature tolerance");

  // ---- entropy-scan ---------------------------------------------------
  auto* escan = app.add_subcommand("entropy-scan", "Entropy density versus UV cutoff");
  ModelFlags escan_model;
  OutputOptions escan_out;
  double cutoff_min = 1e2, cutoff_max = 1e6;
  int cutoff_count = 9, escan_dim = 3;
  add_model_flags(escan, &escan_model);
  add_output_options(escan, &escan_out);
  escan->add_option("--cutoff-min", cutoff_min, "Smallest cutoff");
  escan->add_option("--cutoff-max", cutoff_max, "Largest cutoff");
  escan->add_option("--cutoff-count", cutoff_count, "Number of cutoffs (log grid)");
  escan->add_option("--dim", escan_dim, "Spatial dimension")->check(CLI::Range(1, 3));

  // ---- variance -------------------------------------------------------
  auto* var = app.add_subcommand("variance", "Number variance of occupied modes");
  ModelFlags var_model;
  OutputOptions var_out;
  int var_dim = 3;
  double var_km = 1e-2, var_eps = 1e-6;
  double km_min = 0, km_max = 0, eps_min = 0, eps_max = 0;
  int km_count = 0, eps_count = 0;
  add_model_flags(var, &var_model);
  add_output_options(var, &var_out);
  var->add_option("--dim", var_dim, "Spatial dimension")->check(CLI::Range(1, 3));
  var->add_option("--km", var_km, "Upper momentum");
  var->add_option("--eps-ir", var_eps, "Infrared cutoff");
  var->add_option("--km-min", km_min, "Sweep: smallest upper momentum");
  var->add_option("--km-max", km_max, "Sweep: largest upper momentum");
  var->add_option("--km-count", km_count, "Sweep: number of upper momenta");
  var->add_option("--eps-min", eps_min, "Sweep: smallest IR cutoff");
  var->add_option("--eps-max", eps_max, "Sweep: largest IR cutoff");
  var->add_option("--eps-count", eps_count, "Sweep: number of IR cutoffs");

  // ---- heff-kernel ----------------------------------------------------
  auto* heff = app.add_subcommand("heff-kernel", "Effective-Hamiltonian kernel u_hat(r)");
  ModelFlags heff_model;
  OutputOptions heff_out;
  double heff_beta = 1.0, r_min = 1.0, r_max = 50.0, heff_kmax = 60.0;
  int r_count = 20, heff_dim = 1, heff_kpoints = 4001;
  add_model_flags(heff, &heff_model);
  add_output_options(heff, &heff_out);
  heff->add_option("--beta", heff_beta, "Reference inverse temperature");
  heff->add_option("--dim", heff_dim, "Spatial dimension")->check(CLI::Range(1, 3));
  heff->add_option("--r-min", r_min, "Smallest separation");
  heff->add_option("--r-max", r_max, "Largest separation");
  heff->add_option("--r-count", r_count, "Number of separations (log grid)");
  heff->add_option("--k-max", heff_kmax, "Transform grid top");
  heff->add_option("--k-points", heff_kpoints, "Transform grid points");

  // ---- plates ---------------------------------------------------------
  auto* plates = app.add_subcommand("plates", "Two-plate entropy versus separation");
  OutputOptions plates_out;
  double pl_w0 = 3.0, pl_wp = 0.1, pl_tol = 1e-11;
  int pl_tdim = 0, L_min = 10, L_max = 100, L_count = 10, pl_ref = 8;
  add_output_options(plates, &plates_out);
  plates->add_option("--omega-0", pl_w0, "Pinning frequency");
  plates->add_option("--omega-p", pl_wp, "Coupling");
  plates->add_option("--transverse-dim", pl_tdim, "Transverse dimension")
      ->check(CLI::Range(0, 2));
  plates->add_option("--L-min", L_min, "Smallest separation (lattice units)");
  plates->add_option("--L-max", L_max, "Largest separation");
  plates->add_option("--L-count", L_count, "Number of separations (log grid)");
  plates->add_option("--tol", pl_tol, "Per-correlator quadrature tolerance");
  plates->add_option("--ref-factor", pl_ref, "Far reference at ref-factor * L-max");

  // ---- oracle ---------------------------------------------------------
  auto* oracle = app.add_subcommand("oracle", "Exact-diagonalization cross-check");
  OutputOptions oracle_out;
  int o_sites = 64, o_sep = 8;
  double o_w0 = 3.0, o_wp = 0.2, o_irmass = -1.0;
  std::string o_boundary = "periodic";
  bool o_compare = false;
  add_output_options(oracle, &oracle_out);
  oracle->add_option("--sites", o_sites, "Chain length N");
  oracle->add_option("--plate-sep", o_sep, "Separation of the two body sites");
  oracle->add_option("--omega-0", o_w0, "Pinning frequency");
  oracle->add_option("--omega-p", o_wp, "Coupling");
  oracle->add_option("--boundary", o_boundary, "periodic | open (pinned walls)")
      ->check(CLI::IsMember({"periodic", "open"}));
  oracle->add_option("--ir-mass", o_irmass, "Chain IR mass (negative = automatic)");
  oracle->add_flag("--compare", o_compare,
                   "Exit 0 only if the plate-model comparison agrees within 1%");

  // ---- casimir-ee -----------------------------------------------------
  auto* cee = app.add_subcommand("casimir-ee", "Spectral TrLog formula versus direct difference");
  OutputOptions cee_out;
  double c_w0 = 3.0, c_wp = 0.1, c_varsigma = 0.0, c_xmax = 4096.0, c_tol = 1e-11;
  int c_nodes = 64;
  std::vector<int> c_Ls{10};
  add_output_options(cee, &cee_out);
  cee->add_option("--omega-0", c_w0, "Pinning frequency");
  cee->add_option("--omega-p", c_wp, "Coupling");
  cee->add_option("--L", c_Ls, "Separation(s), repeatable");
  cee->add_option("--varsigma", c_varsigma, "Imaginary offset in the K denominators");
  cee->add_option("--x-max", c_xmax, "Diagnostic vertical-contour height");
  cee->add_option("--nodes", c_nodes, "Quadrature nodes on the spectral segment");
  cee->add_option("--tol", c_tol, "Correlator quadrature tolerance");

  // ---- williamson -----------------------------------------------------
  auto* wil = app.add_subcommand("williamson", "Decompose a covariance matrix from JSON");
  OutputOptions wil_out;
  std::string wil_in;
  add_output_options(wil, &wil_out);
  wil->add_option("--in", wil_in, "Covariance JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  if (print_defaults) {
    std::cout << defaults_table().dump(2) << "\n";
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help() << "\n";
    return 2;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    const OutputOptions* oo = nullptr;
    if (modes->parsed()) oo = &modes_out;
    else if (escan->parsed()) oo = &escan_out;
    else if (var->parsed()) oo = &var_out;
    else if (heff->parsed()) oo = &heff_out;
    else if (plates->parsed()) oo = &plates_out;
    else if (oracle->parsed()) oo = &oracle_out;
    else if (cee->parsed()) oo = &cee_out;
    else oo = &wil_out;
    apply_json_config(active, oo->config_path);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "config/validation error: " << e.what() << "\n";
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto wall = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  try {
    if (modes->parsed()) {
      auto model = resolve_model(modes_model);
      auto ks = log_grid(k_min, k_max, k_count);
      fieldent::MediumOptions mo;
      mo.mode_tol = mode_tol;
      std::vector<fieldent::ModeDiagnostics> diag(ks.size());
      fieldent::parallel_for_index(ks.size(), modes_out.workers, [&](std::size_t i) {
        diag[i] = fieldent::mode_diagnostics(model, ks[i], mo);
      });
      Emitter em;
      em.header = {"k", "g_k", "h_k", "mu_k", "u_k", "n_k", "T_k"};
      for (const auto& d : diag)
        em.rows.push_back({d.k, d.g_k, d.h_k, d.mu_k, d.u_k, d.n_k, d.t_k});
      em.extra["model"] = fieldent::to_json(model);
      return write_output(modes_out, em.render(modes_out.format, "modes"), *modes,
                          resolved_config(*modes), wall());
    }

    if (escan->parsed()) {
      auto model = resolve_model(escan_model);
      auto cutoffs = log_grid(cutoff_min, cutoff_max, cutoff_count);
      auto scan = fieldent::cutoff_scan(model, cutoffs, escan_dim);
      Emitter em;
      em.header = {"cutoff", "entropy_density", "err_bound"};
      for (const auto& r : scan.records) em.rows.push_back({r.abscissa, r.value, r.err_bound});
      em.extra["fit"] = fit_to_json(scan.fit);
      em.extra["model"] = fieldent::to_json(model);
      json cfg = resolved_config(*escan);
      cfg["fit"] = fit_to_json(scan.fit);
      return write_output(escan_out, em.render(escan_out.format, "entropy_scan"), *escan, cfg,
                          wall());
    }

    if (var->parsed()) {
      auto model = resolve_model(var_model);
      const bool km_sweep = km_count > 1;
      const bool eps_sweep = eps_count > 1;
      if (km_sweep && eps_sweep)
        throw fieldent::invalid_state_error("variance: choose one sweep axis");
      Emitter em;
      json cfg = resolved_config(*var);
      if (km_sweep) {
        auto kms = log_grid(km_min, km_max, km_count);
        std::vector<double> vals(kms.size());
        fieldent::parallel_for_index(kms.size(), var_out.workers, [&](std::size_t i) {
          vals[i] = fieldent::number_variance(model, kms[i], var_dim, var_eps);
        });
        em.header = {"k_m", "variance"};
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < kms.size(); ++i) {
          em.rows.push_back({kms[i], vals[i]});
          pts.emplace_back(kms[i], vals[i]);
        }
        auto fit = fieldent::fit_power_law(pts);
        em.extra["fit"] = fit_to_json(fit);
        cfg["fit"] = fit_to_json(fit);
      } else if (eps_sweep) {
        auto epss = log_grid(eps_min, eps_max, eps_count);
        std::vector<double> vals(epss.size());
        fieldent::parallel_for_index(epss.size(), var_out.workers, [&](std::size_t i) {
          vals[i] = fieldent::number_variance(model, var_km, var_dim, epss[i]);
        });
        em.header = {"eps_ir", "variance"};
        std::vector<double> x, y;
        for (std::size_t i = 0; i < epss.size(); ++i) {
          em.rows.push_back({epss[i], vals[i]});
          x.push_back(-std::log(epss[i]));
          y.push_back(vals[i]);
        }
        auto lf = fieldent::detail::linear_fit(x, y);
        json fit = {{"slope", lf.slope}, {"intercept", lf.intercept}, {"r_squared", lf.r2}};
        em.extra["fit_vs_minus_log_eps"] = fit;
        cfg["fit_vs_minus_log_eps"] = fit;
      } else {
        em.header = {"k_m", "variance"};
        em.rows.push_back({var_km, fieldent::number_variance(model, var_km, var_dim, var_eps)});
      }
      em.extra["model"] = fieldent::to_json(model);
      return write_output(var_out, em.render(var_out.format, "variance"), *var, cfg, wall());
    }

    if (heff->parsed()) {
      auto model = resolve_model(heff_model);
      auto rs = log_grid(r_min, r_max, r_count);
      fieldent::HeffOptions ho;
      ho.k_max = heff_kmax;
      ho.k_points = heff_kpoints;
      auto recs = fieldent::heff_kernel(model, heff_beta, rs, heff_dim, {}, ho);
      Emitter em;
      em.header = {"r", "kernel"};
      for (const auto& r : recs) em.rows.push_back({r.abscissa, r.value});
      em.extra["model"] = fieldent::to_json(model);
      return write_output(heff_out, em.render(heff_out.format, "heff_kernel"), *heff,
                          resolved_config(*heff), wall());
    }

    if (plates->parsed()) {
      fieldent::PlateSystem sys;
      sys.omega_0 = pl_w0;
      sys.omega_p = pl_wp;
      sys.d_perp = pl_tdim;
      sys.L = L_min;
      sys.validate();
      auto Ls = integer_log_grid(L_min, L_max, L_count);
      fieldent::PlateOptions po;
      po.tol = pl_tol;
      po.ref_factor = pl_ref;
      fieldent::PlateScan scan;
      if (pl_tdim == 0) {
        scan = fieldent::entropy_vs_L(sys, Ls, po);
      } else {
        fieldent::TransverseOptions to;
        to.plate = po;
        scan = fieldent::entropy_vs_L_transverse(sys, Ls, pl_tdim, to);
      }
      Emitter em;
      em.header = {"L", "k_perp_dim", "S", "S_R", "lambda_plus", "lambda_minus", "err_bound"};
      for (const auto& r : scan.records)
        em.rows.push_back({(long long)r.L, (long long)r.k_perp_dim, r.S, r.S_R, r.lambda_plus,
                           r.lambda_minus, r.err_bound});
      em.extra["fit"] = fit_to_json(scan.fit);
      em.extra["s_r_positive"] = scan.s_r_positive;
      em.extra["L_ref"] = scan.L_ref;
      if (pl_tdim == 0) {
        json decomp = json::array();
        for (const auto& r : scan.records)
          decomp.push_back({{"L", r.L},
                            {"s_r_splitting_part", r.s_r_split},
                            {"s_r_scattering_part", r.s_r_scatter}});
        em.extra["s_r_decomposition"] = decomp;
      }
      json cfg = resolved_config(*plates);
      cfg["fit"] = fit_to_json(scan.fit);
      return write_output(plates_out, em.render(plates_out.format, "plates"), *plates, cfg,
                          wall());
    }

    if (oracle->parsed()) {
      fieldent::CoupledLatticeModel model;
      model.N = o_sites;
      model.omega_0 = o_w0;
      model.omega_p = o_wp;
      model.boundary =
          o_boundary == "periodic" ? fieldent::Boundary::Periodic : fieldent::Boundary::Open;
      model.ir_mass = o_irmass;
      const int b1 = (o_sites - o_sep) / 2;
      model.body_sites = {b1, b1 + o_sep};
      auto ent = fieldent::subsystem_entropies(model);
      fieldent::PlateSystem sys;
      sys.L = o_sep;
      sys.omega_0 = o_w0;
      sys.omega_p = o_wp;
      auto pieces =
          fieldent::detail::entropy_pieces(fieldent::correlator_parts(sys, 0.0, {}));
      const double s_plate = fieldent::entropy_h_from_delta(pieces.pair.mu_plus - 1.0) +
                             fieldent::entropy_h_from_delta(pieces.pair.mu_minus - 1.0);
      json rep;
      rep["S_phi"] = ent.S_phi;
      rep["S_psi"] = ent.S_psi;
      rep["S_plate_module"] = s_plate;
      rep["rel_diff"] = std::abs(s_plate - ent.S_psi) / std::max(ent.S_psi, 1e-300);
      rep["N"] = o_sites;
      rep["L"] = o_sep;
      rep["omega_0"] = o_w0;
      rep["omega_p"] = o_wp;
      const int rc = write_output(oracle_out, rep.dump(2) + "\n", *oracle,
                                  resolved_config(*oracle), wall());
      if (rc != 0) return rc;
      if (o_compare && !(rep["rel_diff"].get<double>() < 0.01)) {
        std::cerr << "oracle comparison failed: rel_diff = " << rep["rel_diff"] << "\n";
        return 1;
      }
      return 0;
    }

    if (cee->parsed()) {
      fieldent::PlateOptions po;
      po.tol = c_tol;
      fieldent::ContourSpec spec;
      spec.nodes = c_nodes;
      spec.varsigma = c_varsigma;
      spec.x_max = c_xmax;
      json reports = json::array();
      for (int L : c_Ls) {
        fieldent::PlateSystem sys;
        sys.L = L;
        sys.omega_0 = c_w0;
        sys.omega_p = c_wp;
        auto set = fieldent::body_gamma_set(sys, 0.0, po);
        auto res = fieldent::s_r_contour(set, spec);
        const double direct = fieldent::s_r_direct(sys, po);
        json r;
        r["L"] = L;
        r["s_r_contour"] = res.value;
        r["s_r_direct"] = direct;
        r["rel_diff"] = std::abs(res.value - direct) / std::max(std::abs(direct), 1e-300);
        r["X_max"] = res.x_max_used;
        r["nodes"] = res.nodes_used;
        r["varsigma"] = c_varsigma;
        r["imag_residual"] = res.imag_residual;
        r["vertical_line_value"] = res.vertical_line_value;
        reports.push_back(r);
      }
      json out = reports.size() == 1 ? reports[0] : json{{"records", reports}};
      return write_output(cee_out, out.dump(2) + "\n", *cee, resolved_config(*cee), wall());
    }

    if (wil->parsed()) {
      std::ifstream in(wil_in);
      if (!in) {
        std::cerr << "I/O error: cannot open " << wil_in << "\n";
        return 4;
      }
      json j;
      in >> j;
      auto gamma = fieldent::covariance_from_json(j);
      auto dec = fieldent::williamson_decompose(gamma);
      auto spectrum = fieldent::symplectic_spectrum(gamma);
      json out;
      out["n"] = gamma.n;
      out["spectrum"] = spectrum;
      out["entropy"] = fieldent::entropy_of_spectrum(spectrum);
      std::vector<double> u;
      for (double e : fieldent::mode_exponents(spectrum))
        u.push_back(std::isinf(e) ? std::numeric_limits<double>::max() : e);
      out["exponents"] = u;
      out["occupations"] = fieldent::occupations(spectrum);
      std::vector<double> w, d;
      for (int r = 0; r < 2 * gamma.n; ++r)
        for (int c = 0; c < 2 * gamma.n; ++c) w.push_back(dec.W(r, c));
      for (int r = 0; r < 2 * gamma.n; ++r) d.push_back(dec.D(r));
      out["W"] = w;
      out["D"] = d;
      return write_output(wil_out, out.dump(2) + "\n", *wil, resolved_config(*wil), wall());
    }
  } catch (const fieldent::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const fieldent::unphysical_state_error& e) {
    std::cerr << "numerical failure: " << e.what() << " (value " << e.offending_value << ")\n";
    return 3;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config/validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config/validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config/validation error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
