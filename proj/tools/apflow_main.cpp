// apflow: steady states, dispersion relations, most-unstable wavelengths,
// ripple velocities, and cross-verification for the anisotropic-plastic-flow
// stability model of ion-irradiated films, plus a comparison implementation
// of the effective-body-force model.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "apflow/config.hpp"
#include "apflow/dispersion.hpp"
#include "apflow/ebf.hpp"
#include "apflow/io.hpp"
#include "apflow/model_core.hpp"
#include "apflow/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitVerificationFailure = 2;
constexpr int kExitIo = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw apflow::IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw apflow::IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw apflow::IoError("write failed: " + path);
}

apflow::RunConfig load_config(const std::string& path) {
  return apflow::parse_config(read_file(path));
}

bool use_color() {
  return std::getenv("NO_COLOR") == nullptr;
}

int cmd_steady(const std::string& config_path) {
  const auto cfg = load_config(config_path);
  const auto s = apflow::steady_state(cfg.beam(), cfg.film());
  std::cout << "theta_deg=" << apflow::format_number(cfg.theta_deg)
            << " p0_GPa=" << apflow::format_number(s.p0 / 1e9)
            << " shear_coefficient_per_s="
            << apflow::format_number(s.shear_coefficient)
            << " T0_xx_GPa=" << apflow::format_number(s.T0(0, 0) / 1e9)
            << " T0_yy_GPa=" << apflow::format_number(s.T0(1, 1) / 1e9)
            << " T0_zz_GPa=" << apflow::format_number(s.T0(2, 2) / 1e9)
            << "\n";
  return kExitOk;
}

int cmd_dispersion(const std::string& config_path, double theta_deg, double q,
                   const std::string& orientation, bool longwave) {
  auto cfg = load_config(config_path);
  cfg.theta_deg = theta_deg;
  const auto beam = cfg.beam();
  const auto film = cfg.film();
  apflow::Wavevector k;
  if (orientation == "parallel")
    k.k1 = q / film.thickness;
  else
    k.k2 = q / film.thickness;
  const auto sigma = longwave ? apflow::sigma_longwave(k, beam, film)
                              : apflow::sigma_full(k, beam, film);
  std::cout << "theta_deg=" << apflow::format_number(theta_deg)
            << " Q=" << apflow::format_number(q)
            << " orientation=" << orientation
            << " relation=" << (longwave ? "longwave" : "full")
            << " growth_rate_per_s="
            << apflow::format_number(sigma.growth_rate())
            << " angular_frequency_per_s="
            << apflow::format_number(sigma.angular_frequency());
  if (k.k1 != 0.0)
    std::cout << " V_nm_per_s="
              << apflow::format_number(
                     apflow::phase_velocity(k, beam, film) * 1e9);
  std::cout << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, std::string out_path) {
  const auto cfg = load_config(config_path);
  if (out_path.empty()) out_path = cfg.output_csv;
  const auto rows = apflow::run_sweep(cfg);
  const std::string csv = apflow::sweep_csv(rows);
  if (out_path.empty())
    std::cout << csv;
  else
    write_file(out_path, csv);
  return kExitOk;
}

int cmd_verify(const std::string& config_path, bool oracle,
               const std::string& grid) {
  apflow::RunConfig cfg;
  if (!config_path.empty()) {
    cfg = load_config(config_path);
  } else {
    // Measured constants for 250 eV Ar on Si.
    cfg.theta_deg = 60.0;
    cfg.stress_normal_gpa = 1.5;
    cfg.viscosity_pa_s = 1.0;
    cfg.surface_energy_j_m2 = 1.36;
    cfg.thickness_nm = 3.0;
  }
  apflow::VerifyOptions opt;
  opt.oracle = oracle;
  opt.grid = grid == "coarse" ? apflow::VerifyGrid::Coarse
                              : apflow::VerifyGrid::Full;
  opt.oracle_nodes = cfg.oracle_nodes;
  opt.oracle_tolerance = cfg.oracle_tolerance;

  const auto report = apflow::run_verification(cfg.beam(), cfg.film(), opt);
  const bool color = use_color();
  const char* green = color ? "\033[32m" : "";
  const char* red = color ? "\033[31m" : "";
  const char* reset = color ? "\033[0m" : "";
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? green : red) << (c.passed ? "PASS" : "FAIL")
              << reset << "  " << c.name
              << "  max_error=" << apflow::format_number(c.max_error)
              << " tolerance=" << apflow::format_number(c.tolerance) << "\n";
  }
  if (!report.oracle_convergence.empty()) {
    std::cout << "oracle convergence (N, |sigma_N - sigma_ref| per s):\n";
    for (const auto& [n, err] : report.oracle_convergence)
      std::cout << "  N=" << n << "  error="
                << apflow::format_number(err) << "\n";
  }
  return report.all_passed() ? kExitOk : kExitVerificationFailure;
}

int cmd_compare_ebf(const std::string& config_path, double fe_kg_nm_s2,
                    double d_nm, double q, std::string out_path) {
  const auto cfg = load_config(config_path);
  const auto beam = cfg.beam();
  const auto film = cfg.film();
  apflow::EBFParameters ebf;
  ebf.f_E = fe_kg_nm_s2 * 1e18;  // kg/(nm s)^2 -> N/m^3
  ebf.d = d_nm * 1e-9;
  ebf.eta = film.viscosity;

  std::vector<double> thetas;
  for (double deg : cfg.sweep_theta_deg.empty()
                        ? std::vector<double>{cfg.theta_deg}
                        : cfg.sweep_theta_deg)
    thetas.push_back(deg * M_PI / 180.0);

  const auto table = apflow::comparison_table(thetas, beam, film, ebf, q);
  std::ostringstream out;
  out << "# Q=" << apflow::format_number(q)
      << " ebf_Ts_omitted=" << (table.ebf_ts_omitted ? "true" : "false")
      << "\n";
  out << "# apf_velocity_vanishes_at_Q0="
      << (table.apf_velocity_vanishes_at_q0 ? "true" : "false")
      << " ebf_velocity_nonzero_at_Q0="
      << (table.ebf_velocity_nonzero_at_q0 ? "true" : "false") << "\n";
  out << "# apf_vertical_stress_absent="
      << (table.apf_vertical_stress_absent ? "true" : "false")
      << " ebf_vertical_stress_present="
      << (table.ebf_vertical_stress_present ? "true" : "false") << "\n";
  out << "theta_deg,V_apf_nm_per_s,V_ebf_nm_per_s,T_apf_GPa,"
         "T_ebf_interface_GPa\n";
  for (const auto& row : table.rows) {
    out << apflow::format_number(row.theta * 180.0 / M_PI) << ','
        << apflow::format_number(row.v_apf * 1e9) << ','
        << apflow::format_number(row.v_ebf * 1e9) << ','
        << apflow::format_number(row.t_apf_interface / 1e9) << ','
        << apflow::format_number(row.t_ebf_interface / 1e9) << "\n";
  }
  if (out_path.empty())
    std::cout << out.str();
  else
    write_file(out_path, out.str());
  return kExitOk;
}

int cmd_ingest(const std::string& data_path, const std::string& sweep_path,
               std::string out_path) {
  const auto records = apflow::ingest_experiment_file(data_path);
  std::string csv;
  if (!sweep_path.empty()) {
    std::ifstream in(sweep_path);
    if (!in) throw apflow::IoError("cannot open " + sweep_path);
    const auto sweep = apflow::read_sweep_csv(in);
    csv = apflow::residual_csv(apflow::residual_report(records, sweep));
  } else {
    std::ostringstream out;
    out << "angle_deg,wavelength_nm,mode,source\n";
    for (const auto& rec : records)
      out << apflow::format_number(rec.angle_deg) << ','
          << apflow::format_number(rec.wavelength_nm) << ','
          << apflow::to_string(rec.mode) << ',' << rec.source << "\n";
    csv = out.str();
  }
  if (out_path.empty())
    std::cout << csv;
  else
    write_file(out_path, csv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Linear stability of ion-irradiated amorphous films under "
      "anisotropic plastic flow"};
  app.require_subcommand(1);

  std::string config_path, out_path, data_path, sweep_path;
  std::string orientation = "parallel", grid = "full";
  double theta_deg = 0.0, q = 0.0, fe = 0.0, d_nm = 0.0;
  bool longwave = false, oracle = false;

  auto* steady = app.add_subcommand("steady", "Flat-film steady state");
  steady->add_option("--config", config_path, "JSON config file")->required();

  auto* dispersion = app.add_subcommand(
      "dispersion", "Growth rate of a single mode (single-line result)");
  dispersion->add_option("--config", config_path, "JSON config file")
      ->required();
  dispersion->add_option("--theta-deg", theta_deg, "incidence angle, degrees")
      ->required();
  dispersion->add_option("--q", q, "dimensionless wavenumber Q = h0 |k|")
      ->required();
  dispersion
      ->add_option("--orientation", orientation,
                   "wavevector orientation: parallel (k2=0) or perpendicular "
                   "(k1=0)")
      ->check(CLI::IsMember({"parallel", "perpendicular"}));
  dispersion->add_flag("--longwave", longwave,
                       "use the longwave approximation");

  auto* sweep = app.add_subcommand(
      "sweep", "Most-unstable-mode table over the configured angle grid "
               "(CSV columns: " + std::string(apflow::kSweepHeader) + ")");
  sweep->add_option("--config", config_path, "JSON config file")->required();
  sweep->add_option("--out", out_path, "output CSV path (default: stdout or "
                                       "config output.csv)");

  auto* verify = app.add_subcommand(
      "verify", "Cross-check the solution pipeline, determinant identity, "
                "Cramer solve, and optionally the collocation oracle");
  verify->add_option("--config", config_path, "JSON config file (default: "
                                              "measured 250 eV constants)");
  verify->add_flag("--oracle", oracle, "also run the collocation oracle");
  verify->add_option("--grid", grid, "verification grid size")
      ->check(CLI::IsMember({"coarse", "full"}));

  auto* compare = app.add_subcommand(
      "compare-ebf", "Side-by-side predictions vs the effective-body-force "
                     "model");
  compare->add_option("--config", config_path, "JSON config file")->required();
  compare->add_option("--fe", fe, "EBF force magnitude, kg/(nm s)^2")
      ->required();
  compare->add_option("--d", d_nm, "EBF film depth, nm")->required();
  compare->add_option("--q", q, "dimensionless wavenumber (default 0)");
  compare->add_option("--out", out_path, "output CSV path (default stdout)");

  auto* ingest = app.add_subcommand(
      "ingest", "Validate experimental wavelength data; with --sweep, report "
                "model-minus-data residuals");
  ingest->add_option("--data", data_path, "experiment CSV "
                                          "(angle_deg,wavelength_nm,mode,source)")
      ->required();
  ingest->add_option("--sweep", sweep_path, "sweep CSV to compare against");
  ingest->add_option("--out", out_path, "output CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (steady->parsed()) return cmd_steady(config_path);
    if (dispersion->parsed())
      return cmd_dispersion(config_path, theta_deg, q, orientation, longwave);
    if (sweep->parsed()) return cmd_sweep(config_path, out_path);
    if (verify->parsed()) return cmd_verify(config_path, oracle, grid);
    if (compare->parsed())
      return cmd_compare_ebf(config_path, fe, d_nm, q, out_path);
    if (ingest->parsed()) return cmd_ingest(data_path, sweep_path, out_path);
  } catch (const apflow::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const apflow::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
