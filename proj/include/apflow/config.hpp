#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "apflow/model_core.hpp"
#include "apflow/types.hpp"

namespace apflow {

enum class SweepMode { Full, Longwave, Both };

inline const char* to_string(SweepMode m) {
  switch (m) {
    case SweepMode::Full: return "full";
    case SweepMode::Longwave: return "longwave";
    default: return "both";
  }
}

/// Run configuration in human units (degrees, nm, GPa, J/m^2). Conversion to
/// SI happens in beam()/film(); everything downstream is SI.
struct RunConfig {
  // beam: either (flux, strain_per_ion) or the measured normal-incidence
  // steady stress, from which eta*f*A is inferred.
  double theta_deg = 0.0;
  std::optional<double> flux_per_nm2_s;
  std::optional<double> strain_per_ion_nm2;
  std::optional<double> stress_normal_gpa;

  // film
  double viscosity_pa_s = 0.0;
  double surface_energy_j_m2 = 0.0;
  double thickness_nm = 0.0;

  // sweep grids (optional block)
  std::vector<double> sweep_theta_deg;
  std::vector<double> sweep_q;

  SweepMode mode = SweepMode::Both;
  int oracle_nodes = 48;
  double oracle_tolerance = 1e-8;
  std::string output_csv;

  bool operator==(const RunConfig&) const = default;

  BeamParameters beam() const {
    BeamParameters b;
    b.theta = theta_deg * M_PI / 180.0;
    if (stress_normal_gpa) {
      // fA = |T0(0)| / (6 eta); flux and strain split is unobservable here.
      const double eta_fa = infer_eta_fA_from_stress(*stress_normal_gpa * 1e9);
      b.flux = 1.0;
      b.strain_per_ion = eta_fa / viscosity_pa_s;
    } else {
      b.flux = *flux_per_nm2_s * 1e18;          // 1/(nm^2 s) -> 1/(m^2 s)
      b.strain_per_ion = *strain_per_ion_nm2 * 1e-18;  // nm^2 -> m^2
    }
    return b;
  }

  FilmParameters film() const {
    return FilmParameters{viscosity_pa_s, surface_energy_j_m2,
                          thickness_nm * 1e-9};
  }
};

namespace detail {

using Json = nlohmann::json;

inline void reject_unknown_keys(const Json& obj, const char* path,
                                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known)
      throw ValidationError(std::string(path) + "." + key + ": unknown key");
  }
}

inline double require_number(const Json& obj, const char* path,
                             const char* key) {
  if (!obj.contains(key))
    throw ValidationError(std::string(path) + "." + key + ": missing field");
  if (!obj[key].is_number())
    throw ValidationError(std::string(path) + "." + key + ": must be a number");
  return obj[key].get<double>();
}

}  // namespace detail

/// Parses and validates a JSON run configuration. Error messages carry the
/// offending field path.
inline RunConfig parse_config(const std::string& text) {
  detail::Json j;
  try {
    j = detail::Json::parse(text);
  } catch (const detail::Json::parse_error& e) {
    throw ValidationError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config: top level must be an object");
  detail::reject_unknown_keys(
      j, "config", {"beam", "film", "sweep", "mode", "oracle", "output"});

  RunConfig cfg;

  if (!j.contains("beam")) throw ValidationError("config.beam: missing field");
  const auto& beam = j["beam"];
  detail::reject_unknown_keys(beam, "config.beam",
                              {"theta_deg", "flux_per_nm2_s",
                               "strain_per_ion_nm2", "stress_normal_GPa"});
  cfg.theta_deg = detail::require_number(beam, "config.beam", "theta_deg");
  if (cfg.theta_deg < 0.0 || cfg.theta_deg > 90.0)
    throw ValidationError("config.beam.theta_deg: must lie in [0, 90]");
  const bool has_flux =
      beam.contains("flux_per_nm2_s") || beam.contains("strain_per_ion_nm2");
  const bool has_stress = beam.contains("stress_normal_GPa");
  if (has_flux && has_stress)
    throw ValidationError(
        "config.beam: give either flux/strain_per_ion or stress_normal_GPa, "
        "not both");
  if (has_stress) {
    cfg.stress_normal_gpa =
        detail::require_number(beam, "config.beam", "stress_normal_GPa");
    if (*cfg.stress_normal_gpa < 0.0)
      throw ValidationError("config.beam.stress_normal_GPa: must be >= 0");
  } else if (has_flux) {
    cfg.flux_per_nm2_s =
        detail::require_number(beam, "config.beam", "flux_per_nm2_s");
    cfg.strain_per_ion_nm2 =
        detail::require_number(beam, "config.beam", "strain_per_ion_nm2");
    if (*cfg.flux_per_nm2_s < 0.0)
      throw ValidationError("config.beam.flux_per_nm2_s: must be >= 0");
    if (*cfg.strain_per_ion_nm2 < 0.0)
      throw ValidationError("config.beam.strain_per_ion_nm2: must be >= 0");
  } else {
    throw ValidationError(
        "config.beam: missing drive (flux_per_nm2_s + strain_per_ion_nm2, or "
        "stress_normal_GPa)");
  }

  if (!j.contains("film")) throw ValidationError("config.film: missing field");
  const auto& film = j["film"];
  detail::reject_unknown_keys(
      film, "config.film",
      {"viscosity_Pa_s", "surface_energy_J_m2", "thickness_nm"});
  cfg.viscosity_pa_s =
      detail::require_number(film, "config.film", "viscosity_Pa_s");
  cfg.surface_energy_j_m2 =
      detail::require_number(film, "config.film", "surface_energy_J_m2");
  cfg.thickness_nm = detail::require_number(film, "config.film", "thickness_nm");
  if (!(cfg.viscosity_pa_s > 0.0))
    throw ValidationError("config.film.viscosity_Pa_s: must be > 0");
  if (cfg.surface_energy_j_m2 < 0.0)
    throw ValidationError("config.film.surface_energy_J_m2: must be >= 0");
  if (!(cfg.thickness_nm > 0.0))
    throw ValidationError("config.film.thickness_nm: must be > 0");

  if (j.contains("sweep")) {
    const auto& sweep = j["sweep"];
    detail::reject_unknown_keys(sweep, "config.sweep", {"theta_deg", "q"});
    if (!sweep.contains("theta_deg") || !sweep["theta_deg"].is_array() ||
        sweep["theta_deg"].empty())
      throw ValidationError(
          "config.sweep.theta_deg: must be a nonempty array of angles");
    for (const auto& t : sweep["theta_deg"]) {
      const double v = t.get<double>();
      if (v < 0.0 || v > 90.0)
        throw ValidationError("config.sweep.theta_deg: entries must lie in [0, 90]");
      cfg.sweep_theta_deg.push_back(v);
    }
    if (sweep.contains("q")) {
      if (!sweep["q"].is_array() || sweep["q"].empty())
        throw ValidationError("config.sweep.q: must be a nonempty array");
      for (const auto& q : sweep["q"]) {
        const double v = q.get<double>();
        if (!(v >= 0.0))
          throw ValidationError("config.sweep.q: entries must be >= 0");
        cfg.sweep_q.push_back(v);
      }
    }
  }

  if (j.contains("mode")) {
    const std::string m = j["mode"].get<std::string>();
    if (m == "full") cfg.mode = SweepMode::Full;
    else if (m == "longwave") cfg.mode = SweepMode::Longwave;
    else if (m == "both") cfg.mode = SweepMode::Both;
    else throw ValidationError("config.mode: must be full, longwave, or both");
  }

  if (j.contains("oracle")) {
    const auto& oracle = j["oracle"];
    detail::reject_unknown_keys(oracle, "config.oracle", {"nodes", "tolerance"});
    if (oracle.contains("nodes")) {
      cfg.oracle_nodes = oracle["nodes"].get<int>();
      if (cfg.oracle_nodes < 8)
        throw ValidationError("config.oracle.nodes: must be >= 8");
    }
    if (oracle.contains("tolerance")) {
      cfg.oracle_tolerance = oracle["tolerance"].get<double>();
      if (!(cfg.oracle_tolerance > 0.0))
        throw ValidationError("config.oracle.tolerance: must be > 0");
    }
  }

  if (j.contains("output")) {
    const auto& output = j["output"];
    detail::reject_unknown_keys(output, "config.output", {"csv"});
    if (output.contains("csv")) cfg.output_csv = output["csv"].get<std::string>();
  }

  return cfg;
}

/// Inverse of parse_config: parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& cfg) {
  detail::Json j;
  j["beam"]["theta_deg"] = cfg.theta_deg;
  if (cfg.stress_normal_gpa)
    j["beam"]["stress_normal_GPa"] = *cfg.stress_normal_gpa;
  else {
    j["beam"]["flux_per_nm2_s"] = cfg.flux_per_nm2_s.value_or(0.0);
    j["beam"]["strain_per_ion_nm2"] = cfg.strain_per_ion_nm2.value_or(0.0);
  }
  j["film"]["viscosity_Pa_s"] = cfg.viscosity_pa_s;
  j["film"]["surface_energy_J_m2"] = cfg.surface_energy_j_m2;
  j["film"]["thickness_nm"] = cfg.thickness_nm;
  if (!cfg.sweep_theta_deg.empty()) {
    j["sweep"]["theta_deg"] = cfg.sweep_theta_deg;
    if (!cfg.sweep_q.empty()) j["sweep"]["q"] = cfg.sweep_q;
  }
  j["mode"] = to_string(cfg.mode);
  j["oracle"]["nodes"] = cfg.oracle_nodes;
  j["oracle"]["tolerance"] = cfg.oracle_tolerance;
  if (!cfg.output_csv.empty()) j["output"]["csv"] = cfg.output_csv;
  return j.dump(2);
}

}  // namespace apflow
