#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "apflow/config.hpp"
#include "apflow/dispersion.hpp"
#include "apflow/types.hpp"

namespace apflow {

/// All numeric output is written with 12 significant digits.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// One CSV row of a sweep. Empty optionals render as empty cells.
struct SweepRow {
  double theta_deg = 0.0;
  std::optional<double> lambda_full_nm;
  std::optional<double> lambda_longwave_nm;
  std::optional<double> q_star;
  std::optional<double> r_star_per_s;
  std::optional<double> v_nm_per_s;
  bool stable = true;
};

inline constexpr const char* kSweepHeader =
    "theta_deg,lambda_full_nm,lambda_longwave_nm,Q_star,r_star_per_s,"
    "V_nm_per_s,stable_flag";

/// Most-unstable-mode table over the configured angle grid. Deterministic:
/// sequential evaluation, fixed formatting.
inline std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
  if (cfg.sweep_theta_deg.empty())
    throw ValidationError("config.sweep.theta_deg: required for a sweep");
  const BeamParameters beam = cfg.beam();
  const FilmParameters film = cfg.film();
  const double h0 = film.thickness;
  const double fA = beam.strain_rate();
  const double t0n = stress_magnitude_at_normal(beam, film);

  std::vector<double> thetas;
  thetas.reserve(cfg.sweep_theta_deg.size());
  for (double d : cfg.sweep_theta_deg) thetas.push_back(d * M_PI / 180.0);

  std::vector<SweepRow> rows;
  rows.reserve(thetas.size());

  if (cfg.mode == SweepMode::Longwave) {
    // Longwave-only sweep from the closed-form mode selection.
    for (size_t i = 0; i < thetas.size(); ++i) {
      const double theta = thetas[i];
      SweepRow row;
      row.theta_deg = cfg.sweep_theta_deg[i];
      const double c2t = std::cos(2.0 * theta);
      row.stable = !(c2t < 0.0 && fA > 0.0);
      if (!row.stable && film.surface_energy > 0.0 && t0n > 0.0) {
        const double S = surface_tension_number(beam, film).S;
        const double q_star = std::sqrt(4.5 * std::abs(c2t) / S);
        row.q_star = q_star;
        row.lambda_longwave_nm = wavelength_longwave(theta, film, t0n) * 1e9;
        BeamParameters b = beam;
        b.theta = theta;
        row.r_star_per_s =
            sigma_longwave({q_star / h0, 0.0}, b, film).sigma.real();
        row.v_nm_per_s =
            4.5 * fA * h0 * std::sin(2.0 * theta) * q_star * q_star * 1e9;
      }
      rows.push_back(row);
    }
    return rows;
  }

  const auto table = angle_sweep(beam, film, thetas);
  for (size_t i = 0; i < table.size(); ++i) {
    const SweepPoint& p = table[i];
    SweepRow row;
    row.theta_deg = cfg.sweep_theta_deg[i];
    row.stable = p.stable;
    if (!p.stable) {
      row.lambda_full_nm = p.lambda_full * 1e9;
      row.q_star = p.Q_star;
      row.r_star_per_s = p.r_star;
      row.v_nm_per_s = p.ripple_velocity * 1e9;
    }
    if (cfg.mode == SweepMode::Both && p.lambda_longwave > 0.0)
      row.lambda_longwave_nm = p.lambda_longwave * 1e9;
    rows.push_back(row);
  }
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kSweepHeader << "\n";
  const auto cell = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
  };
  for (const SweepRow& r : rows) {
    out << format_number(r.theta_deg) << ',' << cell(r.lambda_full_nm) << ','
        << cell(r.lambda_longwave_nm) << ',' << cell(r.q_star) << ','
        << cell(r.r_star_per_s) << ',' << cell(r.v_nm_per_s) << ','
        << (r.stable ? "true" : "false") << "\n";
  }
  return out.str();
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace detail

/// Reads back a sweep CSV produced by sweep_csv.
inline std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      detail::split_csv_line(line) != detail::split_csv_line(kSweepHeader))
    throw ValidationError("sweep csv: missing or wrong header");
  std::vector<SweepRow> rows;
  int line_no = 1;
  const auto opt_cell = [&](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != 7)
      throw ValidationError("sweep csv line " + std::to_string(line_no) +
                            ": expected 7 cells");
    try {
      SweepRow row;
      row.theta_deg = std::stod(cells[0]);
      row.lambda_full_nm = opt_cell(cells[1]);
      row.lambda_longwave_nm = opt_cell(cells[2]);
      row.q_star = opt_cell(cells[3]);
      row.r_star_per_s = opt_cell(cells[4]);
      row.v_nm_per_s = opt_cell(cells[5]);
      row.stable = cells[6] == "true";
      rows.push_back(row);
    } catch (const std::exception&) {
      throw ValidationError("sweep csv line " + std::to_string(line_no) +
                            ": malformed number");
    }
  }
  return rows;
}

/// One experimentally observed ripple.
struct ExperimentRecord {
  double angle_deg = 0.0;
  double wavelength_nm = 0.0;
  Orientation mode = Orientation::Parallel;
  std::string source;
};

/// Parses experimental data with header angle_deg,wavelength_nm,mode,source.
/// Perpendicular-mode records are accepted; the model does not predict them,
/// so they are flagged as not comparable downstream.
inline std::vector<ExperimentRecord> ingest_experiment(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError("experiment csv: empty input");
  const auto header = detail::split_csv_line(line);
  if (header != std::vector<std::string>{"angle_deg", "wavelength_nm", "mode",
                                         "source"})
    throw ValidationError(
        "experiment csv: header must be angle_deg,wavelength_nm,mode,source");
  std::vector<ExperimentRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != 4)
      throw ValidationError("experiment csv line " + std::to_string(line_no) +
                            ": expected 4 cells");
    ExperimentRecord rec;
    try {
      rec.angle_deg = std::stod(cells[0]);
      rec.wavelength_nm = std::stod(cells[1]);
    } catch (const std::exception&) {
      throw ValidationError("experiment csv line " + std::to_string(line_no) +
                            ": malformed number");
    }
    if (!(rec.wavelength_nm > 0.0))
      throw ValidationError("experiment csv line " + std::to_string(line_no) +
                            ": wavelength_nm must be > 0");
    if (cells[2] == "parallel")
      rec.mode = Orientation::Parallel;
    else if (cells[2] == "perpendicular")
      rec.mode = Orientation::Perpendicular;
    else
      throw ValidationError("experiment csv line " + std::to_string(line_no) +
                            ": mode must be parallel or perpendicular");
    rec.source = cells[3];
    records.push_back(rec);
  }
  return records;
}

inline std::vector<ExperimentRecord> ingest_experiment_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return ingest_experiment(in);
}

struct ResidualRow {
  ExperimentRecord record;
  std::optional<double> lambda_model_nm;
  std::optional<double> residual_nm;  // lambda_model - lambda_data
  std::string note;                   // empty when comparable
};

/// Interpolates the swept model wavelength at each record's angle and reports
/// lambda_model - lambda_data. Perpendicular records and angles without an
/// unstable model prediction are flagged instead.
inline std::vector<ResidualRow> residual_report(
    const std::vector<ExperimentRecord>& records,
    std::vector<SweepRow> sweep) {
  std::sort(sweep.begin(), sweep.end(), [](const auto& a, const auto& b) {
    return a.theta_deg < b.theta_deg;
  });
  std::vector<std::pair<double, double>> model;  // (theta_deg, lambda_nm)
  for (const SweepRow& r : sweep)
    if (!r.stable && r.lambda_full_nm) model.emplace_back(r.theta_deg, *r.lambda_full_nm);

  std::vector<ResidualRow> out;
  out.reserve(records.size());
  for (const ExperimentRecord& rec : records) {
    ResidualRow row;
    row.record = rec;
    if (rec.mode == Orientation::Perpendicular) {
      row.note = "not-comparable: perpendicular mode outside model scope";
      out.push_back(row);
      continue;
    }
    auto hi = std::lower_bound(
        model.begin(), model.end(), rec.angle_deg,
        [](const auto& p, double a) { return p.first < a; });
    if (hi == model.begin() || hi == model.end()) {
      if (hi != model.end() && hi->first == rec.angle_deg) {
        row.lambda_model_nm = hi->second;
      } else {
        row.note = "no-model-prediction: angle outside unstable sweep range";
        out.push_back(row);
        continue;
      }
    } else {
      const auto lo = hi - 1;
      const double t = (rec.angle_deg - lo->first) / (hi->first - lo->first);
      row.lambda_model_nm = lo->second + t * (hi->second - lo->second);
    }
    row.residual_nm = *row.lambda_model_nm - rec.wavelength_nm;
    out.push_back(row);
  }
  return out;
}

inline std::string residual_csv(const std::vector<ResidualRow>& rows) {
  std::ostringstream out;
  out << "angle_deg,wavelength_nm,mode,source,lambda_model_nm,residual_nm,"
         "note\n";
  for (const ResidualRow& r : rows) {
    out << format_number(r.record.angle_deg) << ','
        << format_number(r.record.wavelength_nm) << ','
        << to_string(r.record.mode) << ',' << r.record.source << ','
        << (r.lambda_model_nm ? format_number(*r.lambda_model_nm) : "") << ','
        << (r.residual_nm ? format_number(*r.residual_nm) : "") << ','
        << r.note << "\n";
  }
  return out.str();
}

}  // namespace apflow
