#include "decstab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace decstab {

using nlohmann::json;

namespace {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open " + path.string() + " for writing");
  }
  out << text;
  if (!out) {
    throw ParseError("failed writing " + path.string());
  }
}

Vector vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) {
    throw ParseError("field '" + field + "': expected an array of numbers");
  }
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ParseError("field '" + field + "' entry " + std::to_string(i) +
                       ": expected a number");
    }
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ParseError("field '" + field + "': expected a nested array");
  }
  const size_t rows = j.size();
  const size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ParseError("field '" + field + "' row " + std::to_string(r) +
                       ": ragged or non-array row");
    }
    for (size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) {
        throw ParseError("field '" + field + "' entry (" + std::to_string(r) +
                         "," + std::to_string(c) + "): expected a number");
      }
      m(static_cast<Index>(r), static_cast<Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

Plant parse_plant(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  try {
    if (!doc.is_object()) throw ParseError("top level must be an object");
    for (const char* key : {"n", "m", "A", "B", "C"}) {
      if (!doc.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
      }
    }
    if (!doc["n"].is_number_integer() || !doc["m"].is_number_integer()) {
      throw ParseError("fields 'n' and 'm' must be integers");
    }
    const Index n = doc["n"].get<Index>();
    const Index m = doc["m"].get<Index>();
    const Matrix a = matrix_from_json(doc["A"], "A");
    const Matrix b = matrix_from_json(doc["B"], "B");
    const Matrix c = matrix_from_json(doc["C"], "C");
    if (a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != m ||
        c.rows() != m || c.cols() != n) {
      throw ParseError("matrix shapes disagree with declared n=" +
                       std::to_string(n) + ", m=" + std::to_string(m));
    }
    const std::string name =
        doc.contains("name") && doc["name"].is_string()
            ? doc["name"].get<std::string>()
            : std::filesystem::path(origin).stem().string();
    return validate_plant(a, b, c, name);
  } catch (const ParseError& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

Plant load_plant(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open plant file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_plant(buf.str(), path.string());
}

std::string plant_to_text(const Plant& p) {
  json doc;
  doc["name"] = p.name;
  doc["n"] = p.n;
  doc["m"] = p.m;
  doc["A"] = matrix_to_json(p.A);
  doc["B"] = matrix_to_json(p.B);
  doc["C"] = matrix_to_json(p.C);
  return doc.dump(2) + "\n";
}

void save_plant(const Plant& p, const std::filesystem::path& path) {
  write_text_file(path, plant_to_text(p));
}

json schedule_to_json(const GainSchedule& s) {
  json j;
  j["t_bar"] = s.t_bar();
  switch (s.kind()) {
    case GainSchedule::Kind::kConstant:
      j["kind"] = "constant";
      j["levels"] = vector_to_json(s.levels());
      break;
    case GainSchedule::Kind::kRamp:
      j["kind"] = "ramp";
      j["start"] = vector_to_json(s.start());
      j["levels"] = vector_to_json(s.levels());
      break;
    case GainSchedule::Kind::kCustom: {
      j["kind"] = "custom";
      j["times"] = s.knot_times();
      json values = json::array();
      for (const Vector& v : s.knot_values()) {
        values.push_back(vector_to_json(v));
      }
      j["values"] = std::move(values);
      break;
    }
    case GainSchedule::Kind::kSinusoid:
      j["kind"] = "sinusoid";
      j["offset"] = s.offset();
      j["amplitude"] = s.amplitude();
      j["omega"] = s.omega();
      break;
  }
  return j;
}

GainSchedule schedule_from_json(const json& j) {
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw ParseError("schedule: missing field 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  const double t_bar = j.value("t_bar", 0.0);
  if (kind == "constant") {
    return GainSchedule::constant(vector_from_json(j.at("levels"), "levels"),
                                  t_bar);
  }
  if (kind == "ramp") {
    return GainSchedule::ramp(vector_from_json(j.at("start"), "start"),
                              vector_from_json(j.at("levels"), "levels"),
                              t_bar);
  }
  if (kind == "custom") {
    std::vector<double> times = j.at("times").get<std::vector<double>>();
    std::vector<Vector> values;
    for (const auto& row : j.at("values")) {
      values.push_back(vector_from_json(row, "values"));
    }
    return GainSchedule::custom(std::move(times), std::move(values), t_bar);
  }
  if (kind == "sinusoid") {
    return GainSchedule::sinusoid(j.value("offset", 0.0),
                                  j.value("amplitude", 0.0),
                                  j.value("omega", 1.0));
  }
  throw ParseError("schedule: unknown kind '" + kind + "'");
}

ScheduleFile load_schedule(const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  try {
    ScheduleFile f;
    f.schedule = schedule_from_json(doc.at("schedule"));
    f.k_tilde = vector_from_json(doc.at("k_tilde"), "k_tilde");
    f.gamma = doc.value("gamma", 0.0);
    f.bound.M11 = doc.value("M11", 1.0);
    f.bound.beta11 = doc.value("beta11", 1.0);
    validate_schedule_floor(f.schedule, f.k_tilde);
    return f;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_schedule(const GainSynthesis& gs,
                   const std::filesystem::path& path) {
  json doc;
  doc["schedule"] = schedule_to_json(gs.schedule);
  doc["k_tilde"] = vector_to_json(gs.k_tilde);
  doc["k_bar"] = gs.k_bar;
  doc["gamma"] = gs.gamma;
  doc["M11"] = gs.bound.M11;
  doc["beta11"] = gs.bound.beta11;
  write_text_file(path, doc.dump(2) + "\n");
}

void write_trajectory_csv(const Trajectory& traj,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open " + path.string() + " for writing");
  }
  const Index n = traj.states.empty() ? 0 : traj.states.front().size();
  out << "time";
  for (Index j = 0; j < n; ++j) out << ",x" << (j + 1);
  out << ",norm1,norm2\n";

  char buf[32];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (Index i = 0; i < traj.samples(); ++i) {
    put(traj.times[i]);
    for (Index j = 0; j < n; ++j) {
      out << ',';
      put(traj.states[i](j));
    }
    out << ',';
    put(traj.norms_1[i]);
    out << ',';
    put(traj.norms_2[i]);
    out << '\n';
  }
  if (!out) {
    throw ParseError("failed writing " + path.string());
  }
}

json to_json(const SpectralReport& rep) {
  json eig = json::array();
  for (Index i = 0; i < rep.eigenvalues.size(); ++i) {
    eig.push_back({{"re", rep.eigenvalues(i).real()},
                   {"im", rep.eigenvalues(i).imag()}});
  }
  return json{{"eigenvalues", std::move(eig)},
              {"spectral_abscissa", rep.spectral_abscissa},
              {"is_hurwitz", rep.is_hurwitz}};
}

json to_json(const AnalysisReport& rep) {
  json j;
  j["plant"] = rep.plant.name;
  j["n"] = rep.plant.n;
  j["m"] = rep.plant.m;
  json cert;
  cert["cb_hurwitz_h"] = rep.cb_hurwitz_h;
  cert["verdict"] = rep.cb_certificate.verdict;
  if (rep.cb_certificate.scaling_d) {
    cert["scaling_d"] = vector_to_json(*rep.cb_certificate.scaling_d);
    cert["margin"] = rep.cb_certificate.margin;
  }
  if (!rep.cb_certificate.diagnostic.empty()) {
    cert["diagnostic"] = rep.cb_certificate.diagnostic;
  }
  cert["square_case"] = rep.dec.square_case;
  cert["minimum_phase"] = rep.phase.minimum_phase;
  cert["has_zeros"] = rep.phase.has_zeros;
  if (rep.phase.zero_spectrum) {
    cert["zero_spectrum"] = to_json(*rep.phase.zero_spectrum);
  }
  j["certificate"] = std::move(cert);
  j["hypotheses_met"] = rep.hypotheses_met;
  return j;
}

json to_json(const SynthesisReport& rep) {
  json j;
  j["gamma"] = rep.synthesis.gamma;
  j["M11"] = rep.synthesis.bound.M11;
  j["beta11"] = rep.synthesis.bound.beta11;
  j["k_tilde"] = vector_to_json(rep.synthesis.k_tilde);
  j["k_bar"] = rep.synthesis.k_bar;
  j["t_bar"] = rep.synthesis.t_bar;
  j["schedule"] = schedule_to_json(rep.synthesis.schedule);
  j["key_condition_at_levels"] = rep.key_condition_at_levels;
  j["scaling_d"] = vector_to_json(rep.scaled.d);
  return j;
}

json to_json(const SimulationReport& rep) {
  json j;
  j["samples"] = rep.x.samples();
  j["dt"] = rep.x.dt;
  if (!rep.x.times.empty()) {
    j["t_end"] = rep.x.times.back();
    j["final_norm_1"] = rep.x.norms_1.back();
    j["final_norm_2"] = rep.x.norms_2.back();
  }
  j["final_ratio"] = rep.final_ratio;
  j["zero_initial_state"] = rep.zero_initial_state;
  if (rep.fit) {
    j["decay_rate"] = rep.fit->rate;
    j["r_squared"] = rep.fit->r_squared;
    j["fit_window"] = {rep.fit->window_start, rep.fit->window_end};
  } else {
    j["decay_rate"] = nullptr;
    j["fit_status"] = rep.zero_initial_state
                          ? "skipped: zero initial state"
                          : "skipped: not enough usable samples";
  }
  j["mu_sup"] = rep.mu_sup;
  json checks;
  checks["coppel"] = rep.coppel.passed;
  if (rep.domination) {
    checks["domination"] = rep.domination->passed;
  }
  checks["margin"] = rep.margin_ok;
  checks["key_condition"] = rep.key_condition_ok;
  if (rep.fit) {
    checks["decay"] = rep.fit->rate < 0.0;
  }
  j["checks"] = std::move(checks);
  j["all_passed"] = rep.all_passed();
  return j;
}

}  // namespace decstab
