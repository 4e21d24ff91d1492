#include "lrcert/io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "lrcert/errors.hpp"
#include "lrcert/lyapunov.hpp"
#include "lrcert/text.hpp"

namespace lrcert {

namespace {

void write_provenance(std::ostream& out, const std::string& provenance) {
  if (!provenance.empty()) out << "# " << provenance << '\n';
}

void write_row(std::ostream& out, const Trajectory& traj, std::size_t t) {
  for (double v : traj.states[t]) out << ',' << format_double(v);
  out << ',';
  if (t < traj.effective_length()) out << traj.actions[t];
  out << ',' << format_double(traj.costs[t]) << '\n';
}

}  // namespace

void write_rollout_csv(std::ostream& out, const Trajectory& traj, const EnvSpec& env, const std::string& provenance) {
  write_provenance(out, provenance);
  out << 't';
  for (const auto& label : env.state_labels()) out << ',' << label;
  out << ",action,cost\n";
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    out << t;
    write_row(out, traj, t);
  }
}

void write_trajectory_store(std::ostream& out, std::span<const Trajectory> trajectories, const EnvSpec& env,
                            const std::string& provenance) {
  write_provenance(out, provenance);
  out << "trajectory,t,horizon";
  for (const auto& label : env.state_labels()) out << ',' << label;
  out << ",action,cost\n";
  for (std::size_t m = 0; m < trajectories.size(); ++m) {
    const Trajectory& traj = trajectories[m];
    for (std::size_t t = 0; t < traj.states.size(); ++t) {
      out << m << ',' << t << ',' << traj.horizon;
      write_row(out, traj, t);
    }
  }
}

std::vector<Trajectory> read_trajectory_store(std::istream& in, double c_bar) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  std::vector<Trajectory> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line, ',');
    if (columns == 0) {
      if (cells.size() < 6 || trim(cells[0]) != "trajectory") throw LoadError("trajectory store lacks its header");
      columns = cells.size();
      continue;
    }
    if (cells.size() != columns) {
      throw LoadError("trajectory store line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(columns));
    }
    const auto m = static_cast<std::size_t>(parse_int(cells[0], "trajectory index"));
    const auto t = static_cast<std::size_t>(parse_int(cells[1], "time index"));
    const auto horizon = static_cast<std::size_t>(parse_int(cells[2], "horizon"));
    if (m == out.size()) {
      out.emplace_back();
      out.back().horizon = horizon;
    }
    if (m + 1 != out.size()) throw LoadError("trajectory store rows must be grouped by trajectory in order");
    Trajectory& traj = out.back();
    if (t != traj.states.size()) throw LoadError("trajectory store line " + std::to_string(line_no) + " is out of order");
    State s;
    for (std::size_t i = 3; i + 2 < columns; ++i) s.push_back(parse_double(cells[i], "state component"));
    traj.states.push_back(std::move(s));
    const auto action = trim(cells[columns - 2]);
    if (!action.empty()) traj.actions.push_back(static_cast<std::size_t>(parse_int(action, "action")));
  }
  for (Trajectory& traj : out) {
    traj.costs.clear();
    for (const State& s : traj.states) traj.costs.push_back(clipped_cost(s, c_bar));
    try {
      validate(traj);
    } catch (const ProtocolError& e) {
      throw LoadError(std::string("trajectory store: ") + e.what());
    }
  }
  return out;
}

std::vector<Trajectory> load_trajectory_store(const std::string& path, double c_bar) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open trajectory store " + path);
  return read_trajectory_store(in, c_bar);
}

void write_train_log(std::ostream& out, std::span<const IterationLog> log, const std::string& provenance) {
  write_provenance(out, provenance);
  out << "iteration,empirical_delta_L,mean_episode_cost,mean_episode_length,alpha1_hat,alpha2_hat\n";
  for (const IterationLog& e : log) {
    out << e.iteration << ',' << format_double(e.empirical_delta_L) << ',' << format_double(e.mean_episode_cost)
        << ',' << format_double(e.mean_episode_length) << ',' << format_double(e.alpha1_hat) << ','
        << format_double(e.alpha2_hat) << '\n';
  }
}

void write_timing_log(std::ostream& out, std::span<const IterationLog> log) {
  out << "iteration,wall_time_s\n";
  for (const IterationLog& e : log) out << e.iteration << ',' << format_double(e.wall_time_s) << '\n';
}

void write_surface_csv(std::ostream& out, std::span<const SurfacePoint> grid, const std::string& provenance) {
  write_provenance(out, provenance);
  out << "M,T,probability\n";
  for (const SurfacePoint& p : grid) out << p.M << ',' << p.T << ',' << format_double(p.probability) << '\n';
}

std::string report_to_json(const CertificateReport& r, const std::string& provenance) {
  nlohmann::ordered_json doc;
  doc["verdict"] = to_string(r.verdict);
  if (r.verdict == Verdict::not_certified) doc["reason"] = r.reason;
  doc["probability_lower_bound"] = r.probability_lower_bound;
  doc["log_one_minus_p"] = r.log_one_minus_p;
  doc["M"] = r.input.M;
  doc["T"] = r.input.T;
  doc["epsilon"] = r.input.epsilon;
  doc["alpha2"] = r.input.alpha2;
  doc["alpha2_source"] = r.sandwich ? "empirical sandwich estimate over visited states" : "supplied";
  doc["alpha3"] = r.input.alpha3;
  doc["gamma"] = r.input.gamma;
  doc["c_bar"] = r.input.c_bar;
  doc["empirical_delta_L"] = r.input.empirical_delta_L;
  doc["b1"] = r.b1;
  doc["b2"] = r.b2;
  doc["margin"] = r.margin;
  doc["margin_convention"] =
      "epsilon - 2 T^(gamma-1) b1; the sample-size relation is inverted from the probability bound with this same "
      "margin (an alternative statement without the factor 2 exists)";
  doc["min_T"] = r.min_T;
  doc["decrease_condition_satisfied"] = r.decrease_condition_satisfied;
  doc["min_T_satisfied"] = r.min_T_satisfied;
  doc["margin_positive"] = r.margin_positive;
  if (r.sandwich) {
    doc["alpha1_hat"] = r.sandwich->alpha1_hat;
    doc["sandwich_sample_count"] = r.sandwich->sample_count;
  }
  if (!provenance.empty()) doc["provenance"] = provenance;
  return doc.dump(2) + "\n";
}

}  // namespace lrcert
