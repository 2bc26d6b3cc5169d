#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "predswarm/io.hpp"
#include "predswarm/metrics.hpp"
#include "predswarm/montecarlo.hpp"
#include "predswarm/school.hpp"
#include "predswarm/survival.hpp"

namespace py = pybind11;
using namespace predswarm;

namespace {

py::array_t<double> to_array(const Coords& c) {
  py::array_t<double> out({static_cast<py::ssize_t>(c.rows()), static_cast<py::ssize_t>(c.dims())});
  std::copy(c.values().begin(), c.values().end(), out.mutable_data());
  return out;
}

Coords from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw py::value_error("expected an (N, d) array");
  Coords c(static_cast<std::size_t>(a.shape(0)), static_cast<int>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), c.values().begin());
  return c;
}

py::array_t<bool> alive_array(const SwarmState& s) {
  py::array_t<bool> out(static_cast<py::ssize_t>(s.alive.size()));
  for (std::size_t i = 0; i < s.alive.size(); ++i) out.mutable_data()[i] = s.alive[i] != 0;
  return out;
}

template <class T>
py::array_t<T> vec_array(const std::vector<T>& v) {
  return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict metrics_dict(const std::vector<MetricFrame>& m) {
  std::vector<long> step;
  std::vector<double> diam, vstd;
  std::vector<int> groups, surv;
  for (const auto& f : m) {
    step.push_back(f.step);
    diam.push_back(f.diameter);
    vstd.push_back(f.velocity_std);
    groups.push_back(f.n_groups);
    surv.push_back(f.n_survived);
  }
  py::dict d;
  d["step"] = vec_array(step);
  d["diameter"] = vec_array(diam);
  d["velocity_std"] = vec_array(vstd);
  d["n_groups"] = vec_array(groups);
  d["n_survived"] = vec_array(surv);
  return d;
}

py::dict summary_dict(const TrialSummary& s) {
  py::dict d;
  d["index"] = s.index;
  d["seed"] = s.seed;
  d["p_eaten"] = s.p_eaten;
  d["t_alive"] = s.t_alive;
  d["n_eaten"] = s.n_eaten;
  d["label"] = std::string(to_string(s.label));
  return d;
}

py::dict failure_dict(const TrialFailure& f) {
  py::dict d;
  d["index"] = f.index;
  d["seed"] = f.seed;
  d["step"] = f.step;
  d["message"] = f.message;
  return d;
}

SimParams preset(const std::string& name) {
  if (name == "sweep-default") return sweep_default_params();
  return pattern_preset(parse_pattern(name)).params;
}

}  // namespace

PYBIND11_MODULE(_predswarm, m) {
  m.doc() = "Stochastic predator-prey schooling simulator";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);

  py::enum_<Strategy>(m, "Strategy")
      .value("CENTER", Strategy::CenterAttack)
      .value("NEAREST", Strategy::NearestAttack);

  py::class_<SimParams>(m, "SimParams")
      .def(py::init<>())
      .def_readwrite("n_prey", &SimParams::n_prey)
      .def_readwrite("dims", &SimParams::dims)
      .def_readwrite("alpha", &SimParams::alpha)
      .def_readwrite("beta", &SimParams::beta)
      .def_readwrite("p_exp", &SimParams::p_exp)
      .def_readwrite("q_exp", &SimParams::q_exp)
      .def_readwrite("r_crit", &SimParams::r_crit)
      .def_readwrite("k_friction", &SimParams::k_friction)
      .def_readwrite("delta", &SimParams::delta)
      .def_readwrite("r1_flee", &SimParams::r1_flee)
      .def_readwrite("theta1", &SimParams::theta1)
      .def_readwrite("r2_hunt", &SimParams::r2_hunt)
      .def_readwrite("theta2", &SimParams::theta2)
      .def_readwrite("gamma1", &SimParams::gamma1)
      .def_readwrite("gamma2", &SimParams::gamma2)
      .def_readwrite("strategy", &SimParams::strategy)
      .def_readwrite("m_catch", &SimParams::m_catch)
      .def_readwrite("sigma_prey", &SimParams::sigma_prey)
      .def_readwrite("sigma_pred", &SimParams::sigma_pred)
      .def_readwrite("dt", &SimParams::dt)
      .def_readwrite("t_max", &SimParams::t_max)
      .def_readwrite("t_max_school", &SimParams::t_max_school)
      .def_readwrite("v_max", &SimParams::v_max)
      .def_readwrite("cap_prey_velocity", &SimParams::cap_prey_velocity)
      .def_readwrite("eps_dist", &SimParams::eps_dist)
      .def_readwrite("half_width", &SimParams::half_width)
      .def_readwrite("spawn_dist", &SimParams::spawn_dist)
      .def_readwrite("link_dist", &SimParams::link_dist)
      .def_readwrite("scatter_ratio", &SimParams::scatter_ratio)
      .def_readwrite("reunion_ratio", &SimParams::reunion_ratio)
      .def_readwrite("maintain_tol", &SimParams::maintain_tol)
      .def("resolved_half_width", &SimParams::resolved_half_width)
      .def("resolved_spawn_dist", &SimParams::resolved_spawn_dist)
      .def("resolved_link_dist", &SimParams::resolved_link_dist)
      .def("copy", [](const SimParams& p) { return p; })
      .def(py::self == py::self)
      .def("__repr__", [](const SimParams& p) { return "SimParams(\n" + to_config_text(p) + ")"; });

  py::class_<SwarmState>(m, "Swarm")
      .def(py::init([](const py::array_t<double>& positions, const py::array_t<double>& velocities) {
             SwarmState s;
             s.positions = from_array(positions);
             s.velocities = from_array(velocities);
             if (s.positions.rows() != s.velocities.rows() || s.positions.dims() != s.velocities.dims())
               throw py::value_error("positions and velocities differ in shape");
             s.alive.assign(s.positions.rows(), 1);
             return s;
           }),
           py::arg("positions"), py::arg("velocities"))
      .def_property_readonly("positions", [](const SwarmState& s) { return to_array(s.positions); })
      .def_property_readonly("velocities", [](const SwarmState& s) { return to_array(s.velocities); })
      .def_property_readonly("alive", alive_array)
      .def_property_readonly("n_alive", &SwarmState::n_alive)
      .def("__len__", &SwarmState::size);

  m.def("validate", &validate_params, py::arg("params"),
        "Return params unchanged, or raise ValidationError naming the first violated constraint.");
  m.def("preset", &preset, py::arg("name"), "Parameters of pattern 'I'..'IV' or 'sweep-default'.");
  m.def("parse_config", [](const std::string& text) { return parse_config(text).params; }, py::arg("text"));
  m.def("load_config", [](const std::filesystem::path& p) { return load_config(p); }, py::arg("path"));
  m.def("to_config_text", &to_config_text, py::arg("params"));
  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("index"));

  m.def(
      "generate_school",
      [](const SimParams& params, std::uint64_t seed) {
        const SimParams p = validate_params(params);
        py::gil_scoped_release release;
        NoiseSource src(seed);
        return generate_school(p, src);
      },
      py::arg("params"), py::arg("seed"));

  m.def("school_diameter", &school_diameter, py::arg("swarm"));
  m.def("velocity_std", &velocity_std, py::arg("swarm"));
  m.def("count_subgroups", &count_subgroups, py::arg("swarm"), py::arg("link_dist"));

  m.def(
      "run_trial",
      [](const SimParams& params, std::uint64_t seed, long record_every, bool keep_frames) {
        const SimParams p = validate_params(params);
        TrialRecord rec;
        {
          py::gil_scoped_release release;
          rec = run_trial(p, seed, {record_every, keep_frames});
        }
        py::dict d;
        d["n_initial"] = rec.n_initial;
        d["t_max"] = rec.t_max;
        d["steps_run"] = rec.steps_run;
        d["n_eaten"] = rec.n_eaten();
        d["n_survived"] = vec_array(rec.n_survived);
        d["p_eaten"] = vec_array(p_eaten_series(rec));
        d["t_alive"] = average_living_time(rec);
        d["eaten_times"] = rec.eaten_times;
        d["metrics"] = metrics_dict(rec.metrics);
        std::vector<double> diam, vstd;
        std::vector<int> groups;
        for (const auto& f : rec.metrics) {
          diam.push_back(f.diameter);
          vstd.push_back(f.velocity_std);
          groups.push_back(f.n_groups);
        }
        d["label"] = rec.metrics.empty() ? std::string(to_string(PatternLabel::Unclassified))
                                         : std::string(to_string(classify_pattern(diam, vstd, groups, p)));
        py::list frames;
        for (const Frame& f : rec.frames) {
          py::dict fd;
          fd["step"] = f.step;
          fd["swarm"] = f.swarm;
          fd["predator_position"] = vec_array(f.predator.position);
          fd["predator_velocity"] = vec_array(f.predator.velocity);
          frames.append(fd);
        }
        d["frames"] = frames;
        return d;
      },
      py::arg("params"), py::arg("seed"), py::arg("record_every") = kSummaryRecordEvery,
      py::arg("keep_frames") = false,
      "One school generation plus predation run. Returns survivor series, metrics and the pattern label.");

  m.def(
      "run_trials",
      [](const SimParams& params, std::size_t n_trials, std::uint64_t seed, unsigned jobs) {
        const SimParams p = validate_params(params);
        TrialBatch batch;
        {
          py::gil_scoped_release release;
          batch = run_trials(p, n_trials, seed, jobs);
        }
        py::list trials, failures;
        for (const auto& s : batch.trials) trials.append(summary_dict(s));
        for (const auto& f : batch.failures) failures.append(failure_dict(f));
        py::dict d;
        d["trials"] = trials;
        d["failures"] = failures;
        return d;
      },
      py::arg("params"), py::arg("n_trials"), py::arg("seed"), py::arg("jobs") = 1);

  m.def(
      "sweep",
      [](const SimParams& params, std::vector<int> n_values, std::vector<Strategy> strategies,
         std::size_t trials, std::uint64_t seed, unsigned jobs) {
        SweepTable table;
        {
          py::gil_scoped_release release;
          table = sweep_school_size(params, n_values, strategies, trials, seed, jobs);
        }
        py::list rows;
        for (const SweepRow& r : table.rows) {
          py::dict d;
          d["n"] = r.n;
          d["strategy"] = r.strategy;
          d["trials"] = r.trials;
          d["failures"] = r.failures;
          d["p_eaten_mean"] = r.p_eaten_mean;
          d["p_eaten_std"] = r.p_eaten_std;
          d["p_eaten_q25"] = r.p_eaten_q25;
          d["p_eaten_q50"] = r.p_eaten_q50;
          d["p_eaten_q75"] = r.p_eaten_q75;
          d["t_alive_mean"] = r.t_alive_mean;
          d["t_alive_std"] = r.t_alive_std;
          d["n_eaten_mean"] = r.n_eaten_mean;
          rows.append(d);
        }
        return rows;
      },
      py::arg("params"), py::arg("n_values"), py::arg("strategies") = std::vector<Strategy>{Strategy::CenterAttack},
      py::arg("trials") = 200, py::arg("seed") = 0, py::arg("jobs") = 1,
      "Monte Carlo P_eaten and living time per (N, strategy); both strategies share each N's schools.");
}
