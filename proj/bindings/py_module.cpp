#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "windopt/awdo.hpp"
#include "windopt/cmaes.hpp"
#include "windopt/gd.hpp"
#include "windopt/mnist.hpp"
#include "windopt/nn.hpp"
#include "windopt/objectives.hpp"

namespace py = pybind11;
using namespace windopt;

namespace {

AwdoConfig make_awdo_config(int population_n, long max_iterations,
                            std::uint64_t seed, double init_lo, double init_hi,
                            std::optional<double> pressure_target,
                            std::array<double, 4> cmaes_mean0,
                            double cmaes_sigma0) {
  AwdoConfig config;
  config.population_n = population_n;
  config.max_iterations = max_iterations;
  config.seed = seed;
  config.init_lo = init_lo;
  config.init_hi = init_hi;
  config.pressure_target = pressure_target;
  config.cmaes_mean0 = cmaes_mean0;
  config.cmaes_sigma0 = cmaes_sigma0;
  return config;
}

py::dict awdo_result_to_dict(const AwdoResult& result) {
  py::list history;
  for (const auto& row : result.history)
    history.append(py::make_tuple(row.iteration, row.evaluations,
                                  row.best_pressure, row.mean_pressure));
  py::dict out;
  out["best_position"] = result.best_position;
  out["best_pressure"] = result.best_pressure;
  out["history"] = history;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wind driven optimization core: WDO/AWDO, CMA-ES, and the "
            "derivative-free neural network training experiments";

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform01", &Rng::uniform01)
      .def("uniform", &Rng::uniform, py::arg("lo"), py::arg("hi"))
      .def("normal", &Rng::normal)
      .def("uniform_int", &Rng::uniform_int, py::arg("n"))
      .def("spawn", &Rng::spawn);

  m.def("sphere", &sphere, py::arg("x"));
  m.def("rosenbrock", &rosenbrock, py::arg("x"));
  m.def("rastrigin", &rastrigin, py::arg("x"));
  m.def("objective_names", [] { return objective_names(); });

  py::class_<CmaesState>(m, "CmaesState")
      .def_readonly("mean", &CmaesState::mean)
      .def_readonly("sigma", &CmaesState::sigma)
      .def_readonly("C", &CmaesState::C)
      .def_readonly("generation", &CmaesState::generation)
      .def_readonly("weights", &CmaesState::weights)
      .def_readonly("mu_eff", &CmaesState::mu_eff);

  py::class_<Cmaes>(m, "Cmaes")
      .def(py::init([](int n, int lam, const Vector& mean0, double sigma0) {
             return Cmaes(CmaesConfig{n, lam, mean0, sigma0});
           }),
           py::arg("n"), py::arg("lam"), py::arg("mean0"), py::arg("sigma0"))
      .def("ask", &Cmaes::ask, py::arg("rng"))
      .def("tell", &Cmaes::tell, py::arg("candidates"), py::arg("fitnesses"))
      .def_property_readonly("state", &Cmaes::state,
                             py::return_value_policy::reference_internal)
      .def_property_readonly("lam", &Cmaes::lambda);

  m.def("sym_eigen", &sym_eigen, py::arg("matrix"));

  m.def(
      "awdo_minimize",
      [](const std::string& objective, int dimension, int population_n,
         long max_iterations, std::uint64_t seed, double init_lo,
         double init_hi, std::optional<double> pressure_target,
         std::array<double, 4> cmaes_mean0, double cmaes_sigma0, int threads) {
        const BenchObjective bench = make_objective(objective, dimension);
        const AwdoConfig config =
            make_awdo_config(population_n, max_iterations, seed, init_lo,
                             init_hi, pressure_target, cmaes_mean0,
                             cmaes_sigma0);
        AwdoResult result;
        {
          py::gil_scoped_release release;
          result = awdo_run(bench.pressure(), config, threads);
        }
        return awdo_result_to_dict(result);
      },
      py::arg("objective"), py::arg("dimension"), py::arg("population_n") = 25,
      py::arg("max_iterations") = 100, py::arg("seed") = 0,
      py::arg("init_lo") = -1.0, py::arg("init_hi") = 1.0,
      py::arg("pressure_target") = py::none(),
      py::arg("cmaes_mean0") = std::array<double, 4>{0.5, 0.5, 0.5, 0.5},
      py::arg("cmaes_sigma0") = 0.3, py::arg("threads") = 1,
      "Minimize a registered objective with adaptive WDO");

  m.def(
      "awdo_minimize_fn",
      [](const std::function<double(const Vector&)>& fn, int dimension,
         int population_n, long max_iterations, std::uint64_t seed,
         double init_lo, double init_hi,
         std::optional<double> pressure_target,
         std::array<double, 4> cmaes_mean0, double cmaes_sigma0) {
        const PressureFunction pressure{dimension, fn};
        const AwdoConfig config =
            make_awdo_config(population_n, max_iterations, seed, init_lo,
                             init_hi, pressure_target, cmaes_mean0,
                             cmaes_sigma0);
        // Python callables hold the GIL; keep evaluation single-threaded.
        return awdo_result_to_dict(awdo_run(pressure, config, 1));
      },
      py::arg("fn"), py::arg("dimension"), py::arg("population_n") = 25,
      py::arg("max_iterations") = 100, py::arg("seed") = 0,
      py::arg("init_lo") = -1.0, py::arg("init_hi") = 1.0,
      py::arg("pressure_target") = py::none(),
      py::arg("cmaes_mean0") = std::array<double, 4>{0.5, 0.5, 0.5, 0.5},
      py::arg("cmaes_sigma0") = 0.3,
      "Minimize an arbitrary Python callable with adaptive WDO");

  py::class_<NetworkShape>(m, "NetworkShape")
      .def(py::init<int, int, int>(), py::arg("input") = 400,
           py::arg("hidden") = 25, py::arg("output") = 10)
      .def_readwrite("input", &NetworkShape::input)
      .def_readwrite("hidden", &NetworkShape::hidden)
      .def_readwrite("output", &NetworkShape::output)
      .def("param_count", &NetworkShape::param_count);

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("X", &Dataset::X)
      .def_readonly("Y", &Dataset::Y)
      .def_readonly("labels", &Dataset::labels)
      .def("size", &Dataset::size);

  m.def("make_dataset", &make_dataset, py::arg("features"), py::arg("labels"),
        py::arg("num_classes"));
  m.def("synthetic_dataset",
        [](int m_examples, const NetworkShape& shape, double separability,
           std::uint64_t seed) {
          Rng rng(seed);
          return synthetic_dataset(m_examples, shape, separability, rng);
        },
        py::arg("m"), py::arg("shape"), py::arg("separability"),
        py::arg("seed"));
  m.def("load_mnist_dataset",
        [](const std::string& images_path, const std::string& labels_path,
           int subset_m) {
          return to_dataset(load_mnist(images_path, labels_path), subset_m);
        },
        py::arg("images_path"), py::arg("labels_path"), py::arg("subset_m"));

  m.def("init_params",
        [](const NetworkShape& shape, double lo, double hi,
           std::uint64_t seed) {
          Rng rng(seed);
          return flatten(init_params(shape, lo, hi, rng));
        },
        py::arg("shape"), py::arg("lo") = -0.12, py::arg("hi") = 0.12,
        py::arg("seed") = 0, "Uniform random flat parameter vector");
  m.def("nn_cost",
        [](const Vector& flat, const NetworkShape& shape, const Dataset& data,
           double lambda) { return cost(unflatten(flat, shape), data, lambda); },
        py::arg("params"), py::arg("shape"), py::arg("data"),
        py::arg("lambda_") = 0.01);
  m.def("nn_gradient",
        [](const Vector& flat, const NetworkShape& shape, const Dataset& data,
           double lambda) {
          return flatten(gradient(unflatten(flat, shape), data, lambda));
        },
        py::arg("params"), py::arg("shape"), py::arg("data"),
        py::arg("lambda_") = 0.01);
  m.def("nn_forward",
        [](const Vector& flat, const NetworkShape& shape, const Matrix& X) {
          const ForwardResult result = forward(unflatten(flat, shape), X);
          return py::make_tuple(result.hidden, result.output);
        },
        py::arg("params"), py::arg("shape"), py::arg("X"));
  m.def("nn_predict",
        [](const Vector& flat, const NetworkShape& shape, const Matrix& X) {
          return predict(unflatten(flat, shape), X);
        },
        py::arg("params"), py::arg("shape"), py::arg("X"));
  m.def("accuracy", &accuracy, py::arg("predicted"), py::arg("truth"));

  m.def(
      "gd_train",
      [](const Vector& flat, const NetworkShape& shape, const Dataset& data,
         long max_iterations, double initial_step, double armijo_beta,
         double armijo_c, double lambda) {
        GdConfig config;
        config.max_iterations = max_iterations;
        config.initial_step = initial_step;
        config.armijo_beta = armijo_beta;
        config.armijo_c = armijo_c;
        config.lambda = lambda;
        GdResult result;
        {
          py::gil_scoped_release release;
          result = gd_train(unflatten(flat, shape), data, config);
        }
        py::list history;
        for (const auto& row : result.history)
          history.append(py::make_tuple(row.iteration, row.cost,
                                        row.train_accuracy));
        return py::make_tuple(flatten(result.params), history);
      },
      py::arg("params"), py::arg("shape"), py::arg("data"),
      py::arg("max_iterations"), py::arg("initial_step") = 1.0,
      py::arg("armijo_beta") = 0.5, py::arg("armijo_c") = 1e-4,
      py::arg("lambda_") = 0.01,
      "Full-batch steepest descent with Armijo backtracking; returns "
      "(params, history)");

  m.attr("__version__") = "0.1.0";
}
