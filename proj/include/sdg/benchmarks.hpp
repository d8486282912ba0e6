#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdg/problem.hpp"

namespace sdg {

struct Benchmark {
  std::string name;
  std::string description;
  ProblemSpec problem;
  std::optional<ExactSolution> exact;
  double initial_h = 1.0;  // spacing of the initial Cartesian grid
};

/// Single vertical fracture on (0,2)x(0,1) with a tanh transition layer of width alpha.
Benchmark case1(double alpha);
/// Same geometry, fracture with a low-permeability middle part; left/right Dirichlet.
Benchmark case2();
/// L-shaped domain with one fracture polyline whose middle part is a barrier.
Benchmark lshape();
/// L-shaped domain with four disjoint fractures.
Benchmark multifrac();
/// Globally linear pressure p = y, reproduced exactly for k >= 1.
Benchmark linear_patch();

/// Names accepted by make_benchmark.
std::vector<std::string> benchmark_names();
/// Throws sdg::Error(InvalidArgument) for an unknown name.
Benchmark make_benchmark(const std::string& name);

/// Largest violation of eta{u.n} = [p] and alpha[u.n] = {p} - p_G over `samples`
/// points per fracture.
double verify_interface(const ExactSolution& exact, const ProblemSpec& problem, int samples = 100);

}  // namespace sdg
