#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "paw1d/assemble.hpp"
#include "paw1d/eig.hpp"

namespace paw1d {

// Process exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  ModelParams model;
  std::vector<Method> methods{Method::paw_trunc};
  double eta = 0.1;
  int N = 2;
  int d = 6;
  double epsilon = 0.0;  // 0: same as eta
  CutoffShape rho_shape = CutoffShape::bump;
  CutoffShape chi_shape = CutoffShape::bump;
  int nodes = 64;
  int M = 512;
  std::string sweep = "eta";  // eta or M
  std::vector<double> eta_grid;
  std::vector<int> M_grid;
  std::vector<int> N_grid;
  double origin = 0.0;
  int positive = 4;
  std::string output;
  std::string plot;
  std::string dump;
  std::string dump_format = "text";
  std::string vector_output;
  bool timing = false;
  EigOptions eig;

  PawSetup setup() const;
  // Throws ValidationError naming the first violated constraint.
  void validate() const;
};

// Entry point of the tool, parameterized on its streams for testing.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace paw1d
