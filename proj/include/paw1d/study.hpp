#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "paw1d/assemble.hpp"
#include "paw1d/eig.hpp"

namespace paw1d {

struct SweepRecord {
  Method method = Method::direct;
  ModelParams params;
  double eta = 0.0;
  int N = 0;
  int d = 0;
  int M = 0;
  double lambda = 0.0;
  double E0 = 0.0;
  double error = 0.0;      // lambda - E0
  double abs_error = 0.0;
  double seconds = 0.0;    // 0 unless timing is enabled
  double residual = 0.0;   // eigensolver residual, not written to CSV
  std::string error_code;  // empty on success

  bool ok() const { return error_code.empty(); }
};

struct SweepOptions {
  bool timing = false;
  int threads = 0;  // 0: take PAW1D_THREADS from the environment, default 1
  double origin = 0.0;
  EigOptions eig;
};

// Worker count from PAW1D_THREADS (>= 1).
int threads_from_environment();

const std::vector<double>& default_eta_grid();

// One solve. Library errors are caught and stored in the record.
SweepRecord solve_point(Method method, const ModelParams& params, const PawSetup& setup, int M,
                        double E0, const SweepOptions& options = {});

// `setup` supplies N, d, shapes and quadrature; eta and epsilon follow the grid.
std::vector<SweepRecord> eta_sweep(Method method, const ModelParams& params,
                                   const PawSetup& setup, int M, const std::vector<double>& etas,
                                   const SweepOptions& options = {});

std::vector<SweepRecord> m_sweep(Method method, const ModelParams& params, const PawSetup& setup,
                                 const std::vector<int>& Ms, const SweepOptions& options = {});

enum class Abscissa { eta, M };

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> window;  // abscissae used
};

// Least squares on (log x, log |error|) over records whose abscissa lies in
// `window` (all records when empty). Needs at least 3 usable points; throws
// DegenerateFit when an error is below 1e-13.
SlopeFit fit_slope(const std::vector<SweepRecord>& records, Abscissa abscissa,
                   const std::vector<double>& window = {});
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& abs_error);

// Abscissae of the default fit window: drops the largest eta (or smallest
// M), failed rows, and rows whose error is within 10x of the solver residual.
std::vector<double> default_fit_window(const std::vector<SweepRecord>& records, Abscissa abscissa);

extern const char* const kCsvHeader;
void write_csv(std::ostream& out, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_csv(std::istream& in);

// One curve of a plot; N = 0 matches every N.
struct PlotSeries {
  Method method = Method::direct;
  int N = 0;
};

// Log-log gnuplot script plotting |error| of each series found in `csv_path`.
void write_gnuplot(std::ostream& out, const std::string& csv_path, Abscissa abscissa,
                   const std::vector<PlotSeries>& series, const std::string& title);

}  // namespace paw1d
