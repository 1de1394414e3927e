#include "paw1d/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "paw1d/errors.hpp"

namespace paw1d {

const char* const kCsvHeader = "method,a,Z0,Za,eta,N,d,M,lambda,E0,error,abs_error,seconds,error_code";

int threads_from_environment() {
  const char* env = std::getenv("PAW1D_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 256));
}

const std::vector<double>& default_eta_grid() {
  static const std::vector<double> grid{0.2, 0.141, 0.1, 0.0707, 0.05, 0.0354, 0.025};
  return grid;
}

SweepRecord solve_point(Method method, const ModelParams& params, const PawSetup& setup, int M,
                        double E0, const SweepOptions& options) {
  SweepRecord rec;
  rec.method = method;
  rec.params = params;
  rec.M = M;
  rec.E0 = E0;
  if (method != Method::direct) {
    rec.eta = setup.eta;
    rec.N = setup.N;
    rec.d = setup.d;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    const GalerkinSystem sys = assemble(method, params, setup, M, options.origin);
    EigOptions eo = options.eig;
    std::ostringstream ctx;
    ctx << "method=" << to_string(method) << " M=" << M;
    if (method != Method::direct) ctx << " eta=" << setup.eta;
    eo.context = ctx.str();
    const EigResult r = smallest_generalized(sys.A, sys.B, eo);
    rec.lambda = r.lambda;
    rec.residual = r.residual;
    rec.error = r.lambda - E0;
    rec.abs_error = std::abs(rec.error);
  } catch (const Error& e) {
    rec.error_code = std::string(to_string(e.code()));
    rec.lambda = rec.error = rec.abs_error = std::numeric_limits<double>::quiet_NaN();
  }
  if (options.timing)
    rec.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

namespace {

template <class Job>
std::vector<SweepRecord> run_all(std::size_t count, int threads, Job job) {
  std::vector<SweepRecord> out(count);
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = job(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) out[i] = job(i);
    });
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace

std::vector<SweepRecord> eta_sweep(Method method, const ModelParams& params,
                                   const PawSetup& setup, int M, const std::vector<double>& etas,
                                   const SweepOptions& options) {
  if (etas.empty()) throw ValidationError("eta grid is empty");
  std::vector<PawSetup> setups;
  for (double eta : etas) {
    PawSetup s = setup;
    s.eta = s.epsilon = eta;
    if (method != Method::direct) s.validate(params);
    setups.push_back(s);
  }
  if (M < 1) throw ValidationError("M must be >= 1");
  const double E0 = ground_state_energy(params);
  const int threads = options.threads > 0 ? options.threads : threads_from_environment();
  return run_all(etas.size(), threads, [&](std::size_t i) {
    return solve_point(method, params, setups[i], M, E0, options);
  });
}

std::vector<SweepRecord> m_sweep(Method method, const ModelParams& params, const PawSetup& setup,
                                 const std::vector<int>& Ms, const SweepOptions& options) {
  if (Ms.empty()) throw ValidationError("M grid is empty");
  for (int M : Ms)
    if (M < 1) throw ValidationError("M must be >= 1");
  if (method != Method::direct) setup.validate(params);
  params.validate();
  const double E0 = ground_state_energy(params);
  const int threads = options.threads > 0 ? options.threads : threads_from_environment();
  return run_all(Ms.size(), threads, [&](std::size_t i) {
    return solve_point(method, params, setup, Ms[i], E0, options);
  });
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& abs_error) {
  if (x.size() != abs_error.size()) throw ValidationError("slope fit: size mismatch");
  if (x.size() < 3) throw ValidationError("slope fit needs at least 3 points");
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0)) throw ValidationError("slope fit: abscissae must be positive");
    if (!(abs_error[i] >= 1e-13))
      throw Error(ErrorCode::degenerate_fit,
                  "error below 1e-13 at abscissa " + std::to_string(x[i]) +
                      "; the method is exact to machine precision here");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(abs_error[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("slope fit: abscissae are all equal");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.window = x;
  return fit;
}

namespace {
double abscissa_of(const SweepRecord& r, Abscissa a) {
  return a == Abscissa::eta ? r.eta : static_cast<double>(r.M);
}
}  // namespace

SlopeFit fit_slope(const std::vector<SweepRecord>& records, Abscissa abscissa,
                   const std::vector<double>& window) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    const double v = abscissa_of(r, abscissa);
    if (!window.empty() && std::find(window.begin(), window.end(), v) == window.end()) continue;
    if (!r.ok()) throw ValidationError("slope fit window contains a failed row");
    x.push_back(v);
    y.push_back(r.abs_error);
  }
  return fit_slope(x, y);
}

std::vector<double> default_fit_window(const std::vector<SweepRecord>& records,
                                       Abscissa abscissa) {
  std::vector<double> xs;
  for (const auto& r : records) xs.push_back(abscissa_of(r, abscissa));
  if (xs.empty()) return xs;
  // Largest eta and smallest M are the pre-asymptotic ends.
  const double drop = abscissa == Abscissa::eta ? *std::max_element(xs.begin(), xs.end())
                                                : *std::min_element(xs.begin(), xs.end());
  std::vector<double> window;
  for (const auto& r : records) {
    const double v = abscissa_of(r, abscissa);
    if (v == drop || !r.ok()) continue;
    if (r.abs_error <= 10.0 * r.residual) continue;
    window.push_back(v);
  }
  return window;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw ValidationError("bad number in CSV: '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') throw ValidationError("bad integer in CSV: '" + s + "'");
  return static_cast<int>(v);
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << to_string(r.method) << ',' << fmt(r.params.a) << ',' << fmt(r.params.Z0) << ','
        << fmt(r.params.Za) << ',' << fmt(r.eta) << ',' << r.N << ',' << r.d << ',' << r.M << ','
        << fmt(r.lambda) << ',' << fmt(r.E0) << ',' << fmt(r.error) << ',' << fmt(r.abs_error)
        << ',' << fmt(r.seconds) << ',' << r.error_code << '\n';
  }
}

std::vector<SweepRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw ValidationError("CSV header does not match the sweep format");
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 14) throw ValidationError("CSV row has " + std::to_string(f.size()) + " fields");
    SweepRecord r;
    r.method = parse_method(f[0]);
    r.params = {parse_double(f[1]), parse_double(f[2]), parse_double(f[3])};
    r.eta = parse_double(f[4]);
    r.N = parse_int(f[5]);
    r.d = parse_int(f[6]);
    r.M = parse_int(f[7]);
    r.lambda = parse_double(f[8]);
    r.E0 = parse_double(f[9]);
    r.error = parse_double(f[10]);
    r.abs_error = parse_double(f[11]);
    r.seconds = parse_double(f[12]);
    r.error_code = f[13];
    out.push_back(std::move(r));
  }
  return out;
}

void write_gnuplot(std::ostream& out, const std::string& csv_path, Abscissa abscissa,
                   const std::vector<PlotSeries>& series, const std::string& title) {
  const bool by_eta = abscissa == Abscissa::eta;
  out << "# generated by paw1d\n"
      << "set datafile separator ','\n"
      << "set logscale xy\n"
      << "set format y '%.0e'\n"
      << "set key top left\n"
      << "set grid\n"
      << "set title '" << title << "'\n"
      << "set xlabel '" << (by_eta ? "eta" : "M") << "'\n"
      << "set ylabel '|lambda - E0|'\n";
  const int column = by_eta ? 5 : 8;
  out << "plot \\\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::string name(to_string(series[i].method));
    std::string filter = "strcol(1) eq '" + name + "' && strcol(14) eq ''";
    std::string label = name;
    if (series[i].N > 0) {
      filter += " && $6 == " + std::to_string(series[i].N);
      label += " N=" + std::to_string(series[i].N);
    }
    out << "  '" << csv_path << "' using (" << filter << " ? $" << column
        << " : 1/0):12 with linespoints title '" << label << "'"
        << (i + 1 < series.size() ? ", \\\n" : "\n");
  }
}

}  // namespace paw1d
