// Command-line harness: deterministic sampling, law tables, transform grids,
// and verification suites with machine-readable outputs.
//
// Exit codes: 0 success / all checks pass, 1 verification failure,
// 2 usage error, 3 I/O error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rmt/ensembles.hpp"
#include "rmt/heavy.hpp"
#include "rmt/laws.hpp"
#include "rmt/numeric.hpp"
#include "rmt/spectral.hpp"
#include "rmt/stats.hpp"
#include "rmt/transforms.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rmt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RMT_DEFAULT_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

void write_file(const fs::path& path, const std::string& body) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << body;
  if (!out) throw IoError("write failed: " + path.string());
}

void write_config(const fs::path& out_path, const json& config) {
  fs::path cfg = out_path;
  cfg += ".config.json";
  write_file(cfg, config.dump(2) + "\n");
}

struct GridSpec {
  double lo = 0.0, hi = 0.0, step = 0.0;
  std::vector<double> points() const {
    std::vector<double> xs;
    for (double x = lo; x <= hi + 1e-12 * std::max(1.0, std::abs(hi)); x += step)
      xs.push_back(x);
    return xs;
  }
};

GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.step) || c1 != ':' || c2 != ':' || g.step <= 0.0 ||
      g.hi < g.lo)
    throw UsageError("bad grid spec '" + s + "' (want lo:hi:step)");
  return g;
}

Complex parse_complex(const std::string& s) {
  double re = 0.0, im = 0.0;
  char comma = 0;
  std::istringstream in(s);
  if (!(in >> re)) throw UsageError("bad complex value '" + s + "'");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw UsageError("bad complex value '" + s + "'");
  }
  return {re, im};
}

EntryLaw parse_ensemble(const std::string& name, double alpha) {
  if (name == "ginibre-complex") return EntryLaw::complex_gaussian();
  if (name == "ginibre-real") return EntryLaw::real_gaussian();
  if (name == "bernoulli") return EntryLaw::bernoulli();
  if (name == "heavy") return EntryLaw::heavy(alpha, PhaseKind::kRademacher);
  throw UsageError("unknown ensemble '" + name + "'");
}

double ensemble_scale(const EntryLaw& law, int n) {
  if (law.kind == EntryKind::kHeavyTailed)
    return std::pow(static_cast<double>(n), -1.0 / law.alpha);
  return 1.0 / std::sqrt(static_cast<double>(n));
}

std::string spectrum_csv(const std::vector<Complex>& atoms) {
  std::string body = "re,im\n";
  for (const Complex& z : atoms)
    body += format_double(z.real()) + "," + format_double(z.imag()) + "\n";
  return body;
}

std::string singular_csv(const std::vector<double>& s) {
  std::string body = "s\n";
  for (double x : s) body += format_double(x) + "\n";
  return body;
}

std::vector<Complex> read_spectrum_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spectrum file: " + path.string());
  std::string line;
  std::vector<Complex> atoms;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != "re,im")
        throw UsageError("malformed CSV at line 1 of " + path.string() +
                         " (expected header 're,im')");
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ls(line);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(ls >> re >> comma >> im) || comma != ',')
      throw UsageError("malformed CSV at line " + std::to_string(lineno) + " of " +
                       path.string());
    atoms.emplace_back(re, im);
  }
  if (atoms.empty())
    throw UsageError("malformed CSV: no atoms in " + path.string());
  return atoms;
}

// ---------------------------------------------------------------- sample --

struct SampleArgs {
  std::string ensemble = "ginibre-complex";
  int n = 100;
  double alpha = 1.0;
  std::optional<std::uint64_t> seed;
  std::string scale = "auto";
  std::string out_dir = ".";
};

int cmd_sample(const SampleArgs& a) {
  const std::uint64_t seed = resolve_seed(a.seed);
  const EntryLaw law = parse_ensemble(a.ensemble, a.alpha);
  if (a.n < 1) throw UsageError("--n must be >= 1");
  if (a.scale != "auto" && a.scale != "none") throw UsageError("--scale must be auto or none");

  const ComplexMatrix x = sample_iid_matrix(a.n, law, Seed{seed, 0});
  const double scale = a.scale == "auto" ? ensemble_scale(law, a.n) : 1.0;

  std::vector<Complex> lam;
  if (law.is_real()) {
    lam = eigenvalues_real(Eigen::MatrixXd(x.real() * scale)).values;
  } else {
    lam = eigenvalues(scale * x).values;
  }
  const auto sv = singular_values(scale * x).values;

  const fs::path dir(a.out_dir);
  write_file(dir / "spectrum.csv", spectrum_csv(lam));
  write_file(dir / "singular.csv", singular_csv(sv));

  json cfg;
  cfg["command"] = "sample";
  cfg["ensemble"] = a.ensemble;
  cfg["n"] = a.n;
  cfg["alpha"] = a.alpha;
  cfg["seed"] = seed;
  cfg["scale"] = a.scale;
  cfg["scale_factor"] = scale;
  cfg["out_dir"] = a.out_dir;
  cfg["threads"] = default_threads();
  write_file(dir / "sample.config.json", cfg.dump(2) + "\n");
  return kExitOk;
}

// ------------------------------------------------------------------- law --

struct LawArgs {
  std::string name;
  std::string grid = "0:2:0.01";
  int n = 100;
  double alpha = 1.0;
  std::string z = "0";
  std::string alpha_mode = "heavy";
  std::uint64_t bank_size = 200000;
  std::optional<std::uint64_t> seed;
  std::string output = "law.csv";
};

int cmd_law(const LawArgs& a) {
  const std::uint64_t seed = resolve_seed(a.seed);
  const GridSpec grid = parse_grid(a.grid);
  const std::vector<double> xs = grid.points();
  if (xs.empty()) throw UsageError("empty grid");
  const Complex z = parse_complex(a.z);

  std::string header = "x,density";
  std::vector<double> values(xs.size());
  json sidecar;
  bool has_sidecar = false;

  if (a.name == "quarter-circular") {
    for (std::size_t i = 0; i < xs.size(); ++i) values[i] = quarter_circular_density(xs[i]);
  } else if (a.name == "circular-modulus") {
    header = "r,cdf";
    for (std::size_t i = 0; i < xs.size(); ++i) values[i] = circular_modulus_cdf(xs[i]);
  } else if (a.name == "ginibre-mean") {
    for (std::size_t i = 0; i < xs.size(); ++i)
      values[i] = ginibre_mean_density(a.n, Complex(xs[i], 0.0));
  } else if (a.name == "kostlan-cdf") {
    header = "r,cdf";
    for (std::size_t i = 0; i < xs.size(); ++i) values[i] = kostlan_radius_cdf(a.n, xs[i]);
  } else if (a.name == "nu-z" && a.alpha_mode == "finite-variance") {
    for (std::size_t i = 0; i < xs.size(); ++i) values[i] = nu_z_density(z, xs[i]);
  } else if (a.name == "nu-z") {
    const StableSampleBank bank = make_stable_bank(a.alpha, a.bank_size, Seed{seed, 1});
    values = nu_alpha_z_density_scan(z, xs, bank);
    sidecar["bank_size"] = a.bank_size;
    sidecar["seed"] = seed;
    sidecar["alpha"] = a.alpha;
    has_sidecar = true;
  } else if (a.name == "g-alpha") {
    header = "r,g_alpha";
    const StableSampleBank bank = make_stable_bank(a.alpha, a.bank_size, Seed{seed, 1});
    double mass = 0.0, prev_r = 0.0, prev_g = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      values[i] = heavy_density_g(xs[i], bank);
      if (i > 0) mass += M_PI * (prev_g * prev_r + values[i] * xs[i]) * (xs[i] - prev_r);
      prev_r = xs[i];
      prev_g = values[i];
    }
    sidecar["bank_size"] = a.bank_size;
    sidecar["seed"] = seed;
    sidecar["alpha"] = a.alpha;
    sidecar["grid_mass"] = mass;
    has_sidecar = true;
  } else {
    throw UsageError("unknown law '" + a.name + "'");
  }

  std::string body = header + "\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    body += format_double(xs[i]) + "," + format_double(values[i]) + "\n";
  write_file(a.output, body);

  if (has_sidecar) {
    fs::path side = fs::path(a.output);
    side += ".sidecar.json";
    write_file(side, sidecar.dump(2) + "\n");
  }

  json cfg;
  cfg["command"] = "law";
  cfg["name"] = a.name;
  cfg["grid"] = a.grid;
  cfg["n"] = a.n;
  cfg["alpha"] = a.alpha;
  cfg["z"] = a.z;
  cfg["alpha_mode"] = a.alpha_mode;
  cfg["bank_size"] = a.bank_size;
  cfg["seed"] = seed;
  cfg["output"] = a.output;
  write_config(a.output, cfg);
  return kExitOk;
}

// ------------------------------------------------------------- transform --

struct TransformArgs {
  std::string mode = "density";
  std::string input;
  std::string ensemble;
  int n = 300;
  double alpha = 1.0;
  std::string grid = "-1.5:1.5:0.1";
  std::string t_schedule = "0.05";
  std::optional<std::uint64_t> seed;
  std::string output = "transform.csv";
};

std::vector<double> parse_schedule(const std::string& s) {
  std::vector<double> ts;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    ts.push_back(std::stod(tok));
  }
  if (ts.empty()) throw UsageError("empty t schedule");
  for (double t : ts)
    if (!(t > 0.0)) throw UsageError("t values must be positive");
  return ts;
}

int cmd_transform(const TransformArgs& a) {
  const std::uint64_t seed = resolve_seed(a.seed);
  const GridSpec gs = parse_grid(a.grid);
  const std::vector<double> axis = gs.points();
  if (axis.empty()) throw UsageError("empty lattice");
  Lattice lat{gs.lo, gs.lo, gs.step, static_cast<int>(axis.size()),
              static_cast<int>(axis.size())};

  std::string body;
  if (a.mode == "potential") {
    std::vector<Complex> atoms;
    if (!a.input.empty()) {
      atoms = read_spectrum_csv(a.input);
    } else if (!a.ensemble.empty()) {
      const EntryLaw law = parse_ensemble(a.ensemble, a.alpha);
      const ComplexMatrix x = sample_iid_matrix(a.n, law, Seed{seed, 0});
      atoms = eigenvalues(ensemble_scale(law, a.n) * x).values;
    } else {
      throw UsageError("potential mode needs --input or --ensemble");
    }
    const Spectrum spec{atoms};
    std::vector<double> u(lat.size());
    parallel_for(lat.size(), [&](std::size_t idx) {
      const int ix = static_cast<int>(idx) / lat.ny;
      const int iy = static_cast<int>(idx) % lat.ny;
      u[idx] = log_potential_empirical(spec, lat.point(ix, iy));
    });
    body = "re,im,potential\n";
    for (std::size_t idx = 0; idx < lat.size(); ++idx) {
      const int ix = static_cast<int>(idx) / lat.ny;
      const int iy = static_cast<int>(idx) % lat.ny;
      const Complex zz = lat.point(ix, iy);
      body += format_double(zz.real()) + "," + format_double(zz.imag()) + "," +
              format_double(u[idx]) + "\n";
    }
  } else if (a.mode == "gamma" || a.mode == "density") {
    if (a.ensemble.empty()) throw UsageError(a.mode + " mode needs --ensemble");
    const EntryLaw law = parse_ensemble(a.ensemble, a.alpha);
    const ComplexMatrix x =
        ensemble_scale(law, a.n) * sample_iid_matrix(a.n, law, Seed{seed, 0});
    const std::vector<double> ts = parse_schedule(a.t_schedule);

    if (a.mode == "gamma") {
      const double t = ts.front();
      std::vector<QTransform> g(lat.size());
      parallel_for(lat.size(), [&](std::size_t idx) {
        const int ix = static_cast<int>(idx) / lat.ny;
        const int iy = static_cast<int>(idx) % lat.ny;
        g[idx] = quaternionic_transform_gram(x, {lat.point(ix, iy), Complex(0.0, t)});
      });
      body = "re,im,a_re,a_im,b_re,b_im\n";
      for (std::size_t idx = 0; idx < lat.size(); ++idx) {
        const int ix = static_cast<int>(idx) / lat.ny;
        const int iy = static_cast<int>(idx) % lat.ny;
        const Complex zz = lat.point(ix, iy);
        body += format_double(zz.real()) + "," + format_double(zz.imag()) + "," +
                format_double(g[idx].a.real()) + "," + format_double(g[idx].a.imag()) + "," +
                format_double(g[idx].b.real()) + "," + format_double(g[idx].b.imag()) + "\n";
      }
    } else {
      std::vector<std::vector<Complex>> grids;
      for (double t : ts) grids.push_back(b_field(x, lat, t));
      const std::vector<Complex> b =
          grids.size() > 1 ? extrapolate_b(grids, ts) : grids.front();
      const DensityGrid d = recover_density_from_b(b, lat);
      body = "re,im,density\n";
      for (std::size_t idx = 0; idx < lat.size(); ++idx) {
        const int ix = static_cast<int>(idx) / lat.ny;
        const int iy = static_cast<int>(idx) % lat.ny;
        const Complex zz = lat.point(ix, iy);
        body += format_double(zz.real()) + "," + format_double(zz.imag()) + "," +
                format_double(d.density[idx]) + "\n";
      }
    }
  } else {
    throw UsageError("unknown transform mode '" + a.mode + "'");
  }

  write_file(a.output, body);
  json cfg;
  cfg["command"] = "transform";
  cfg["mode"] = a.mode;
  cfg["input"] = a.input;
  cfg["ensemble"] = a.ensemble;
  cfg["n"] = a.n;
  cfg["alpha"] = a.alpha;
  cfg["grid"] = a.grid;
  cfg["t"] = a.t_schedule;
  cfg["seed"] = seed;
  cfg["output"] = a.output;
  cfg["threads"] = default_threads();
  write_config(a.output, cfg);
  return kExitOk;
}

// ---------------------------------------------------------------- verify --

struct VerifyArgs {
  std::string suite;
  int n = 0;  // 0: suite default
  int replicas = 0;
  double alpha = 1.0;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

class SuiteRunner {
 public:
  SuiteRunner(const fs::path& dir, Seed seed) : dir_(dir), seed_(seed) {}

  void check(const std::string& name, long sample_size, long replicas, double statistic,
             double critical) {
    const GofReport r =
        GofReport::make(name, sample_size, replicas, statistic, critical, seed_);
    reports_.push_back(r);
    write_file(dir_ / (name + ".json"), r.to_json() + "\n");
    std::cout << (r.pass ? "[pass] " : "[FAIL] ") << name << "  statistic="
              << format_double(statistic) << " critical=" << format_double(critical) << "\n";
  }

  bool all_pass() const {
    for (const auto& r : reports_)
      if (!r.pass) return false;
    return true;
  }

 private:
  fs::path dir_;
  Seed seed_;
  std::vector<GofReport> reports_;
};

void suite_identities(SuiteRunner& run, int n, Seed seed) {
  const ComplexMatrix x = sample_iid_matrix(n, EntryLaw::complex_gaussian(), seed.sub(1));
  const ComplexMatrix a = x / std::sqrt(static_cast<double>(n));

  // determinantal identity chain at 5 z values
  double worst_chain = 0.0;
  for (std::uint64_t k = 0; k < 5; ++k) {
    Rng g(seed.sub(100 + k));
    const Complex z(2.0 * g.uniform() - 1.0, 2.0 * g.uniform() - 1.0);
    const ComplexMatrix shifted = a - z * ComplexMatrix::Identity(n, n);
    const double via_eigen = log_potential_empirical(eigenvalues(a), z);
    const double via_det =
        -std::log(std::abs(shifted.partialPivLu().determinant())) / static_cast<double>(n);
    const auto sv = singular_values(shifted).values;
    double via_sv = 0.0;
    for (double s : sv) via_sv += std::log(s);
    via_sv = -via_sv / static_cast<double>(n);
    worst_chain = std::max({worst_chain, std::abs(via_eigen - via_det),
                            std::abs(via_eigen - via_sv)});
  }
  run.check("identity-potential-chain", n, 5, worst_chain, 1e-8);

  // weyl products and the k=n equality
  const auto lam = eigenvalues(a).values;
  const auto sv = singular_values(a).values;
  double pl = 1.0, ps = 1.0, worst_weyl = 0.0;
  for (int k = 0; k < n; ++k) {
    pl *= std::abs(lam[static_cast<std::size_t>(k)]);
    ps *= sv[static_cast<std::size_t>(k)];
    worst_weyl = std::max(worst_weyl, (pl - ps) / ps);
  }
  run.check("identity-weyl-products", n, 1, worst_weyl, 1e-10);
  run.check("identity-weyl-det-equality", n, 1, std::abs(pl / ps - 1.0), 1e-10);

  double sl = 0.0, ss = 0.0;
  for (int k = 0; k < n; ++k) {
    sl += std::norm(lam[static_cast<std::size_t>(k)]);
    ss += sv[static_cast<std::size_t>(k)] * sv[static_cast<std::size_t>(k)];
  }
  run.check("identity-weyl-sum-squares", n, 1, (sl - ss) / ss, 1e-10);
  run.check("identity-trace-norm", n, 1, std::abs(ss / a.squaredNorm() - 1.0), 1e-12);

  const ComplexMatrix y =
      sample_iid_matrix(n, EntryLaw::complex_gaussian(), seed.sub(2)) /
      std::sqrt(static_cast<double>(n));
  const auto sy = singular_values(y).values;
  double hw = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = sv[static_cast<std::size_t>(k)] - sy[static_cast<std::size_t>(k)];
    hw += d * d;
  }
  run.check("identity-hoffman-wielandt", n, 1,
            hw / (a - y).squaredNorm() - 1.0 > 0 ? hw / (a - y).squaredNorm() - 1.0 : 0.0,
            1e-10);

  const auto dist = row_distances(a);
  double inv_s = 0.0, inv_d = 0.0;
  for (int k = 0; k < n; ++k) {
    inv_s += 1.0 / (sv[static_cast<std::size_t>(k)] * sv[static_cast<std::size_t>(k)]);
    inv_d += 1.0 / (dist[static_cast<std::size_t>(k)] * dist[static_cast<std::size_t>(k)]);
  }
  run.check("identity-rows-trace-inverse", n, 1, std::abs(inv_s / inv_d - 1.0), 1e-8);

  const auto bounds = smallest_sv_bounds_check(a);
  const double sandwich =
      std::max(bounds.lower - bounds.s_n, bounds.s_n - bounds.upper) / bounds.s_n;
  run.check("identity-rows-operator-inverse", n, 1, std::max(sandwich, 0.0), 1e-10);

  auto ev = hermitian_eigenvalues(bipartize(a));
  std::vector<double> folded(ev.size());
  for (std::size_t i = 0; i < ev.size(); ++i) folded[i] = std::abs(ev[i]);
  std::sort(folded.begin(), folded.end(), std::greater<>());
  double worst_fold = 0.0;
  for (int k = 0; k < n; ++k) {
    worst_fold = std::max(worst_fold,
                          std::abs(folded[static_cast<std::size_t>(2 * k)] -
                                   sv[static_cast<std::size_t>(k)]));
    worst_fold = std::max(worst_fold,
                          std::abs(folded[static_cast<std::size_t>(2 * k + 1)] -
                                   sv[static_cast<std::size_t>(k)]));
  }
  run.check("identity-bipartize-spectrum", n, 1, worst_fold, 1e-10);
}

void suite_quarter_circular(SuiteRunner& run, int n, Seed seed) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  int idx = 0;
  for (const char* name : {"gaussian", "bernoulli"}) {
    const EntryLaw law =
        idx == 0 ? EntryLaw::real_gaussian() : EntryLaw::bernoulli();
    const ComplexMatrix x = sample_iid_matrix(n, law, seed.sub(static_cast<std::uint64_t>(idx)));
    const auto sv = singular_values(scale * x).values;
    run.check(std::string("quarter-circular-ks-") + name, n, 1,
              ks_distance(sv, LawDescriptor::quarter_circular()), 0.05);
    ++idx;
  }
}

void suite_circular(SuiteRunner& run, int n, Seed seed) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  int idx = 0;
  for (const char* name : {"gaussian", "bernoulli"}) {
    const EntryLaw law = idx == 0 ? EntryLaw::real_gaussian() : EntryLaw::bernoulli();
    const ComplexMatrix x = sample_iid_matrix(n, law, seed.sub(static_cast<std::uint64_t>(idx)));
    const auto lam = eigenvalues_real(Eigen::MatrixXd(x.real() * scale)).values;
    std::vector<double> moduli, phases;
    for (const Complex& l : lam) {
      moduli.push_back(std::abs(l));
      phases.push_back(eigen_phase(l));
    }
    run.check(std::string("circular-moduli-ks-") + name, n, 1,
              ks_distance(moduli, LawDescriptor::circular_modulus()), 0.05);
    run.check(std::string("circular-phase-ks-") + name, n, 1,
              ks_distance(phases, LawDescriptor::uniform(0.0, 2.0 * M_PI)), 0.05);
    ++idx;
  }
}

void suite_kostlan(SuiteRunner& run, int n, int replicas, Seed seed) {
  // pooled two-sample comparison: eigensolver moduli vs gamma-layer sampler
  std::vector<double> via_eig, via_gamma;
  for (int r = 0; r < replicas; ++r) {
    const ComplexMatrix g = sample_iid_matrix(n, EntryLaw::complex_gaussian(),
                                              seed.sub(static_cast<std::uint64_t>(2 * r)));
    for (const Complex& lam : eigenvalues(g).values) via_eig.push_back(std::abs(lam));
    const auto z = sample_kostlan_moduli(n, seed.sub(static_cast<std::uint64_t>(2 * r + 1)));
    via_gamma.insert(via_gamma.end(), z.begin(), z.end());
  }
  run.check("kostlan-two-sample-ks", n, replicas, ks_distance(via_eig, via_gamma),
            ks_critical_two_sample(via_eig.size(), via_gamma.size(), 0.01));

  // radius CDF against the max-layer sampler
  const int cdf_reps = 10000;
  const double root_n = std::sqrt(static_cast<double>(n));
  double worst = 0.0, worst_allowed = 1e300;
  for (double r : {0.9, 1.0, 1.1}) {
    long count = 0;
    for (int k = 0; k < cdf_reps; ++k)
      if (sample_kostlan_max(n, seed.sub(777000 + static_cast<std::uint64_t>(k))) <= root_n * r)
        ++count;
    const double p = kostlan_radius_cdf(n, r);
    const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-9) / cdf_reps);
    worst = std::max(worst, std::abs(count / static_cast<double>(cdf_reps) - p) / (3.0 * sigma));
    worst_allowed = 1.0;
  }
  run.check("kostlan-radius-cdf-3sigma", n, cdf_reps, worst, worst_allowed);

  const int nn = 200;
  const double rn = std::sqrt(static_cast<double>(nn));
  const double inside = nn * ginibre_mean_density(nn, Complex(rn * 0.5, 0.0));
  const double outside = nn * ginibre_mean_density(nn, Complex(rn * 1.5, 0.0));
  run.check("ginibre-mean-density-bulk", nn, 1, std::abs(inside - 1.0 / M_PI), 0.01);
  run.check("ginibre-mean-density-outside", nn, 1, std::abs(outside), 0.01);
}

void suite_gumbel(SuiteRunner& run, int n, int replicas, Seed seed) {
  std::vector<double> radii(static_cast<std::size_t>(replicas));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  parallel_for(radii.size(), [&](std::size_t r) {
    const ComplexMatrix g = sample_iid_matrix(n, EntryLaw::complex_gaussian(), seed.sub(r));
    radii[r] = std::abs(eigenvalues(scale * g).values.front());
  });
  const double mean_radius = pairwise_mean(radii);
  const double g = gumbel_gamma_n(n);
  run.check("gumbel-radius-mean", n, replicas,
            std::abs(mean_radius - (1.0 + std::sqrt(g / (4.0 * n)))), 0.03);

  std::vector<double> standardized(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i)
    standardized[i] = gumbel_standardize(n, radii[i]);
  const double euler = 0.57721566490153286;
  run.check("gumbel-standardized-mean", n, replicas,
            std::abs(pairwise_mean(standardized) - euler), 0.25);
}

void suite_quaternionic(SuiteRunner& run, int n, Seed seed) {
  const ComplexMatrix a = sample_iid_matrix(n, EntryLaw::complex_gaussian(), seed.sub(0)) /
                          std::sqrt(static_cast<double>(n));
  double worst = 0.0;
  for (const QPoint& q : {QPoint{Complex(0.4, -0.2), Complex(0.0, 0.35)},
                          QPoint{Complex(-0.1, 0.6), Complex(0.8, 0.9)}}) {
    const QTransform direct = quaternionic_transform(a, q);
    const QTransform gram = quaternionic_transform_gram(a, q);
    worst = std::max(worst, qtransform_distance(direct, gram));
  }
  run.check("quaternionic-route-agreement", n, 2, worst, 1e-10);

  double worst_h = 0.0, worst_beta = 0.0;
  for (double r : {0.0, 0.5, 0.9}) {
    const Complex alpha = nu_z_fixed_point(Complex(r, 0), Complex(0, 1e-4));
    worst_h = std::max(worst_h, std::abs(alpha.imag() - circular_h_limit(Complex(r, 0))));
    worst_beta = std::max(
        worst_beta, std::abs(nu_z_beta(Complex(r, 0), Complex(0, 1e-4)) - Complex(-r, 0.0)));
  }
  run.check("quaternionic-h-limit", 3, 1, worst_h, 1e-3);
  run.check("quaternionic-beta-limit", 3, 1, worst_beta, 1e-3);
}

void suite_heavy(SuiteRunner& run, int n, double alpha, Seed seed) {
  // poisson-stable magic formula, two-sample
  const std::size_t trunc = 3000, nsamp = 3000;
  std::vector<double> sums(nsamp);
  for (std::size_t r = 0; r < nsamp; ++r) {
    const auto xi = sample_poisson_weights(alpha, trunc, seed.sub(10000 + r));
    Rng g(seed.sub(20000 + r));
    double acc = 0.0;
    for (double x : xi) {
      const double u = g.uniform();
      acc += x * u * u;
    }
    sums[r] = acc;
  }
  auto stab = sample_positive_stable(alpha, nsamp, seed.sub(30000));
  const double rho = alpha / 2.0;
  // E[(U^2)^{alpha/2}] = 1/(alpha+1)
  const double factor = std::pow(1.0 / (alpha + 1.0), 1.0 / rho);
  for (double& x : stab) x *= factor;
  run.check("heavy-magic-formula-ks", static_cast<long>(nsamp), 1,
            ks_distance(sums, stab), ks_critical_two_sample(nsamp, nsamp, 0.01));

  // Laplace transform of the stable sampler at x = 1 and 4
  const auto s = sample_positive_stable(alpha, 1 << 19, seed.sub(40000));
  for (double xq : {1.0, 4.0}) {
    double m = 0.0;
    for (double v : s) m += std::exp(-xq * v);
    m /= static_cast<double>(s.size());
    double var = 0.0;
    for (double v : s) var += (std::exp(-xq * v) - m) * (std::exp(-xq * v) - m);
    var /= static_cast<double>(s.size());
    const double want = std::exp(-std::tgamma(1.0 - rho) * std::pow(xq, rho));
    run.check("heavy-stable-laplace-x" + std::to_string(static_cast<int>(xq)),
              static_cast<long>(s.size()), 1, std::abs(m - want),
              3.0 * std::sqrt(var / static_cast<double>(s.size())));
  }

  // RDE vs tree recursion (smoke scale)
  const StableSampleBank bank = make_stable_bank(alpha, 100000, seed.sub(50000));
  const auto rde = rde_h_moments(Complex(0, 0), 1.0, bank);
  run.check("heavy-rde-residual", static_cast<long>(bank.size()), 1, rde.y.residual, 1e-10);
  const auto mc = pwit_resolvent_mc(4, 15, alpha, {Complex(0, 0), Complex(0, 1)}, 150,
                                    seed.sub(60000));
  run.check("heavy-tree-vs-rde", static_cast<long>(mc.trees), 1,
            std::abs(mc.mean.a.imag() - rde.e_h), std::max(0.08, 3.0 * mc.se_a_imag));

  // Hill index of sampled singular values
  const EntryLaw law = EntryLaw::heavy(alpha, PhaseKind::kRademacher);
  const ComplexMatrix x = sample_iid_matrix(n, law, seed.sub(70000));
  const auto sv = singular_values(std::pow(static_cast<double>(n), -1.0 / alpha) * x).values;
  run.check("heavy-hill-index", n, 1,
            std::abs(tail_index_estimate(sv, 0.05) - alpha), 0.2);
}

void suite_invertibility(SuiteRunner& run, int n, int replicas, Seed seed) {
  const std::vector<double> grid = {0.0, 0.05, 0.1, 0.2, 0.4, 0.8};
  std::vector<double> c_hats;
  for (int nn : {n, 2 * n}) {
    const auto curve = smallest_sv_tail_experiment(nn, EntryLaw::complex_gaussian(), 0.0,
                                                   replicas, grid, seed.sub(nn));
    c_hats.push_back(curve.c_hat);
  }
  const double ratio = c_hats[0] > 0 && c_hats[1] > 0
                           ? std::max(c_hats[0] / c_hats[1], c_hats[1] / c_hats[0])
                           : 1.0;
  run.check("invertibility-envelope-stability", n, replicas, ratio, 2.0);

  const auto bern = smallest_sv_tail_experiment(100, EntryLaw::bernoulli(), 0.0, replicas, grid,
                                                seed.sub(1));
  run.check("invertibility-bernoulli-singularity", 100, replicas, bern.singular_fraction, 0.01);

  // rank-one interlacing on the shift pair
  ComplexMatrix a = ComplexMatrix::Zero(10, 10), b = ComplexMatrix::Zero(10, 10);
  for (int i = 0; i + 1 < 10; ++i) a(i, i + 1) = b(i, i + 1) = 1.0;
  b(9, 0) = 0.5;
  const double d = ecdf_sup_distance(singular_values(a).values, singular_values(b).values);
  run.check("invertibility-rank-one-interlacing", 10, 1, d, 0.1 + 1e-12);
}

void suite_concentration(SuiteRunner& run, int n, int replicas, Seed seed) {
  const auto res = concentration_experiment(n, EntryLaw::real_gaussian(),
                                            TestFunction::kIndicatorStep, 1.0, replicas,
                                            {0.05, 0.1}, seed.sub(0));
  double worst = 0.0;
  for (std::size_t k = 0; k < res.t.size(); ++k)
    worst = std::max(worst, res.frequency[k] - res.bound[k]);
  run.check("concentration-singular-measure", n, replicas, std::max(worst, 0.0), 0.0);

  // quaternionic concentration at fixed q
  const QPoint q{Complex(0.5, 0.0), Complex(0.0, 1.0)};
  std::vector<QTransform> gs(static_cast<std::size_t>(replicas));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  parallel_for(gs.size(), [&](std::size_t r) {
    const ComplexMatrix x = sample_iid_matrix(n, EntryLaw::complex_gaussian(), seed.sub(100 + r));
    gs[r] = quaternionic_transform_gram(scale * x, q);
  });
  QTransform mean{Complex(0, 0), Complex(0, 0)};
  for (const auto& g : gs) {
    mean.a += g.a;
    mean.b += g.b;
  }
  mean.a /= static_cast<double>(replicas);
  mean.b /= static_cast<double>(replicas);
  double worst_q = 0.0;
  for (double t : {0.05, 0.1}) {
    long count = 0;
    for (const auto& g : gs)
      if (qtransform_distance(g, mean) >= t) ++count;
    const double freq = count / static_cast<double>(replicas);
    const double base = 2.0 * std::exp(-n * q.eta.imag() * q.eta.imag() * t * t / 8.0);
    const double sigma =
        std::sqrt(std::max(base * (1.0 - base), 1e-12) / static_cast<double>(replicas));
    worst_q = std::max(worst_q, freq - std::min(1.0, base + 3.0 * sigma));
  }
  run.check("concentration-quaternionic", n, replicas, std::max(worst_q, 0.0), 0.0);
}

void suite_energy(SuiteRunner& run, int n, Seed seed) {
  const ComplexMatrix g = sample_iid_matrix(n, EntryLaw::complex_gaussian(), seed.sub(0));
  const auto [mu, nu] = empirical_measures(g, 1.0 / std::sqrt(static_cast<double>(n)));
  double second = 0.0;
  for (const Complex& z : mu.atoms) second += std::norm(z);
  second /= static_cast<double>(mu.atoms.size());
  const double rate = 0.5 * (log_energy(mu) + second) - 3.0 / 8.0;
  run.check("energy-ldp-rate-minimum", n, 1, std::abs(rate), 0.02);
}

int cmd_verify(const VerifyArgs& a) {
  const std::uint64_t seed_val = resolve_seed(a.seed);
  const Seed seed{seed_val, 0};
  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  SuiteRunner run(dir, seed);

  auto pick = [](int flag, int fallback) { return flag > 0 ? flag : fallback; };

  if (a.suite == "identities") {
    suite_identities(run, pick(a.n, 50), seed);
  } else if (a.suite == "quarter-circular") {
    suite_quarter_circular(run, pick(a.n, 1000), seed);
  } else if (a.suite == "circular") {
    suite_circular(run, pick(a.n, 1000), seed);
  } else if (a.suite == "kostlan") {
    suite_kostlan(run, pick(a.n, 100), pick(a.replicas, 200), seed);
  } else if (a.suite == "gumbel") {
    suite_gumbel(run, pick(a.n, 500), pick(a.replicas, 200), seed);
  } else if (a.suite == "quaternionic") {
    suite_quaternionic(run, pick(a.n, 20), seed);
  } else if (a.suite == "heavy") {
    suite_heavy(run, pick(a.n, 500), a.alpha, seed);
  } else if (a.suite == "invertibility") {
    suite_invertibility(run, pick(a.n, 100), pick(a.replicas, 300), seed);
  } else if (a.suite == "concentration") {
    suite_concentration(run, pick(a.n, 200), pick(a.replicas, 300), seed);
  } else if (a.suite == "energy") {
    suite_energy(run, pick(a.n, 500), seed);
  } else {
    throw UsageError("unknown suite '" + a.suite + "'");
  }

  json cfg;
  cfg["command"] = "verify";
  cfg["suite"] = a.suite;
  cfg["n"] = a.n;
  cfg["replicas"] = a.replicas;
  cfg["alpha"] = a.alpha;
  cfg["seed"] = seed_val;
  cfg["out_dir"] = a.out_dir;
  cfg["threads"] = default_threads();
  write_file(dir / ("verify-" + a.suite + ".config.json"), cfg.dump(2) + "\n");

  return run.all_pass() ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  setenv("OPENBLAS_NUM_THREADS", "1", 0);

  CLI::App app{"random matrix spectral laboratory"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = auto); never changes results");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "draw one matrix, write spectrum/singular CSVs");
  sample->add_option("--ensemble", sa.ensemble, "ginibre-complex|ginibre-real|bernoulli|heavy");
  sample->add_option("--n", sa.n, "dimension");
  sample->add_option("--alpha", sa.alpha, "tail index for heavy");
  std::uint64_t sa_seed = 0;
  auto* sa_seed_opt = sample->add_option("--seed", sa_seed, "master seed");
  sample->add_option("--scale", sa.scale, "auto|none");
  sample->add_option("--out-dir", sa.out_dir, "output directory");

  LawArgs la;
  auto* law = app.add_subcommand("law", "tabulate a reference law");
  law->add_option("--name", la.name)->required();
  law->add_option("--grid", la.grid, "lo:hi:step");
  law->add_option("--n", la.n);
  law->add_option("--alpha", la.alpha);
  law->add_option("--z", la.z, "complex as re,im");
  law->add_option("--alpha-mode", la.alpha_mode, "finite-variance|heavy (nu-z)");
  law->add_option("--bank-size", la.bank_size);
  std::uint64_t la_seed = 0;
  auto* la_seed_opt = law->add_option("--seed", la_seed);
  law->add_option("--output", la.output);

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "potential/transform/density grids");
  transform->add_option("--mode", ta.mode, "potential|gamma|density");
  transform->add_option("--input", ta.input, "spectrum.csv to read atoms from");
  transform->add_option("--ensemble", ta.ensemble);
  transform->add_option("--n", ta.n);
  transform->add_option("--alpha", ta.alpha);
  transform->add_option("--grid", ta.grid, "lo:hi:step (both axes)");
  transform->add_option("--t", ta.t_schedule, "t schedule, comma separated");
  std::uint64_t ta_seed = 0;
  auto* ta_seed_opt = transform->add_option("--seed", ta_seed);
  transform->add_option("--output", ta.output);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", va.suite)->required();
  verify->add_option("--n", va.n);
  verify->add_option("--replicas", va.replicas);
  verify->add_option("--alpha", va.alpha);
  std::uint64_t va_seed = 0;
  auto* va_seed_opt = verify->add_option("--seed", va_seed);
  verify->add_option("--out-dir", va.out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  set_default_threads(threads);

  try {
    if (*sample) {
      if (*sa_seed_opt) sa.seed = sa_seed;
      return cmd_sample(sa);
    }
    if (*law) {
      if (*la_seed_opt) la.seed = la_seed;
      return cmd_law(la);
    }
    if (*transform) {
      if (*ta_seed_opt) ta.seed = ta_seed;
      return cmd_transform(ta);
    }
    if (*verify) {
      if (*va_seed_opt) va.seed = va_seed;
      return cmd_verify(va);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFail;
  }
  return kExitUsage;
}
