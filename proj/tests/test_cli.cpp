#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RMT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long line_count(const std::string& s) {
  long n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("rmt_cli_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("sample writes row-complete csv files and a config echo") {
  TempDir dir("sample");
  const int rc = run_cli("sample --ensemble ginibre-complex --n 4 --seed 1 --out-dir " +
                         dir.path.string());
  CHECK(rc == 0);
  const std::string spectrum = slurp(dir.path / "spectrum.csv");
  CHECK(line_count(spectrum) == 5);  // header + 4 eigenvalues
  CHECK(spectrum.rfind("re,im\n", 0) == 0);
  const std::string singular = slurp(dir.path / "singular.csv");
  CHECK(line_count(singular) == 5);
  CHECK(singular.rfind("s\n", 0) == 0);
  const std::string cfg = slurp(dir.path / "sample.config.json");
  CHECK(cfg.find("\"seed\": 1") != std::string::npos);
  CHECK(cfg.find("\"ensemble\": \"ginibre-complex\"") != std::string::npos);
}

TEST_CASE("sample is byte-identical across reruns and thread counts") {
  TempDir d1("det1"), d2("det2"), d3("det3");
  CHECK(run_cli("sample --ensemble bernoulli --n 24 --seed 9 --out-dir " + d1.path.string()) == 0);
  CHECK(run_cli("sample --ensemble bernoulli --n 24 --seed 9 --out-dir " + d2.path.string()) == 0);
  CHECK(run_cli("--threads 2 sample --ensemble bernoulli --n 24 --seed 9 --out-dir " +
                d3.path.string()) == 0);
  CHECK(slurp(d1.path / "spectrum.csv") == slurp(d2.path / "spectrum.csv"));
  CHECK(slurp(d1.path / "singular.csv") == slurp(d2.path / "singular.csv"));
  CHECK(slurp(d1.path / "spectrum.csv") == slurp(d3.path / "spectrum.csv"));
}

TEST_CASE("unknown ensemble and unknown suite exit 2") {
  TempDir dir("err");
  CHECK(run_cli("sample --ensemble wishart --n 4 --out-dir " + dir.path.string()) == 2);
  CHECK(run_cli("verify --suite nonsense --out-dir " + dir.path.string()) == 2);
  CHECK(run_cli("law --name nonsense --output " + (dir.path / "x.csv").string()) == 2);
}

TEST_CASE("unwritable output path exits 3") {
  CHECK(run_cli("sample --ensemble bernoulli --n 4 --out-dir /proc/nope") == 3);
}

TEST_CASE("law table: quarter-circular starts at 2/pi") {
  TempDir dir("law");
  const fs::path out = dir.path / "q.csv";
  CHECK(run_cli("law --name quarter-circular --grid 0:2:0.01 --output " + out.string()) == 0);
  const std::string body = slurp(out);
  CHECK(line_count(body) == 202);  // header + 201 rows
  std::istringstream in(body);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "x,density");
  CHECK(first.rfind("0,0.6366", 0) == 0);
  CHECK(fs::exists(dir.path / "q.csv.config.json"));
}

TEST_CASE("finite-variance nu-z table matches the quarter circular law") {
  TempDir dir("nuz");
  const fs::path out = dir.path / "nu.csv";
  CHECK(run_cli("law --name nu-z --z 0 --alpha-mode finite-variance --grid 0.1:1.9:0.2 "
                "--output " + out.string()) == 0);
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double x = std::stod(line.substr(0, comma));
    const double d = std::stod(line.substr(comma + 1));
    const double want = std::sqrt(4.0 - x * x) / M_PI;
    CHECK(std::abs(d - want) <= 1e-3);
  }
}

TEST_CASE("transform density grid on a tiny ensemble runs end to end") {
  TempDir dir("density");
  const fs::path out = dir.path / "d.csv";
  const int rc = run_cli("transform --mode density --ensemble ginibre-complex --n 40 "
                         "--grid -1.5:1.5:0.25 --t 0.2 --seed 3 --output " + out.string());
  CHECK(rc == 0);
  const std::string body = slurp(out);
  CHECK(body.rfind("re,im,density\n", 0) == 0);
  CHECK(line_count(body) == 1 + 13 * 13);
  CHECK(fs::exists(dir.path / "d.csv.config.json"));
}

TEST_CASE("transform rejects malformed csv with a line number") {
  TempDir dir("badcsv");
  const fs::path bad = dir.path / "bad.csv";
  std::ofstream(bad) << "re,im\n1.0,0.0\noops\n";
  const int rc = run_cli("transform --mode potential --input " + bad.string() +
                         " --grid 0:1:0.5 --output " + (dir.path / "p.csv").string());
  CHECK(rc == 2);
}

TEST_CASE("transform potential of a known disc sample hits -log 2 at z=2") {
  TempDir dir("pot");
  const fs::path spec = dir.path / "spectrum.csv";
  // 2000 atoms uniform on the unit disc, written by hand
  std::ofstream out(spec);
  out << "re,im\n";
  std::srand(12345);
  for (int k = 0; k < 2000; ++k) {
    const double r = std::sqrt(static_cast<double>(std::rand()) / RAND_MAX);
    const double th = 2.0 * M_PI * (static_cast<double>(std::rand()) / RAND_MAX);
    out << r * std::cos(th) << "," << r * std::sin(th) << "\n";
  }
  out.close();
  const fs::path csv = dir.path / "u.csv";
  CHECK(run_cli("transform --mode potential --input " + spec.string() +
                " --grid 0:2:1 --output " + csv.string()) == 0);
  // last row is the lattice point (2, 2); find the row for (2, 0)
  std::istringstream in(slurp(csv));
  std::string line;
  bool found = false;
  while (std::getline(in, line)) {
    if (line.rfind("2,0,", 0) == 0) {
      const double u = std::stod(line.substr(4));
      CHECK(std::abs(u - (-std::log(2.0))) <= 0.05);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("verify identities suite passes and writes gof reports") {
  TempDir dir("verify");
  const int rc = run_cli("verify --suite identities --n 50 --seed 7 --out-dir " +
                         dir.path.string());
  CHECK(rc == 0);
  CHECK(fs::exists(dir.path / "identity-weyl-products.json"));
  const std::string r = slurp(dir.path / "identity-weyl-products.json");
  CHECK(r.find("\"pass\": true") != std::string::npos);
  CHECK(fs::exists(dir.path / "verify-identities.config.json"));
}

TEST_CASE("environment seed is honored when --seed is absent") {
  TempDir d1("env1"), d2("env2");
  const std::string base = "sample --ensemble bernoulli --n 8 --out-dir ";
  const std::string cli = RMT_CLI_PATH;
  CHECK(std::system(("RMT_DEFAULT_SEED=4242 " + cli + " " + base + d1.path.string() +
                     " > /dev/null 2>&1").c_str()) == 0);
  CHECK(std::system((cli + " " + base + d2.path.string() + " --seed 4242 > /dev/null 2>&1")
                        .c_str()) == 0);
  CHECK(slurp(d1.path / "spectrum.csv") == slurp(d2.path / "spectrum.csv"));
}
