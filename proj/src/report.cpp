#include "qclab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "qclab/identities.hpp"
#include "qclab/rng.hpp"

namespace qclab {

namespace {

constexpr double pi = std::numbers::pi;
const cplx two_pi_i(0, 2 * pi);

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double parse_num(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::nan("");
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc()) fail(Errc::io, "bad number in report: " + s);
  return v;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

const char* header_line = "schema_version,identity,params,value,defect,tolerance,pass";

// Suite entries ------------------------------------------------------------------

struct Job {
  std::string name;
  nlohmann::json params;
  double tolerance;
  bool has_tolerance;
};

using Runner = std::function<std::vector<VerificationReport>(const Job&, const LipschitzDomain&, std::uint64_t)>;

double tol_or(const Job& j, double fallback) { return j.has_tolerance ? j.tolerance : fallback; }

template <class T>
T get(const nlohmann::json& p, const char* key, T fallback) {
  return p.contains(key) ? p.at(key).get<T>() : fallback;
}

VerificationReport make(const std::string& id, nlohmann::json params, double value, double defect, double tol) {
  return {id, std::move(params), value, defect, tol, defect <= tol};
}

LipschitzDomain unit_disk(int samples = 4096) {
  return LipschitzDomain::parametric("circle", {{"radius", 1.0}}, samples);
}

std::vector<VerificationReport> run_binomial(const Job& job, const LipschitzDomain&, std::uint64_t) {
  const int hi = get(job.params, "max", 12);
  const std::string range = get<std::string>(job.params, "range", "full");
  if (range != "full" && range != "hypothesis") fail(Errc::invalid_argument, "binomial range is full or hypothesis");
  int checked = 0, failures = 0;
  nlohmann::json first = nlohmann::json::array();
  for (int m1 = 0; m1 <= hi; ++m1)
    for (int m2 = 0; m2 <= hi; ++m2)
      for (int a1 = 0; a1 <= hi; ++a1) {
        if (range == "hypothesis" && a1 > m1 + m2 - 2 && m1 > 0 && m2 > 0) continue;
        ++checked;
        const BinomialPair p = binomial_identity(m1, m2, a1);
        if (p.lhs != p.rhs) {
          ++failures;
          if (first.size() < 5) first.push_back({m1, m2, a1});
        }
      }
  nlohmann::json prm = {{"max", hi}, {"range", range}, {"checked", checked}, {"first_failures", first}};
  return {make("binomial", prm, failures, failures, tol_or(job, 0.0))};
}

std::vector<VerificationReport> run_h_disk(const Job& job, const LipschitzDomain&, std::uint64_t seed) {
  const int nodes = get(job.params, "nodes", 4096), points = get(job.params, "points", 8);
  const ContourQuadrature q(unit_disk(), nodes);
  Rng rng(seed, "h_disk");
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const cplx z = std::polar(rng.uniform(0.0, 0.8), rng.uniform(0.0, 2 * pi));
    worst = std::max(worst, std::abs(h_function(q, 1, z) + two_pi_i * std::conj(z)));
  }
  return {make("h_disk", {{"nodes", nodes}, {"points", points}}, worst, worst, tol_or(job, 1e-8))};
}

std::vector<VerificationReport> run_kernel_disk(const Job& job, const LipschitzDomain&, std::uint64_t) {
  const int nodes = get(job.params, "nodes", 4096);
  const ContourQuadrature q(unit_disk(), nodes);
  // Every admissible kernel vanishes on a disk (no residue at infinity); K_(1,0,1) does not.
  const double a = std::abs(kernel_K(q, {3, 1, 1}, 0.5, -0.3));
  const cplx xi(0.1, -0.4);
  const double b = std::abs(kernel_K(q, {1, 0, 1}, 0.5, xi) - two_pi_i * std::conj(xi));
  const double tol = tol_or(job, 1e-8);
  return {make("kernel_disk", {{"nodes", nodes}, {"m", {3, 1, 1}}}, a, a, tol),
          make("kernel_disk", {{"nodes", nodes}, {"m", {1, 0, 1}}}, b, b, tol)};
}

std::vector<VerificationReport> run_kernel_expansion(const Job& job, const LipschitzDomain& dom, std::uint64_t seed) {
  const int nodes = get(job.params, "nodes", 8192), pairs = get(job.params, "pairs", 20);
  const int max_order = get(job.params, "max_order", 8);
  const double rmin = get(job.params, "rmin", 0.2), rmax = get(job.params, "rmax", 0.5);
  const ContourQuadrature q(dom, nodes);
  const cplx c = dom.centroid();
  std::vector<VerificationReport> out;
  for (int m1 = 3; m1 <= max_order; ++m1)
    for (int m2 = 1; m1 + m2 + 1 <= max_order; ++m2)
      for (int m3 = 1; m1 + m2 + m3 <= max_order; ++m3) {
        const MultiIndexM m{m1, m2, m3};
        if (!m.admissible()) continue;
        Rng rng(seed, "kernel_expansion/" + std::to_string(m1) + std::to_string(m2) + std::to_string(m3));
        double worst = 0.0;
        for (int t = 0; t < pairs; ++t) {
          const cplx z = c + std::polar(rng.uniform(rmin, rmax), rng.uniform(0, 2 * pi));
          cplx xi;
          do xi = c + std::polar(rng.uniform(rmin, rmax), rng.uniform(0, 2 * pi));
          while (std::abs(z - xi) < 0.1);
          worst = std::max(worst, kernel_expansion_defect(q, m, z, xi).defect);
        }
        out.push_back(make("kernel_expansion", {{"m", {m1, m2, m3}}, {"pairs", pairs}, {"nodes", nodes}}, worst, worst,
                           tol_or(job, 1e-5)));
      }
  return out;
}

std::vector<VerificationReport> run_derivative_identity(const Job& job, const LipschitzDomain& dom,
                                                        std::uint64_t seed) {
  const int nodes = get(job.params, "nodes", 8192), n = get(job.params, "resolution", 1024);
  const double hw = get(job.params, "half_width", 4.0), depth = get(job.params, "depth", 0.3);
  const int probes = get(job.params, "probes", 40), m3_max = get(job.params, "m3_max", 3);
  const std::string mask = get<std::string>(job.params, "mask", "area_weighted");
  if (mask != "sharp" && mask != "area_weighted") fail(Errc::invalid_argument, "mask is sharp or area_weighted");
  const MaskKind kind = mask == "sharp" ? MaskKind::sharp : MaskKind::area_weighted;
  const ContourQuadrature q(dom, nodes);
  const GridSpec g = make_grid(dom.centroid(), hw, n);
  const std::vector<cplx> pts = interior_probes(dom, g, probes, depth, seed);
  std::vector<VerificationReport> out;
  for (int m3 = 1; m3 <= m3_max; ++m3)
    for (int j = 0; j <= m3; ++j) {
      const DerivativeIdentity r = derivative_identity_defect(q, m3, j, pts, g, kind);
      out.push_back(make("derivative_identity",
                         {{"m3", m3}, {"j", j}, {"resolution", n}, {"mask", mask},
                          {"constant", {r.constant.real(), r.constant.imag()}}},
                         r.defect, r.defect, tol_or(job, j == 0 ? 1e-6 : 1e-2)));
    }
  return out;
}

std::vector<VerificationReport> run_plemelj(const Job& job, const LipschitzDomain& dom, std::uint64_t seed) {
  const int nodes = get(job.params, "nodes", 8192), points = get(job.params, "points", 8);
  const double eps = get(job.params, "eps", 1e-3);
  const int m3_max = get(job.params, "m3_max", 3);
  const ContourQuadrature q(dom, nodes);
  Rng rng(seed, "plemelj");
  const cplx xi = dom.centroid() + std::polar(rng.uniform(0.0, 0.3 * dom.inradius_estimate()), rng.uniform(0, 2 * pi));
  std::vector<double> ts;
  for (int i = 0; i < points; ++i) ts.push_back(dom.length() * (i + rng.uniform()) / points);
  std::vector<VerificationReport> out;
  for (int m3 = 0; m3 <= m3_max; ++m3) {
    double worst = 0.0;
    for (double t : ts) worst = std::max(worst, plemelj_jump(q, m3, xi, t, eps).error());
    out.push_back(
        make("plemelj", {{"m3", m3}, {"eps", eps}, {"nodes", nodes}, {"points", points}}, worst, worst, tol_or(job, 1e-2)));
  }
  return out;
}

std::vector<VerificationReport> run_taylor_exponent(const Job& job, const LipschitzDomain& dom, std::uint64_t) {
  const int m = get(job.params, "m", 2), n = get(job.params, "n", 1), j = get(job.params, "j", 1);
  const double p = get(job.params, "p", 4.0);
  const int nodes = get(job.params, "nodes", 8192);
  const std::vector<double> radii = get(job.params, "radii", std::vector<double>{0.2, 0.1, 0.05, 0.025});
  const std::vector<double> zc = get(job.params, "z", std::vector<double>{0.1, 0.05});
  const cplx z = dom.centroid() + cplx(zc.at(0), zc.at(1));
  const ContourQuadrature q(dom, nodes);
  const int m3 = m + 1, M = m + n;
  const double target = m + n - j + (1.0 - 2.0 / p) - 0.2;
  const ExponentFit fit = taylor_remainder_exponent(q, m3, M, j, z, radii);
  const double shortfall = std::max(0.0, target - fit.slope);
  return {make("taylor_exponent", {{"m", m}, {"n", n}, {"j", j}, {"p", p}, {"m3", m3}, {"M", M}, {"target", target}},
               fit.slope, shortfall, tol_or(job, 0.0))};
}

std::vector<VerificationReport> run_radial_vanish(const Job& job, const LipschitzDomain&, std::uint64_t) {
  const int n = get(job.params, "resolution", 1024), m_max = get(job.params, "m_max", 4);
  const double hw = get(job.params, "half_width", 4.0);
  const GridSpec g = make_grid(0.0, hw, n);
  const std::vector<std::pair<std::string, std::function<double(double)>>> profiles{
      {"disk", [](double r) { return r < 1.0 ? 1.0 : 0.0; }},
      {"double_disk", [](double r) { return r < 2.0 ? 1.0 : 0.0; }},
      {"taper", [](double r) { return r <= 1.0 ? 1.0 : r >= 1.9 ? 0.0 : 1.0 - smooth_step((r - 1.0) / 0.9); }}};
  std::vector<VerificationReport> out;
  for (const auto& [name, prof] : profiles)
    for (int m = 1; m <= m_max; ++m) {
      const double s = radial_vanish(prof, m, g);
      out.push_back(make("radial_vanish", {{"profile", name}, {"m", m}, {"resolution", n}}, s, s, tol_or(job, 5e-2)));
    }
  return out;
}

std::vector<VerificationReport> run_green(const Job& job, const LipschitzDomain&, std::uint64_t) {
  auto zero = [](cplx) { return cplx(0.0); };
  auto one = [](cplx) { return cplx(1.0); };
  const WirtingerFunction fz{[](cplx z) { return z; }, one, zero};
  const WirtingerFunction none{zero, zero, zero};
  const WirtingerFunction z2{[](cplx z) { return z * z; }, [](cplx z) { return 2.0 * z; }, zero};
  const WirtingerFunction zbar{[](cplx z) { return std::conj(z); }, zero, one};
  const double d1 = green_defect(fz, none, ContourQuadrature(unit_disk(65536), 4096), make_grid(0.0, 1.25, 512));
  const LipschitzDomain sq = LipschitzDomain::polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const double d2 =
      green_defect(z2, zbar, ContourQuadrature(sq, 4096), make_grid(cplx(0.5, 0.5), 0.75, 1024));
  return {make("green", {{"domain", "unit_disk"}, {"f", "z"}, {"g", "0"}}, d1, d1, tol_or(job, 1e-6)),
          make("green", {{"domain", "unit_square"}, {"f", "z^2"}, {"g", "conj z"}}, d2, d2, tol_or(job, 1e-5))};
}

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> r{
      {"binomial", run_binomial},
      {"h_disk", run_h_disk},
      {"kernel_disk", run_kernel_disk},
      {"kernel_expansion", run_kernel_expansion},
      {"derivative_identity", run_derivative_identity},
      {"plemelj", run_plemelj},
      {"taylor_exponent", run_taylor_exponent},
      {"radial_vanish", run_radial_vanish},
      {"green", run_green},
  };
  return r;
}

}  // namespace

void write_reports_csv(std::ostream& os, const std::vector<VerificationReport>& reports, bool header) {
  if (header) os << header_line << "\n";
  for (const auto& r : reports)
    os << report_schema_version << ',' << r.identity << ',' << quote(r.params.dump()) << ',' << num(r.value) << ','
       << num(r.defect) << ',' << num(r.tolerance) << ',' << (r.pass ? "true" : "false") << "\n";
}

void append_reports_csv(const std::string& path, const std::vector<VerificationReport>& reports) {
  bool fresh = true;
  {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    fresh = !in || in.tellg() == 0;
  }
  std::ofstream os(path, std::ios::app | std::ios::binary);
  if (!os) fail(Errc::io, "cannot open " + path);
  write_reports_csv(os, reports, fresh);
}

std::vector<VerificationReport> read_reports_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != header_line) fail(Errc::io, path + " is not a verification report");
  std::vector<VerificationReport> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == header_line) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) fail(Errc::io, "malformed report row in " + path);
    if (f[0] != std::to_string(report_schema_version)) fail(Errc::io, "unsupported report schema " + f[0]);
    VerificationReport r;
    r.identity = f[1];
    try {
      r.params = nlohmann::json::parse(f[2]);
    } catch (const nlohmann::json::exception&) {
      fail(Errc::io, "malformed params in " + path);
    }
    r.value = parse_num(f[3]);
    r.defect = parse_num(f[4]);
    r.tolerance = parse_num(f[5]);
    r.pass = f[6] == "true";
    out.push_back(std::move(r));
  }
  return out;
}

const std::vector<std::string>& registered_identities() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

nlohmann::json default_suite() {
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& name : registered_identities()) ids.push_back({{"name", name}});
  return {{"domain", {{"type", "parametric"}, {"fn", "perturbed_circle"}, {"params", {{"radius", 1.0}, {"amplitude", 0.3}}}}},
          {"identities", ids}};
}

std::vector<VerificationReport> run_suite(const nlohmann::json& manifest, std::uint64_t seed, int threads) {
  std::vector<Job> jobs;
  LipschitzDomain dom = LipschitzDomain::from_json(manifest.contains("domain") ? manifest.at("domain")
                                                                               : default_suite().at("domain"));
  const nlohmann::json ids = manifest.contains("identities") ? manifest.at("identities") : default_suite().at("identities");
  if (!ids.is_array()) fail(Errc::invalid_argument, "identities must be an array");
  for (const auto& e : ids) {
    Job j;
    try {
      j.name = e.is_string() ? e.get<std::string>() : e.at("name").get<std::string>();
      j.params = e.is_object() && e.contains("params") ? e.at("params") : nlohmann::json::object();
      j.has_tolerance = e.is_object() && e.contains("tolerance");
      j.tolerance = j.has_tolerance ? e.at("tolerance").get<double>() : 0.0;
    } catch (const nlohmann::json::exception& ex) {
      fail(Errc::invalid_argument, std::string("malformed identity entry: ") + ex.what());
    }
    if (!registry().count(j.name)) fail(Errc::invalid_argument, "unknown identity '" + j.name + "'");
    jobs.push_back(std::move(j));
  }

  std::vector<std::vector<VerificationReport>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  auto run = [&](std::size_t i) {
    try {
      const Job& j = jobs[i];
      results[i] = registry().at(j.name)(j, dom, seed);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = static_cast<std::size_t>(std::max(1, threads));
  for (std::size_t start = 0; start < jobs.size(); start += workers) {
    const std::size_t stop = std::min(jobs.size(), start + workers);
    if (workers == 1) {
      run(start);
      continue;
    }
    std::vector<std::thread> pool;
    for (std::size_t i = start; i < stop; ++i) pool.emplace_back(run, i);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<VerificationReport> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace qclab
