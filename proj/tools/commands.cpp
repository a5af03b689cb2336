#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>

#include <json.hpp>

#include "qclab/beltrami.hpp"
#include "qclab/field_io.hpp"
#include "qclab/norms.hpp"
#include "qclab/report.hpp"
#include "qclab/rng.hpp"
#include "qclab/whitney.hpp"

namespace qclab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot read manifest " + path);
  try {
    json m = json::parse(in);
    if (!m.is_object()) fail(Errc::invalid_argument, "manifest must be a JSON object");
    return m;
  } catch (const json::parse_error& e) {
    fail(Errc::invalid_argument, std::string("malformed manifest: ") + e.what());
  }
}

std::uint64_t seed_of(const Options& o, const json& m) {
  if (o.seed_given) return o.seed;
  return m.value("seed", std::uint64_t{0});
}

fs::path out_dir(const Options& o) {
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) fail(Errc::io, "cannot create output directory " + o.out);
  return fs::path(o.out);
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream os(p);
  if (!os) fail(Errc::io, "cannot write " + p.string());
  os << j.dump(2) << "\n";
}

LipschitzDomain domain_of(const json& m) {
  if (!m.contains("domain")) fail(Errc::invalid_argument, "manifest has no domain");
  return LipschitzDomain::from_json(m.at("domain"));
}

GridSpec grid_of(const json& m, const LipschitzDomain& dom, int resolution) {
  const double hw = m.value("half_width", dom.diameter());
  cplx c = dom.centroid();
  if (m.contains("center")) {
    const auto v = m.at("center").get<std::vector<double>>();
    if (v.size() != 2) fail(Errc::invalid_argument, "center is [x, y]");
    c = {v[0], v[1]};
  }
  return make_grid(c, hw, resolution);
}

}  // namespace

int exit_code(Errc c) {
  switch (c) {
    case Errc::not_contractive:
    case Errc::undefined_norm:
    case Errc::singular_system:
    case Errc::degenerate_probe:
    case Errc::accuracy:
    case Errc::empty_cover:
    case Errc::no_chain:
      return 3;
    default:
      return 2;
  }
}

// solve ---------------------------------------------------------------------------

int cmd_solve(const Options& o) {
  if (o.manifest.empty()) fail(Errc::invalid_argument, "solve needs --manifest");
  const json m = load_manifest(o.manifest);
  if (!m.contains("mu")) fail(Errc::invalid_argument, "manifest has no mu");
  const LipschitzDomain dom = domain_of(m);
  const SobolevParams prm{m.value("n", 1), m.value("p", 2.0)};
  const double tol = m.value("tol", 1e-10);
  const int kmax = m.value("kmax", 500);
  const GridSpec g = grid_of(m, dom, m.value("resolution", 256));
  const fs::path dir = out_dir(o);

  const BeltramiProblem prob = make_problem(mu_field(m.at("mu"), dom, g), dom, prm);
  const NeumannResult sol = neumann_solve(prob, tol, kmax);
  const PrincipalSolution ps = principal_solution(prob, sol);

  write_cfld1((dir / "h.cfld").string(), sol.h);
  write_cfld1((dir / "f.cfld").string(), ps.f);
  {
    std::ofstream os(dir / "trace.csv");
    if (!os) fail(Errc::io, "cannot write trace.csv");
    os << "k,increment,residual\n";
    os.precision(17);
    for (const auto& s : sol.trace) os << s.k << ',' << s.increment << ',' << s.residual << "\n";
  }
  const double f_minus_z = max_abs(ps.f - coordinate_field(g));
  json diag = {{"domain", dom.to_json()},
               {"mu", m.at("mu")},
               {"resolution", g.resolution},
               {"half_width", g.half_width},
               {"mu_sup", prob.k},
               {"K", prob.K},
               {"iterations", sol.trace.size()},
               {"converged", sol.converged},
               {"neumann_residual", sol.trace.empty() ? 0.0 : sol.trace.back().residual},
               {"observed_ratio", observed_ratio(sol.trace)},
               {"leakage", sol.leakage},
               {"beltrami_residual", ps.beltrami_residual},
               {"d_norm", ps.d_norm},
               {"relative_residual", ps.d_norm > 0 ? ps.beltrami_residual / ps.d_norm : 0.0},
               {"far_field", ps.far_field},
               {"max_f_minus_z", f_minus_z}};
  if (m.contains("resolutions")) {
    const auto res = m.at("resolutions").get<std::vector<int>>();
    diag["regularity"] = to_json(regularity_table(m.at("mu"), dom, prm, res, g.half_width, tol, kmax, o.threads));
  }
  write_json(dir / "diagnostics.json", diag);
  if (!sol.converged) {
    std::cerr << "solve: Neumann series did not reach tol " << tol << " in " << kmax << " iterations\n";
    return 1;
  }
  return 0;
}

// verify --------------------------------------------------------------------------

int cmd_verify(const Options& o) {
  const json m = o.manifest.empty() ? default_suite() : load_manifest(o.manifest);
  const std::uint64_t seed = seed_of(o, m);
  const std::vector<VerificationReport> reports = run_suite(m, seed, o.threads);
  const fs::path dir = out_dir(o);
  append_reports_csv((dir / "verification.csv").string(), reports);
  int failed = 0;
  for (const auto& r : reports) {
    if (r.pass) continue;
    ++failed;
    std::cerr << "FAIL " << r.identity << " " << r.params.dump() << " defect " << r.defect << " > " << r.tolerance
              << "\n";
  }
  std::cout << reports.size() - failed << "/" << reports.size() << " checks passed\n";
  return failed ? 1 : 0;
}

// whitney -------------------------------------------------------------------------

int cmd_whitney(const Options& o) {
  if (o.manifest.empty()) fail(Errc::invalid_argument, "whitney needs --manifest");
  const json m = load_manifest(o.manifest);
  const LipschitzDomain dom = domain_of(m);
  const double min_side = m.value("min_side", 1.0 / 32);
  const WhitneyCovering cov = whitney(dom, min_side, m.value("c_w", 1.0));
  const fs::path dir = out_dir(o);
  {
    std::ofstream os(dir / "covering.csv");
    if (!os) fail(Errc::io, "cannot write covering.csv");
    cov.write_csv(os);
  }
  const CoveringAudit a = cov.audit();
  const bool chains = m.value("chains", true);
  json out = {{"domain", dom.to_json()},
              {"min_side", min_side},
              {"c_w", cov.c_w()},
              {"cubes", cov.size()},
              {"q0", cov.q0()},
              {"min_dist_ratio", a.min_dist_ratio},
              {"max_dist_ratio", a.max_dist_ratio},
              {"max_neighbor_ratio", a.max_neighbor_ratio},
              {"partition_defect", a.partition_defect},
              {"collar_constant", a.collar_constant},
              {"overlap20", a.overlap20},
              {"q0_constant", a.q0_constant},
              {"disjoint", a.disjoint},
              {"connected", a.connected},
              {"distance_ok", a.distance_ok()},
              {"neighbor_ok", a.neighbor_ok()}};
  json census = json::object();
  for (const auto& [gen, count] : cov.census()) census[std::to_string(gen)] = count;
  out["census"] = census;
  bool pass = cov.size() > 0 && a.distance_ok() && a.neighbor_ok() && a.disjoint && a.connected;
  if (chains) {
    const ChainAudit c = audit_chains(cov);
    const ShadowAudit s = audit_shadows(cov, m.value("rho0", 5.0));
    out["chains"] = {{"pairs", c.pairs},         {"max_length_ratio", c.max_length_ratio},
                     {"far_min", c.far_min},     {"far_max", c.far_max},
                     {"close_min", c.close_min}, {"close_max", c.close_max},
                     {"neighbors_ok", c.neighbors_ok}};
    out["shadows"] = {{"rho0", s.rho0},
                      {"max_area_ratio", s.max_area_ratio},
                      {"containment", s.containment},
                      {"recalibrations", s.recalibrations}};
    pass = pass && c.neighbors_ok && s.containment;
  }
  out["pass"] = pass;
  write_json(dir / "audit.json", out);
  if (!pass) std::cerr << "whitney: covering audit failed, see audit.json\n";
  return pass ? 0 : 1;
}

// norms ---------------------------------------------------------------------------

namespace {

cplx complex_of(const json& v) {
  if (v.is_number()) return v.get<double>();
  const auto a = v.get<std::vector<double>>();
  if (a.size() != 2) fail(Errc::invalid_argument, "complex values are numbers or [re, im]");
  return {a[0], a[1]};
}

ComplexField field_of(const json& spec, const json& m, const LipschitzDomain& dom, std::uint64_t seed,
                      const fs::path& base) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "file") {
    fs::path p = spec.at("path").get<std::string>();
    if (p.is_relative()) p = base / p;
    return read_cfld1(p.string());
  }
  const GridSpec g = grid_of(m, dom, m.value("resolution", 256));
  if (kind == "constant") return ComplexField::constant(g, complex_of(spec.value("value", json(1.0))));
  if (kind == "monomial") {
    const int a = spec.value("a", 1), b = spec.value("b", 0);
    if (a < 0 || b < 0) fail(Errc::invalid_argument, "monomial exponents must be nonnegative");
    const cplx c = complex_of(spec.value("coefficient", json(1.0)));
    return sample([&](cplx z) { return c * std::pow(z, a) * std::pow(std::conj(z), b); }, g);
  }
  if (kind == "plane_waves") {
    const int count = spec.value("count", 4);
    const double kmax = spec.value("max_frequency", 4.0);
    Rng rng(seed, "plane_waves");
    std::vector<std::pair<cplx, cplx>> waves;
    for (int i = 0; i < count; ++i) {
      const cplx k(rng.uniform(-kmax, kmax), rng.uniform(-kmax, kmax));
      const cplx amp(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      waves.emplace_back(k, amp);
    }
    return sample(
        [&](cplx z) {
          cplx s = 0.0;
          for (const auto& [k, amp] : waves) s += amp * std::exp(cplx(0.0, k.real() * z.real() + k.imag() * z.imag()));
          return s;
        },
        g);
  }
  fail(Errc::invalid_argument, "unknown field kind: " + kind);
}

double p_of(const json& e) {
  const json& v = e.at("p");
  if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  const double p = v.get<double>();
  if (!(p >= 1.0)) fail(Errc::invalid_argument, "p must be at least 1");
  return p;
}

}  // namespace

int cmd_norms(const Options& o) {
  if (o.manifest.empty()) fail(Errc::invalid_argument, "norms needs --manifest");
  const json m = load_manifest(o.manifest);
  const LipschitzDomain dom = domain_of(m);
  const std::uint64_t seed = seed_of(o, m);
  if (!m.contains("field")) fail(Errc::invalid_argument, "manifest has no field");
  const ComplexField f = field_of(m.at("field"), m, dom, seed, fs::path(o.manifest).parent_path());
  const json norms = m.value("norms", json::array({{{"norm", "lp"}, {"p", 2.0}}}));
  json out = json::array();
  for (const auto& e : norms) {
    NormRecord r;
    r.norm = e.at("norm").get<std::string>();
    r.params = e;
    r.domain = dom.to_json();
    r.resolution = f.n();
    if (r.norm == "lp") {
      r.value = lp_norm(f, dom, p_of(e));
    } else if (r.norm == "sobolev") {
      const std::string form = e.value("form", "full");
      if (form != "full" && form != "axes") fail(Errc::invalid_argument, "sobolev form is full or axes");
      const SobolevNorm s =
          sobolev_norm(f, dom, {e.value("n", 1), p_of(e)}, form == "full" ? SobolevForm::full : SobolevForm::axes);
      r.value = s.value;
      r.collar_measure = s.collar_measure;
    } else if (r.norm == "holder") {
      r.value = holder_norm(f, dom, e.at("s").get<double>(), seed, e.value("pairs", 100000));
    } else {
      fail(Errc::invalid_argument, "unknown norm: " + r.norm);
    }
    out.push_back(r);
  }
  write_json(out_dir(o) / "norms.json", out);
  return 0;
}

// report --------------------------------------------------------------------------

int cmd_report(const Options& o) {
  const fs::path dir(o.out);
  if (!fs::is_directory(dir)) fail(Errc::io, "no such directory " + o.out);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  struct Tally {
    int rows = 0, failed = 0;
    double worst = 0.0;
    json worst_params;
  };
  std::map<std::string, Tally> by_id;
  json sources = json::array();
  int rows = 0, failed = 0;
  for (const auto& p : files) {
    {
      std::ifstream in(p);
      std::string first;
      std::getline(in, first);
      if (first.rfind("schema_version,", 0) != 0) continue;  // not a report (trace.csv, covering.csv)
    }
    const auto reports = read_reports_csv(p.string());
    sources.push_back(p.filename().string());
    for (const auto& r : reports) {
      Tally& t = by_id[r.identity];
      ++t.rows;
      ++rows;
      if (!r.pass) {
        ++t.failed;
        ++failed;
      }
      const double rel = r.tolerance > 0 ? r.defect / r.tolerance : r.defect;
      if (t.worst_params.is_null() || rel > t.worst) {
        t.worst = rel;
        t.worst_params = r.params;
      }
    }
  }
  if (sources.empty()) fail(Errc::io, "no verification reports in " + o.out);
  json ids = json::object();
  for (const auto& [name, t] : by_id)
    ids[name] = {{"rows", t.rows}, {"failed", t.failed}, {"worst_defect_over_tolerance", t.worst},
                 {"worst_params", t.worst_params}};
  write_json(dir / "summary.json",
             {{"schema_version", report_schema_version},
              {"sources", sources},
              {"rows", rows},
              {"failed", failed},
              {"identities", ids}});
  std::cout << rows - failed << "/" << rows << " report rows pass\n";
  return failed ? 1 : 0;
}

}  // namespace qclab::cli
