#include "qclab/beltrami.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qclab/masks.hpp"
#include "qclab/rng.hpp"
#include "qclab/singular_ops.hpp"

namespace qclab {

namespace {

double num(const nlohmann::json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

// L^2 over the whole grid.
double norm2(const ComplexField& f) { return l2_norm(f); }

ComplexField sharp(const BeltramiProblem& p) { return domain_mask(p.dom, p.mu.spec()); }

// mu chi B(chi g)
ComplexField apply_T(const BeltramiProblem& p, const ComplexField& chi, const ComplexField& g) {
  return p.mu * (chi * beurling(chi * g));
}

// chi B(chi g), m times
ComplexField localized_power(const ComplexField& chi, const ComplexField& g, int m) {
  ComplexField out = chi * g;
  for (int i = 0; i < m; ++i) out = chi * beurling(out);
  return out;
}

}  // namespace

ComplexField mu_field(const nlohmann::json& spec, const LipschitzDomain& dom, const GridSpec& g) {
  const std::string family = spec.at("family").get<std::string>();
  const nlohmann::json prm = spec.value("params", nlohmann::json::object());
  const double a = num(prm, "amplitude", 0.3);
  const cplx c0 = dom.centroid();
  const cplx c(num(prm, "center_re", c0.real()), num(prm, "center_im", c0.imag()));
  const double r = num(prm, "radius", 0.5 * dom.inradius_estimate());
  auto bump = [&](cplx z) { return smooth_step(2.0 * (1.0 - std::norm(z - c) / (r * r))); };
  if (family == "mollified_indicator")
    return a * domain_mask(dom, g, MaskKind::mollified, num(prm, "collar", 0.0));
  if (family == "constant") return a * domain_mask(dom, g);
  if (family == "bump") return sample([&](cplx z) { return cplx(a * bump(z)); }, g);
  if (family == "jump") {
    const double cut = num(prm, "cut", c.real());
    return sample([&](cplx z) { return cplx(a * bump(z) * (z.real() > cut ? 0.5 : 1.0)); }, g);
  }
  fail(Errc::invalid_argument, "unknown mu family: " + family);
}

BeltramiProblem make_problem(ComplexField mu, const LipschitzDomain& dom, SobolevParams params) {
  const double k = max_abs(mu);
  if (!(k < 1.0)) fail(Errc::not_contractive, "||mu||_inf = " + std::to_string(k) + " is not below 1");
  const GridSpec& g = mu.spec();
  const std::vector<char> in = membership(dom, g);
  const double slack = 2.0 * g.spacing();
  for (int j = 0; j < g.resolution; ++j)
    for (int i = 0; i < g.resolution; ++i) {
      const std::size_t idx = g.index(j, i);
      if (in[idx] || mu[idx] == 0.0) continue;
      if (dom.boundary_distance_capped(g.point(j, i), 2 * slack) > slack)
        fail(Errc::invalid_argument, "mu is not supported in the closed domain");
    }
  return BeltramiProblem{std::move(mu), dom, k, (1 + k) / (1 - k), params};
}

NeumannResult neumann_solve(const BeltramiProblem& prob, double tol, int kmax) {
  if (!(prob.k < 1.0)) fail(Errc::not_contractive, "||mu||_inf must be below 1");
  if (kmax < 1) fail(Errc::invalid_argument, "kmax must be positive");
  NeumannResult out{prob.mu, {}, false, 0.0};
  double increment = norm2(prob.mu);
  for (int k = 0; k < kmax; ++k) {
    ComplexField next = prob.mu * beurling(out.h) + prob.mu;
    const double residual = norm2(next - out.h);
    out.trace.push_back({k, increment, residual});
    if (residual <= tol) {
      out.converged = true;
      break;
    }
    out.h = std::move(next);
    increment = residual;
  }
  if (!out.converged)
    warn("neumann series stopped at kmax = " + std::to_string(kmax) + " with residual " +
         std::to_string(out.trace.back().residual));
  const GridSpec& g = prob.mu.spec();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (prob.mu[i] == 0.0) out.leakage += std::abs(out.h[i]) * g.cell_area();
  return out;
}

double observed_ratio(const std::vector<NeumannStep>& trace, int after) {
  double worst = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i].k > after && trace[i - 1].increment > 0)
      worst = std::max(worst, trace[i].increment / trace[i - 1].increment);
  return worst;
}

PrincipalSolution principal_solution(const BeltramiProblem& prob, const NeumannResult& sol) {
  require_same_grid(prob.mu, sol.h);
  const GridSpec& g = prob.mu.spec();
  PrincipalSolution out{sol.h, sol.h, sol.h, sol.h, sol.trace, 0.0, 0.0, 0.0};
  const ComplexField ch = cauchy(sol.h);
  out.f = ch + coordinate_field(g);
  const Wirtinger w = wirtinger(ch);
  out.dbar_f = w.dbar + mean(sol.h);
  out.d_f = w.d + 1.0;
  out.beltrami_residual = norm2(out.dbar_f - prob.mu * out.d_f);
  out.d_norm = norm2(out.d_f);

  double edge = 0.0, all = 0.0;
  const double outer = 0.9 * g.half_width;
  for (int j = 0; j < g.resolution; ++j)
    for (int k = 0; k < g.resolution; ++k) {
      const double v = std::abs(ch(j, k));
      const cplx d = g.point(j, k) - g.center;
      all = std::max(all, v);
      if (std::max(std::abs(d.real()), std::abs(d.imag())) >= outer) edge = std::max(edge, v);
    }
  out.far_field = all > 0 ? edge / all : 0.0;
  return out;
}

double pm_identity_defect(const BeltramiProblem& prob, int m, const ComplexField& g) {
  if (m < 1) fail(Errc::invalid_argument, "P_m needs m >= 1");
  const ComplexField chi = sharp(prob);
  auto T = [&](const ComplexField& x) { return apply_T(prob, chi, x); };
  auto Pm = [&](const ComplexField& x) {
    ComplexField term = x, acc = chi * x;
    for (int k = 1; k < m; ++k) {
      term = T(term);
      acc = acc + term;
    }
    return acc;
  };
  ComplexField tm = g;
  for (int k = 0; k < m; ++k) tm = T(tm);
  const ComplexField rhs = chi * g - tm;
  const ComplexField pg = Pm(g);
  const double after = norm2(Pm(chi * g - T(g)) - rhs);
  const double before = norm2(chi * pg - T(pg) - rhs);
  return std::max(after, before);
}

Factorization factorization_terms(const BeltramiProblem& prob, int m, const ComplexField& g) {
  if (m < 1) fail(Errc::invalid_argument, "factorization needs m >= 1");
  const ComplexField chi = sharp(prob);
  const ComplexField mum = pow(prob.mu, m);
  const ComplexField bm = chi * beurling_power(chi * g, m);  // (B^m)_Omega g
  const ComplexField bom = localized_power(chi, g, m);     // (B_Omega)^m g
  ComplexField tm = g;
  for (int k = 0; k < m; ++k) tm = apply_T(prob, chi, tm);
  Factorization out{chi * g - mum * bm, bm - bom, mum * bom - tm, 0.0};
  out.defect = norm2(chi * g - tm - out.a1 - mum * out.a2 - out.a3);
  return out;
}

ContractionEstimate contraction_estimate(const BeltramiProblem& prob, int m, int trials, std::uint64_t seed) {
  if (trials < 5) fail(Errc::invalid_argument, "contraction estimate needs at least 5 trials");
  if (m < 1) fail(Errc::invalid_argument, "contraction estimate needs m >= 1");
  ContractionEstimate out;
  const GridSpec& g = prob.mu.spec();
  const ComplexField chi = sharp(prob);
  const ComplexField mum = pow(prob.mu, m), mum_bar = conj(mum);
  auto A = [&](const ComplexField& x) { return mum * (chi * beurling_power(chi * x, m)); };
  auto At = [&](const ComplexField& x) { return chi * beurling_power(chi * (mum_bar * x), -m); };
  if (max_abs(mum) == 0.0) return out;

  Rng rng(seed, "contraction");
  std::vector<cplx> v(g.size());
  for (auto& x : v) x = cplx(rng.normal(), rng.normal());
  ComplexField x = chi * ComplexField(g, std::move(v));
  for (int it = 0; it < trials; ++it) {
    const double nx = norm2(x);
    if (nx == 0) break;
    const ComplexField ax = A(x);
    out.l2 = std::max(out.l2, norm2(ax) / nx);
    x = At(ax) * cplx(1.0 / nx);
  }

  // Smooth trial fields: a few low Fourier modes under the mollified mask.
  const ComplexField soft = domain_mask(prob.dom, g, MaskKind::mollified, 8 * g.spacing());
  const cplx c = prob.dom.centroid();
  const double scale = prob.dom.diameter();
  for (int t = 0; t < trials; ++t) {
    Rng r = rng.child("trial" + std::to_string(t));
    cplx a[3];
    double kx[3], ky[3];
    for (int i = 0; i < 3; ++i) {
      a[i] = cplx(r.normal(), r.normal());
      kx[i] = r.uniform(-6, 6) / scale;
      ky[i] = r.uniform(-6, 6) / scale;
    }
    const ComplexField trial = soft * sample([&](cplx z) {
                                 cplx s = 0.0;
                                 for (int i = 0; i < 3; ++i)
                                   s += a[i] * std::exp(cplx(0, kx[i] * (z - c).real() + ky[i] * (z - c).imag()));
                                 return s;
                               }, g);
    const double den = sobolev_norm(trial, prob.dom, prob.params).value;
    if (den > 0) out.sobolev = std::max(out.sobolev, sobolev_norm(A(trial), prob.dom, prob.params).value / den);
  }
  return out;
}

std::vector<double> RegularityTable::h_ratios() const {
  std::vector<double> r;
  for (std::size_t i = 1; i < rows.size(); ++i) r.push_back(rows[i].h.derivative / rows[i - 1].h.derivative);
  return r;
}

std::vector<double> RegularityTable::f_ratios() const {
  std::vector<double> r;
  for (std::size_t i = 1; i < rows.size(); ++i) r.push_back(rows[i].f.derivative / rows[i - 1].f.derivative);
  return r;
}

RegularityTable regularity_table(const nlohmann::json& mu_spec, const LipschitzDomain& dom, const SobolevParams& prm,
                                 const std::vector<int>& resolutions, double half_width, double tol, int kmax,
                                 int threads) {
  if (resolutions.size() < 3) fail(Errc::insufficient_data, "regularity table needs at least 3 resolutions");
  RegularityTable table;
  table.rows.resize(resolutions.size());
  std::vector<std::exception_ptr> errors(resolutions.size());
  auto run = [&](std::size_t i) {
    try {
      const GridSpec g = make_grid(dom.centroid(), half_width, resolutions[i]);
      const BeltramiProblem prob = make_problem(mu_field(mu_spec, dom, g), dom, prm);
      const NeumannResult sol = neumann_solve(prob, tol, kmax);
      const PrincipalSolution ps = principal_solution(prob, sol);
      RegularityRow& row = table.rows[i];
      row.resolution = resolutions[i];
      row.iterations = static_cast<int>(sol.trace.size());
      row.residual = sol.trace.back().residual;
      row.h = sobolev_norm(sol.h, dom, prm);
      row.f = sobolev_norm(ps.f, dom, {prm.n + 1, prm.p});
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = static_cast<std::size_t>(std::max(1, threads));
  for (std::size_t start = 0; start < resolutions.size(); start += workers) {
    std::vector<std::thread> pool;
    const std::size_t stop = std::min(resolutions.size(), start + workers);
    if (workers == 1) {
      run(start);
    } else {
      for (std::size_t i = start; i < stop; ++i) pool.emplace_back(run, i);
      for (auto& t : pool) t.join();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return table;
}

nlohmann::json to_json(const RegularityTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"resolution", r.resolution},
                    {"iterations", r.iterations},
                    {"residual", r.residual},
                    {"h_norm", r.h.value},
                    {"h_derivative", r.h.derivative},
                    {"f_norm", r.f.value},
                    {"f_derivative", r.f.derivative},
                    {"collar_measure", r.h.collar_measure}});
  return {{"rows", rows}, {"h_ratios", t.h_ratios()}, {"f_ratios", t.f_ratios()}};
}

}  // namespace qclab
