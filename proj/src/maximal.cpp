#include "qclab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace qclab {

BoxSums::BoxSums(const ComplexField& f) : g_(f.spec()), n_(f.n()), s_(static_cast<std::size_t>(n_ + 1) * (n_ + 1), 0.0) {
  const double a = g_.cell_area();
  const int w = n_ + 1;
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < n_; ++k)
      s_[(j + 1) * w + k + 1] = std::abs(f(j, k)) * a + s_[j * w + k + 1] + s_[(j + 1) * w + k] - s_[j * w + k];
}

void BoxSums::index_range(const Square& q, int& j0, int& j1, int& k0, int& k1) const {
  const double h = g_.spacing();
  auto lo = [&](double x, double c) {
    return std::clamp(static_cast<int>(std::ceil((x - c) / h - 1e-9)) + n_ / 2, 0, n_);
  };
  j0 = lo(q.corner.real(), g_.center.real());
  j1 = lo(q.corner.real() + q.side, g_.center.real());
  k0 = lo(q.corner.imag(), g_.center.imag());
  k1 = lo(q.corner.imag() + q.side, g_.center.imag());
}

double BoxSums::cells(int j0, int j1, int k0, int k1) const {
  if (j1 <= j0 || k1 <= k0) return 0.0;
  const int w = n_ + 1;
  return s_[j1 * w + k1] - s_[j0 * w + k1] - s_[j1 * w + k0] + s_[j0 * w + k0];
}

double BoxSums::square(const Square& q) const {
  int j0, j1, k0, k1;
  index_range(q, j0, j1, k0, k1);
  return cells(j0, j1, k0, k1);
}

namespace {

// out[i] = max of in[lo..hi] with lo = max(0, i - s + 1), hi = min(i, m - 1); in has m entries.
void window_max(const double* in, int m, int n, int s, double* out) {
  std::deque<int> q;
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int hi = std::min(i, m - 1), lo = std::max(0, i - s + 1);
    while (next <= hi) {
      while (!q.empty() && in[q.back()] <= in[next]) q.pop_back();
      q.push_back(next++);
    }
    while (q.front() < lo) q.pop_front();
    out[i] = in[q.front()];
  }
}

}  // namespace

ComplexField maximal(const ComplexField& f) {
  const int n = f.n();
  const BoxSums sums(f);
  const double a = f.spec().cell_area();
  std::vector<double> best(f.size(), 0.0);
  std::vector<double> means, rows, col_in, col_out(n);
  for (int s = 1; s <= n; s *= 2) {
    const int m = n - s + 1;  // square positions per axis
    const double area = a * s * s;
    means.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) means[static_cast<std::size_t>(j) * m + k] = sums.cells(j, j + s, k, k + s) / area;
    // Max over positions along k, then along j.
    rows.assign(static_cast<std::size_t>(m) * n, 0.0);
    for (int j = 0; j < m; ++j) window_max(&means[static_cast<std::size_t>(j) * m], m, n, s, &rows[static_cast<std::size_t>(j) * n]);
    col_in.resize(m);
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < m; ++j) col_in[j] = rows[static_cast<std::size_t>(j) * n + k];
      window_max(col_in.data(), m, n, s, col_out.data());
      for (int j = 0; j < n; ++j) {
        double& b = best[static_cast<std::size_t>(j) * n + k];
        b = std::max(b, col_out[j]);
      }
    }
  }
  std::vector<cplx> out(best.begin(), best.end());
  return ComplexField(f.spec(), std::move(out));
}

MaximalLemma maximal_lemma(const WhitneyCovering& cov, const ComplexField& g, double eta,
                           const std::vector<double>& radii) {
  if (!(eta > 0)) fail(Errc::invalid_argument, "maximal lemma needs eta > 0");
  const BoxSums sums(g);
  const ComplexField mg = maximal(g);
  const int n = cov.size();
  std::vector<double> mass(n), inf_m(n);
  for (int i = 0; i < n; ++i) {
    const Square& q = cov.cube(i).sq;
    int j0, j1, k0, k1;
    sums.index_range(q, j0, j1, k0, k1);
    if (j1 <= j0 || k1 <= k0) fail(Errc::invalid_argument, "grid too coarse for the covering");
    mass[i] = sums.cells(j0, j1, k0, k1);
    double lo = 1e300;
    for (int j = j0; j < j1; ++j)
      for (int k = k0; k < k1; ++k) lo = std::min(lo, mg(j, k).real());
    inf_m[i] = lo;
  }
  MaximalLemma out;
  for (int q = 0; q < n; ++q) {
    if (inf_m[q] <= 0.0) continue;
    for (double factor : radii) {
      const double r = factor * cov.side(q);
      double far = 0.0, close = 0.0;
      for (int s = 0; s < n; ++s) {
        const double d = cov.D(q, s);
        if (d > r)
          far += mass[s] / std::pow(d, 2 + eta);
        else
          close += mass[s] / std::pow(d, 2 - eta);
      }
      out.far = std::max(out.far, far * std::pow(r, eta) / inf_m[q]);
      out.close = std::max(out.close, close / (std::pow(r, eta) * inf_m[q]));
    }
  }
  return out;
}

}  // namespace qclab
