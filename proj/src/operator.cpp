#include "qclab/operator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <mutex>

#include "qclab/masks.hpp"
#include "qclab/rng.hpp"

namespace qclab {

struct Operator::Node {
  enum class T { identity, zero, multiply, beurling, cauchy, cauchy_adjoint, tgamma, mask, compose, sum };
  T t = T::identity;
  int m = 1;
  KernelIndex gamma;
  cplx scale = 1.0;
  std::optional<ComplexField> field;
  std::optional<LipschitzDomain> dom;
  bool exterior = false;
  std::vector<Operator> children;
  std::vector<cplx> coefs;
  nlohmann::json label;

  mutable std::mutex cache_mutex;
  mutable std::optional<GridSpec> cache_grid;
  mutable std::vector<char> cache_in;

  std::vector<char> membership_for(const GridSpec& g) const {
    std::lock_guard<std::mutex> lock(cache_mutex);
    if (!cache_grid || !(*cache_grid == g)) {
      if (!inside_central_quarter(*dom, g))
        fail(Errc::invalid_argument, "localization domain leaves the grid's central quarter");
      cache_in = membership(*dom, g);
      cache_grid = g;
    }
    return cache_in;
  }
};

namespace {

using Node = Operator::Node;

std::shared_ptr<Node> make(Node::T t, nlohmann::json label) {
  auto n = std::make_shared<Node>();
  n->t = t;
  n->label = std::move(label);
  return n;
}

nlohmann::json no_params() { return nlohmann::json::object(); }

}  // namespace

Operator Operator::identity() { return Operator(make(Node::T::identity, {{"kind", "identity"}, {"params", no_params()}})); }

Operator Operator::zero() { return Operator(make(Node::T::zero, {{"kind", "zero"}, {"params", no_params()}})); }

Operator Operator::multiply(ComplexField m, std::string name) {
  auto n = make(Node::T::multiply, {{"kind", "multiply"}, {"params", {{"field", name}}}});
  n->field = std::move(m);
  return Operator(n);
}

Operator Operator::beurling_power(int m) {
  if (m < 1) fail(Errc::invalid_argument, "beurling_power needs m >= 1");
  auto n = make(Node::T::beurling, {{"kind", "beurling_power"}, {"params", {{"m", m}}}});
  n->m = m;
  return Operator(n);
}

Operator Operator::cauchy() { return Operator(make(Node::T::cauchy, {{"kind", "cauchy"}, {"params", no_params()}})); }

Operator Operator::tgamma(KernelIndex gamma) {
  diagonal_cell_integral(gamma, 1.0);  // rejects unsupported homogeneities
  auto n = make(Node::T::tgamma, {{"kind", "tgamma"}, {"params", {{"gamma", {gamma.g1, gamma.g2}}}}});
  n->gamma = gamma;
  return Operator(n);
}

Operator Operator::mask(const LipschitzDomain& dom, bool exterior) {
  auto n = make(Node::T::mask, {{"kind", exterior ? "exterior_mask" : "mask"},
                                {"params", no_params()},
                                {"domain", dom.to_json()}});
  n->dom = dom;
  n->exterior = exterior;
  return Operator(n);
}

Operator Operator::compose(std::vector<Operator> ops) {
  if (ops.empty()) return identity();
  nlohmann::json list = nlohmann::json::array();
  for (const Operator& o : ops) list.push_back(o.to_json());
  auto n = make(Node::T::compose, {{"kind", "composition"}, {"params", {{"ops", list}}}});
  n->children = std::move(ops);
  return Operator(n);
}

Operator Operator::sum(std::vector<std::pair<cplx, Operator>> terms) {
  nlohmann::json list = nlohmann::json::array();
  auto n = make(Node::T::sum, nullptr);
  for (auto& [c, o] : terms) {
    list.push_back({{"coef", {c.real(), c.imag()}}, {"op", o.to_json()}});
    n->coefs.push_back(c);
    n->children.push_back(o);
  }
  n->label = {{"kind", "sum"}, {"params", {{"terms", list}}}};
  return Operator(n);
}

Operator Operator::with_label(nlohmann::json label) const {
  auto n = make(Node::T::compose, std::move(label));
  n->children = {*this};
  return Operator(n);
}

Operator Operator::localize(const Operator& inner, const LipschitzDomain& dom) {
  const Operator chi = mask(dom);
  return compose({chi, inner, chi})
      .with_label({{"kind", "localized"}, {"params", {{"inner", inner.to_json()}}}, {"domain", dom.to_json()}});
}

Operator Operator::commutator(ComplexField mu, const LipschitzDomain& dom) {
  const Operator m = multiply(std::move(mu));
  const Operator b = localize(beurling_power(1), dom);
  return sum({{1.0, compose({m, b})}, {-1.0, compose({b, m})}})
      .with_label({{"kind", "commutator"}, {"params", {{"mu", "mu"}}}, {"domain", dom.to_json()}});
}

Operator Operator::reflection(int m, const LipschitzDomain& dom) {
  if (m < 1) fail(Errc::invalid_argument, "reflection needs m >= 1");
  std::vector<Operator> ops = {mask(dom), beurling_power(1), mask(dom, true)};
  if (m > 1) ops.push_back(beurling_power(m - 1));
  ops.push_back(mask(dom));
  return compose(std::move(ops))
      .with_label({{"kind", "reflection"}, {"params", {{"m", m}}}, {"domain", dom.to_json()}});
}

ComplexField Operator::apply(const ComplexField& f) const {
  const Node& n = *node_;
  switch (n.t) {
    case Node::T::identity:
      return f;
    case Node::T::zero:
      return ComplexField::zeros(f.spec());
    case Node::T::multiply:
      return *n.field * f;
    case Node::T::beurling:
      return qclab::beurling_power(f, n.m);
    case Node::T::cauchy:
      return qclab::cauchy(f);
    case Node::T::cauchy_adjoint:
      return qclab::cauchy_adjoint(f);
    case Node::T::tgamma:
      return n.scale * tgamma_apply(n.gamma, f);
    case Node::T::mask: {
      const std::vector<char> in = n.membership_for(f.spec());
      std::vector<cplx> v(f.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = (static_cast<bool>(in[i]) != n.exterior) ? f[i] : 0.0;
      return ComplexField(f.spec(), std::move(v));
    }
    case Node::T::compose: {
      ComplexField r = f;
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) r = it->apply(r);
      return r;
    }
    case Node::T::sum: {
      ComplexField r = ComplexField::zeros(f.spec());
      for (std::size_t i = 0; i < n.children.size(); ++i) r = r + n.coefs[i] * n.children[i].apply(f);
      return r;
    }
  }
  return f;
}

std::vector<cplx> Operator::apply_at(const ComplexField& f, const std::vector<cplx>& pts) const {
  if (node_->t == Node::T::tgamma) {
    std::vector<cplx> v = tgamma_pv(node_->gamma, f, pts);
    for (cplx& x : v) x *= node_->scale;
    return v;
  }
  const ComplexField r = apply(f);
  std::vector<cplx> out;
  out.reserve(pts.size());
  for (const cplx& z : pts) out.push_back(r[grid_point_index(f.spec(), z)]);
  return out;
}

Operator Operator::adjoint() const {
  const Node& n = *node_;
  const nlohmann::json label = {{"kind", "adjoint"}, {"params", {{"of", n.label}}}};
  switch (n.t) {
    case Node::T::identity:
    case Node::T::zero:
    case Node::T::mask:
      return *this;
    case Node::T::multiply:
      return multiply(qclab::conj(*n.field)).with_label(label);
    case Node::T::beurling: {
      auto a = make(Node::T::beurling, label);
      a->m = -n.m;
      return Operator(a);
    }
    case Node::T::cauchy:
      return Operator(make(Node::T::cauchy_adjoint, label));
    case Node::T::cauchy_adjoint:
      return cauchy();
    case Node::T::tgamma: {
      // conj K(z - w) = (-1)^{g1+g2} (w - z)^{g2} conj(w - z)^{g1}
      auto a = make(Node::T::tgamma, label);
      a->gamma = KernelIndex{n.gamma.g2, n.gamma.g1};
      a->scale = std::conj(n.scale) * (n.gamma.homogeneity() % 2 == 0 ? 1.0 : -1.0);
      return Operator(a);
    }
    case Node::T::compose: {
      std::vector<Operator> ops;
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) ops.push_back(it->adjoint());
      return compose(std::move(ops)).with_label(label);
    }
    case Node::T::sum: {
      std::vector<std::pair<cplx, Operator>> terms;
      for (std::size_t i = 0; i < n.children.size(); ++i)
        terms.emplace_back(std::conj(n.coefs[i]), n.children[i].adjoint());
      return sum(std::move(terms)).with_label(label);
    }
  }
  return *this;
}

nlohmann::json Operator::to_json() const { return node_->label; }

std::string Operator::kind() const { return node_->label.at("kind").get<std::string>(); }

ComplexField localize_apply(const ComplexField& mask, const ComplexField& f,
                            ComplexField (*op)(const ComplexField&)) {
  return mask * op(mask * f);
}

ComplexField commutator_apply(const ComplexField& mu, const LipschitzDomain& dom, const ComplexField& f) {
  require_same_grid(mu, f);
  const ComplexField chi = domain_mask(dom, f.spec());
  return mu * localize_apply(chi, f, beurling) - localize_apply(chi, mu * f, beurling);
}

ComplexField reflection_apply(int m, const LipschitzDomain& dom, const ComplexField& f) {
  if (m < 1) fail(Errc::invalid_argument, "reflection needs m >= 1");
  const ComplexField chi = domain_mask(dom, f.spec());
  const ComplexField outside = ComplexField::constant(f.spec(), 1.0) - chi;
  ComplexField inner = chi * f;
  if (m > 1) inner = beurling_power(inner, m - 1);
  return chi * beurling(outside * inner);
}

namespace {

double inner_norm(const ComplexField& f) {
  double s = 0.0;
  for (cplx v : f.values()) s += std::norm(v);
  return std::sqrt(s);
}

cplx inner(const ComplexField& a, const ComplexField& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

// Modified Gram-Schmidt, applied twice; columns that collapse become zero.
void orthonormalize(std::vector<ComplexField>& cols) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      ComplexField v = cols[i];
      for (std::size_t j = 0; j < i; ++j) v = v - inner(v, cols[j]) * cols[j];
      const double nv = inner_norm(v);
      cols[i] = nv > 1e-300 ? (1.0 / nv) * v : ComplexField::zeros(v.spec());
    }
  }
}

}  // namespace

std::vector<double> smoothing_probe(const Operator& op, const LipschitzDomain& dom, int k, const GridSpec& g,
                                    std::uint64_t seed, int power_iterations) {
  if (k < 1) fail(Errc::invalid_argument, "smoothing_probe needs k >= 1");
  const std::vector<char> in = membership(dom, g);
  const long cells = std::count(in.begin(), in.end(), 1);
  if (k > cells) fail(Errc::invalid_argument, "k exceeds the number of interior cells");
  const Operator chi = Operator::mask(dom);
  const Operator t = Operator::compose({chi, op, chi});
  const Operator ta = t.adjoint();
  const int l = static_cast<int>(std::min<long>(k + 8, cells));

  Rng rng(seed, "smoothing_probe");
  std::vector<ComplexField> y;
  for (int c = 0; c < l; ++c) {
    std::vector<cplx> v(g.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (in[i]) v[i] = cplx(rng.normal(), rng.normal());
    y.push_back(t.apply(ComplexField(g, std::move(v))));
  }
  for (int q = 0; q < power_iterations; ++q) {
    orthonormalize(y);
    for (auto& c : y) c = ta.apply(c);
    orthonormalize(y);
    for (auto& c : y) c = t.apply(c);
  }
  orthonormalize(y);
  std::vector<ComplexField> z;
  for (const auto& c : y) z.push_back(ta.apply(c));
  Eigen::MatrixXcd gram(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j <= i; ++j) {
      gram(i, j) = inner(z[j], z[i]);
      gram(j, i) = std::conj(gram(i, j));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  std::vector<double> sv;
  for (int i = l - 1; i >= 0 && static_cast<int>(sv.size()) < k; --i)
    sv.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
  return sv;
}

}  // namespace qclab
