#pragma once

#include <map>
#include <string>
#include <vector>

#include "levikit/ast.hpp"
#include "levikit/common.hpp"
#include "levikit/linalg.hpp"

namespace levikit::expr {

/// Truncated second-order Taylor jet in the 2n real variables
/// (x_1..x_n, y_1..y_n), with complex coefficients. Index x_j -> j,
/// y_j -> n + j. Wirtinger derivatives are extracted afterwards.
class RealJet {
public:
  RealJet(int n, cplx value) : n_(n), v_(value), g_(2 * n, cplx(0)), h_(4 * static_cast<size_t>(n) * n, cplx(0)) {}

  static RealJet variable(int n, int j, cplx value) {
    RealJet r(n, value);
    r.g_[j] = 1.0;              // d/dx_j
    r.g_[n + j] = cplx(0, 1);   // d/dy_j contributes i
    return r;
  }

  int vars() const { return 2 * n_; }
  cplx value() const { return v_; }
  cplx grad(int a) const { return g_[a]; }
  cplx hess(int a, int b) const { return h_[static_cast<size_t>(a) * 2 * n_ + b]; }

  friend RealJet operator+(const RealJet& a, const RealJet& b) {
    RealJet r = a;
    r.v_ += b.v_;
    for (size_t i = 0; i < r.g_.size(); ++i) r.g_[i] += b.g_[i];
    for (size_t i = 0; i < r.h_.size(); ++i) r.h_[i] += b.h_[i];
    return r;
  }

  friend RealJet operator-(const RealJet& a, const RealJet& b) {
    RealJet r = a;
    r.v_ -= b.v_;
    for (size_t i = 0; i < r.g_.size(); ++i) r.g_[i] -= b.g_[i];
    for (size_t i = 0; i < r.h_.size(); ++i) r.h_[i] -= b.h_[i];
    return r;
  }

  RealJet operator-() const {
    RealJet r = *this;
    r.v_ = -r.v_;
    for (auto& z : r.g_) z = -z;
    for (auto& z : r.h_) z = -z;
    return r;
  }

  friend RealJet operator*(const RealJet& a, const RealJet& b) {
    int m = a.vars();
    RealJet r(a.n_, a.v_ * b.v_);
    for (int i = 0; i < m; ++i) r.g_[i] = a.g_[i] * b.v_ + a.v_ * b.g_[i];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        r.h_[static_cast<size_t>(i) * m + j] = a.hess(i, j) * b.v_ + a.v_ * b.hess(i, j) +
                                               a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i];
    return r;
  }

  /// Reciprocal with a pole guard.
  RealJet reciprocal(double guard, const Node* where) const {
    if (std::abs(v_) < guard)
      throw EvalError("division pole: |denominator| = " + std::to_string(std::abs(v_)) +
                      (where ? " in subexpression '" + serialize_node(where) + "'" : ""));
    int m = vars();
    cplx iv = 1.0 / v_;
    cplx iv2 = iv * iv;
    cplx iv3 = iv2 * iv;
    RealJet r(n_, iv);
    for (int i = 0; i < m; ++i) r.g_[i] = -g_[i] * iv2;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        r.h_[static_cast<size_t>(i) * m + j] = -hess(i, j) * iv2 + 2.0 * g_[i] * g_[j] * iv3;
    return r;
  }

  RealJet conj() const {
    RealJet r = *this;
    r.v_ = std::conj(r.v_);
    for (auto& z : r.g_) z = std::conj(z);
    for (auto& z : r.h_) z = std::conj(z);
    return r;
  }

  RealJet real_part() const {
    RealJet r = *this;
    r.v_ = r.v_.real();
    for (auto& z : r.g_) z = z.real();
    for (auto& z : r.h_) z = z.real();
    return r;
  }

  RealJet imag_part() const {
    RealJet r = *this;
    r.v_ = r.v_.imag();
    for (auto& z : r.g_) z = z.imag();
    for (auto& z : r.h_) z = z.imag();
    return r;
  }

  RealJet pow_int(int e, double guard, const Node* where) const {
    if (e == 0) return RealJet(n_, cplx(1.0));
    if (e < 0) return pow_int(-e, guard, where).reciprocal(guard, where);
    int m = vars();
    // v^e with first/second derivative coefficients e v^(e-1), e(e-1) v^(e-2)
    cplx ve = 1.0, vem1 = 0.0, vem2 = 0.0;
    // Compute v^e, v^(e-1), v^(e-2) without pow() branching on zero.
    auto ipow = [&](int k) {
      cplx r = 1.0;
      for (int i = 0; i < k; ++i) r *= v_;
      return r;
    };
    ve = ipow(e);
    vem1 = ipow(e - 1);
    vem2 = e >= 2 ? ipow(e - 2) : 0.0;
    double de = e;
    RealJet r(n_, ve);
    for (int i = 0; i < m; ++i) r.g_[i] = de * vem1 * g_[i];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        r.h_[static_cast<size_t>(i) * m + j] =
            de * vem1 * hess(i, j) + de * (de - 1.0) * vem2 * g_[i] * g_[j];
    return r;
  }

private:
  static std::string serialize_node(const Node* n) {
    NodePtr p(n, [](const Node*) {});
    return serialize(p);
  }

  int n_;
  cplx v_;
  std::vector<cplx> g_;
  std::vector<cplx> h_;
};

/// Full second-order Wirtinger jet of a complex-valued function.
struct WirtingerJet {
  cplx value;
  std::vector<cplx> dz, dzbar;      // n each
  CMatrix dzdz;                     // d^2/dz_j dz_k (symmetric)
  CMatrix dzdzbar;                  // d^2/dz_j dzbar_k
  CMatrix dzbardzbar;               // d^2/dzbar_j dzbar_k (symmetric)
};

/// Second-order jet of a real-valued function (a defining function).
/// dzbar is stored as the exact conjugate of dz; the mixed block is
/// symmetrized to be Hermitian bit-exactly and dzdz to be symmetric.
struct Jet2 {
  double value = 0.0;
  std::vector<cplx> dz, dzbar;
  CMatrix dzdzbar;
  CMatrix dzdz;

  int dimension() const { return static_cast<int>(dz.size()); }

  double dbar_norm() const {  // |partial rho|
    double s = 0;
    for (const cplx& z : dz) s += std::norm(z);
    return std::sqrt(s);
  }
  /// |grad rho| in the metric normalized so <dz_j, dz_k> = delta_jk.
  double grad_norm() const { return std::sqrt(2.0) * dbar_norm(); }
};

inline WirtingerJet wirtinger_transform(const RealJet& jet, int n) {
  WirtingerJet w;
  w.value = jet.value();
  w.dz.resize(n);
  w.dzbar.resize(n);
  w.dzdz = CMatrix(n, n);
  w.dzdzbar = CMatrix(n, n);
  w.dzbardzbar = CMatrix(n, n);
  const cplx I(0, 1);
  for (int j = 0; j < n; ++j) {
    w.dz[j] = 0.5 * (jet.grad(j) - I * jet.grad(n + j));
    w.dzbar[j] = 0.5 * (jet.grad(j) + I * jet.grad(n + j));
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      cplx xx = jet.hess(j, k);
      cplx yy = jet.hess(n + j, n + k);
      cplx xy = jet.hess(j, n + k);
      cplx yx = jet.hess(n + j, k);
      w.dzdzbar(j, k) = 0.25 * (xx + yy + I * (xy - yx));
      w.dzdz(j, k) = 0.25 * (xx - yy - I * (xy + yx));
      w.dzbardzbar(j, k) = 0.25 * (xx - yy + I * (xy + yx));
    }
  return w;
}

inline Jet2 to_jet2(const WirtingerJet& w) {
  int n = static_cast<int>(w.dz.size());
  Jet2 j;
  j.value = w.value.real();
  j.dz = w.dz;
  j.dzbar.resize(n);
  for (int k = 0; k < n; ++k) j.dzbar[k] = std::conj(w.dz[k]);
  j.dzdzbar = CMatrix(n, n);
  j.dzdz = CMatrix(n, n);
  for (int p = 0; p < n; ++p) {
    j.dzdzbar(p, p) = w.dzdzbar(p, p).real();
    j.dzdz(p, p) = w.dzdz(p, p);
    for (int q = p + 1; q < n; ++q) {
      cplx m = 0.5 * (w.dzdzbar(p, q) + std::conj(w.dzdzbar(q, p)));
      j.dzdzbar(p, q) = m;
      j.dzdzbar(q, p) = std::conj(m);
      cplx s = 0.5 * (w.dzdz(p, q) + w.dzdz(q, p));
      j.dzdz(p, q) = s;
      j.dzdz(q, p) = s;
    }
  }
  return j;
}

using ParamMap = std::map<std::string, double>;

namespace detail {

inline RealJet eval_jet_rec(const NodePtr& node, const std::vector<cplx>& point,
                            const ParamMap& params, double pole_guard) {
  int n = static_cast<int>(point.size());
  switch (node->kind) {
    case NodeKind::Constant: return RealJet(n, cplx(node->number));
    case NodeKind::ImagUnit: return RealJet(n, cplx(0, 1));
    case NodeKind::Parameter: {
      auto it = params.find(node->name);
      if (it == params.end()) throw EvalError("unbound parameter '" + node->name + "'");
      return RealJet(n, cplx(it->second));
    }
    case NodeKind::Variable:
      if (node->var_index >= n)
        throw EvalError("variable z" + std::to_string(node->var_index + 1) +
                        " exceeds the evaluation dimension " + std::to_string(n));
      return RealJet::variable(n, node->var_index, point[node->var_index]);
    case NodeKind::Negate: return -eval_jet_rec(node->a, point, params, pole_guard);
    case NodeKind::Add:
      return eval_jet_rec(node->a, point, params, pole_guard) +
             eval_jet_rec(node->b, point, params, pole_guard);
    case NodeKind::Sub:
      return eval_jet_rec(node->a, point, params, pole_guard) -
             eval_jet_rec(node->b, point, params, pole_guard);
    case NodeKind::Mul:
      return eval_jet_rec(node->a, point, params, pole_guard) *
             eval_jet_rec(node->b, point, params, pole_guard);
    case NodeKind::Div:
      return eval_jet_rec(node->a, point, params, pole_guard) *
             eval_jet_rec(node->b, point, params, pole_guard).reciprocal(pole_guard, node->b.get());
    case NodeKind::Pow:
      return eval_jet_rec(node->a, point, params, pole_guard)
          .pow_int(node->exponent, pole_guard, node->a.get());
    case NodeKind::Re: return eval_jet_rec(node->a, point, params, pole_guard).real_part();
    case NodeKind::Im: return eval_jet_rec(node->a, point, params, pole_guard).imag_part();
    case NodeKind::Abs2: {
      RealJet a = eval_jet_rec(node->a, point, params, pole_guard);
      return a * a.conj();
    }
    case NodeKind::Conj: return eval_jet_rec(node->a, point, params, pole_guard).conj();
  }
  throw EvalError("corrupt expression node");
}

inline cplx eval_scalar_rec(const NodePtr& node, const std::vector<cplx>& point,
                            const ParamMap& params, double pole_guard) {
  switch (node->kind) {
    case NodeKind::Constant: return cplx(node->number);
    case NodeKind::ImagUnit: return cplx(0, 1);
    case NodeKind::Parameter: {
      auto it = params.find(node->name);
      if (it == params.end()) throw EvalError("unbound parameter '" + node->name + "'");
      return cplx(it->second);
    }
    case NodeKind::Variable: return point[node->var_index];
    case NodeKind::Negate: return -eval_scalar_rec(node->a, point, params, pole_guard);
    case NodeKind::Add:
      return eval_scalar_rec(node->a, point, params, pole_guard) +
             eval_scalar_rec(node->b, point, params, pole_guard);
    case NodeKind::Sub:
      return eval_scalar_rec(node->a, point, params, pole_guard) -
             eval_scalar_rec(node->b, point, params, pole_guard);
    case NodeKind::Mul:
      return eval_scalar_rec(node->a, point, params, pole_guard) *
             eval_scalar_rec(node->b, point, params, pole_guard);
    case NodeKind::Div: {
      cplx d = eval_scalar_rec(node->b, point, params, pole_guard);
      if (std::abs(d) < pole_guard) throw EvalError("division pole");
      return eval_scalar_rec(node->a, point, params, pole_guard) / d;
    }
    case NodeKind::Pow: {
      cplx b = eval_scalar_rec(node->a, point, params, pole_guard);
      int e = node->exponent;
      if (e < 0) {
        if (std::abs(b) < pole_guard) throw EvalError("division pole");
        b = 1.0 / b;
        e = -e;
      }
      cplx r = 1.0;
      for (int k = 0; k < e; ++k) r *= b;
      return r;
    }
    case NodeKind::Re: return cplx(eval_scalar_rec(node->a, point, params, pole_guard).real());
    case NodeKind::Im: return cplx(eval_scalar_rec(node->a, point, params, pole_guard).imag());
    case NodeKind::Abs2: return cplx(std::norm(eval_scalar_rec(node->a, point, params, pole_guard)));
    case NodeKind::Conj: return std::conj(eval_scalar_rec(node->a, point, params, pole_guard));
  }
  throw EvalError("corrupt expression node");
}

}  // namespace detail

/// Value and full second-order Wirtinger jet of an arbitrary (possibly
/// complex-valued) expression at a point.
inline WirtingerJet eval_wirtinger_jet(const NodePtr& ast, const std::vector<cplx>& point,
                                       const ParamMap& params, double pole_guard = 1e-300) {
  RealJet jet = detail::eval_jet_rec(ast, point, params, pole_guard);
  return wirtinger_transform(jet, static_cast<int>(point.size()));
}

/// Plain value, no derivatives. Deliberately a separate recursion from the
/// jet path so finite-difference tests exercise an independent route.
inline cplx eval_scalar(const NodePtr& ast, const std::vector<cplx>& point, const ParamMap& params,
                        double pole_guard = 1e-300) {
  return detail::eval_scalar_rec(ast, point, params, pole_guard);
}

}  // namespace levikit::expr
