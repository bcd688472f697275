// U_q^H(sl2) at q = exp(i pi / r): weight modules, braiding, twist, duality.
#pragma once

#include "qcore.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

namespace nss3m {

/// Typical(alpha) | Periodic(t), optionally wrapped in DualOf.
struct Color {
  enum class Kind { Typical, Periodic };
  Kind kind = Kind::Typical;
  Scalar alpha{0.5, 0.0};
  long t = 0;
  bool dual = false;

  static Color typical(Scalar a) { return Color{Kind::Typical, a, 0, false}; }
  static Color periodic(long t) { return Color{Kind::Periodic, 0.0, t, false}; }
  static Color dual_of(const Color& c) {
    Color d = c;
    d.dual = !c.dual;
    return d;
  }

  bool is_typical() const { return kind == Kind::Typical; }
  Color base() const {
    Color b = *this;
    b.dual = false;
    return b;
  }
};

inline bool same_color(const Color& a, const Color& b, double tol = 1e-12) {
  if (a.kind != b.kind || a.dual != b.dual) return false;
  if (a.kind == Color::Kind::Periodic) return a.t == b.t;
  return approx(a.alpha, b.alpha, tol);
}

/// True when alpha is in (C \ Z) or rZ.
inline bool is_typical_weight(Scalar alpha, int r, double tol = 1e-12) {
  if (std::abs(alpha.imag()) > tol) return true;
  double x = alpha.real();
  double n = std::round(x);
  if (std::abs(x - n) > tol) return true;
  return std::fmod(std::abs(n), double(r)) < 0.5;
}

inline std::string format_scalar(Scalar z, int precision = 10) {
  // fixed precision, no locale, "re+imi"
  auto fmt = [&](double v) {
    if (std::abs(v) < 0.5 * std::pow(10.0, -precision)) v = 0.0;
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.setf(std::ios::fixed);
    os.precision(precision);
    os << v;
    return os.str();
  };
  std::string re = fmt(z.real()), im = fmt(z.imag());
  if (im[0] != '-') im = "+" + im;
  return re + im + "i";
}

inline std::string to_string(const Color& c) {
  std::string s = c.kind == Color::Kind::Typical ? "V(" + format_scalar(c.alpha, 6) + ")" : "eps(" + std::to_string(c.t) + ")";
  return c.dual ? s + "*" : s;
}

/// Class in C/2Z, stored by a representative with real part in [0,2).
struct GradeClass {
  Scalar value;

  explicit GradeClass(Scalar v = 0.0) : value(reduce(v)) {}
  static Scalar reduce(Scalar v) {
    double re = std::fmod(v.real(), 2.0);
    if (re < 0) re += 2.0;
    if (re >= 2.0 - 1e-12) re = 0.0;
    return {re, v.imag()};
  }
  GradeClass operator+(const GradeClass& o) const { return GradeClass(value + o.value); }
  GradeClass operator-() const { return GradeClass(-value); }
  bool equals(const GradeClass& o, double tol = 1e-9) const {
    Scalar d = value - o.value;
    double re = d.real() - 2.0 * std::round(d.real() / 2.0);
    return std::abs(re) <= tol && std::abs(d.imag()) <= tol;
  }
  /// Integer class (the default critical set Z/2Z).
  bool is_integral(double tol = 1e-9) const {
    return std::abs(value.imag()) <= tol && (std::abs(value.real() - std::round(value.real())) <= tol);
  }
  bool is_zero(double tol = 1e-9) const { return equals(GradeClass(0.0), tol); }
};

/// Finite-dimensional weight module with H diagonal in the stored basis.
struct ModuleRep {
  Color color;
  std::vector<Scalar> weights;
  Mat E, F, H, K, Kinv;

  std::size_t dim() const { return weights.size(); }
};

inline Mat k_power(const RootData& rd, const ModuleRep& m, Scalar p) {
  Mat out = Mat::Zero(Eigen::Index(m.dim()), Eigen::Index(m.dim()));
  for (std::size_t i = 0; i < m.dim(); ++i) out(Eigen::Index(i), Eigen::Index(i)) = rd.q_power(p * m.weights[i]);
  return out;
}

inline void fill_k(const RootData& rd, ModuleRep& m) {
  const auto n = Eigen::Index(m.dim());
  m.H = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m.H(i, i) = m.weights[std::size_t(i)];
  m.K = k_power(rd, m, 1.0);
  m.Kinv = k_power(rd, m, -1.0);
}

/// Solves [E,F] = (K-K^-1)/(q-q^-1) upward from E v_0 = 0.
inline ModuleRep typical_module(const RootData& rd, Scalar alpha) {
  if (!is_typical_weight(alpha, rd.r)) throw Error("non-typical weight alpha=" + format_scalar(alpha, 6));
  const int r = rd.r;
  ModuleRep m;
  m.color = Color::typical(alpha);
  for (int i = 0; i < r; ++i) m.weights.push_back(alpha + double(r - 1 - 2 * i));
  m.E = Mat::Zero(r, r);
  m.F = Mat::Zero(r, r);
  // EF v_{i-1} - FE v_{i-1} = [w_{i-1}] v_{i-1}  =>  c_i = c_{i-1} + [w_{i-1}]
  Scalar c = 0.0;
  for (int i = 1; i < r; ++i) {
    c += rd.q_int(m.weights[std::size_t(i - 1)]);
    m.E(i - 1, i) = c;
    m.F(i, i - 1) = 1.0;
  }
  fill_k(rd, m);
  return m;
}

inline ModuleRep periodic_module(const RootData& rd, long t) {
  ModuleRep m;
  m.color = Color::periodic(t);
  m.weights = {Scalar(2.0 * rd.r * double(t), 0.0)};
  m.E = Mat::Zero(1, 1);
  m.F = Mat::Zero(1, 1);
  fill_k(rd, m);
  return m;
}

/// Action through the antipode transpose: S(E) = -EK^-1, S(F) = -KF, S(H) = -H.
inline ModuleRep dual_module(const RootData& rd, const ModuleRep& v) {
  ModuleRep m;
  m.color = Color::dual_of(v.color);
  for (auto w : v.weights) m.weights.push_back(-w);
  m.E = (-(v.E * v.Kinv)).transpose();
  m.F = (-(v.K * v.F)).transpose();
  fill_k(rd, m);
  return m;
}

/// Coproduct: E -> E(x)K + 1(x)E, F -> F(x)1 + K^-1(x)F, H -> H(x)1 + 1(x)H.
inline ModuleRep tensor_module(const RootData& rd, const ModuleRep& a, const ModuleRep& b) {
  ModuleRep m;
  m.color = a.color;
  for (auto x : a.weights)
    for (auto y : b.weights) m.weights.push_back(x + y);
  const Mat ia = Mat::Identity(Eigen::Index(a.dim()), Eigen::Index(a.dim()));
  const Mat ib = Mat::Identity(Eigen::Index(b.dim()), Eigen::Index(b.dim()));
  m.E = kron(a.E, b.K) + kron(ia, b.E);
  m.F = kron(a.F, ib) + kron(a.Kinv, b.F);
  fill_k(rd, m);
  return m;
}

inline ModuleRep module_of(const RootData& rd, const Color& c) {
  ModuleRep base = c.kind == Color::Kind::Typical ? typical_module(rd, c.alpha) : periodic_module(rd, c.t);
  return c.dual ? dual_module(rd, base) : base;
}

/// Flip V(x)W -> W(x)V.
inline Mat flip_matrix(std::size_t a, std::size_t b) {
  Mat p = Mat::Zero(Eigen::Index(a * b), Eigen::Index(a * b));
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) p(Eigen::Index(j * a + i), Eigen::Index(i * b + j)) = 1.0;
  return p;
}

inline Mat mat_pow(const Mat& a, int n) {
  Mat out = Mat::Identity(a.rows(), a.cols());
  for (int i = 0; i < n; ++i) out = out * a;
  return out;
}

/// R = q^{H(x)H/2} sum_n q^{n(n-1)/2}/[n]! {1}^n E^n (x) F^n.
inline Mat r_matrix(const RootData& rd, const ModuleRep& a, const ModuleRep& b) {
  const auto n = Eigen::Index(a.dim() * b.dim());
  Mat s = Mat::Zero(n, n);
  for (int k = 0; k < rd.r; ++k) {
    Scalar coef = rd.q_power(double(k * (k - 1)) / 2.0) / rd.q_fact(k) * std::pow(rd.q_num(1.0), k);
    s += coef * kron(mat_pow(a.E, k), mat_pow(b.F, k));
  }
  Vec diag(n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      diag(Eigen::Index(i * b.dim() + j)) = rd.q_power(a.weights[i] * b.weights[j] / 2.0);
  return diag.asDiagonal() * s;
}

/// c_{V,W} = flip o R : V(x)W -> W(x)V.
inline Mat braiding(const RootData& rd, const ModuleRep& v, const ModuleRep& w) {
  return flip_matrix(v.dim(), w.dim()) * r_matrix(rd, v, w);
}

/// (c_{W,V})^{-1} : V(x)W -> W(x)V.
inline Mat braiding_inv(const RootData& rd, const ModuleRep& v, const ModuleRep& w) {
  return braiding(rd, w, v).partialPivLu().inverse();
}

/// u = q^{-H^2/2} sum_n q^{3n(n-1)/2}/[n]! {-1}^n F^n K^-n E^n.
inline Mat u_element(const RootData& rd, const ModuleRep& m) {
  const auto n = Eigen::Index(m.dim());
  Mat s = Mat::Zero(n, n);
  for (int k = 0; k < rd.r; ++k) {
    Scalar coef = rd.q_power(3.0 * double(k * (k - 1)) / 2.0) / rd.q_fact(k) * std::pow(rd.q_num(-1.0), k);
    s += coef * mat_pow(m.F, k) * mat_pow(m.Kinv, k) * mat_pow(m.E, k);
  }
  Vec diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = rd.q_power(-m.weights[std::size_t(i)] * m.weights[std::size_t(i)] / 2.0);
  return diag.asDiagonal() * s;
}

/// theta_V = v^{-1}, v = K^{r-1} u.
inline Mat twist(const RootData& rd, const ModuleRep& m) {
  Mat v = k_power(rd, m, double(rd.r - 1)) * u_element(rd, m);
  return v.partialPivLu().inverse();
}

/// Left and right duality morphisms for V, with V* the antipode dual.
struct DualData {
  ModuleRep dual;
  Mat b;        // 1 -> V(x)V*
  Mat d;        // V*(x)V -> 1
  Mat b_prime;  // 1 -> V*(x)V
  Mat d_prime;  // V(x)V* -> 1
};

inline DualData dual_data(const RootData& rd, const ModuleRep& v) {
  DualData out;
  out.dual = dual_module(rd, v);
  const std::size_t n = v.dim();
  out.b = Mat::Zero(Eigen::Index(n * n), 1);
  for (std::size_t i = 0; i < n; ++i) out.b(Eigen::Index(i * n + i), 0) = 1.0;
  out.d = out.b.transpose();
  const Mat th = twist(rd, v);
  const Mat id = Mat::Identity(Eigen::Index(n), Eigen::Index(n));
  const Mat c = braiding(rd, v, out.dual);
  out.d_prime = out.d * c * kron(th, id);
  out.b_prime = kron(id, th) * c * out.b;
  return out;
}

/// Pivot g : V -> V with quantum trace tr(g f); derived from the right duality.
inline Mat pivot(const RootData& rd, const ModuleRep& v) {
  DualData dd = dual_data(rd, v);
  const std::size_t n = v.dim();
  Mat g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  // d'(e_i (x) e^j) = g_{ji}
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(Eigen::Index(j), Eigen::Index(i)) = dd.d_prime(0, Eigen::Index(i * n + j));
  return g;
}

/// Product form (-1)^{r-1} prod_j {j}/{alpha+r-j}.
inline Scalar mod_dim_product(const RootData& rd, Scalar alpha) {
  Scalar p = (rd.r % 2 == 1) ? 1.0 : -1.0;
  for (int j = 1; j < rd.r; ++j) p *= rd.q_num(double(j)) / rd.q_num(alpha + double(rd.r - j));
  return p;
}

/// Sine form (-1)^{r-1} r sin(alpha pi / r) / sin(alpha pi).
inline Scalar mod_dim_sine(const RootData& rd, Scalar alpha) {
  Scalar sign = (rd.r % 2 == 1) ? 1.0 : -1.0;
  return sign * double(rd.r) * std::sin(alpha * kPi / double(rd.r)) / std::sin(alpha * kPi);
}

inline Scalar mod_dim(const RootData& rd, Scalar alpha) {
  if (!is_typical_weight(alpha, rd.r)) throw Error("mod_dim: non-typical alpha=" + format_scalar(alpha, 6));
  Scalar p = mod_dim_product(rd, alpha);
  const double near_int = std::abs(alpha.imag()) + std::abs(alpha.real() - std::round(alpha.real()));
  if (near_int < 1e-6) return p;
  Scalar s = mod_dim_sine(rd, alpha);
  if (!approx(p, s, 1e-7)) throw Error("mod_dim: product and sine forms disagree");
  return s;
}

inline GradeClass degree(const RootData& rd, const Color& c) {
  GradeClass g = c.kind == Color::Kind::Typical ? GradeClass(c.alpha + double(rd.r - 1)) : GradeClass(0.0);
  return c.dual ? -g : g;
}

/// Residuals of the defining relations on a module.
struct RelationResiduals {
  double kek = 0, kfk = 0, ef = 0, hk = 0, he = 0, hf = 0, er = 0, fr = 0, k_from_h = 0;
  double max() const { return std::max({kek, kfk, ef, hk, he, hf, er, fr, k_from_h}); }
};

inline RelationResiduals relation_residuals(const RootData& rd, const ModuleRep& m) {
  auto nrm = [](const Mat& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; };
  RelationResiduals out;
  const Scalar q2 = rd.q_power(2.0);
  out.kek = nrm(m.K * m.E * m.Kinv - q2 * m.E);
  out.kfk = nrm(m.K * m.F * m.Kinv - m.F / q2);
  out.ef = nrm(m.E * m.F - m.F * m.E - (m.K - m.Kinv) / (rd.q - 1.0 / rd.q));
  out.hk = nrm(m.H * m.K - m.K * m.H);
  out.he = nrm(m.H * m.E - m.E * m.H - 2.0 * m.E);
  out.hf = nrm(m.H * m.F - m.F * m.H + 2.0 * m.F);
  out.er = nrm(mat_pow(m.E, rd.r));
  out.fr = nrm(mat_pow(m.F, rd.r));
  out.k_from_h = nrm(m.K - k_power(rd, m, 1.0)) + nrm(m.K * m.Kinv - Mat::Identity(m.K.rows(), m.K.cols()));
  return out;
}

}  // namespace nss3m
