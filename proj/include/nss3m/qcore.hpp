// Scalars at q = exp(i pi / r), q-numbers and dense linear maps.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace nss3m {

using Scalar = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr double kPi = std::numbers::pi;
constexpr Scalar kI{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |a-b| <= tol * max(1, |a|, |b|)
inline bool approx(Scalar a, Scalar b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline double rel_err(Scalar a, Scalar b) {
  return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

struct RootData {
  int r = 2;
  double tol = 1e-9;
  Scalar q;

  explicit RootData(int level = 2, double tolerance = 1e-9) : r(level), tol(tolerance) {
    if (r < 2) throw Error("root r must be >= 2, got " + std::to_string(r));
    if (tol < 0) throw Error("tolerance must be non-negative");
    q = std::exp(kI * kPi / double(r));
  }

  /// q^x = exp(i pi x / r) for complex x.
  Scalar q_power(Scalar x) const { return std::exp(kI * kPi * x / double(r)); }

  /// {x} = q^x - q^-x
  Scalar q_num(Scalar x) const { return q_power(x) - q_power(-x); }

  /// [x] = {x}/{1}; equals sin(pi x / r) / sin(pi / r).
  Scalar q_int(Scalar x) const { return std::sin(kPi * x / double(r)) / std::sin(kPi / double(r)); }

  Scalar q_fact(int n) const {
    if (n < 0) throw Error("q_fact of negative integer");
    if (n >= r) throw Error("q_fact(" + std::to_string(n) + ") vanishes at r=" + std::to_string(r));
    Scalar p = 1.0;
    for (int j = 1; j <= n; ++j) p *= q_int(double(j));
    return p;
  }

  /// prod_{j=1..k} [a-k+j]/[j]; zero for k < 0.
  Scalar q_binom(Scalar a, int k) const {
    if (k < 0) return 0.0;
    Scalar p = 1.0;
    for (int j = 1; j <= k; ++j) p *= q_int(a - double(k) + double(j)) / q_int(double(j));
    return p;
  }
};

/// Row-major bookkeeping on top of an Eigen matrix: rows = codomain, cols = domain.
struct DenseMap {
  Mat m;

  DenseMap() = default;
  explicit DenseMap(Mat mat) : m(std::move(mat)) {}
  DenseMap(std::size_t codim, std::size_t dim, const std::vector<Scalar>& row_major) {
    if (row_major.size() != codim * dim) throw Error("DenseMap: entry count does not match dimensions");
    m.resize(Eigen::Index(codim), Eigen::Index(dim));
    for (std::size_t i = 0; i < codim; ++i)
      for (std::size_t j = 0; j < dim; ++j) m(Eigen::Index(i), Eigen::Index(j)) = row_major[i * dim + j];
  }

  static DenseMap identity(std::size_t n) { return DenseMap(Mat::Identity(Eigen::Index(n), Eigen::Index(n))); }

  std::size_t dom() const { return std::size_t(m.cols()); }
  std::size_t codom() const { return std::size_t(m.rows()); }
};

/// Kronecker product; index of (i,j) is i*dim(b)+j.
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline DenseMap tensor(const DenseMap& a, const DenseMap& b) { return DenseMap(kron(a.m, b.m)); }

/// a after b.
inline DenseMap compose(const DenseMap& a, const DenseMap& b) {
  if (a.dom() != b.codom())
    throw Error("compose: dimension mismatch " + std::to_string(a.dom()) + " vs " + std::to_string(b.codom()));
  return DenseMap(a.m * b.m);
}

/// Quantum partial trace over tensor factor `strand` (0-based) of a map
/// on X_0 (x) ... (x) X_{n-1}, weighted by `pivot` acting on that factor.
inline DenseMap partial_close(const DenseMap& a, const std::vector<std::size_t>& dims, std::size_t strand,
                              const Mat& pivot) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  if (a.dom() != total || a.codom() != total) throw Error("partial_close: map is not an endomorphism of the word");
  if (strand >= dims.size()) throw Error("partial_close: strand index out of range");
  const std::size_t k = dims[strand];
  if (std::size_t(pivot.rows()) != k || std::size_t(pivot.cols()) != k)
    throw Error("partial_close: pivot has wrong size");
  std::size_t left = 1, right = 1;
  for (std::size_t i = 0; i < strand; ++i) left *= dims[i];
  for (std::size_t i = strand + 1; i < dims.size(); ++i) right *= dims[i];
  const std::size_t rest = left * right;
  Mat out = Mat::Zero(Eigen::Index(rest), Eigen::Index(rest));
  auto idx = [&](std::size_t l, std::size_t s, std::size_t rr) { return Eigen::Index((l * k + s) * right + rr); };
  for (std::size_t l1 = 0; l1 < left; ++l1)
    for (std::size_t r1 = 0; r1 < right; ++r1)
      for (std::size_t l2 = 0; l2 < left; ++l2)
        for (std::size_t r2 = 0; r2 < right; ++r2) {
          Scalar acc = 0.0;
          for (std::size_t s = 0; s < k; ++s)
            for (std::size_t t = 0; t < k; ++t) acc += pivot(Eigen::Index(s), Eigen::Index(t)) * a.m(idx(l1, t, r1), idx(l2, s, r2));
          out(Eigen::Index(l1 * right + r1), Eigen::Index(l2 * right + r2)) = acc;
        }
  return DenseMap(out);
}

/// Returns lambda if m is within tol of lambda*id, using the entry of largest modulus on the diagonal.
inline bool scalar_of(const Mat& m, double tol, Scalar& lambda, double* residual = nullptr) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < m.rows(); ++i)
    if (std::abs(m(i, i)) > std::abs(m(best, best))) best = i;
  lambda = m(best, best);
  double res = (m - lambda * Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
  if (residual) *residual = res;
  return res <= tol * std::max(1.0, std::abs(lambda));
}

}  // namespace nss3m
