#include "agreelab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "agreelab/error.hpp"

namespace agreelab::numerics {

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

SymEig sym_eig(const Matrix& s) {
  if (s.rows() != s.cols()) throw Error("sym_eig: matrix is not square");
  if (s.size() > 0 && !is_symmetric(s, 1e-12)) throw Error("sym_eig: matrix is not symmetric");
  const Eigen::Index n = s.rows();
  Matrix a = 0.5 * (s + s.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double norm = a.norm();
  const double target = 1e-12 * norm;

  auto off_norm = [&] {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle zeroing a(p,q) (Golub & Van Loan, sym.schur2).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });

  SymEig out;
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values.push_back(a(src, src));
    Vector col = v.col(src);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(col[i]) > 1e-12) {
        if (col[i] < 0.0) col = -col;
        break;
      }
    }
    out.vectors.col(k) = col;
  }
  return out;
}

std::vector<std::complex<double>> eig_general(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error("eig_general: matrix is not square");
  if (a.rows() == 0) return {};
  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) throw Error("eig_general: QR iteration did not converge");
  const auto ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double spectral_abscissa(const Matrix& a) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& z : eig_general(a)) m = std::max(m, z.real());
  return m;
}

namespace {

void require_lyapunov_shapes(const Matrix& a, const Matrix& q) {
  if (a.rows() != a.cols() || q.rows() != a.rows() || q.cols() != a.cols())
    throw Error("lyapunov_solve: dimension mismatch");
  if (a.rows() > 0 && spectral_abscissa(a) >= 0.0) throw Error("unstable Lyapunov operator");
}

}  // namespace

Matrix lyapunov_solve(const Matrix& a, const Matrix& q) {
  require_lyapunov_shapes(a, q);
  const Eigen::Index n = a.rows();
  if (n == 0) return Matrix(0, 0);

  Eigen::ComplexSchur<Matrix> schur(a);
  const CMatrix& t = schur.matrixT();
  const CMatrix& u = schur.matrixU();
  const CMatrix f = u.adjoint() * q.cast<std::complex<double>>() * u;

  // T Y + Y T^H = -F, solved one column at a time from the right.
  CMatrix y = CMatrix::Zero(n, n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    CVector rhs = -f.col(j);
    for (Eigen::Index k = j + 1; k < n; ++k) rhs -= std::conj(t(j, k)) * y.col(k);
    CMatrix lhs = t;
    lhs.diagonal().array() += std::conj(t(j, j));
    y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  const Matrix x = (u * y * u.adjoint()).real();
  return 0.5 * (x + x.transpose());
}

Matrix lyapunov_solve_kronecker(const Matrix& a, const Matrix& q) {
  require_lyapunov_shapes(a, q);
  const Eigen::Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  Matrix op = Matrix::Zero(n * n, n * n);
  // Column-major vec: vec(AX) = (I (x) A) vec X, vec(XA^T) = (A (x) I) vec X.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      op.block(i * n, j * n, n, n) += id(i, j) * a;
      op.block(i * n, j * n, n, n) += a(i, j) * id;
    }
  const Vector rhs = -Eigen::Map<const Vector>(q.data(), n * n);
  const Vector sol = op.fullPivLu().solve(rhs);
  Matrix x = Eigen::Map<const Matrix>(sol.data(), n, n);
  return 0.5 * (x + x.transpose());
}

Matrix companion(const std::vector<double>& ascending) {
  const Eigen::Index n = static_cast<Eigen::Index>(ascending.size()) - 1;
  if (n < 1) throw Error("companion: degree must be at least 1");
  const double lead = ascending.back();
  if (lead == 0.0) throw Error("companion: zero leading coefficient");
  Matrix c = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) c(i, i + 1) = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) c(n - 1, k) = -ascending[static_cast<std::size_t>(k)] / lead;
  return c;
}

}  // namespace agreelab::numerics
