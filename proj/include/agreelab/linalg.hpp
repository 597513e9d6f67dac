#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace agreelab::numerics {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct SymEig {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k pairs with values[k]
};

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Sweeps until the off-diagonal Frobenius norm drops below 1e-12 ||S||_F.
/// Each eigenvector is signed so that its first entry above 1e-12 in
/// magnitude is positive. Throws if S is not symmetric within 1e-12.
SymEig sym_eig(const Matrix& s);

/// Eigenvalues of a general real square matrix.
std::vector<std::complex<double>> eig_general(const Matrix& a);

/// Largest real part over the spectrum; -inf for an empty matrix.
double spectral_abscissa(const Matrix& a);

/// Solves A X + X A^T + Q = 0 for Hurwitz A (Bartels-Stewart on the complex
/// Schur form). Throws "unstable Lyapunov operator" otherwise.
Matrix lyapunov_solve(const Matrix& a, const Matrix& q);

/// Same equation via the vectorized (I (x) A + A (x) I) system. O(n^6), kept
/// for small problems and as an independent check.
Matrix lyapunov_solve_kronecker(const Matrix& a, const Matrix& q);

/// Companion matrix of a monic-normalized polynomial (ascending coefficients
/// a0..an). Last row holds -a_k/a_n.
Matrix companion(const std::vector<double>& ascending);

bool is_symmetric(const Matrix& m, double tol = 1e-12);

}  // namespace agreelab::numerics
