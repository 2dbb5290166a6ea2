// Copyright 2026 The weakprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/*
 *  Pure states, Hermitian operators, density matrices, the Schmidt
 *  decomposition of bipartite pure states, Von Neumann entropy and the
 *  Hermitian matrix functions built on eigendecomposition.
 *
 *  All matrices are dense. Entropies are in nats.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "weakprobe/errors.hpp"

namespace weakprobe {

using cplx   = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index  = Eigen::Index;

namespace tol {
inline constexpr double normalization      = 1e-10;
inline constexpr double hermiticity        = 1e-10;
inline constexpr double negative_eigenvalue = 1e-10;
inline constexpr double orthonormality     = 1e-10;
// eigenvalues below this contribute nothing to p ln p
inline constexpr double log_cutoff = 1e-12;
// singular values at or below this are dropped from a Schmidt decomposition
inline constexpr double schmidt_rank = 1e-13;
} // namespace tol

inline double max_abs(const Matrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Normalized pure state. Immutable after construction.
class StateVector {
  public:
    explicit StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
        if(amps_.size() == 0) throw DimensionMismatch("state vector must have positive dimension");
        const double n2 = amps_.squaredNorm();
        if(std::abs(n2 - 1.0) > tol::normalization)
            throw NotNormalized("state vector norm^2 = " + std::to_string(n2) + ", expected 1");
    }

    /// Rescales `v` to unit norm. Throws NotNormalized for the zero vector.
    static StateVector normalized(const Vector &v) {
        const double n = v.norm();
        if(!(n > 0.0) || !std::isfinite(n)) throw NotNormalized("cannot normalize a zero or non-finite vector");
        return StateVector(v / n);
    }

    static StateVector basis(Index dim, Index k) {
        Vector v = Vector::Zero(dim);
        v(k)     = 1.0;
        return StateVector(std::move(v));
    }

    [[nodiscard]] Index         dim() const { return amps_.size(); }
    [[nodiscard]] const Vector &amplitudes() const { return amps_; }
    [[nodiscard]] cplx          operator[](Index k) const { return amps_(k); }

  private:
    Vector amps_;
};

/// <bra|ket>
inline cplx inner(const StateVector &bra, const StateVector &ket) {
    if(bra.dim() != ket.dim()) throw DimensionMismatch("inner product of states with different dimensions");
    return bra.amplitudes().dot(ket.amplitudes());
}

/// Square complex matrix equal to its conjugate transpose within tol::hermiticity.
class HermitianObservable {
  public:
    explicit HermitianObservable(Matrix m) : m_(std::move(m)) {
        if(m_.rows() != m_.cols() || m_.rows() == 0) throw DimensionMismatch("observable must be a non-empty square matrix");
        const double err = max_abs(m_ - m_.adjoint());
        if(err > tol::hermiticity) throw InvariantViolation("observable is not Hermitian (max |A - A^dag| = " + std::to_string(err) + ")");
    }

    static HermitianObservable diagonal(std::span<const double> eigenvalues) {
        Matrix m = Matrix::Zero(Index(eigenvalues.size()), Index(eigenvalues.size()));
        for(std::size_t k = 0; k < eigenvalues.size(); ++k) m(Index(k), Index(k)) = eigenvalues[k];
        return HermitianObservable(std::move(m));
    }

    [[nodiscard]] Index         dim() const { return m_.rows(); }
    [[nodiscard]] const Matrix &matrix() const { return m_; }

  private:
    Matrix m_;
};

/// Hermitian, unit-trace, positive semidefinite matrix. Eigenvalues in
/// [-tol::negative_eigenvalue, 0) are clipped to zero; anything more
/// negative is rejected.
class DensityMatrix {
  public:
    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
        if(m_.rows() != m_.cols() || m_.rows() == 0) throw DimensionMismatch("density matrix must be a non-empty square matrix");
        const double herr = max_abs(m_ - m_.adjoint());
        if(herr > tol::hermiticity) throw InvariantViolation("density matrix is not Hermitian (max |rho - rho^dag| = " + std::to_string(herr) + ")");
        const cplx tr = m_.trace();
        if(std::abs(tr - 1.0) > tol::normalization) throw NotNormalized("density matrix trace = " + std::to_string(tr.real()) + ", expected 1");
        Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
        spectrum_.resize(std::size_t(m_.rows()));
        for(Index k = 0; k < m_.rows(); ++k) {
            double p = es.eigenvalues()(k);
            if(p < -tol::negative_eigenvalue) throw InvariantViolation("density matrix has eigenvalue " + std::to_string(p));
            spectrum_[std::size_t(k)] = std::max(p, 0.0);
        }
    }

    static DensityMatrix diagonal(std::span<const double> populations) {
        Matrix m = Matrix::Zero(Index(populations.size()), Index(populations.size()));
        for(std::size_t k = 0; k < populations.size(); ++k) m(Index(k), Index(k)) = populations[k];
        return DensityMatrix(std::move(m));
    }

    [[nodiscard]] Index         dim() const { return m_.rows(); }
    [[nodiscard]] const Matrix &matrix() const { return m_; }
    /// Clipped eigenvalues, ascending.
    [[nodiscard]] const std::vector<double> &spectrum() const { return spectrum_; }

  private:
    Matrix              m_;
    std::vector<double> spectrum_;
};

/// Bipartite pure state  sum_k s_k |a_k>|b_k>. The bases are stored as the
/// columns of `basis_a()` (d_A x K) and `basis_b()` (d_B x K).
class SchmidtForm {
  public:
    SchmidtForm(std::vector<double> coefficients, Matrix basis_a, Matrix basis_b)
        : s_(std::move(coefficients)), a_(std::move(basis_a)), b_(std::move(basis_b)) {
        const auto K = Index(s_.size());
        if(K == 0) throw DimensionMismatch("Schmidt form needs at least one coefficient");
        if(a_.cols() != K || b_.cols() != K) throw DimensionMismatch("Schmidt bases must have one column per coefficient");
        double sum2 = 0.0;
        for(std::size_t k = 0; k < s_.size(); ++k) {
            if(!(s_[k] >= 0.0)) throw InvariantViolation("Schmidt coefficients must be nonnegative");
            if(k > 0 && s_[k] > s_[k - 1]) throw InvariantViolation("Schmidt coefficients must be sorted descending");
            sum2 += s_[k] * s_[k];
        }
        if(std::abs(sum2 - 1.0) > tol::normalization) throw NotNormalized("sum of squared Schmidt coefficients = " + std::to_string(sum2));
        check_orthonormal(a_, "A");
        check_orthonormal(b_, "B");
    }

    /// Schmidt form whose bases are the computational bases of two K-dimensional spaces.
    static SchmidtForm computational(std::vector<double> coefficients) {
        const auto K = Index(coefficients.size());
        return SchmidtForm(std::move(coefficients), Matrix::Identity(K, K), Matrix::Identity(K, K));
    }

    [[nodiscard]] Index                      rank() const { return Index(s_.size()); }
    [[nodiscard]] const std::vector<double> &coefficients() const { return s_; }
    [[nodiscard]] const Matrix              &basis_a() const { return a_; }
    [[nodiscard]] const Matrix              &basis_b() const { return b_; }
    [[nodiscard]] Index                      dim_a() const { return a_.rows(); }
    [[nodiscard]] Index                      dim_b() const { return b_.rows(); }

    [[nodiscard]] std::vector<double> populations() const {
        std::vector<double> p(s_.size());
        std::transform(s_.begin(), s_.end(), p.begin(), [](double s) { return s * s; });
        return p;
    }

    /// psi_{ij} = <i,j|psi>, a d_A x d_B matrix.
    [[nodiscard]] Matrix coefficient_matrix() const {
        Matrix m = Matrix::Zero(a_.rows(), b_.rows());
        for(Index k = 0; k < rank(); ++k) m.noalias() += s_[std::size_t(k)] * a_.col(k) * b_.col(k).transpose();
        return m;
    }

  private:
    static void check_orthonormal(const Matrix &basis, const char *side) {
        const Index K   = basis.cols();
        const double err = max_abs(basis.adjoint() * basis - Matrix::Identity(K, K));
        if(err > tol::orthonormality) throw InvariantViolation(std::string("Schmidt basis ") + side + " is not orthonormal");
    }

    std::vector<double> s_;
    Matrix              a_;
    Matrix              b_;
};

/// Schmidt decomposition via SVD of the coefficient matrix psi_{ij}.
/// Each pair is rephased so the largest-magnitude component of |a_k> is
/// real positive. Singular values <= tol::schmidt_rank are dropped.
inline SchmidtForm schmidt_decompose(const Matrix &coefficients) {
    if(coefficients.size() == 0) throw DimensionMismatch("empty coefficient matrix");
    const double n2 = coefficients.squaredNorm();
    if(std::abs(n2 - 1.0) > tol::normalization) throw NotNormalized("coefficient matrix has squared Frobenius norm " + std::to_string(n2));

    Eigen::JacobiSVD<Matrix> svd(coefficients, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = svd.singularValues();
    Index       K  = 0;
    while(K < sv.size() && sv(K) > tol::schmidt_rank) ++K;
    if(K == 0) throw NotNormalized("coefficient matrix is numerically zero");

    std::vector<double> s(static_cast<std::size_t>(K));
    Matrix              a(coefficients.rows(), K);
    Matrix              b(coefficients.cols(), K);
    double              kept2 = 0.0;
    for(Index k = 0; k < K; ++k) {
        s[std::size_t(k)] = sv(k);
        kept2 += sv(k) * sv(k);
        // M = sum_k s_k u_k v_k^dag  =>  |a_k> = u_k, |b_k> = conj(v_k)
        Vector u = svd.matrixU().col(k);
        Vector v = svd.matrixV().col(k).conjugate();
        Index  imax = 0;
        for(Index j = 1; j < u.size(); ++j)
            if(std::abs(u(j)) > std::abs(u(imax))) imax = j;
        const cplx phase = std::polar(1.0, -std::arg(u(imax)));
        a.col(k)         = u * phase;
        b.col(k)         = v * std::conj(phase);
    }
    // renormalize after dropping numerically-zero singular values
    const double scale = 1.0 / std::sqrt(kept2);
    for(auto &x : s) x *= scale;
    return SchmidtForm(std::move(s), std::move(a), std::move(b));
}

enum class Subsystem { A, B };

/// Reduced density matrix after tracing out `traced_out` from the pure
/// state with coefficient matrix psi_{ij}.
inline DensityMatrix partial_trace(const Matrix &coefficients, Subsystem traced_out) {
    const double n2 = coefficients.squaredNorm();
    if(std::abs(n2 - 1.0) > tol::normalization) throw NotNormalized("coefficient matrix has squared Frobenius norm " + std::to_string(n2));
    Matrix rho = traced_out == Subsystem::B ? Matrix(coefficients * coefficients.adjoint())
                                            : Matrix(coefficients.transpose() * coefficients.conjugate());
    // remove rounding asymmetry
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::move(rho));
}

inline DensityMatrix partial_trace(const SchmidtForm &state, Subsystem traced_out) {
    const Matrix &keep = traced_out == Subsystem::B ? state.basis_a() : state.basis_b();
    Matrix        rho  = Matrix::Zero(keep.rows(), keep.rows());
    const auto    p    = state.populations();
    for(Index k = 0; k < state.rank(); ++k) rho.noalias() += p[std::size_t(k)] * keep.col(k) * keep.col(k).adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::move(rho));
}

/// -sum p ln p over a probability spectrum with 0 ln 0 = 0.
inline double entropy_from_spectrum(std::span<const double> p) {
    double s = 0.0;
    for(double x : p)
        if(x > tol::log_cutoff) s -= x * std::log(x);
    return s;
}

inline double von_neumann_entropy(const DensityMatrix &rho) {
    const double s = entropy_from_spectrum(rho.spectrum());
    return std::clamp(s, 0.0, std::log(double(rho.dim())));
}

/// V f(Lambda) V^dag for Hermitian A = V Lambda V^dag.
template<typename F>
Matrix apply_hermitian_function(const Matrix &A, F &&f) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    const Matrix &V = es.eigenvectors();
    Vector        d(A.rows());
    for(Index k = 0; k < A.rows(); ++k) d(k) = f(es.eigenvalues()(k));
    return V * d.asDiagonal() * V.adjoint();
}

/// rho ln rho. Eigenvalues below tol::log_cutoff contribute zero.
inline Matrix hermitian_log_weighted(const DensityMatrix &rho) {
    return apply_hermitian_function(rho.matrix(), [](double p) -> cplx { return p > tol::log_cutoff ? p * std::log(p) : 0.0; });
}

/// exp(-i theta A)
inline Matrix hermitian_phase_exponential(const HermitianObservable &A, double theta) {
    return apply_hermitian_function(A.matrix(), [theta](double lambda) { return std::polar(1.0, -theta * lambda); });
}

/// Tr(A rho). Throws InvariantViolation if the imaginary residue exceeds 1e-10.
inline double expectation(const HermitianObservable &A, const DensityMatrix &rho) {
    if(A.dim() != rho.dim()) throw DimensionMismatch("expectation: observable and density matrix dimensions differ");
    const cplx tr    = (A.matrix() * rho.matrix()).trace();
    const double tol = 1e-10 * std::max(1.0, max_abs(A.matrix()));
    if(std::abs(tr.imag()) > tol) throw InvariantViolation("Tr(A rho) has imaginary part " + std::to_string(tr.imag()));
    return tr.real();
}

} // namespace weakprobe
