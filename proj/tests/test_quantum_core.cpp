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

#include "weakprobe/quantum_core.hpp"

#include "gtest/gtest.h"

#include "test_support.hpp"

using namespace weakprobe;
using namespace weakprobe::testing;

namespace {

Matrix diag2(double a, double b) { return vec({a, b}).asDiagonal(); }

void expect_orthonormal(const Matrix &basis) {
    EXPECT_LE(max_abs(basis.adjoint() * basis - Matrix::Identity(basis.cols(), basis.cols())), 1e-10);
}

} // namespace

TEST(StateVector, rejects_unnormalized) {
    EXPECT_THROW(StateVector(vec({1.0, 1.0})), NotNormalized);
    EXPECT_THROW(StateVector::normalized(vec({0.0, 0.0})), NotNormalized);
    EXPECT_NEAR(StateVector::normalized(vec({3.0, cplx(0, 4)})).amplitudes().norm(), 1.0, 1e-15);
}

TEST(HermitianObservable, rejects_non_hermitian) {
    Matrix m(2, 2);
    m << 1.0, 1.0, 0.0, 1.0;
    EXPECT_THROW(HermitianObservable{m}, InvariantViolation);
    EXPECT_THROW(HermitianObservable{Matrix(2, 3)}, DimensionMismatch);
}

TEST(DensityMatrix, validates_invariants) {
    EXPECT_THROW(DensityMatrix{diag2(0.5, 0.6)}, NotNormalized);
    EXPECT_THROW(DensityMatrix{diag2(1.1, -0.1)}, InvariantViolation);
    // tiny negative eigenvalues are clipped, not rejected
    DensityMatrix rho(diag2(1.0 + 5e-11, -5e-11));
    EXPECT_EQ(rho.spectrum().front(), 0.0);
}

TEST(SchmidtForm, validates_invariants) {
    EXPECT_THROW(SchmidtForm::computational({0.6, 0.8}), InvariantViolation); // ascending
    EXPECT_THROW(SchmidtForm::computational({0.9, 0.1}), NotNormalized);
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1)  = 0.5;
    EXPECT_THROW(SchmidtForm({0.8, 0.6}, bad, Matrix::Identity(2, 2)), InvariantViolation);
}

TEST(schmidt_decompose, product_state) {
    const auto f = schmidt_decompose(diag2(1.0, 0.0));
    ASSERT_EQ(f.rank(), 1);
    EXPECT_NEAR(f.coefficients()[0], 1.0, 1e-15);
}

TEST(schmidt_decompose, bell_state) {
    const auto f = schmidt_decompose(diag2(inv_sqrt2, inv_sqrt2));
    ASSERT_EQ(f.rank(), 2);
    EXPECT_NEAR(f.coefficients()[0], inv_sqrt2, 1e-12);
    EXPECT_NEAR(f.coefficients()[1], inv_sqrt2, 1e-12);
    // the basis inside a degenerate block is not unique; check the recomposition only
    EXPECT_LE(max_abs(f.coefficient_matrix() - diag2(inv_sqrt2, inv_sqrt2)), 1e-12);
}

TEST(schmidt_decompose, hadamard_rotated_state) {
    Matrix H(2, 2);
    H << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
    const Matrix M = H * diag2(std::sqrt(0.9), std::sqrt(0.1));
    const auto   oracle = singular_values_oracle(M);
    const auto   f = schmidt_decompose(M);
    ASSERT_EQ(f.rank(), 2);
    EXPECT_NEAR(oracle[0], std::sqrt(0.9), 1e-12);
    EXPECT_NEAR(oracle[1], std::sqrt(0.1), 1e-12);
    EXPECT_NEAR(f.coefficients()[0], oracle[0], 1e-12);
    EXPECT_NEAR(f.coefficients()[1], oracle[1], 1e-12);
    EXPECT_LE(max_abs(f.coefficient_matrix() - M), 1e-12);
}

TEST(schmidt_decompose, rejects_unnormalized) { EXPECT_THROW(schmidt_decompose(diag2(1.0, 1.0)), NotNormalized); }

TEST(schmidt_decompose, phase_convention) {
    std::mt19937_64 rng(7);
    const auto      f = schmidt_decompose(random_normalized_coefficients(3, 4, rng));
    for(Index k = 0; k < f.rank(); ++k) {
        const Vector a    = f.basis_a().col(k);
        Index        imax = 0;
        a.cwiseAbs().maxCoeff(&imax);
        EXPECT_GT(a(imax).real(), 0.0);
        EXPECT_NEAR(a(imax).imag(), 0.0, 1e-15);
    }
}

TEST(schmidt_decompose, round_trip_random_states) {
    std::mt19937_64 rng(2026);
    std::uniform_int_distribution<int> dim(2, 8);
    for(int trial = 0; trial < 100; ++trial) {
        const Matrix M = random_normalized_coefficients(dim(rng), dim(rng), rng);
        const auto   f = schmidt_decompose(M);
        EXPECT_LE(max_abs(f.coefficient_matrix() - M), 1e-10);
        expect_orthonormal(f.basis_a());
        expect_orthonormal(f.basis_b());
        EXPECT_TRUE(std::is_sorted(f.coefficients().rbegin(), f.coefficients().rend()));
        const auto oracle = singular_values_oracle(M);
        for(Index k = 0; k < f.rank(); ++k) EXPECT_NEAR(f.coefficients()[std::size_t(k)], oracle[std::size_t(k)], 1e-10);
    }
}

TEST(partial_trace, examples) {
    const DensityMatrix bell = partial_trace(diag2(inv_sqrt2, inv_sqrt2), Subsystem::A);
    EXPECT_LE(max_abs(bell.matrix() - diag2(0.5, 0.5)), 1e-15);

    const DensityMatrix product = partial_trace(diag2(1.0, 0.0), Subsystem::B);
    EXPECT_LE(max_abs(product.matrix() - diag2(1.0, 0.0)), 1e-15);

    const DensityMatrix r1 = partial_trace(r1_probe(), Subsystem::A);
    EXPECT_LE(max_abs(r1.matrix() - diag2(0.9, 0.1)), 1e-15);
}

TEST(partial_trace, both_sides_share_spectrum) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(2, 8);
    for(int trial = 0; trial < 100; ++trial) {
        const Matrix        M  = random_normalized_coefficients(dim(rng), dim(rng), rng);
        const auto          f  = schmidt_decompose(M);
        const DensityMatrix ra = partial_trace(f, Subsystem::A);
        const DensityMatrix rb = partial_trace(f, Subsystem::B);
        // also against the coefficient-matrix route
        const DensityMatrix rb_direct = partial_trace(M, Subsystem::B);
        EXPECT_LE(max_abs(rb.matrix() - rb_direct.matrix()), 1e-10);

        std::vector<double> sa(ra.spectrum()), sb(rb.spectrum());
        std::sort(sa.rbegin(), sa.rend());
        std::sort(sb.rbegin(), sb.rend());
        const auto p = f.populations();
        for(std::size_t k = 0; k < std::min(sa.size(), sb.size()); ++k) {
            EXPECT_NEAR(sa[k], sb[k], 1e-9);
            if(k < p.size()) {
                EXPECT_NEAR(sa[k], p[k], 1e-9);
            }
        }
    }
}

TEST(von_neumann_entropy, examples) {
    EXPECT_EQ(von_neumann_entropy(DensityMatrix(diag2(1.0, 0.0))), 0.0);
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix(diag2(0.5, 0.5))), std::log(2.0), 1e-15);
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix(diag2(0.9, 0.1))), r1::entropy_sigma, 1e-12);
}

TEST(von_neumann_entropy, unitary_invariance_and_bounds) {
    std::mt19937_64 rng(3);
    for(int trial = 0; trial < 50; ++trial) {
        const Index         d   = 2 + trial % 7;
        const DensityMatrix rho = random_density(d, rng);
        const Matrix        U   = random_unitary(d, rng);
        Matrix              rot = U * rho.matrix() * U.adjoint();
        rot                     = 0.5 * (rot + rot.adjoint()).eval();
        const double S          = von_neumann_entropy(rho);
        EXPECT_NEAR(von_neumann_entropy(DensityMatrix(rot)), S, 1e-9);
        EXPECT_GE(S, 0.0);
        EXPECT_LE(S, std::log(double(d)) + 1e-12);
    }
}

TEST(hermitian_log_weighted, examples) {
    const double h = -0.5 * std::log(2.0);
    EXPECT_LE(max_abs(hermitian_log_weighted(DensityMatrix(diag2(0.5, 0.5))) - diag2(h, h)), 1e-15);
    EXPECT_LE(max_abs(hermitian_log_weighted(DensityMatrix(diag2(1.0, 0.0)))), 1e-15);
    EXPECT_LE(max_abs(hermitian_log_weighted(DensityMatrix(diag2(0.9, 0.1))) - diag2(r1::sigma_ln_sigma[0], r1::sigma_ln_sigma[1])), 1e-12);
}

TEST(hermitian_log_weighted, trace_is_minus_entropy) {
    std::mt19937_64 rng(5);
    for(int trial = 0; trial < 50; ++trial) {
        const DensityMatrix rho = random_density(2 + trial % 7, rng);
        EXPECT_NEAR(hermitian_log_weighted(rho).trace().real(), -von_neumann_entropy(rho), 1e-10);
    }
}

TEST(hermitian_phase_exponential, examples) {
    const auto Z = pauli_z();
    EXPECT_LE(max_abs(hermitian_phase_exponential(Z, 0.0) - Matrix::Identity(2, 2)), 1e-15);
    EXPECT_LE(max_abs(hermitian_phase_exponential(Z, std::numbers::pi) + Matrix::Identity(2, 2)), 1e-15);
    // element-wise scalar exponentials
    const Matrix expected = vec({std::exp(cplx(0, -0.1)), std::exp(cplx(0, 0.1))}).asDiagonal();
    EXPECT_LE(max_abs(hermitian_phase_exponential(Z, 0.1) - expected), 1e-15);
}

TEST(hermitian_phase_exponential, unitary_and_additive) {
    std::mt19937_64 rng(17);
    for(int trial = 0; trial < 50; ++trial) {
        const Index  d  = 2 + trial % 7;
        const auto   A  = random_hermitian(d, rng);
        const Matrix U1 = hermitian_phase_exponential(A, 0.3);
        const Matrix U2 = hermitian_phase_exponential(A, -1.1);
        EXPECT_LE(max_abs(U1 * U1.adjoint() - Matrix::Identity(d, d)), 1e-10);
        EXPECT_LE(max_abs(U1 * U2 - hermitian_phase_exponential(A, 0.3 - 1.1)), 1e-9);
        // independent route: Pade matrix exponential
        const Matrix pade = (cplx(0, -0.3) * A.matrix()).exp();
        EXPECT_LE(max_abs(U1 - pade), 1e-9);
    }
}

TEST(expectation, examples) {
    const DensityMatrix rho(diag2(0.9, 0.1));
    EXPECT_NEAR(expectation(HermitianObservable(Matrix::Identity(2, 2)), rho), 1.0, 1e-15);
    EXPECT_NEAR(expectation(HermitianObservable(diag2(0.0, 1.0)), rho), 0.1, 1e-15);
    EXPECT_NEAR(expectation(pauli_z(), rho), 0.8, 1e-15);
    EXPECT_THROW(expectation(HermitianObservable(Matrix::Identity(3, 3)), rho), DimensionMismatch);
}
