#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace hdsynth {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// ‖A·A† − I‖_F. Infinity for non-square input.
double unitarity_defect(const ComplexMatrix& a);

/// True when unitarity_defect(a) ≤ tol·√rows.
bool is_unitary(const ComplexMatrix& a, double tol = 1e-10);

/// Throws NotUnitaryError when the defect exceeds `tol` (absolute).
void require_unitary(const ComplexMatrix& a, const char* what, double tol = 1e-8);

/// Frobenius distance to the identity of the same size.
double distance_to_identity(const ComplexMatrix& a);

struct QrFactors {
    ComplexMatrix q;
    ComplexMatrix r;  ///< upper triangular, real non-negative diagonal
};

QrFactors qr_decompose(const ComplexMatrix& a);

struct SvdFactors {
    ComplexMatrix u;
    RealVector s;  ///< descending
    ComplexMatrix v;
};

/// a = u · diag(s) · v†.
SvdFactors svd(const ComplexMatrix& a);

struct SpectralDecomposition {
    ComplexMatrix eigvecs;  ///< unitary W
    RealVector phases;      ///< θ_k in (−π, π]

    /// W · diag(e^{iθ}) · W†
    ComplexMatrix reconstruct() const;
};

/// u = W · diag(e^{iθ_k}) · W† through complex Schur triangularization, so W stays
/// unitary when eigenvalues are degenerate.
SpectralDecomposition spectral_decompose_unitary(const ComplexMatrix& u);

/// Two-by-two block cosine-sine decomposition of a unitary of size p + q, p ≤ q:
///
///     x = diag(u1, u2) · [ C  -S  0 ]  · diag(v1, v2)
///                        [ S   C  0 ]
///                        [ 0   0  I ]
///
/// with C = diag(cos θ), S = diag(sin θ), θ ∈ [0, π/2].
struct CsdFactors {
    ComplexMatrix u1, u2, v1, v2;
    RealVector thetas;

    std::size_t p() const { return static_cast<std::size_t>(u1.rows()); }
    std::size_t q() const { return static_cast<std::size_t>(u2.rows()); }

    /// The middle cosine-sine factor.
    ComplexMatrix middle() const;
    ComplexMatrix reconstruct() const;
};

CsdFactors csd(const ComplexMatrix& x, std::size_t p);

/// Haar-distributed unitary from the QR of a complex Ginibre matrix. Deterministic in `seed`.
ComplexMatrix haar_random_unitary(std::size_t dim, std::uint64_t seed);

/// Block-diagonal direct sum.
ComplexMatrix direct_sum(const std::vector<ComplexMatrix>& blocks);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Principal phase of z in (−π, π].
double principal_arg(Complex z);

}  // namespace hdsynth
