#include "hdsynth/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "hdsynth/error.hpp"

namespace hdsynth {

namespace {

Complex unit_phase(Complex z) {
    double r = std::abs(z);
    return r > 0.0 ? z / r : Complex(1.0, 0.0);
}

void require_square(const ComplexMatrix& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

}  // namespace

double unitarity_defect(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    ComplexMatrix g = a * a.adjoint();
    g -= ComplexMatrix::Identity(a.rows(), a.cols());
    return g.norm();
}

bool is_unitary(const ComplexMatrix& a, double tol) {
    return unitarity_defect(a) <= tol * std::sqrt(static_cast<double>(a.rows()));
}

void require_unitary(const ComplexMatrix& a, const char* what, double tol) {
    double defect = unitarity_defect(a);
    if (!(defect <= tol)) {
        throw NotUnitaryError(std::string(what) + " is not unitary", defect);
    }
}

double distance_to_identity(const ComplexMatrix& a) {
    return (a - ComplexMatrix::Identity(a.rows(), a.cols())).norm();
}

double principal_arg(Complex z) {
    double phi = std::atan2(z.imag(), z.real());
    // atan2 yields −π for (−0, x<0); fold it onto the closed end of the range.
    return phi <= -kPi ? kPi : phi;
}

QrFactors qr_decompose(const ComplexMatrix& a) {
    require_square(a, "qr_decompose");
    const Eigen::Index n = a.rows();
    Eigen::HouseholderQR<ComplexMatrix> qr(a);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        Complex ph = unit_phase(r(i, i));
        q.col(i) *= ph;
        r.row(i) *= std::conj(ph);
        r(i, i) = Complex(std::abs(r(i, i)), 0.0);
    }
    return {std::move(q), std::move(r)};
}

SvdFactors svd(const ComplexMatrix& a) {
    require_square(a, "svd");
    Eigen::JacobiSVD<ComplexMatrix> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = dec.singularValues();
    return {dec.matrixU(), RealVector(sv.data(), sv.data() + sv.size()), dec.matrixV()};
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
    Eigen::VectorXcd d(static_cast<Eigen::Index>(phases.size()));
    for (std::size_t k = 0; k < phases.size(); ++k) {
        d(static_cast<Eigen::Index>(k)) = std::polar(1.0, phases[k]);
    }
    return eigvecs * d.asDiagonal() * eigvecs.adjoint();
}

SpectralDecomposition spectral_decompose_unitary(const ComplexMatrix& u) {
    require_square(u, "spectral_decompose_unitary");
    require_unitary(u, "spectral_decompose_unitary input");
    // For a normal matrix the Schur factor is diagonal up to roundoff and the Schur
    // basis is an orthonormal eigenbasis, degenerate eigenvalues included.
    Eigen::ComplexSchur<ComplexMatrix> schur(u, true);
    if (schur.info() != Eigen::Success) {
        throw Error("spectral_decompose_unitary: Schur iteration did not converge");
    }
    const ComplexMatrix& t = schur.matrixT();
    RealVector phases(static_cast<std::size_t>(u.rows()));
    for (Eigen::Index k = 0; k < u.rows(); ++k) {
        phases[static_cast<std::size_t>(k)] = principal_arg(t(k, k));
    }
    return {schur.matrixU(), std::move(phases)};
}

ComplexMatrix CsdFactors::middle() const {
    const auto pp = static_cast<Eigen::Index>(p());
    const auto qq = static_cast<Eigen::Index>(q());
    ComplexMatrix mid = ComplexMatrix::Identity(pp + qq, pp + qq);
    for (Eigen::Index i = 0; i < pp; ++i) {
        double c = std::cos(thetas[static_cast<std::size_t>(i)]);
        double s = std::sin(thetas[static_cast<std::size_t>(i)]);
        mid(i, i) = c;
        mid(i, pp + i) = -s;
        mid(pp + i, i) = s;
        mid(pp + i, pp + i) = c;
    }
    return mid;
}

ComplexMatrix CsdFactors::reconstruct() const {
    return direct_sum({u1, u2}) * middle() * direct_sum({v1, v2});
}

CsdFactors csd(const ComplexMatrix& x, std::size_t p) {
    require_square(x, "csd");
    const auto dim = static_cast<std::size_t>(x.rows());
    if (p == 0 || p >= dim || p > dim - p) {
        throw DimensionError("csd: partition p=" + std::to_string(p) + " invalid for size " +
                             std::to_string(dim) + " (need 0 < p <= q)");
    }
    require_unitary(x, "csd input");

    const auto pp = static_cast<Eigen::Index>(p);
    const auto qq = static_cast<Eigen::Index>(dim - p);

    // x11 = U1 · C · V1†, cosines descending.
    Eigen::JacobiSVD<ComplexMatrix> top(x.topLeftCorner(pp, pp),
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
    ComplexMatrix u1 = top.matrixU();
    ComplexMatrix v1_basis = top.matrixV();
    Eigen::VectorXd cosines = top.singularValues().cwiseMin(1.0);

    // Columns of x21 · V1 are mutually orthogonal with norms sin θ. Orthonormalize them
    // largest-norm first so columns with vanishing sine are completed from the
    // orthogonal complement instead of being normalized from noise.
    ComplexMatrix y = x.bottomLeftCorner(qq, pp) * v1_basis;
    ComplexMatrix u2 = ComplexMatrix::Identity(qq, qq);
    RealVector thetas(p, 0.0);
    // An exactly zero x21 leaves every sine at 0 and U2 = I as a valid basis.
    if (!y.isZero(0.0)) {
        Eigen::HouseholderQR<ComplexMatrix> qr(y.rowwise().reverse());
        ComplexMatrix q_full = qr.householderQ() * ComplexMatrix::Identity(qq, qq);
        const ComplexMatrix& r = qr.matrixQR();
        for (Eigen::Index i = 0; i < pp; ++i) {
            Eigen::Index j = pp - 1 - i;
            Complex rjj = r(j, j);
            u2.col(i) = q_full.col(j) * unit_phase(rjj);
            thetas[static_cast<std::size_t>(i)] = std::atan2(std::abs(rjj), cosines(i));
        }
        u2.rightCols(qq - pp) = q_full.rightCols(qq - pp);
    }

    // With z = diag(U1, U2)† · x the right block column is [−S·A; C·A; B] where
    // v2 = [A; B]. Since C² + S² = I, A = C·z₂ − S·z₁.
    ComplexMatrix z_right(pp + qq, qq);
    z_right.topRows(pp) = u1.adjoint() * x.topRightCorner(pp, qq);
    z_right.bottomRows(qq) = u2.adjoint() * x.bottomRightCorner(qq, qq);

    ComplexMatrix v2(qq, qq);
    for (Eigen::Index i = 0; i < pp; ++i) {
        double c = std::cos(thetas[static_cast<std::size_t>(i)]);
        double s = std::sin(thetas[static_cast<std::size_t>(i)]);
        v2.row(i) = c * z_right.row(pp + i) - s * z_right.row(i);
    }
    v2.bottomRows(qq - pp) = z_right.bottomRows(qq - pp);

    return {std::move(u1), std::move(u2), v1_basis.adjoint(), std::move(v2), std::move(thetas)};
}

ComplexMatrix haar_random_unitary(std::size_t dim, std::uint64_t seed) {
    if (dim == 0) {
        throw DimensionError("haar_random_unitary: dim must be positive");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const auto n = static_cast<Eigen::Index>(dim);
    ComplexMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double re = normal(rng);
            double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    // Non-negative R diagonal removes the phase bias of Householder QR.
    return qr_decompose(g).q;
}

ComplexMatrix direct_sum(const std::vector<ComplexMatrix>& blocks) {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    ComplexMatrix out = ComplexMatrix::Zero(rows, cols);
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace hdsynth
