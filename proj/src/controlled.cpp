// Controlled, multiplexed and uniformly controlled rotation gates in terms of
// CINC-class gates and local unitaries.

#include <cmath>
#include <string>

#include "hdsynth/error.hpp"
#include "hdsynth/synthesis.hpp"

namespace hdsynth {

namespace {

bool bitwise_equal(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

void check_level(Level k, const Dims& dims, const char* what) {
    if (k < 1 || k > dims.n) {
        throw DimensionError(std::string(what) + ": level " + std::to_string(k) + " outside 1.." +
                             std::to_string(dims.n));
    }
}

void check_pair(Level i, Level j, const Dims& dims, const char* what) {
    if (i < 1 || i >= j || j > dims.n) {
        throw DimensionError(std::string(what) + ": need 1 <= i < j <= n");
    }
}

bool all_zero(const RealVector& v) {
    for (double x : v) {
        if (std::abs(x) > 0.0) {
            return false;
        }
    }
    return true;
}

}  // namespace

RealVector e_basis_diagonal(std::size_t i, std::size_t m) {
    RealVector d(m, 0.0);
    if (i == 1) {
        d.assign(m, 1.0);
        return d;
    }
    // σ_z^{i−1,i} − (|i⟩⟨i| − |i+1⟩⟨i+1|), indices cyclic mod m.
    d[i - 2] += 1.0;
    d[i - 1] -= 2.0;
    d[i % m] += 1.0;
    return d;
}

EBasisSolution solve_e_basis(const RealVector& thetas) {
    const std::size_t m = thetas.size();
    if (m < 2) {
        throw DimensionError("solve_e_basis: need at least two angles");
    }
    if (all_zero(thetas)) {
        return {RealVector(m, 0.0)};
    }
    const auto sz = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd basis(sz, sz);
    for (std::size_t i = 1; i <= m; ++i) {
        RealVector col = e_basis_diagonal(i, m);
        basis.col(static_cast<Eigen::Index>(i - 1)) = Eigen::Map<const Eigen::VectorXd>(col.data(), sz);
    }
    Eigen::Map<const Eigen::VectorXd> rhs(thetas.data(), sz);
    Eigen::VectorXd x = basis.fullPivLu().solve(rhs);
    const double residual = (basis * x - rhs).norm();
    if (residual > 1e-12 * rhs.norm()) {
        throw Error("solve_e_basis: residual " + std::to_string(residual) + " above tolerance");
    }
    return {RealVector(x.data(), x.data() + sz)};
}

Circuit synth_controlled_diagonal(Level k, const RealVector& thetas, const Dims& dims, bool prune) {
    check_level(k, dims, "synth_controlled_diagonal");
    if (thetas.size() != dims.m) {
        throw DimensionError("synth_controlled_diagonal: expected m angles");
    }
    Circuit out(dims);
    if (prune && distance_to_identity(phase_diagonal(thetas)) <= kPruneTolerance) {
        return out;
    }
    const RealVector x = solve_e_basis(thetas).x;

    // R_z^+ = Π_{i≥2} R_z^{i−1,i}(2x_i); the factors are diagonal and commute.
    const auto m = static_cast<Eigen::Index>(dims.m);
    ComplexMatrix rz_plus = ComplexMatrix::Identity(m, m);
    for (std::size_t i = 2; i <= dims.m; ++i) {
        rz_plus = rotation(Axis::z, i - 1, i, dims.m, 2.0 * x[i - 1]) * rz_plus;
    }
    ComplexMatrix rz_minus = rz_plus.adjoint();

    // C_k(e^{ix₁}·I) is the local diagonal exp(i·x₁|k⟩⟨k|) on system 1.
    const auto n = static_cast<Eigen::Index>(dims.n);
    ComplexMatrix local_phase = ComplexMatrix::Identity(n, n);
    local_phase(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k - 1)) = std::polar(1.0, x[0]);

    out.push(gate::CincDagger{k});
    out.push(gate::LocalB{rz_plus});
    out.push(gate::Cinc{k});
    out.push(gate::LocalA{local_phase});
    out.push(gate::LocalB{rz_minus});
    return out;
}

Circuit synth_controlled_unitary(Level k, const ComplexMatrix& u, const Dims& dims, bool prune) {
    check_level(k, dims, "synth_controlled_unitary");
    if (u.rows() != static_cast<Eigen::Index>(dims.m) || u.cols() != u.rows()) {
        throw DimensionError("synth_controlled_unitary: target must be m x m");
    }
    require_unitary(u, "synth_controlled_unitary target");
    Circuit out(dims);
    if (prune && distance_to_identity(u) <= kPruneTolerance) {
        return out;
    }
    SpectralDecomposition sd = spectral_decompose_unitary(u);
    out.push(gate::LocalB{sd.eigvecs.adjoint()});
    out.append(synth_controlled_diagonal(k, sd.phases, dims));
    out.push(gate::LocalB{sd.eigvecs});
    return out;
}

Circuit synth_multiplexor(const std::vector<ComplexMatrix>& branches, Level pivot, const Dims& dims,
                          bool prune, const std::vector<Level>& absorbed) {
    if (branches.size() != dims.n) {
        throw DimensionError("synth_multiplexor: expected " + std::to_string(dims.n) +
                             " branches, got " + std::to_string(branches.size()));
    }
    check_level(pivot, dims, "synth_multiplexor pivot");
    const ComplexMatrix& up = branches[pivot - 1];
    const ComplexMatrix up_dag = up.adjoint();

    std::vector<bool> skip(dims.n + 1, false);
    for (Level a : absorbed) {
        check_level(a, dims, "synth_multiplexor absorbed level");
        if (a == pivot || !bitwise_equal(branches[a - 1], up)) {
            throw Error("synth_multiplexor: absorbed level " + std::to_string(a) +
                        " does not carry the pivot branch");
        }
        skip[a] = true;
    }

    Circuit out(dims);
    for (Level i = 1; i <= dims.n; ++i) {
        if (i == pivot || skip[i]) {
            continue;
        }
        out.append(synth_controlled_unitary(i, up_dag * branches[i - 1], dims, prune));
    }
    if (!(prune && distance_to_identity(up) <= kPruneTolerance)) {
        out.push(gate::LocalB{up});
    }
    return out;
}

Circuit synth_ucr_z(Level i, Level j, const RealVector& angles, const Dims& dims, bool prune) {
    check_pair(i, j, dims, "synth_ucr_z");
    Circuit out(dims);
    if (prune && distance_to_identity(phase_diagonal(angles)) <= kPruneTolerance) {
        return out;
    }
    RealVector negated(angles.size());
    for (std::size_t k = 0; k < angles.size(); ++k) {
        negated[k] = -angles[k];
    }
    out.append(synth_controlled_diagonal(i, negated, dims));
    out.append(synth_controlled_diagonal(j, angles, dims));
    return out;
}

Circuit synth_ucr_x(Level i, Level j, const RealVector& angles, const Dims& dims, bool prune) {
    check_pair(i, j, dims, "synth_ucr_x");
    Circuit out(dims);
    if (prune && distance_to_identity(phase_diagonal(angles)) <= kPruneTolerance) {
        return out;
    }
    out.push(gate::LocalA{rotation(Axis::y, i, j, dims.n, -kPi / 2.0)});
    out.append(synth_ucr_z(i, j, angles, dims));
    out.push(gate::LocalA{rotation(Axis::y, i, j, dims.n, kPi / 2.0)});
    return out;
}

}  // namespace hdsynth
