#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hdsynth/circuit.hpp"
#include "hdsynth/counting.hpp"
#include "hdsynth/numerics.hpp"

namespace hdsynth {

/// Gates within this Frobenius distance of the identity are dropped when pruning.
inline constexpr double kPruneTolerance = 1e-10;

/// Coefficients x with diag(thetas) = Σ x_i·E_i, where E_1 = I and
/// E_i = σ_z^{i−1,i} − X·σ_z^{i−1,i}·X† for i ≥ 2.
struct EBasisSolution {
    RealVector x;
};

/// Diagonal of E_i (1-based i) for dimension m.
RealVector e_basis_diagonal(std::size_t i, std::size_t m);

EBasisSolution solve_e_basis(const RealVector& thetas);

struct SynthOptions {
    bool prune_identity = false;
    bool run_elimination = true;
    IrLevel target_level = IrLevel::l3_cinc;
};

// Primitive syntheses. Each returns an L2 circuit built from LocalA, LocalB, Cinc and
// CincDagger. With `prune` set, a gate that is the identity to kPruneTolerance yields
// an empty circuit.

/// C_k(e^{iD}) with one Cinc and one CincDagger.
Circuit synth_controlled_diagonal(Level k, const RealVector& thetas, const Dims& dims,
                                  bool prune = false);

/// C_k(U) = (I⊗W)·C_k(e^{iD})·(I⊗W†) for U = W·e^{iD}·W†.
Circuit synth_controlled_unitary(Level k, const ComplexMatrix& u, const Dims& dims,
                                 bool prune = false);

/// Σ_i |i⟩⟨i|⊗U_i = (I⊗U_p)·Π_{i≠p} C_i(U_p†·U_i). Levels in `absorbed` contribute no
/// controlled factor; their branches must equal U_p exactly.
Circuit synth_multiplexor(const std::vector<ComplexMatrix>& branches, Level pivot,
                          const Dims& dims, bool prune = false,
                          const std::vector<Level>& absorbed = {});

/// exp(−iσ_z^{ij}⊗D) = C_j(e^{iD})·C_i(e^{−iD}).
Circuit synth_ucr_z(Level i, Level j, const RealVector& angles, const Dims& dims,
                    bool prune = false);

/// exp(−iσ_x^{ij}⊗D), the R_z version conjugated by R_y^{ij}(±π/2) on system 1.
Circuit synth_ucr_x(Level i, Level j, const RealVector& angles, const Dims& dims,
                    bool prune = false);

/// One CSD step X = U·V·U′ on a block of `n` levels of dimension m each, with
/// n₁ = ⌊n/2⌋. V is a product of n₁ commuting UcrX gates on pairs (i, n₁+i).
struct CsdStepResult {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    ComplexMatrix u;        ///< diag(U₁, U₂), blocks n₁m and n₂m
    std::vector<gate::UcrX> v_factors;
    ComplexMatrix u_prime;  ///< diag(U′₁, U′₂)

    ComplexMatrix v(std::size_t m) const;
};

CsdStepResult csd_step(const ComplexMatrix& x, std::size_t n, std::size_t m);

/// Recursive CSD to depth ⌈log₂ n⌉. The result alternates Multiplexor gates and
/// runs of UcrX gates (V-blocks): 2^d multiplexors, 2^d − 1 V-blocks.
Circuit decompose_recursive(const ComplexMatrix& x, const Dims& dims);

/// Level pairs of each V-block, in circuit order. Throws ShapeError unless the
/// circuit alternates Multiplexor and non-empty UcrX runs, starting and ending with a
/// Multiplexor.
std::vector<std::vector<std::pair<Level, Level>>> v_block_pairs(const Circuit& c);

struct EliminationResult {
    Circuit circuit;
    std::size_t eliminated = 0;
};

/// Moves each controlled factor on a level untouched by a V-block across it, from the
/// multiplexor applied after the block into the one applied before it.
EliminationResult eliminate_commuting(const Circuit& c);

/// Expands an L2 circuit down to LocalA, LocalB and Cinc controlled on level n.
Circuit lower_to_cinc(const Circuit& c, const SynthOptions& opts = {});

struct SynthesisReport {
    std::size_t cinc_count = 0;
    std::size_t eliminated = 0;
    double reconstruction_error = 0.0;
    counting::PartitionTree partition_tree;
    GateTally per_kind_counts;  ///< of the returned circuit
};

struct SynthesisResult {
    Circuit circuit;
    SynthesisReport report;
};

/// decompose_recursive → eliminate_commuting (optional) → lower_to_cinc (unless the
/// target is L2). cinc_count always refers to the lowered circuit.
SynthesisResult synth_unitary(const ComplexMatrix& x, const Dims& dims, const SynthOptions& opts = {});

}  // namespace hdsynth
