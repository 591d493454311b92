#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hdsynth/numerics.hpp"

namespace hdsynth {

/// Subsystem dimensions of H_n ⊗ H_m. System 1 (dimension n) is the control side.
struct Dims {
    std::size_t n = 2;
    std::size_t m = 2;

    Dims() = default;
    Dims(std::size_t n_, std::size_t m_);

    std::size_t total() const { return n * m; }
    friend bool operator==(const Dims&, const Dims&) = default;
};

/// Levels are 1-based throughout: |1⟩ … |n⟩.
using Level = std::size_t;

enum class Axis { x, y, z };

/// σ^{ij}_{axis,n}.
ComplexMatrix sigma(Axis axis, Level i, Level j, std::size_t n);

/// exp(−i·θ/2·σ^{ij}_{axis,n}).
ComplexMatrix rotation(Axis axis, Level i, Level j, std::size_t n, double theta);

/// Cyclic increment X_n: |i⟩ → |i+1 mod n⟩.
ComplexMatrix increment(std::size_t n);

/// T_n = |1⟩⟨1| + Σ_{i≥2} |i⟩⟨n+2−i|, the involution with T·X·T = X†.
ComplexMatrix t_matrix(std::size_t n);

/// Permutation matrix exchanging levels a and b.
ComplexMatrix transposition(Level a, Level b, std::size_t n);

/// diag(e^{iθ_1}, …, e^{iθ_k}).
ComplexMatrix phase_diagonal(const RealVector& thetas);

namespace gate {

struct LocalA {
    ComplexMatrix u;  ///< n×n, acts on system 1
};
struct LocalB {
    ComplexMatrix u;  ///< m×m, acts on system 2
};
/// C_k(X_m).
struct Cinc {
    Level control = 1;
};
/// C_k(X_m†).
struct CincDagger {
    Level control = 1;
};
/// C_k(U) = |k⟩⟨k| ⊗ U + Σ_{i≠k} |i⟩⟨i| ⊗ I.
struct ControlledU {
    Level control = 1;
    ComplexMatrix u;
};
/// C_k(e^{iD}) with D = diag(thetas).
struct ControlledDiag {
    Level control = 1;
    RealVector thetas;
};
/// Σ_i |i⟩⟨i| ⊗ U_i. `pivot` selects the branch factored out when lowering; 0 means level 1.
struct Multiplexor {
    std::vector<ComplexMatrix> branches;
    Level pivot = 0;
    /// Levels whose controlled factor was fused into a neighbouring multiplexor;
    /// each such branch equals the pivot branch.
    std::vector<Level> absorbed;
};
/// exp(−i σ_z^{ij} ⊗ diag(angles)), a rotation on system 1 controlled by system 2.
struct UcrZ {
    Level i = 1;
    Level j = 2;
    RealVector angles;
};
/// exp(−i σ_x^{ij} ⊗ diag(angles)).
struct UcrX {
    Level i = 1;
    Level j = 2;
    RealVector angles;
};

}  // namespace gate

using Gate = std::variant<gate::LocalA, gate::LocalB, gate::Cinc, gate::CincDagger,
                          gate::ControlledU, gate::ControlledDiag, gate::Multiplexor,
                          gate::UcrZ, gate::UcrX>;

/// Stable lowercase name of a gate kind, as used in JSON and tallies.
std::string_view kind_name(const Gate& g);

bool is_cinc_class(const Gate& g);

/// Full nm×nm matrix of `g`, tensor order system-1-major.
ComplexMatrix gate_matrix(const Gate& g, const Dims& dims);

/// Throws DimensionError when `g` does not fit `dims`.
void validate_gate(const Gate& g, const Dims& dims);

enum class IrLevel { l2_mixed, l3_cinc };

std::string_view to_string(IrLevel level);

/// Ordered gate list. gates[0] is applied first, so the circuit matrix is
/// gate_matrix(gates[t−1]) ··· gate_matrix(gates[0]).
struct Circuit {
    Dims dims;
    std::vector<Gate> gates;
    IrLevel level = IrLevel::l2_mixed;

    Circuit() = default;
    explicit Circuit(Dims d, IrLevel lvl = IrLevel::l2_mixed) : dims(d), level(lvl) {}

    void push(Gate g) { gates.push_back(std::move(g)); }
    /// Appends all gates of `other`, which is applied after this circuit.
    void append(const Circuit& other);
    std::size_t size() const { return gates.size(); }
    bool empty() const { return gates.empty(); }
};

/// Verifies the L3 contract: only LocalA, LocalB and Cinc controlled on level n.
bool is_cinc_level(const Circuit& c);

ComplexMatrix simulate(const Circuit& c);

/// Per-kind gate counts keyed by kind_name.
struct GateTally {
    std::map<std::string, std::size_t> per_kind;

    /// Cinc plus CincDagger; the two cost the same up to local gates.
    std::size_t cinc_total() const;
    std::size_t operator[](std::string_view kind) const;
};

GateTally count_gates(const Circuit& c);

}  // namespace hdsynth
