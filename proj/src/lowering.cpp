#include <optional>

#include "hdsynth/error.hpp"
#include "hdsynth/synthesis.hpp"

namespace hdsynth {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool exactly_identity(const ComplexMatrix& a) {
    return (a.array() == ComplexMatrix::Identity(a.rows(), a.cols()).array()).all();
}

/// Expands every composite gate into LocalA, LocalB, Cinc and CincDagger.
Circuit expand_composites(const Circuit& c, bool prune) {
    const Dims& dims = c.dims;
    Circuit out(dims);
    for (const Gate& g : c.gates) {
        std::visit(overloaded{
                       [&](const gate::LocalA& x) { out.push(x); },
                       [&](const gate::LocalB& x) { out.push(x); },
                       [&](const gate::Cinc& x) { out.push(x); },
                       [&](const gate::CincDagger& x) { out.push(x); },
                       [&](const gate::ControlledU& x) {
                           out.append(synth_controlled_unitary(x.control, x.u, dims, prune));
                       },
                       [&](const gate::ControlledDiag& x) {
                           out.append(synth_controlled_diagonal(x.control, x.thetas, dims, prune));
                       },
                       [&](const gate::Multiplexor& x) {
                           out.append(synth_multiplexor(x.branches, x.pivot == 0 ? 1 : x.pivot, dims, prune, x.absorbed));
                       },
                       [&](const gate::UcrZ& x) { out.append(synth_ucr_z(x.i, x.j, x.angles, dims, prune)); },
                       [&](const gate::UcrX& x) { out.append(synth_ucr_x(x.i, x.j, x.angles, dims, prune)); },
                   },
                   g);
    }
    return out;
}

/// Drops uniformly controlled rotations within kPruneTolerance of the identity and
/// fuses multiplexors that become adjacent as a result.
Circuit prune_rotations(const Circuit& c) {
    Circuit out(c.dims, c.level);
    for (const Gate& g : c.gates) {
        const RealVector* angles = nullptr;
        if (const auto* x = std::get_if<gate::UcrX>(&g)) {
            angles = &x->angles;
        } else if (const auto* z = std::get_if<gate::UcrZ>(&g)) {
            angles = &z->angles;
        }
        if (angles != nullptr && distance_to_identity(phase_diagonal(*angles)) <= kPruneTolerance) {
            continue;
        }
        const auto* next = std::get_if<gate::Multiplexor>(&g);
        auto* prev = out.empty() ? nullptr : std::get_if<gate::Multiplexor>(&out.gates.back());
        if (next != nullptr && prev != nullptr) {
            for (std::size_t i = 0; i < prev->branches.size(); ++i) {
                prev->branches[i] = next->branches[i] * prev->branches[i];
            }
            prev->pivot = 0;
            prev->absorbed.clear();
            continue;
        }
        out.push(g);
    }
    return out;
}

}  // namespace

Circuit lower_to_cinc(const Circuit& c, const SynthOptions& opts) {
    const Dims& dims = c.dims;
    for (const Gate& g : c.gates) {
        validate_gate(g, dims);
    }
    Circuit expanded = expand_composites(c, opts.prune_identity);

    const ComplexMatrix t = t_matrix(dims.m);
    Circuit out(dims, IrLevel::l3_cinc);

    // Consecutive locals collapse into one LocalA and one LocalB; the two act on
    // different subsystems and commute.
    std::optional<ComplexMatrix> pending_a;
    std::optional<ComplexMatrix> pending_b;
    auto apply_a = [&](const ComplexMatrix& u) { pending_a = pending_a ? ComplexMatrix(u * *pending_a) : u; };
    auto apply_b = [&](const ComplexMatrix& u) { pending_b = pending_b ? ComplexMatrix(u * *pending_b) : u; };
    auto keep = [&](const ComplexMatrix& u) {
        if (exactly_identity(u)) {
            return false;
        }
        return !(opts.prune_identity && distance_to_identity(u) <= kPruneTolerance);
    };
    auto flush = [&]() {
        if (pending_a && keep(*pending_a)) {
            out.push(gate::LocalA{*pending_a});
        }
        if (pending_b && keep(*pending_b)) {
            out.push(gate::LocalB{*pending_b});
        }
        pending_a.reset();
        pending_b.reset();
    };
    // C_k(X) = (P_{k↔n} ⊗ I)·C_n(X)·(P_{k↔n} ⊗ I).
    auto emit_cinc = [&](Level k) {
        const bool relocate = k != dims.n;
        const ComplexMatrix p = transposition(k, dims.n, dims.n);
        if (relocate) {
            apply_a(p);
        }
        flush();
        out.push(gate::Cinc{dims.n});
        if (relocate) {
            apply_a(p);
        }
    };

    for (const Gate& g : expanded.gates) {
        if (const auto* a = std::get_if<gate::LocalA>(&g)) {
            apply_a(a->u);
        } else if (const auto* b = std::get_if<gate::LocalB>(&g)) {
            apply_b(b->u);
        } else if (const auto* x = std::get_if<gate::Cinc>(&g)) {
            emit_cinc(x->control);
        } else if (const auto* xd = std::get_if<gate::CincDagger>(&g)) {
            // C_k(X†) = (I ⊗ T)·C_k(X)·(I ⊗ T).
            apply_b(t);
            emit_cinc(xd->control);
            apply_b(t);
        } else {
            throw Error("lower_to_cinc: unexpanded gate '" + std::string(kind_name(g)) + "'");
        }
    }
    flush();
    return out;
}

SynthesisResult synth_unitary(const ComplexMatrix& x, const Dims& dims, const SynthOptions& opts) {
    if (x.rows() != static_cast<Eigen::Index>(dims.total()) || x.cols() != x.rows()) {
        throw DimensionError("synth_unitary: matrix is " + std::to_string(x.rows()) + "x" +
                             std::to_string(x.cols()) + ", expected " + std::to_string(dims.total()) +
                             " square");
    }
    require_unitary(x, "synth_unitary input");

    SynthesisResult result;
    result.report.partition_tree = counting::partition_tree(dims.n);

    Circuit l2 = decompose_recursive(x, dims);
    if (opts.run_elimination) {
        EliminationResult e = eliminate_commuting(l2);
        l2 = std::move(e.circuit);
        result.report.eliminated = e.eliminated;
    }
    if (opts.prune_identity) {
        l2 = prune_rotations(l2);
    }
    Circuit lowered = lower_to_cinc(l2, opts);
    result.report.cinc_count = count_gates(lowered).cinc_total();
    result.circuit = opts.target_level == IrLevel::l3_cinc ? std::move(lowered) : std::move(l2);
    result.report.per_kind_counts = count_gates(result.circuit);
    result.report.reconstruction_error = (simulate(result.circuit) - x).norm();
    return result;
}

}  // namespace hdsynth
