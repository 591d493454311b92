// Recursive cosine-sine decomposition of a unitary on H_n ⊗ H_m into alternating
// multiplexors and V-blocks, and the commutation-based elimination pass over that shape.

#include <algorithm>
#include <set>
#include <string>
#include <variant>

#include "hdsynth/counting.hpp"
#include "hdsynth/error.hpp"
#include "hdsynth/synthesis.hpp"

namespace hdsynth {

namespace {

/// A diagonal block of a block-diagonal factor, in units of m.
struct Block {
    std::size_t offset = 0;  // first level, 0-based
    std::size_t size = 0;    // number of levels
    ComplexMatrix mat;
};

using BlockDiagonal = std::vector<Block>;
using VBlock = std::vector<gate::UcrX>;
using Factor = std::variant<BlockDiagonal, VBlock>;

}  // namespace

ComplexMatrix CsdStepResult::v(std::size_t m) const {
    const Dims dims(n1 + n2, m);
    const auto dim = static_cast<Eigen::Index>(dims.total());
    ComplexMatrix acc = ComplexMatrix::Identity(dim, dim);
    for (const auto& g : v_factors) {
        acc = gate_matrix(g, dims) * acc;
    }
    return acc;
}

CsdStepResult csd_step(const ComplexMatrix& x, std::size_t n, std::size_t m) {
    if (n < 2 || m < 1 || x.rows() != static_cast<Eigen::Index>(n * m) || x.cols() != x.rows()) {
        throw DimensionError("csd_step: matrix size does not match n*m with n >= 2");
    }
    CsdStepResult out;
    out.n1 = n / 2;
    out.n2 = n - out.n1;
    const std::size_t p = out.n1 * m;
    CsdFactors f = csd(x, p);

    // Absorb ±i into the second blocks so the middle factor becomes [C, −iS; −iS, C].
    const auto pp = static_cast<Eigen::Index>(p);
    ComplexMatrix u2 = f.u2;
    u2.leftCols(pp) *= Complex(0.0, 1.0);
    ComplexMatrix v2 = f.v2;
    v2.topRows(pp) *= Complex(0.0, -1.0);
    out.u = direct_sum({f.u1, u2});
    out.u_prime = direct_sum({f.v1, v2});

    // Angle (a−1)·m + (k−1) couples level a with level n₁+a at system-2 state k.
    for (std::size_t a = 1; a <= out.n1; ++a) {
        gate::UcrX g{a, out.n1 + a, RealVector(m)};
        for (std::size_t k = 0; k < m; ++k) {
            g.angles[k] = f.thetas[(a - 1) * m + k];
        }
        out.v_factors.push_back(std::move(g));
    }
    return out;
}

Circuit decompose_recursive(const ComplexMatrix& x, const Dims& dims) {
    if (x.rows() != static_cast<Eigen::Index>(dims.total()) || x.cols() != x.rows()) {
        throw DimensionError("decompose_recursive: matrix is not nm x nm");
    }
    require_unitary(x, "decompose_recursive input");
    const auto m = static_cast<Eigen::Index>(dims.m);
    const counting::PartitionTree tree = counting::partition_tree(dims.n);

    // Product order: factors[0] is the leftmost matrix factor.
    std::vector<Factor> factors{BlockDiagonal{Block{0, dims.n, x}}};

    for (std::size_t depth = 1; depth <= tree.d; ++depth) {
        std::vector<Factor> next;
        next.reserve(factors.size() * 3);
        for (auto& factor : factors) {
            if (std::holds_alternative<VBlock>(factor)) {
                next.push_back(std::move(factor));
                continue;
            }
            const auto& blocks = std::get<BlockDiagonal>(factor);
            std::vector<std::size_t> sizes;
            for (const auto& b : blocks) {
                sizes.push_back(b.size);
            }
            std::vector<std::size_t> expected;
            std::copy_if(tree.levels[depth - 1].begin(), tree.levels[depth - 1].end(),
                         std::back_inserter(expected), [](std::size_t s) { return s > 0; });
            if (sizes != expected) {
                throw Error("decompose_recursive: block layout diverged from the partition tree");
            }

            BlockDiagonal left;
            BlockDiagonal right;
            VBlock v;
            for (const auto& b : blocks) {
                if (b.size == 1) {
                    left.push_back(b);
                    right.push_back(Block{b.offset, 1, ComplexMatrix::Identity(m, m)});
                    continue;
                }
                CsdStepResult step = csd_step(b.mat, b.size, dims.m);
                const auto p = static_cast<Eigen::Index>(step.n1) * m;
                const auto q = static_cast<Eigen::Index>(step.n2) * m;
                left.push_back(Block{b.offset, step.n1, step.u.topLeftCorner(p, p)});
                left.push_back(Block{b.offset + step.n1, step.n2, step.u.bottomRightCorner(q, q)});
                right.push_back(Block{b.offset, step.n1, step.u_prime.topLeftCorner(p, p)});
                right.push_back(Block{b.offset + step.n1, step.n2, step.u_prime.bottomRightCorner(q, q)});
                for (auto g : step.v_factors) {
                    g.i += b.offset;
                    g.j += b.offset;
                    v.push_back(std::move(g));
                }
            }
            if (v.empty()) {
                throw Error("decompose_recursive: empty V-block at depth " + std::to_string(depth));
            }
            next.emplace_back(std::move(left));
            next.emplace_back(std::move(v));
            next.emplace_back(std::move(right));
        }
        factors = std::move(next);
    }

    // The rightmost factor acts first.
    Circuit out(dims, IrLevel::l2_mixed);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        if (const auto* v = std::get_if<VBlock>(&*it)) {
            for (const auto& g : *v) {
                out.push(g);
            }
            continue;
        }
        gate::Multiplexor mux;
        for (const auto& b : std::get<BlockDiagonal>(*it)) {
            if (b.size != 1) {
                throw Error("decompose_recursive: recursion ended with a block of size " +
                            std::to_string(b.size));
            }
            mux.branches.push_back(b.mat);
        }
        out.push(std::move(mux));
    }
    return out;
}

namespace {

/// Gate indices of the alternating Multiplexor / UcrX-run shape.
struct ZvShape {
    std::vector<std::size_t> multiplexors;
    std::vector<std::vector<std::size_t>> v_runs;  // v_runs[t] sits between multiplexors t and t+1
};

ZvShape parse_shape(const Circuit& c) {
    ZvShape shape;
    for (std::size_t idx = 0; idx < c.gates.size(); ++idx) {
        const Gate& g = c.gates[idx];
        if (std::holds_alternative<gate::Multiplexor>(g)) {
            if (!shape.multiplexors.empty() && shape.v_runs.size() != shape.multiplexors.size()) {
                throw ShapeError("two multiplexors without a V-block between them at gate " +
                                 std::to_string(idx));
            }
            shape.multiplexors.push_back(idx);
        } else if (std::holds_alternative<gate::UcrX>(g)) {
            if (shape.multiplexors.empty()) {
                throw ShapeError("circuit must start with a multiplexor");
            }
            if (shape.v_runs.size() < shape.multiplexors.size()) {
                shape.v_runs.emplace_back();
            }
            shape.v_runs.back().push_back(idx);
        } else {
            throw ShapeError("unexpected gate kind '" + std::string(kind_name(g)) + "' at gate " +
                             std::to_string(idx));
        }
    }
    if (shape.multiplexors.empty() || shape.v_runs.size() + 1 != shape.multiplexors.size()) {
        throw ShapeError("circuit must alternate multiplexors and V-blocks, ending with a multiplexor");
    }
    return shape;
}

}  // namespace

std::vector<std::vector<std::pair<Level, Level>>> v_block_pairs(const Circuit& c) {
    ZvShape shape = parse_shape(c);
    std::vector<std::vector<std::pair<Level, Level>>> out;
    for (const auto& run : shape.v_runs) {
        std::vector<std::pair<Level, Level>> pairs;
        for (std::size_t idx : run) {
            const auto& g = std::get<gate::UcrX>(c.gates[idx]);
            pairs.emplace_back(g.i, g.j);
        }
        out.push_back(std::move(pairs));
    }
    return out;
}

EliminationResult eliminate_commuting(const Circuit& c) {
    ZvShape shape = parse_shape(c);
    EliminationResult out{c, 0};
    auto mux_at = [&](std::size_t t) -> gate::Multiplexor& {
        return std::get<gate::Multiplexor>(out.circuit.gates[shape.multiplexors[t]]);
    };

    // V-block t is applied after multiplexor t (the receiver) and before multiplexor
    // t+1 (the donor). Walk from the last-applied block so each multiplexor has
    // finished receiving before it donates.
    for (std::size_t t = shape.v_runs.size(); t-- > 0;) {
        std::set<Level> support;
        for (std::size_t idx : shape.v_runs[t]) {
            const auto& g = std::get<gate::UcrX>(out.circuit.gates[idx]);
            support.insert(g.i);
            support.insert(g.j);
        }
        if (support.size() == c.dims.n) {
            continue;
        }
        gate::Multiplexor& donor = mux_at(t + 1);
        gate::Multiplexor& receiver = mux_at(t);
        const Level pivot = *support.begin();
        donor.pivot = pivot;
        const ComplexMatrix& up = donor.branches[pivot - 1];
        for (Level j = 1; j <= c.dims.n; ++j) {
            if (support.count(j) != 0) {
                continue;
            }
            // C_j(U_p†·U_j) commutes with the block and fuses into the receiver's branch j.
            receiver.branches[j - 1] = up.adjoint() * donor.branches[j - 1] * receiver.branches[j - 1];
            donor.branches[j - 1] = up;
            donor.absorbed.push_back(j);
            ++out.eliminated;
        }
    }
    return out;
}

}  // namespace hdsynth
