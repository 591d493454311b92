#include "hdsynth/circuit.hpp"

#include <cmath>
#include <string>

#include "hdsynth/error.hpp"

namespace hdsynth {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_pair(Level i, Level j, std::size_t n, const char* what) {
    if (i < 1 || i >= j || j > n) {
        throw DimensionError(std::string(what) + ": need 1 <= i < j <= n, got i=" +
                             std::to_string(i) + " j=" + std::to_string(j) +
                             " n=" + std::to_string(n));
    }
}

void check_level(Level k, std::size_t n, const char* what) {
    if (k < 1 || k > n) {
        throw DimensionError(std::string(what) + ": level " + std::to_string(k) +
                             " outside 1.." + std::to_string(n));
    }
}

void check_square(const ComplexMatrix& u, std::size_t size, const char* what) {
    if (u.rows() != static_cast<Eigen::Index>(size) || u.cols() != static_cast<Eigen::Index>(size)) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(size) + "x" +
                             std::to_string(size) + " matrix, got " + std::to_string(u.rows()) +
                             "x" + std::to_string(u.cols()));
    }
}

void check_length(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(want) +
                             " angles, got " + std::to_string(got));
    }
}

ComplexMatrix controlled(Level k, const ComplexMatrix& u, const Dims& dims) {
    const auto m = static_cast<Eigen::Index>(dims.m);
    ComplexMatrix out = ComplexMatrix::Identity(dims.total(), dims.total());
    out.block(static_cast<Eigen::Index>(k - 1) * m, static_cast<Eigen::Index>(k - 1) * m, m, m) = u;
    return out;
}

/// Σ_k R^{ij}_{axis}(2θ_k) ⊗ |k⟩⟨k|.
ComplexMatrix uniformly_controlled_rotation(Axis axis, Level i, Level j, const RealVector& angles,
                                            const Dims& dims) {
    const auto n = static_cast<Eigen::Index>(dims.n);
    const auto m = static_cast<Eigen::Index>(dims.m);
    ComplexMatrix out = ComplexMatrix::Zero(n * m, n * m);
    for (Eigen::Index k = 0; k < m; ++k) {
        ComplexMatrix r = rotation(axis, i, j, dims.n, 2.0 * angles[static_cast<std::size_t>(k)]);
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = 0; b < n; ++b) {
                out(a * m + k, b * m + k) = r(a, b);
            }
        }
    }
    return out;
}

}  // namespace

Dims::Dims(std::size_t n_, std::size_t m_) : n(n_), m(m_) {
    if (n < 2 || m < 2) {
        throw DimensionError("Dims: both subsystem dimensions must be >= 2, got n=" +
                             std::to_string(n) + " m=" + std::to_string(m));
    }
}

ComplexMatrix sigma(Axis axis, Level i, Level j, std::size_t n) {
    check_pair(i, j, n, "sigma");
    const auto a = static_cast<Eigen::Index>(i - 1);
    const auto b = static_cast<Eigen::Index>(j - 1);
    const auto sz = static_cast<Eigen::Index>(n);
    ComplexMatrix s = ComplexMatrix::Zero(sz, sz);
    switch (axis) {
        case Axis::z:
            s(a, a) = 1.0;
            s(b, b) = -1.0;
            break;
        case Axis::x:
            s(a, b) = 1.0;
            s(b, a) = 1.0;
            break;
        case Axis::y:
            s(a, b) = Complex(0.0, -1.0);
            s(b, a) = Complex(0.0, 1.0);
            break;
    }
    return s;
}

ComplexMatrix rotation(Axis axis, Level i, Level j, std::size_t n, double theta) {
    check_pair(i, j, n, "rotation");
    // σ² restricted to span{|i⟩,|j⟩} is the identity, so exp(−iθ/2 σ) = cos(θ/2)·P − i·sin(θ/2)·σ.
    const auto a = static_cast<Eigen::Index>(i - 1);
    const auto b = static_cast<Eigen::Index>(j - 1);
    ComplexMatrix r = ComplexMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    r(a, a) = c;
    r(b, b) = c;
    r += Complex(0.0, -s) * sigma(axis, i, j, n);
    return r;
}

ComplexMatrix increment(std::size_t n) {
    if (n < 2) {
        throw DimensionError("increment: n must be >= 2");
    }
    const auto sz = static_cast<Eigen::Index>(n);
    ComplexMatrix x = ComplexMatrix::Zero(sz, sz);
    x(0, sz - 1) = 1.0;
    for (Eigen::Index i = 0; i + 1 < sz; ++i) {
        x(i + 1, i) = 1.0;
    }
    return x;
}

ComplexMatrix t_matrix(std::size_t n) {
    if (n < 2) {
        throw DimensionError("t_matrix: n must be >= 2");
    }
    const auto sz = static_cast<Eigen::Index>(n);
    ComplexMatrix t = ComplexMatrix::Zero(sz, sz);
    t(0, 0) = 1.0;
    // 1-based |i⟩⟨n+2−i| for i = 2..n.
    for (Eigen::Index i = 2; i <= sz; ++i) {
        t(i - 1, sz + 2 - i - 1) = 1.0;
    }
    return t;
}

ComplexMatrix transposition(Level a, Level b, std::size_t n) {
    check_level(a, n, "transposition");
    check_level(b, n, "transposition");
    const auto sz = static_cast<Eigen::Index>(n);
    ComplexMatrix p = ComplexMatrix::Identity(sz, sz);
    if (a != b) {
        p.row(static_cast<Eigen::Index>(a - 1)).swap(p.row(static_cast<Eigen::Index>(b - 1)));
    }
    return p;
}

ComplexMatrix phase_diagonal(const RealVector& thetas) {
    const auto sz = static_cast<Eigen::Index>(thetas.size());
    ComplexMatrix d = ComplexMatrix::Zero(sz, sz);
    for (Eigen::Index k = 0; k < sz; ++k) {
        d(k, k) = std::polar(1.0, thetas[static_cast<std::size_t>(k)]);
    }
    return d;
}

std::string_view kind_name(const Gate& g) {
    return std::visit(overloaded{
                          [](const gate::LocalA&) { return std::string_view("local_a"); },
                          [](const gate::LocalB&) { return std::string_view("local_b"); },
                          [](const gate::Cinc&) { return std::string_view("cinc"); },
                          [](const gate::CincDagger&) { return std::string_view("cinc_dagger"); },
                          [](const gate::ControlledU&) { return std::string_view("controlled_u"); },
                          [](const gate::ControlledDiag&) { return std::string_view("controlled_diag"); },
                          [](const gate::Multiplexor&) { return std::string_view("multiplexor"); },
                          [](const gate::UcrZ&) { return std::string_view("ucr_z"); },
                          [](const gate::UcrX&) { return std::string_view("ucr_x"); },
                      },
                      g);
}

bool is_cinc_class(const Gate& g) {
    return std::holds_alternative<gate::Cinc>(g) || std::holds_alternative<gate::CincDagger>(g);
}

void validate_gate(const Gate& g, const Dims& dims) {
    std::visit(overloaded{
                   [&](const gate::LocalA& x) { check_square(x.u, dims.n, "local_a"); },
                   [&](const gate::LocalB& x) { check_square(x.u, dims.m, "local_b"); },
                   [&](const gate::Cinc& x) { check_level(x.control, dims.n, "cinc"); },
                   [&](const gate::CincDagger& x) { check_level(x.control, dims.n, "cinc_dagger"); },
                   [&](const gate::ControlledU& x) {
                       check_level(x.control, dims.n, "controlled_u");
                       check_square(x.u, dims.m, "controlled_u");
                   },
                   [&](const gate::ControlledDiag& x) {
                       check_level(x.control, dims.n, "controlled_diag");
                       check_length(x.thetas.size(), dims.m, "controlled_diag");
                   },
                   [&](const gate::Multiplexor& x) {
                       if (x.branches.size() != dims.n) {
                           throw DimensionError("multiplexor: expected " + std::to_string(dims.n) +
                                                " branches, got " + std::to_string(x.branches.size()));
                       }
                       for (const auto& b : x.branches) {
                           check_square(b, dims.m, "multiplexor branch");
                       }
                       if (x.pivot != 0) {
                           check_level(x.pivot, dims.n, "multiplexor pivot");
                       }
                       for (Level a : x.absorbed) {
                           check_level(a, dims.n, "multiplexor absorbed level");
                           if (a == (x.pivot == 0 ? 1 : x.pivot)) {
                               throw DimensionError("multiplexor: pivot level cannot be absorbed");
                           }
                       }
                   },
                   [&](const gate::UcrZ& x) {
                       check_pair(x.i, x.j, dims.n, "ucr_z");
                       check_length(x.angles.size(), dims.m, "ucr_z");
                   },
                   [&](const gate::UcrX& x) {
                       check_pair(x.i, x.j, dims.n, "ucr_x");
                       check_length(x.angles.size(), dims.m, "ucr_x");
                   },
               },
               g);
}

ComplexMatrix gate_matrix(const Gate& g, const Dims& dims) {
    validate_gate(g, dims);
    const auto n = static_cast<Eigen::Index>(dims.n);
    const auto m = static_cast<Eigen::Index>(dims.m);
    return std::visit(
        overloaded{
            [&](const gate::LocalA& x) -> ComplexMatrix { return kron(x.u, ComplexMatrix::Identity(m, m)); },
            [&](const gate::LocalB& x) -> ComplexMatrix { return kron(ComplexMatrix::Identity(n, n), x.u); },
            [&](const gate::Cinc& x) { return controlled(x.control, increment(dims.m), dims); },
            [&](const gate::CincDagger& x) {
                return controlled(x.control, increment(dims.m).adjoint(), dims);
            },
            [&](const gate::ControlledU& x) { return controlled(x.control, x.u, dims); },
            [&](const gate::ControlledDiag& x) {
                return controlled(x.control, phase_diagonal(x.thetas), dims);
            },
            [&](const gate::Multiplexor& x) { return direct_sum(x.branches); },
            [&](const gate::UcrZ& x) {
                return uniformly_controlled_rotation(Axis::z, x.i, x.j, x.angles, dims);
            },
            [&](const gate::UcrX& x) {
                return uniformly_controlled_rotation(Axis::x, x.i, x.j, x.angles, dims);
            },
        },
        g);
}

std::string_view to_string(IrLevel level) {
    return level == IrLevel::l3_cinc ? "L3" : "L2";
}

void Circuit::append(const Circuit& other) {
    if (!(other.dims == dims)) {
        throw DimensionError("Circuit::append: dimension mismatch");
    }
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

bool is_cinc_level(const Circuit& c) {
    for (const auto& g : c.gates) {
        if (std::holds_alternative<gate::LocalA>(g) || std::holds_alternative<gate::LocalB>(g)) {
            continue;
        }
        const auto* cinc = std::get_if<gate::Cinc>(&g);
        if (cinc == nullptr || cinc->control != c.dims.n) {
            return false;
        }
    }
    return true;
}

ComplexMatrix simulate(const Circuit& c) {
    const auto dim = static_cast<Eigen::Index>(c.dims.total());
    ComplexMatrix acc = ComplexMatrix::Identity(dim, dim);
    for (const auto& g : c.gates) {
        acc = gate_matrix(g, c.dims) * acc;
    }
    return acc;
}

std::size_t GateTally::cinc_total() const {
    return (*this)["cinc"] + (*this)["cinc_dagger"];
}

std::size_t GateTally::operator[](std::string_view kind) const {
    auto it = per_kind.find(std::string(kind));
    return it == per_kind.end() ? 0 : it->second;
}

GateTally count_gates(const Circuit& c) {
    GateTally t;
    for (const auto& g : c.gates) {
        ++t.per_kind[std::string(kind_name(g))];
    }
    return t;
}

}  // namespace hdsynth
