#include <doctest.h>

#include <set>

#include "hdsynth/error.hpp"
#include "hdsynth/synthesis.hpp"
#include "oracles.hpp"

using namespace hdsynth;

namespace {

using Pairs = std::vector<std::pair<Level, Level>>;

double dist(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).norm(); }

double root(const Dims& d) { return std::sqrt(static_cast<double>(d.total())); }

/// E_i = σ_z^{i−1,i} − X·σ_z^{i−1,i}·X† for i ≥ 2, E_1 = I.
ComplexMatrix e_matrix(std::size_t i, std::size_t m) {
    if (i == 1) {
        return ComplexMatrix::Identity(m, m);
    }
    const ComplexMatrix x = oracle::increment(m);
    const ComplexMatrix s = oracle::sigma_z(i - 1, i, m);
    return s - x * s * x.adjoint();
}

std::size_t cinc_class(const Circuit& c) { return count_gates(c).cinc_total(); }

std::size_t count_kind(const Circuit& c, std::string_view kind) { return count_gates(c)[kind]; }

}  // namespace

TEST_CASE("solve_e_basis") {
    SUBCASE("zero diagonal") {
        for (double v : solve_e_basis({0.0, 0.0, 0.0}).x) {
            CHECK(v == 0.0);
        }
    }
    SUBCASE("m = 2 by hand") {
        auto s = solve_e_basis({kPi, 0.0});
        CHECK(s.x[0] == doctest::Approx(kPi / 2).epsilon(1e-14));
        CHECK(s.x[1] == doctest::Approx(kPi / 4).epsilon(1e-14));
    }
    SUBCASE("reassembly") {
        std::mt19937_64 rng(4);
        for (std::size_t m = 2; m <= 7; ++m) {
            for (std::size_t i = 1; i <= m; ++i) {
                const RealVector e = e_basis_diagonal(i, m);
                CHECK(dist(oracle::diag(e), e_matrix(i, m)) == 0.0);
            }
            for (int trial = 0; trial < 20; ++trial) {
                const RealVector th = oracle::random_angles(m, rng);
                const auto sol = solve_e_basis(th);
                ComplexMatrix acc = ComplexMatrix::Zero(m, m);
                for (std::size_t i = 1; i <= m; ++i) {
                    acc += sol.x[i - 1] * e_matrix(i, m);
                }
                CHECK(dist(acc, oracle::diag(th)) <= 1e-12 * std::max(1.0, oracle::diag(th).norm()));
            }
        }
    }
}

TEST_CASE("synth_controlled_diagonal") {
    SUBCASE("zero angles simulate the identity") {
        const Dims dims(3, 3);
        CHECK(dist(simulate(synth_controlled_diagonal(2, {0.0, 0.0, 0.0}, dims)), ComplexMatrix::Identity(9, 9)) <
              1e-14);
        CHECK(synth_controlled_diagonal(2, {0.0, 0.0, 0.0}, dims, true).empty());
    }
    SUBCASE("qubit controlled phase") {
        ComplexMatrix cz = ComplexMatrix::Identity(4, 4);
        cz(3, 3) = -1.0;
        CHECK(dist(simulate(synth_controlled_diagonal(2, {0.0, kPi}, Dims(2, 2))), cz) < 1e-14);
    }
    SUBCASE("random angles, every level") {
        std::mt19937_64 rng(8);
        for (std::size_t n = 2; n <= 4; ++n) {
            for (std::size_t m = 2; m <= 5; ++m) {
                const Dims dims(n, m);
                for (Level k = 1; k <= n; ++k) {
                    const RealVector th = oracle::random_angles(m, rng);
                    const Circuit c = synth_controlled_diagonal(k, th, dims);
                    const ComplexMatrix ref = oracle::controlled(k, oracle::expm(oracle::kI * oracle::diag(th)), n);
                    CHECK(dist(simulate(c), ref) <= 1e-10 * root(dims));
                    CHECK(count_kind(c, "cinc") == 1);
                    CHECK(count_kind(c, "cinc_dagger") == 1);
                    CHECK(count_kind(c, "local_a") == 1);
                }
            }
        }
    }
    SUBCASE("out-of-range level") {
        CHECK_THROWS_AS(synth_controlled_diagonal(4, {0.0, 1.0}, Dims(3, 2)), DimensionError);
    }
}

TEST_CASE("synth_controlled_unitary") {
    SUBCASE("identity target") {
        const Dims dims(3, 2);
        CHECK(synth_controlled_unitary(1, ComplexMatrix::Identity(2, 2), dims, true).empty());
        CHECK(dist(simulate(synth_controlled_unitary(1, ComplexMatrix::Identity(2, 2), dims)),
                   ComplexMatrix::Identity(6, 6)) < 1e-14);
    }
    SUBCASE("controlled NOT") {
        const Circuit c = synth_controlled_unitary(2, oracle::increment(2), Dims(2, 2));
        CHECK(dist(simulate(c), oracle::controlled(2, oracle::increment(2), 2)) < 1e-13);
    }
    SUBCASE("haar targets cost two CINC") {
        for (const Dims dims : {Dims(3, 4), Dims(3, 3), Dims(5, 4)}) {
            for (std::uint64_t s = 0; s < 10; ++s) {
                const ComplexMatrix u = haar_random_unitary(dims.m, 70 + s);
                const Level k = 1 + s % dims.n;
                const Circuit c = synth_controlled_unitary(k, u, dims);
                CHECK(dist(simulate(c), oracle::controlled(k, u, dims.n)) <= 1e-9 * root(dims));
                CHECK(cinc_class(c) == 2);
            }
        }
    }
    SUBCASE("non-unitary target rejected") {
        CHECK_THROWS_AS(synth_controlled_unitary(1, 2.0 * ComplexMatrix::Identity(2, 2), Dims(2, 2)),
                        NotUnitaryError);
    }
}

TEST_CASE("synth_multiplexor") {
    SUBCASE("identical branches prune to one local") {
        const ComplexMatrix u = haar_random_unitary(3, 1);
        const Circuit c = synth_multiplexor({u, u, u, u}, 1, Dims(4, 3), true);
        REQUIRE(c.size() == 1);
        CHECK(std::holds_alternative<gate::LocalB>(c.gates[0]));
        CHECK(dist(simulate(c), oracle::local_b(u, 4)) < 1e-14);
    }
    SUBCASE("identical branches without pruning still pay for every factor") {
        const ComplexMatrix u = haar_random_unitary(3, 1);
        const Circuit c = synth_multiplexor({u, u, u}, 1, Dims(3, 3));
        CHECK(cinc_class(c) == 4);
        CHECK(dist(simulate(c), oracle::local_b(u, 3)) < 1e-12);
    }
    SUBCASE("one controlled block on qubits") {
        const ComplexMatrix v = haar_random_unitary(2, 2);
        const Circuit c = synth_multiplexor({ComplexMatrix::Identity(2, 2), v}, 1, Dims(2, 2));
        CHECK(cinc_class(c) == 2);
        CHECK(dist(simulate(c), oracle::multiplexor({ComplexMatrix::Identity(2, 2), v})) < 1e-12);
    }
    SUBCASE("haar branches, every pivot") {
        for (std::size_t n = 3; n <= 5; ++n) {
            const Dims dims(n, 3);
            std::vector<ComplexMatrix> b;
            for (std::size_t i = 0; i < n; ++i) {
                b.push_back(haar_random_unitary(3, 40 + 7 * n + i));
            }
            for (Level p = 1; p <= n; ++p) {
                const Circuit c = synth_multiplexor(b, p, dims);
                CHECK(dist(simulate(c), oracle::multiplexor(b)) <= 1e-9 * root(dims));
                CHECK(cinc_class(c) == 2 * (n - 1));
            }
        }
    }
    SUBCASE("absorbed levels") {
        const Dims dims(4, 2);
        const ComplexMatrix a = haar_random_unitary(2, 1);
        const ComplexMatrix b = haar_random_unitary(2, 2);
        const std::vector<ComplexMatrix> branches{b, a, b, b};
        const Circuit c = synth_multiplexor(branches, 3, dims, false, {1, 4});
        CHECK(cinc_class(c) == 2);
        CHECK(dist(simulate(c), oracle::multiplexor(branches)) < 1e-12);
        CHECK_THROWS_AS(synth_multiplexor(branches, 3, dims, false, {2}), Error);
        CHECK_THROWS_AS(synth_multiplexor(branches, 3, dims, false, {3}), Error);
    }
    SUBCASE("branch count must match n") {
        CHECK_THROWS_AS(synth_multiplexor({ComplexMatrix::Identity(2, 2)}, 1, Dims(2, 2)), DimensionError);
    }
}

TEST_CASE("uniformly controlled rotations") {
    std::mt19937_64 rng(12);
    SUBCASE("zero angles") {
        const Dims dims(3, 2);
        CHECK(dist(simulate(synth_ucr_z(1, 3, {0.0, 0.0}, dims)), ComplexMatrix::Identity(6, 6)) < 1e-14);
        CHECK(dist(simulate(synth_ucr_x(1, 3, {0.0, 0.0}, dims)), ComplexMatrix::Identity(6, 6)) < 1e-14);
    }
    SUBCASE("constant angles reduce to a local rotation") {
        const double th = 0.61;
        const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
        const ComplexMatrix rz = oracle::expm(-oracle::kI * th * oracle::sigma_z(1, 2, 2));
        const ComplexMatrix rx = oracle::expm(-oracle::kI * th * oracle::sigma_x(1, 2, 2));
        CHECK(dist(simulate(synth_ucr_z(1, 2, {th, th}, Dims(2, 2))), oracle::kron(rz, id2)) < 1e-13);
        CHECK(dist(simulate(synth_ucr_x(1, 2, {th, th}, Dims(2, 2))), oracle::kron(rx, id2)) < 1e-13);
    }
    SUBCASE("random angles against the matrix exponential") {
        for (const Dims dims : {Dims(5, 3), Dims(4, 3), Dims(3, 2)}) {
            for (Level i = 1; i <= dims.n; ++i) {
                for (Level j = i + 1; j <= dims.n; ++j) {
                    const RealVector th = oracle::random_angles(dims.m, rng);
                    const Circuit z = synth_ucr_z(i, j, th, dims);
                    const Circuit x = synth_ucr_x(i, j, th, dims);
                    CHECK(dist(simulate(z), oracle::ucr(oracle::sigma_z(i, j, dims.n), th)) <= 1e-10 * root(dims));
                    CHECK(dist(simulate(x), oracle::ucr(oracle::sigma_x(i, j, dims.n), th)) <= 1e-10 * root(dims));
                    CHECK(cinc_class(z) == 4);
                    CHECK(cinc_class(x) == 4);
                }
            }
        }
    }
    SUBCASE("product form of two controlled diagonals") {
        const Dims dims(4, 3);
        const RealVector th = oracle::random_angles(3, rng);
        RealVector neg(th.size());
        std::transform(th.begin(), th.end(), neg.begin(), [](double v) { return -v; });
        const ComplexMatrix ci = oracle::controlled(2, oracle::expm(oracle::kI * oracle::diag(neg)), 4);
        const ComplexMatrix cj = oracle::controlled(4, oracle::expm(oracle::kI * oracle::diag(th)), 4);
        CHECK(dist(cj * ci, oracle::ucr(oracle::sigma_z(2, 4, 4), th)) < 1e-12);
        CHECK(dist(simulate(synth_ucr_z(2, 4, th, dims)), cj * ci) <= 1e-10 * root(dims));
    }
    SUBCASE("level order enforced") {
        CHECK_THROWS_AS(synth_ucr_z(2, 2, {0.0, 0.0}, Dims(3, 2)), DimensionError);
        CHECK_THROWS_AS(synth_ucr_x(3, 1, {0.0, 0.0}, Dims(3, 2)), DimensionError);
    }
}

TEST_CASE("csd_step") {
    SUBCASE("identity") {
        const CsdStepResult r = csd_step(ComplexMatrix::Identity(10, 10), 5, 2);
        for (const auto& g : r.v_factors) {
            for (double a : g.angles) {
                CHECK(std::abs(a) < 1e-15);
            }
        }
        CHECK(dist(r.u * r.u_prime, ComplexMatrix::Identity(10, 10)) < 1e-14);
        CHECK(r.u.topRightCorner(4, 6).norm() == 0.0);
        CHECK(r.u_prime.bottomLeftCorner(6, 4).norm() == 0.0);
    }
    SUBCASE("block diagonal input") {
        const ComplexMatrix a = haar_random_unitary(3, 1);
        const ComplexMatrix b = haar_random_unitary(6, 2);
        const ComplexMatrix x = direct_sum({a, b});
        const CsdStepResult r = csd_step(x, 3, 3);
        for (const auto& g : r.v_factors) {
            for (double t : g.angles) {
                CHECK(std::abs(t) < 1e-12);
            }
        }
        CHECK(dist(r.u * r.u_prime, x) < 1e-12);
    }
    SUBCASE("n = 5 pairs and V-block oracle") {
        const Dims dims(5, 2);
        for (std::uint64_t s = 0; s < 20; ++s) {
            const ComplexMatrix x = haar_random_unitary(10, s);
            const CsdStepResult r = csd_step(x, 5, 2);
            REQUIRE(r.v_factors.size() == 2);
            CHECK(r.v_factors[0].i == 1);
            CHECK(r.v_factors[0].j == 3);
            CHECK(r.v_factors[1].i == 2);
            CHECK(r.v_factors[1].j == 4);
            ComplexMatrix v = ComplexMatrix::Identity(10, 10);
            for (const auto& g : r.v_factors) {
                v = oracle::ucr(oracle::sigma_x(g.i, g.j, 5), g.angles) * v;
            }
            CHECK(dist(r.v(2), v) <= 1e-10);
            CHECK(dist(r.u * v * r.u_prime, x) <= 1e-9 * root(dims));
        }
    }
    SUBCASE("factor count is floor(n/2)") {
        for (std::size_t n = 2; n <= 8; ++n) {
            const CsdStepResult r = csd_step(haar_random_unitary(2 * n, n), n, 2);
            CHECK(r.v_factors.size() == n / 2);
            CHECK(r.n1 == n / 2);
            CHECK(r.n2 == n - n / 2);
            CHECK(dist(r.u * r.v(2) * r.u_prime, haar_random_unitary(2 * n, n)) <= 1e-9 * std::sqrt(2.0 * n));
        }
    }
    SUBCASE("size mismatch rejected") { CHECK_THROWS_AS(csd_step(ComplexMatrix::Identity(6, 6), 2, 2), DimensionError); }
}

TEST_CASE("decompose_recursive") {
    SUBCASE("qubit-by-qubit shape") {
        const Circuit c = decompose_recursive(haar_random_unitary(4, 1), Dims(2, 2));
        CHECK(c.size() == 3);
        CHECK(std::holds_alternative<gate::Multiplexor>(c.gates[0]));
        CHECK(std::holds_alternative<gate::UcrX>(c.gates[1]));
        CHECK(std::holds_alternative<gate::Multiplexor>(c.gates[2]));
    }
    SUBCASE("n = 5 pair sets") {
        const Pairs v1{{1, 3}, {2, 4}};
        const Pairs v2{{1, 2}, {3, 4}};
        const Pairs v3{{4, 5}};
        for (std::size_t m : {2, 3}) {
            const Circuit c = decompose_recursive(haar_random_unitary(5 * m, m), Dims(5, m));
            CHECK(count_kind(c, "multiplexor") == 8);
            CHECK(v_block_pairs(c) == std::vector<Pairs>{v3, v2, v3, v1, v3, v2, v3});
        }
    }
    SUBCASE("n = 3 pair sets") {
        const Circuit c = decompose_recursive(haar_random_unitary(6, 3), Dims(3, 2));
        const Pairs outer{{1, 2}};
        const Pairs inner{{2, 3}};
        CHECK(v_block_pairs(c) == std::vector<Pairs>{inner, outer, inner});
    }
    SUBCASE("structure law and exactness") {
        for (std::size_t n = 2; n <= 8; ++n) {
            for (std::size_t m : {2, 3}) {
                const Dims dims(n, m);
                const ComplexMatrix x = haar_random_unitary(dims.total(), 10 * n + m);
                const Circuit c = decompose_recursive(x, dims);
                const std::size_t blocks = std::size_t{1} << counting::ceil_log2(n);
                CHECK(count_kind(c, "multiplexor") == blocks);
                CHECK(v_block_pairs(c).size() == blocks - 1);
                CHECK(dist(simulate(c), x) <= 1e-9 * root(dims));
                CHECK(dist(simulate(lower_to_cinc(c)), x) <= 1e-9 * root(dims));
            }
        }
    }
    SUBCASE("V-blocks match the brute-force exponential") {
        const Dims dims(6, 2);
        const Circuit c = decompose_recursive(haar_random_unitary(12, 3), dims);
        for (const Gate& g : c.gates) {
            if (const auto* u = std::get_if<gate::UcrX>(&g)) {
                CHECK(dist(gate_matrix(g, dims), oracle::ucr(oracle::sigma_x(u->i, u->j, 6), u->angles)) <= 1e-10);
            }
        }
    }
    SUBCASE("rejects non-unitary and mis-sized input") {
        CHECK_THROWS_AS(decompose_recursive(2.0 * ComplexMatrix::Identity(4, 4), Dims(2, 2)), NotUnitaryError);
        CHECK_THROWS_AS(decompose_recursive(ComplexMatrix::Identity(6, 6), Dims(2, 2)), DimensionError);
    }
}

TEST_CASE("eliminate_commuting") {
    SUBCASE("counts and soundness") {
        for (std::size_t n = 2; n <= 8; ++n) {
            const std::size_t expected = counting::predict_structure(n).breakdown.eliminated_controlled_units;
            for (std::size_t m : {2, 3}) {
                const Dims dims(n, m);
                const Circuit c = decompose_recursive(haar_random_unitary(dims.total(), 500 + n), dims);
                const EliminationResult e = eliminate_commuting(c);
                CHECK(e.eliminated == expected);
                CHECK(dist(simulate(e.circuit), simulate(c)) <= 1e-10 * root(dims));
                CHECK(v_block_pairs(e.circuit) == v_block_pairs(c));
            }
        }
        CHECK(counting::predict_structure(4).breakdown.eliminated_controlled_units == 0);
        CHECK(eliminate_commuting(decompose_recursive(haar_random_unitary(10, 1), Dims(5, 2))).eliminated == 15);
        CHECK(eliminate_commuting(decompose_recursive(haar_random_unitary(9, 1), Dims(3, 3))).eliminated == 3);
    }
    SUBCASE("pivot lies inside the support") {
        const Circuit c = decompose_recursive(haar_random_unitary(10, 2), Dims(5, 2));
        const EliminationResult e = eliminate_commuting(c);
        const auto pairs = v_block_pairs(e.circuit);
        std::size_t t = 0;
        for (std::size_t idx = 1; idx < e.circuit.gates.size(); ++idx) {
            const auto* mux = std::get_if<gate::Multiplexor>(&e.circuit.gates[idx]);
            if (mux == nullptr) {
                continue;
            }
            std::set<Level> support;
            for (auto [i, j] : pairs[t]) {
                support.insert(i);
                support.insert(j);
            }
            if (support.size() < 5) {
                CHECK(mux->pivot == *support.begin());
                CHECK(mux->absorbed.size() == 5 - support.size());
            }
            ++t;
        }
    }
    SUBCASE("malformed shapes rejected") {
        Circuit c(Dims(2, 2));
        c.push(gate::UcrX{1, 2, {0.1, 0.2}});
        CHECK_THROWS_AS(eliminate_commuting(c), ShapeError);
        Circuit d(Dims(2, 2));
        d.push(gate::Multiplexor{{ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)}});
        d.push(gate::Multiplexor{{ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)}});
        CHECK_THROWS_AS(eliminate_commuting(d), ShapeError);
        Circuit e(Dims(2, 2));
        e.push(gate::Cinc{2});
        CHECK_THROWS_AS(v_block_pairs(e), ShapeError);
    }
}

TEST_CASE("lower_to_cinc") {
    SUBCASE("controls relocate to level n") {
        const Dims dims(3, 3);
        Circuit c(dims);
        const ComplexMatrix u = haar_random_unitary(3, 5);
        c.push(gate::ControlledU{1, u});
        const Circuit l = lower_to_cinc(c);
        CHECK(l.level == IrLevel::l3_cinc);
        CHECK(is_cinc_level(l));
        CHECK(count_kind(l, "cinc") == 2);
        CHECK(dist(simulate(l), oracle::controlled(1, u, 3)) <= 1e-9 * root(dims));
    }
    SUBCASE("CincDagger rewrites") {
        const Dims dims(4, 3);
        Circuit c(dims);
        c.push(gate::CincDagger{2});
        c.push(gate::Cinc{4});
        c.push(gate::CincDagger{4});
        const Circuit l = lower_to_cinc(c);
        CHECK(is_cinc_level(l));
        CHECK(count_kind(l, "cinc") == 3);
        CHECK(dist(simulate(l), simulate(c)) < 1e-13);
    }
    SUBCASE("adjacent locals merge") {
        const Dims dims(3, 2);
        Circuit c(dims);
        c.push(gate::LocalA{haar_random_unitary(3, 1)});
        c.push(gate::LocalB{haar_random_unitary(2, 2)});
        c.push(gate::LocalA{haar_random_unitary(3, 3)});
        c.push(gate::Cinc{3});
        c.push(gate::LocalB{haar_random_unitary(2, 4)});
        c.push(gate::LocalB{haar_random_unitary(2, 5)});
        const Circuit l = lower_to_cinc(c);
        CHECK(l.size() == 4);
        CHECK(dist(simulate(l), simulate(c)) < 1e-13);
    }
    SUBCASE("exact identities vanish") {
        Circuit c(Dims(2, 2));
        c.push(gate::LocalA{ComplexMatrix::Identity(2, 2)});
        c.push(gate::Cinc{2});
        c.push(gate::LocalB{ComplexMatrix::Identity(2, 2)});
        CHECK(lower_to_cinc(c).size() == 1);
    }
    SUBCASE("every composite kind") {
        std::mt19937_64 rng(2);
        const Dims dims(4, 3);
        Circuit c(dims);
        c.push(gate::UcrZ{1, 3, oracle::random_angles(3, rng)});
        c.push(gate::ControlledDiag{2, oracle::random_angles(3, rng)});
        c.push(gate::UcrX{2, 4, oracle::random_angles(3, rng)});
        c.push(gate::Multiplexor{{haar_random_unitary(3, 1), haar_random_unitary(3, 2), haar_random_unitary(3, 3),
                                  haar_random_unitary(3, 4)}});
        c.push(gate::ControlledU{3, haar_random_unitary(3, 9)});
        const Circuit l = lower_to_cinc(c);
        CHECK(is_cinc_level(l));
        CHECK(count_kind(l, "cinc") == 4 + 2 + 4 + 6 + 2);
        CHECK(dist(simulate(l), simulate(c)) <= 1e-9 * root(dims));
    }
}

TEST_CASE("synth_unitary") {
    SUBCASE("identity with pruning is empty") {
        for (const Dims dims : {Dims(2, 2), Dims(3, 2), Dims(5, 3)}) {
            const auto dim = static_cast<Eigen::Index>(dims.total());
            SynthOptions opts;
            opts.prune_identity = true;
            const SynthesisResult r = synth_unitary(ComplexMatrix::Identity(dim, dim), dims, opts);
            CHECK(r.circuit.empty());
            CHECK(r.report.cinc_count == 0);
            CHECK(r.report.reconstruction_error == 0.0);
        }
    }
    SUBCASE("published counts") {
        const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> cases{
            {5, 3, 74}, {7, 2, 166}, {4, 2, 48}, {2, 3, 8}, {6, 2, 116}, {8, 2, 224}};
        for (auto [n, m, expected] : cases) {
            const Dims dims(n, m);
            const SynthesisResult r = synth_unitary(haar_random_unitary(n * m, 900 + n), dims);
            CHECK(r.report.cinc_count == expected);
            CHECK(r.report.per_kind_counts["cinc"] == expected);
            CHECK(r.report.reconstruction_error <= 1e-8 * root(dims));
            CHECK(is_cinc_level(r.circuit));
        }
    }
    SUBCASE("count law") {
        for (std::size_t n = 2; n <= 16; ++n) {
            for (std::size_t m : {2, 3}) {
                if (m == 3 && n > 10) {
                    continue;
                }
                const Dims dims(n, m);
                const ComplexMatrix x = haar_random_unitary(n * m, 31 * n + m);
                const SynthesisResult r = synth_unitary(x, dims);
                CHECK(r.report.cinc_count == counting::cinc_upper_bound(n));
                CHECK(dist(simulate(r.circuit), x) <= 1e-8 * root(dims));

                SynthOptions pruned;
                pruned.prune_identity = true;
                CHECK(synth_unitary(x, dims, pruned).report.cinc_count <= counting::cinc_upper_bound(n));
            }
        }
    }
    SUBCASE("emitted tallies match the structural prediction") {
        for (std::size_t n = 2; n <= 8; ++n) {
            const counting::StructurePrediction p = counting::predict_structure(n);
            for (std::size_t m : {2, 3}) {
                const Dims dims(n, m);
                const ComplexMatrix x = haar_random_unitary(n * m, 77 * n + m);
                SynthOptions l2;
                l2.target_level = IrLevel::l2_mixed;
                const SynthesisResult r = synth_unitary(x, dims, l2);
                CHECK(r.circuit.level == IrLevel::l2_mixed);
                CHECK(r.report.per_kind_counts["multiplexor"] == p.multiplexors);
                CHECK(r.report.eliminated == p.breakdown.eliminated_controlled_units);
                CHECK(r.report.cinc_count == p.breakdown.total_cinc);

                // V-blocks appear once at depth 1, twice at depth 2, and so on; the
                // depth of run t is set by the lowest set bit of t + 1.
                const auto runs = v_block_pairs(decompose_recursive(x, dims));
                const std::size_t d = counting::ceil_log2(n);
                for (std::size_t t = 0; t < runs.size(); ++t) {
                    std::size_t tz = 0;
                    while (((t + 1) >> tz & 1U) == 0) {
                        ++tz;
                    }
                    CHECK(runs[t].size() == p.ucr_gates_per_level[d - 1 - tz]);
                }

                SynthOptions no_elim;
                no_elim.run_elimination = false;
                const SynthesisResult full = synth_unitary(x, dims, no_elim);
                CHECK(full.report.eliminated == 0);
                CHECK(full.report.cinc_count ==
                      p.breakdown.total_cinc + 2 * p.breakdown.eliminated_controlled_units);
            }
        }
    }
    SUBCASE("no-eliminate at n = 5") {
        SynthOptions opts;
        opts.run_elimination = false;
        const SynthesisResult r = synth_unitary(haar_random_unitary(10, 0), Dims(5, 2), opts);
        CHECK(r.report.cinc_count == 104);
        CHECK(r.report.per_kind_counts["cinc"] == 104);
    }
    SUBCASE("report carries the partition tree") {
        const SynthesisResult r = synth_unitary(haar_random_unitary(10, 1), Dims(5, 2));
        CHECK(r.report.partition_tree.levels == counting::partition_tree(5).levels);
        CHECK(r.report.eliminated == 15);
    }
    SUBCASE("non-unitary and mis-sized input rejected") {
        CHECK_THROWS_AS(synth_unitary(1.5 * ComplexMatrix::Identity(4, 4), Dims(2, 2)), NotUnitaryError);
        CHECK_THROWS_AS(synth_unitary(ComplexMatrix::Identity(4, 4), Dims(2, 3)), DimensionError);
    }
}
