#include "hdsynth/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hdsynth/error.hpp"

namespace hdsynth::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr const char* kConvention = "first-listed-applied-first";

double finite_number(const json& j, const char* what) {
    if (!j.is_number()) {
        throw ParseError(std::string(what) + ": expected a number");
    }
    double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ParseError(std::string(what) + ": non-finite value");
    }
    return v;
}

std::size_t positive_int(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_number_integer()) {
        throw ParseError(std::string("missing or non-integer field '") + key + "'");
    }
    auto v = obj.at(key).get<long long>();
    if (v < 1) {
        throw ParseError(std::string("field '") + key + "' must be positive");
    }
    return static_cast<std::size_t>(v);
}

const json& field(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    return obj.at(key);
}

RealVector reals_from_json(const json& j, const char* what) {
    if (!j.is_array()) {
        throw ParseError(std::string(what) + ": expected an array");
    }
    RealVector out;
    out.reserve(j.size());
    for (const auto& v : j) {
        out.push_back(finite_number(v, what));
    }
    return out;
}

/// Subsystem dimensions below 2 surface as DimensionError, not ParseError.
Dims parse_dims(const json& j) {
    std::size_t n = positive_int(j, "n");
    std::size_t m = positive_int(j, "m");
    return Dims(n, m);
}

void check_embedded_unitary(const ComplexMatrix& u, const char* what) {
    require_unitary(u, what, 1e-10 * std::sqrt(static_cast<double>(u.rows())));
}

}  // namespace

json matrix_to_json(const ComplexMatrix& a) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < a.cols(); ++k) {
            row.push_back(json::array({a(i, k).real(), a(i, k).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) {
        throw ParseError(std::string(what) + ": expected a non-empty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array()) {
        throw ParseError(std::string(what) + ": rows must be arrays");
    }
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    ComplexMatrix a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw ParseError(std::string(what) + ": ragged row " + std::to_string(i));
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
            const json& entry = row[static_cast<std::size_t>(k)];
            if (!entry.is_array() || entry.size() != 2) {
                throw ParseError(std::string(what) + ": entries must be [re, im] pairs");
            }
            a(i, k) = Complex(finite_number(entry[0], what), finite_number(entry[1], what));
        }
    }
    return a;
}

json to_json(const MatrixFile& f) {
    return json{{"n", f.dims.n}, {"m", f.dims.m}, {"matrix", matrix_to_json(f.matrix)}};
}

MatrixFile matrix_file_from_json(const json& j) {
    if (!j.is_object()) {
        throw ParseError("matrix file: expected a JSON object");
    }
    MatrixFile f;
    f.dims = parse_dims(j);
    f.matrix = matrix_from_json(field(j, "matrix"));
    const auto dim = static_cast<Eigen::Index>(f.dims.total());
    if (f.matrix.rows() != dim || f.matrix.cols() != dim) {
        throw DimensionError("matrix file: n*m = " + std::to_string(dim) + " but matrix is " +
                             std::to_string(f.matrix.rows()) + "x" + std::to_string(f.matrix.cols()));
    }
    return f;
}

json to_json(const Circuit& c) {
    json gates = json::array();
    for (const Gate& g : c.gates) {
        json entry{{"kind", std::string(kind_name(g))}};
        std::visit(overloaded{
                       [&](const gate::LocalA& x) { entry["matrix"] = matrix_to_json(x.u); },
                       [&](const gate::LocalB& x) { entry["matrix"] = matrix_to_json(x.u); },
                       [&](const gate::Cinc& x) { entry["control_level"] = x.control; },
                       [&](const gate::CincDagger& x) { entry["control_level"] = x.control; },
                       [&](const gate::ControlledU& x) {
                           entry["control_level"] = x.control;
                           entry["matrix"] = matrix_to_json(x.u);
                       },
                       [&](const gate::ControlledDiag& x) {
                           entry["control_level"] = x.control;
                           entry["thetas"] = x.thetas;
                       },
                       [&](const gate::Multiplexor& x) {
                           json branches = json::array();
                           for (const auto& b : x.branches) {
                               branches.push_back(matrix_to_json(b));
                           }
                           entry["branches"] = std::move(branches);
                           if (x.pivot != 0) {
                               entry["pivot"] = x.pivot;
                           }
                           if (!x.absorbed.empty()) {
                               entry["absorbed"] = x.absorbed;
                           }
                       },
                       [&](const gate::UcrZ& x) {
                           entry["i"] = x.i;
                           entry["j"] = x.j;
                           entry["thetas"] = x.angles;
                       },
                       [&](const gate::UcrX& x) {
                           entry["i"] = x.i;
                           entry["j"] = x.j;
                           entry["thetas"] = x.angles;
                       },
                   },
                   g);
        gates.push_back(std::move(entry));
    }
    return json{{"n", c.dims.n},
                {"m", c.dims.m},
                {"convention", kConvention},
                {"level", std::string(to_string(c.level))},
                {"gates", std::move(gates)}};
}

Circuit circuit_from_json(const json& j) {
    if (!j.is_object()) {
        throw ParseError("circuit: expected a JSON object");
    }
    Circuit c(parse_dims(j));
    if (j.contains("convention") && j.at("convention") != kConvention) {
        throw ParseError("circuit: unsupported convention " + j.at("convention").dump());
    }
    const json& level = field(j, "level");
    if (level == "L2") {
        c.level = IrLevel::l2_mixed;
    } else if (level == "L3") {
        c.level = IrLevel::l3_cinc;
    } else {
        throw ParseError("circuit: level must be \"L2\" or \"L3\"");
    }
    const json& gates = field(j, "gates");
    if (!gates.is_array()) {
        throw ParseError("circuit: 'gates' must be an array");
    }
    for (const json& e : gates) {
        const json& kind_field = field(e, "kind");
        if (!kind_field.is_string()) {
            throw ParseError("circuit: gate kind must be a string");
        }
        const std::string kind = kind_field.get<std::string>();
        Gate g;
        if (kind == "local_a") {
            g = gate::LocalA{matrix_from_json(field(e, "matrix"), "local_a")};
        } else if (kind == "local_b") {
            g = gate::LocalB{matrix_from_json(field(e, "matrix"), "local_b")};
        } else if (kind == "cinc") {
            g = gate::Cinc{positive_int(e, "control_level")};
        } else if (kind == "cinc_dagger") {
            g = gate::CincDagger{positive_int(e, "control_level")};
        } else if (kind == "controlled_u") {
            g = gate::ControlledU{positive_int(e, "control_level"),
                                  matrix_from_json(field(e, "matrix"), "controlled_u")};
        } else if (kind == "controlled_diag") {
            g = gate::ControlledDiag{positive_int(e, "control_level"),
                                     reals_from_json(field(e, "thetas"), "controlled_diag")};
        } else if (kind == "multiplexor") {
            gate::Multiplexor mux;
            const json& branches = field(e, "branches");
            if (!branches.is_array()) {
                throw ParseError("multiplexor: 'branches' must be an array");
            }
            for (const json& b : branches) {
                mux.branches.push_back(matrix_from_json(b, "multiplexor branch"));
            }
            mux.pivot = e.contains("pivot") ? positive_int(e, "pivot") : 0;
            if (e.contains("absorbed")) {
                const json& absorbed = e.at("absorbed");
                if (!absorbed.is_array()) {
                    throw ParseError("multiplexor: 'absorbed' must be an array");
                }
                for (const json& a : absorbed) {
                    if (!a.is_number_integer() || a.get<long long>() < 1) {
                        throw ParseError("multiplexor: 'absorbed' entries must be positive integers");
                    }
                    mux.absorbed.push_back(a.get<std::size_t>());
                }
            }
            g = std::move(mux);
        } else if (kind == "ucr_z") {
            g = gate::UcrZ{positive_int(e, "i"), positive_int(e, "j"), reals_from_json(field(e, "thetas"), "ucr_z")};
        } else if (kind == "ucr_x") {
            g = gate::UcrX{positive_int(e, "i"), positive_int(e, "j"), reals_from_json(field(e, "thetas"), "ucr_x")};
        } else {
            throw ParseError("circuit: unknown gate kind '" + kind + "'");
        }
        validate_gate(g, c.dims);
        std::visit(overloaded{
                       [](const gate::LocalA& x) { check_embedded_unitary(x.u, "local_a matrix"); },
                       [](const gate::LocalB& x) { check_embedded_unitary(x.u, "local_b matrix"); },
                       [](const gate::ControlledU& x) { check_embedded_unitary(x.u, "controlled_u matrix"); },
                       [](const gate::Multiplexor& x) {
                           for (const auto& b : x.branches) {
                               check_embedded_unitary(b, "multiplexor branch");
                           }
                       },
                       [](const auto&) {},
                   },
                   g);
        c.push(std::move(g));
    }
    if (c.level == IrLevel::l3_cinc && !is_cinc_level(c)) {
        throw ParseError("circuit: L3 circuits may only contain local gates and cinc on level n");
    }
    return c;
}

json to_json(const counting::PartitionTree& t) {
    return json{{"n", t.n}, {"d", t.d}, {"levels", t.levels}};
}

json to_json(const counting::CountBreakdown& b) {
    return json{{"multiplexor_cinc", b.multiplexor_cinc},
                {"ucr_cinc", b.ucr_cinc},
                {"eliminated_controlled_units", b.eliminated_controlled_units},
                {"total_cinc", b.total_cinc}};
}

json to_json(const GateTally& t) {
    json out = json::object();
    for (const auto& [kind, count] : t.per_kind) {
        out[kind] = count;
    }
    return out;
}

json to_json(const SynthesisReport& r) {
    return json{{"cinc_count", r.cinc_count},
                {"eliminated", r.eliminated},
                {"reconstruction_error", r.reconstruction_error},
                {"partition_tree", to_json(r.partition_tree)},
                {"per_kind_counts", to_json(r.per_kind_counts)}};
}

json count_summary(std::size_t n) {
    const auto tree = counting::partition_tree(n);
    const auto prediction = counting::predict_structure(n);
    return json{{"n", n},
                {"d", tree.d},
                {"levels", tree.levels},
                {"odd_counts", counting::odd_counts(n)},
                {"bound", counting::cinc_upper_bound(n)},
                {"breakdown", to_json(prediction.breakdown)},
                {"multiplexors", prediction.multiplexors},
                {"v_blocks", prediction.v_blocks},
                {"ucr_gates_per_level", prediction.ucr_gates_per_level}};
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::filesystem::path& path) {
    const std::string bytes = read_file_bytes(path);
    try {
        return json::parse(bytes);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << j.dump(1) << '\n';
}

}  // namespace hdsynth::io
