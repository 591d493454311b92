#include "hdsynth/cli.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "hdsynth/error.hpp"
#include "hdsynth/io.hpp"

namespace hdsynth::cli {

namespace {

using io::json;

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  usage error\n"
    "  2  parse failure (unreadable or malformed input)\n"
    "  3  unitarity failure (input or embedded matrix not unitary)\n"
    "  4  dimension failure (n or m below 2, or sizes that do not agree)\n"
    "  5  verification failure (error above 1e-7*sqrt(nm))\n"
    "  6  output failure (cannot write a file)\n";

/// Published CINC counts for n = 3..8.
constexpr std::array<std::size_t, 6> kPublishedCounts{19, 48, 74, 116, 166, 224};

double verify_threshold(const Dims& dims) {
    return kVerifyTolerance * std::sqrt(static_cast<double>(dims.total()));
}

double circuit_error(const Circuit& c, const ComplexMatrix& x) {
    if (c.dims.total() != static_cast<std::size_t>(x.rows())) {
        throw DimensionError("circuit acts on dimension " + std::to_string(c.dims.total()) +
                             " but the matrix is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
    }
    return (simulate(c) - x).norm();
}

std::string join(const std::vector<std::size_t>& v) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < v.size(); ++i) {
        ss << (i ? " " : "") << v[i];
    }
    return ss.str();
}

void require_n(std::size_t n) {
    if (n < 2) {
        throw DimensionError("n must be at least 2");
    }
}

struct Flags {
    bool json = false;

    std::string synth_input;
    std::string synth_output;
    std::string level = "cinc";
    bool no_eliminate = false;
    bool prune = false;
    bool verify = false;

    std::size_t count_n = 0;
    bool breakdown = false;
    bool table = false;

    std::size_t random_n = 0;
    std::size_t random_m = 0;
    std::uint64_t seed = 0;
    std::string random_output;

    std::string verify_circuit;
    std::string verify_matrix;
};

json report_json(const RunReport& r, const std::optional<double>& verified_error) {
    json j{{"input_digest", r.input_digest},
           {"n", r.dims.n},
           {"m", r.dims.m},
           {"options",
            {{"level", r.options.target_level == IrLevel::l3_cinc ? "cinc" : "l2"},
             {"eliminate", r.options.run_elimination},
             {"prune", r.options.prune_identity},
             {"verify", r.verified}}},
           {"cinc_count", r.cinc_count},
           {"eliminated", r.eliminated},
           {"reconstruction_error", r.reconstruction_error},
           {"wall_time_s", r.wall_time_s},
           {"circuit_path", r.circuit_path.string()},
           {"per_kind_counts", io::to_json(r.synthesis.per_kind_counts)},
           {"partition_tree", io::to_json(r.synthesis.partition_tree)}};
    if (verified_error) {
        j["verified_error"] = *verified_error;
        j["verify_threshold"] = verify_threshold(r.dims);
    }
    return j;
}

int cmd_synth(const Flags& f, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    const std::string bytes = io::read_file_bytes(f.synth_input);
    json parsed;
    try {
        parsed = json::parse(bytes);
    } catch (const json::exception& e) {
        throw ParseError(f.synth_input + ": " + e.what());
    }
    const io::MatrixFile input = io::matrix_file_from_json(parsed);

    RunReport r;
    r.input_digest = sha256_hex(bytes);
    r.dims = input.dims;
    r.options.prune_identity = f.prune;
    r.options.run_elimination = !f.no_eliminate;
    r.options.target_level = f.level == "l2" ? IrLevel::l2_mixed : IrLevel::l3_cinc;
    r.verified = f.verify;
    r.circuit_path = f.synth_output;

    const SynthesisResult result = synth_unitary(input.matrix, input.dims, r.options);
    r.synthesis = result.report;
    r.cinc_count = result.report.cinc_count;
    r.eliminated = result.report.eliminated;
    r.reconstruction_error = circuit_error(result.circuit, input.matrix);
    io::write_json_file(r.circuit_path, io::to_json(result.circuit));

    std::optional<double> verified_error;
    if (f.verify) {
        const Circuit reread = io::circuit_from_json(io::read_json_file(r.circuit_path));
        verified_error = circuit_error(reread, input.matrix);
    }
    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const double threshold = verify_threshold(r.dims);
    const bool failed = verified_error && !(*verified_error <= threshold);
    if (f.json) {
        out << report_json(r, verified_error).dump(1) << '\n';
    } else {
        out << "input                " << f.synth_input << '\n'
            << "input_digest         " << r.input_digest << '\n'
            << "dims                 n=" << r.dims.n << " m=" << r.dims.m << '\n'
            << "options              level=" << f.level << " eliminate=" << (r.options.run_elimination ? "yes" : "no")
            << " prune=" << (f.prune ? "yes" : "no") << '\n'
            << "cinc_count           " << r.cinc_count << '\n'
            << "eliminated           " << r.eliminated << '\n'
            << "reconstruction_error " << std::setprecision(6) << r.reconstruction_error << '\n'
            << "wall_time_s          " << r.wall_time_s << '\n'
            << "circuit              " << r.circuit_path.string() << '\n';
        if (verified_error) {
            out << "verification         " << (failed ? "FAIL" : "pass") << " (error " << *verified_error
                << ", threshold " << threshold << ")\n";
        }
    }
    if (failed) {
        err << "hdsynth: verification failed: error " << *verified_error << " exceeds " << threshold << '\n';
        return kVerificationFailure;
    }
    return kOk;
}

int cmd_count(const Flags& f, std::ostream& out) {
    if (f.table) {
        json rows = json::array();
        for (std::size_t n = 3; n <= 8; ++n) {
            const std::size_t ours = counting::cinc_upper_bound(n);
            const std::size_t published = kPublishedCounts[n - 3];
            std::string note = ours == published ? "match" : "";
            if (n == 3) {
                note = "published: 19 (external shortcut); this artifact: 22";
            }
            rows.push_back(json{{"n", n}, {"cinc", ours}, {"published", published}, {"note", note}});
        }
        if (f.json) {
            out << rows.dump(1) << '\n';
            return kOk;
        }
        out << std::left << std::setw(4) << "n" << std::setw(8) << "cinc" << std::setw(11) << "published"
            << "note\n";
        for (const auto& row : rows) {
            out << std::setw(4) << row["n"].get<std::size_t>() << std::setw(8) << row["cinc"].get<std::size_t>()
                << std::setw(11) << row["published"].get<std::size_t>() << row["note"].get<std::string>() << '\n';
        }
        return kOk;
    }

    require_n(f.count_n);
    const json summary = io::count_summary(f.count_n);
    if (f.json) {
        json j = summary;
        if (!f.breakdown) {
            j.erase("breakdown");
        }
        out << j.dump(1) << '\n';
        return kOk;
    }
    out << "n                " << f.count_n << '\n'
        << "d                " << summary["d"].get<std::size_t>() << '\n'
        << "odd_counts       " << join(summary["odd_counts"].get<std::vector<std::size_t>>()) << '\n'
        << "cinc_upper_bound " << summary["bound"].get<std::size_t>() << '\n';
    if (f.breakdown) {
        const json& b = summary["breakdown"];
        out << "multiplexor_cinc " << b["multiplexor_cinc"].get<std::size_t>() << '\n'
            << "ucr_cinc         " << b["ucr_cinc"].get<std::size_t>() << '\n'
            << "eliminated       " << b["eliminated_controlled_units"].get<std::size_t>() << '\n'
            << "total_cinc       " << b["total_cinc"].get<std::size_t>() << '\n';
    }
    return kOk;
}

int cmd_random(const Flags& f, std::ostream& out) {
    std::uint64_t seed = f.seed;
    if (const char* env = std::getenv("HDSYNTH_SEED"); env != nullptr && *env != '\0') {
        std::size_t used = 0;
        try {
            seed = std::stoull(env, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != std::string(env).size()) {
            throw CLI::ValidationError("HDSYNTH_SEED", std::string("not an unsigned integer: ") + env);
        }
    }
    const Dims dims(f.random_n, f.random_m);
    io::MatrixFile file{dims, haar_random_unitary(dims.total(), seed)};
    io::write_json_file(f.random_output, io::to_json(file));
    if (f.json) {
        out << json{{"path", f.random_output}, {"n", dims.n}, {"m", dims.m}, {"seed", seed}}.dump(1) << '\n';
    } else {
        out << "wrote " << f.random_output << " (n=" << dims.n << " m=" << dims.m << " seed=" << seed << ")\n";
    }
    return kOk;
}

int cmd_verify(const Flags& f, std::ostream& out, std::ostream& err) {
    const Circuit c = io::circuit_from_json(io::read_json_file(f.verify_circuit));
    const io::MatrixFile target = io::matrix_file_from_json(io::read_json_file(f.verify_matrix));
    if (!(c.dims == target.dims)) {
        throw DimensionError("circuit dims (" + std::to_string(c.dims.n) + ", " + std::to_string(c.dims.m) +
                             ") differ from matrix dims (" + std::to_string(target.dims.n) + ", " +
                             std::to_string(target.dims.m) + ")");
    }
    const double error = circuit_error(c, target.matrix);
    const double threshold = verify_threshold(c.dims);
    const bool ok = error <= threshold;
    if (f.json) {
        out << json{{"error", error}, {"threshold", threshold}, {"ok", ok}}.dump(1) << '\n';
    } else {
        out << "error     " << std::setprecision(6) << error << '\n'
            << "threshold " << threshold << '\n'
            << "result    " << (ok ? "pass" : "FAIL") << '\n';
    }
    if (!ok) {
        err << "hdsynth: circuit does not reproduce the matrix\n";
        return kVerificationFailure;
    }
    return kOk;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    std::ostringstream ss;
    ss << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) {
        ss << std::setw(2) << static_cast<int>(md[i]);
    }
    return ss.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags f;
    CLI::App app{"Synthesize two-qudit unitaries into local gates and controlled increments.", "hdsynth"};
    app.footer(kExitCodeHelp);
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", f.json, "Machine-readable JSON on stdout");

    auto* synth = app.add_subcommand("synth", "Synthesize a circuit for a unitary matrix file");
    synth->add_option("INPUT", f.synth_input, "Matrix file")->required();
    synth->add_option("OUTPUT", f.synth_output, "Circuit file to write")->required();
    synth->add_option("--level", f.level, "Output level: l2 (mixed gates) or cinc (locals and CINC)")
        ->check(CLI::IsMember({"l2", "cinc"}))
        ->capture_default_str();
    synth->add_flag("--no-eliminate", f.no_eliminate, "Skip the commuting-gate elimination pass");
    synth->add_flag("--prune", f.prune, "Drop gates within 1e-10 of the identity");
    synth->add_flag("--verify", f.verify, "Re-read the circuit file and check its error");

    auto* count = app.add_subcommand("count", "Print the CINC count for n-level system 1");
    auto* count_n = count->add_option("--n", f.count_n, "Dimension of system 1");
    count->add_flag("--breakdown", f.breakdown, "Show per-stage contributions");
    auto* table = count->add_flag("--table", f.table, "Compare n = 3..8 against published counts");
    count_n->excludes(table);

    auto* random = app.add_subcommand("random", "Write a Haar-random unitary matrix file");
    random->add_option("--n", f.random_n, "Dimension of system 1")->required();
    random->add_option("--m", f.random_m, "Dimension of system 2")->required();
    random->add_option("--seed", f.seed, "RNG seed (HDSYNTH_SEED overrides)")->capture_default_str();
    random->add_option("OUTPUT", f.random_output, "Matrix file to write")->required();

    auto* verify = app.add_subcommand("verify", "Check a circuit file against a matrix file");
    verify->add_option("CIRCUIT", f.verify_circuit, "Circuit file")->required();
    verify->add_option("MATRIX", f.verify_matrix, "Matrix file")->required();

    std::vector<const char*> argv{"hdsynth"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (count->parsed() && !f.table && count_n->count() == 0) {
            throw CLI::RequiredError("--n");
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (synth->parsed()) {
            return cmd_synth(f, out, err);
        }
        if (count->parsed()) {
            return cmd_count(f, out);
        }
        if (random->parsed()) {
            return cmd_random(f, out);
        }
        return cmd_verify(f, out, err);
    } catch (const CLI::Error& e) {
        err << "hdsynth: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        err << "hdsynth: parse failure: " << e.what() << '\n';
        return kParseFailure;
    } catch (const ShapeError& e) {
        err << "hdsynth: parse failure: " << e.what() << '\n';
        return kParseFailure;
    } catch (const NotUnitaryError& e) {
        err << "hdsynth: unitarity failure: " << e.what() << '\n';
        return kUnitarityFailure;
    } catch (const DimensionError& e) {
        err << "hdsynth: dimension failure: " << e.what() << '\n';
        return kDimensionFailure;
    } catch (const Error& e) {
        err << "hdsynth: " << e.what() << '\n';
        return kIoFailure;
    }
}

}  // namespace hdsynth::cli
