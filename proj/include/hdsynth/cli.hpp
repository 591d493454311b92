#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hdsynth/synthesis.hpp"

namespace hdsynth::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kParseFailure = 2,
    kUnitarityFailure = 3,
    kDimensionFailure = 4,
    kVerificationFailure = 5,
    kIoFailure = 6,
};

/// Tolerance factor for `verify` and `synth --verify`: pass iff error ≤ 1e−7·√(nm).
inline constexpr double kVerifyTolerance = 1e-7;

struct RunReport {
    std::string input_digest;  ///< SHA-256 of the input file, hex
    Dims dims;
    SynthOptions options;
    bool verified = false;
    std::size_t cinc_count = 0;
    std::size_t eliminated = 0;
    double reconstruction_error = 0.0;
    double wall_time_s = 0.0;
    std::filesystem::path circuit_path;
    SynthesisReport synthesis;
};

std::string sha256_hex(const std::string& bytes);

/// Entry point shared by the executable and the tests. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hdsynth::cli
