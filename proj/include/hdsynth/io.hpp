#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hdsynth/circuit.hpp"
#include "hdsynth/counting.hpp"
#include "hdsynth/synthesis.hpp"

namespace hdsynth::io {

using json = nlohmann::json;

/// Rows of [re, im] pairs.
json matrix_to_json(const ComplexMatrix& a);
ComplexMatrix matrix_from_json(const json& j, const char* what = "matrix");

/// A unitary on H_n ⊗ H_m: {"n", "m", "matrix"}.
struct MatrixFile {
    Dims dims;
    ComplexMatrix matrix;
};

json to_json(const MatrixFile& f);
MatrixFile matrix_file_from_json(const json& j);

/// {"n", "m", "convention": "first-listed-applied-first", "level", "gates": [...]}.
json to_json(const Circuit& c);
Circuit circuit_from_json(const json& j);

json to_json(const counting::PartitionTree& t);
json to_json(const counting::CountBreakdown& b);
json to_json(const GateTally& t);
json to_json(const SynthesisReport& r);

/// {"n", "d", "levels", "odd_counts", "bound", "breakdown"}.
json count_summary(std::size_t n);

/// Parses a file as JSON; ParseError on I/O or syntax failure.
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

std::string read_file_bytes(const std::filesystem::path& path);

}  // namespace hdsynth::io
