#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <string>

#include "loopspace/charts.hpp"
#include "loopspace/geometry.hpp"
#include "loopspace/matrix_loop.hpp"

namespace loopspace::io {

// All parsers throw Error(ParseError) on malformed input.

std::string loop_to_json(const SampledLoop& loop);
SampledLoop loop_from_json(const std::string& text);
/// One row per node: t, x_1, ..., x_d.
std::string loop_to_csv(const SampledLoop& loop);

/// The loop document for the base plus a "vectors" array.
std::string section_to_json(const TangentSection& section);
TangentSection section_from_json(const EmbeddedManifold& m, const std::string& text);

/// The loop document for the first loop plus a "path" array of all loops.
std::string path_to_json(const LoopPath& path);
LoopPath path_from_json(const EmbeddedManifold& m, const std::string& text);

std::string chart_to_json(const Chart& chart);
Chart chart_from_json(const std::string& text);

std::string matrix_loop_to_json(const MatrixLoop& gamma);
MatrixLoop matrix_loop_from_json(const std::string& text);

/// Rows "j,value" with 1-based j.
std::string singular_values_to_csv(const Eigen::VectorXd& values);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace loopspace::io
