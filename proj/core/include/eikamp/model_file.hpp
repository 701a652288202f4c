#pragma once

// Born-model configuration files.
//
//   [model]
//   kind = gaussian            ; gaussian | exponential_pole | tabulated
//   g = 2.0                    ; real part of the coupling (or chi0 = ...)
//   g_imag = 0.0
//   lambda = 1.0
//
//   kind = exponential_pole    ; c, c_imag, slope
//   kind = tabulated           ; data = <file with rows "q re im">, relative
//                              ; to the model file
//   [envelope]
//   tail_rate = 1.5            ; tabulated only; fitted when absent
//
// Unknown sections or keys are rejected.

#include <filesystem>
#include <istream>

#include "eikamp/born_model.hpp"

namespace eikamp::io {

/// Throws ParseError (with file and line where known) or DomainError from
/// the model factories.
eikonal::BornModel load_model(const std::filesystem::path& path);

/// Relative data paths resolve against base_dir.
eikonal::BornModel parse_model(std::istream& in, const std::filesystem::path& base_dir,
                               const std::string& source_name = "<model>");

/// Rows "q re im"; '#' starts a comment.
std::vector<eikonal::TabulatedSample> parse_table(std::istream& in,
                                                  const std::string& source_name = "<table>");

}  // namespace eikamp::io
