#pragma once

#include <string>

#include "harmzero/transport.hpp"

namespace harmzero {

/// Mapping spec document:
///
///   {"r_num": [[re, im], ...], "r_den": [...], "s_num": [...], "s_den": [...],
///    "logs": [{"anchor": [re, im], "coeff": [re, im]}, ...]}
///
/// Coefficients are in ascending degree. Missing fields default to r = 0,
/// s = 0, denominators 1 and no log terms. Doubles are written in shortest
/// round-trip form, so export followed by import reproduces them exactly.
std::string mapping_to_json(const HarmonicMapping& f);

/// Throws InvalidInput on malformed documents.
HarmonicMapping mapping_from_json(const std::string& text);

/// Throws InvalidInput when the file cannot be read or parsed.
HarmonicMapping load_mapping_file(const std::string& path);
void save_mapping_file(const HarmonicMapping& f, const std::string& path);

/// Report document with the target, sorted zeros as [re, im] pairs,
/// residuals, Jacobians and run statistics. A generation timestamp is
/// included unless `deterministic` is set.
std::string report_to_json(const SolveReport& report, bool deterministic = true);

}  // namespace harmzero
