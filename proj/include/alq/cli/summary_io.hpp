#pragma once

#include <iosfwd>

#include "alq/estimator.hpp"

namespace alq::cli {

/// Writes the summary as pretty-printed JSON with keys in a fixed order.
void write_summary_json(std::ostream& out, const PosteriorSummary& summary);

/// Inverse of write_summary_json. Throws InputError on missing or mistyped
/// fields.
PosteriorSummary read_summary_json(std::istream& in);

}  // namespace alq::cli
