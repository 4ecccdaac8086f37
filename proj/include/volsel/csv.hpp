#pragma once

#include "volsel/matrix.hpp"

#include <filesystem>
#include <string_view>

namespace volsel {

/// Parses a rectangular numeric CSV. A first row containing any non-numeric
/// field is taken as a header and skipped. Blank lines are ignored.
/// Errors: ParseError (with 1-based line and column), NonRectangular, NonFinite.
RealMatrix parse_csv(std::string_view text);
RealMatrix ingest_csv(const std::filesystem::path& path);

} // namespace volsel
