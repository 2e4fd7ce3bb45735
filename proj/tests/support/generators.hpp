#pragma once

#include <optional>
#include <random>
#include <string>

#include "oracle.hpp"
#include "tabreason/table.hpp"

namespace gen {

using Rng = std::mt19937_64;

// At most 8 columns and 20 rows; cells mix integers, decimals, grouped
// thousands, percentages, words, blanks and "-".
tabreason::Table random_table(Rng& rng, bool with_metadata = false);

struct SqlCase {
  tabreason::Table table;
  oracle::Query query;
  std::string sql;
};

// A random query over a random table, rendered with varied keyword case,
// quoting styles and operator spellings.
SqlCase random_sql_case(Rng& rng);

// Runs the engine and the oracle on one case; returns a description of the
// first disagreement, or nullopt when they agree.
std::optional<std::string> compare_with_engine(const SqlCase& c);

// Text stitched from response-like fragments: fences, SQL labels, result
// markers, pipe rows, numbered headings, CRLF and stray bytes.
std::string random_response(Rng& rng);

}  // namespace gen
