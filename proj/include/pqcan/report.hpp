#pragma once
#include <string>
#include <vector>

#include "pqcan/campaign.hpp"

namespace pqcan {

// Fixed column order; all times ms with %.6f, success_rate %.4f.
// algorithm,kind,config,security_level,n_iterations,success_rate,
// keygen_mean_ms,keygen_std_ms,op2_mean_ms,op2_std_ms,op3_mean_ms,
// op3_std_ms,overhead_mean_ms,overhead_std_ms,crypto_only_mean_ms,
// bytes_on_wire_mean
std::string results_csv_header();
std::string results_csv(const std::vector<CellResult>& cells);

// Inverse of results_csv. Throws ParseError with origin:line on malformed
// input (wrong column count, bad number, unknown kind).
std::vector<CellResult> parse_results_csv(const std::string& text,
                                          const std::string& origin);

// Two tables (key exchange, signatures), one row per (algorithm, config),
// algorithms ordered by their best mean overhead, fastest first.
std::string results_markdown(const std::vector<CellResult>& cells);

}  // namespace pqcan
