#pragma once

// Command surface for the sllift tool: argument handling, experiment records
// (JSON and CSV), and the per-point experiment drivers shared with tests.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sllift/actions.hpp"
#include "sllift/hardness.hpp"
#include "sllift/intmat.hpp"

namespace sllift::cli {

using json = nlohmann::ordered_json;

inline constexpr std::string_view kSchemaVersion = "1.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kInfeasible = 2, kBudget = 3 };

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::string token) : std::runtime_error(msg), token_(std::move(token)) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

/// "a,b;c,d" -> n x n matrix. Throws ParseError naming the bad token.
IntMatrix parse_matrix(std::string_view text, std::size_t n);

/// Comma-separated values and a..b spans, e.g. "2..5,9" -> values in the order given.
std::vector<std::int64_t> parse_range(std::string_view text);

/// Integer field: plain number when |v| <= 2^53, else decimal string under key + "_str".
void put_int(json& j, const std::string& key, const Int& v);
json matrix_json(const IntMatrix& m);

json make_record(std::string_view command, json params, std::uint64_t seed, json results, std::int64_t wall_ms);
/// The record without wall_time_ms, serialized; equal for reproducible runs.
std::string payload(const json& record);

/// RFC 4180 table: scalars of params and results are flattened to columns.
std::string to_csv(const std::vector<json>& records);
/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// Per-point experiment drivers. Each returns the `results` payload.
json lift_results(const IntMatrix& x, std::int64_t q, std::uint64_t seed);
json hard_results(const HardInstance& h);
json oracle_check(const HardInstance& h, std::int64_t t_max);
json roots_point(std::int64_t q, std::uint64_t n, unsigned k, std::int64_t alpha_budget);
json skewed_point(std::size_t n, std::int64_t t);
json diameter_point(Space space, std::size_t n, std::int64_t q, std::int64_t t_max);
json bad_pair_point(std::int64_t q, std::int64_t t_max);
json lift_bounds_point(std::size_t n, std::int64_t q, std::size_t samples, std::uint64_t seed);

/// Full CLI entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sllift::cli
