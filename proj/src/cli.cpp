#include "sllift/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "sllift/lifting.hpp"
#include "sllift/oracle.hpp"
#include "sllift/residue.hpp"

namespace sllift::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

bool is_integer_token(const std::string& t) {
  if (t.empty()) return false;
  const std::size_t first = t[0] == '-' ? 1 : 0;
  if (first == t.size()) return false;
  return std::all_of(t.begin() + static_cast<std::ptrdiff_t>(first), t.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

std::int64_t parse_i64(const std::string& token) {
  const std::string t = trim(token);
  if (!is_integer_token(t)) throw ParseError("bad integer '" + t + "'", t);
  try {
    return std::stoll(t);
  } catch (const std::out_of_range&) {
    throw ParseError("integer out of range '" + t + "'", t);
  }
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

json vec_json(std::span<const std::int64_t> v) { return json(std::vector<std::int64_t>(v.begin(), v.end())); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case Errc::InvalidInput:
    case Errc::NotExtendableModQ:
      return kInfeasible;
    case Errc::BudgetExceeded:
      return kBudget;
    default:
      return kUsage;
  }
}

json error_json(const Error& e) { return json{{"error", e.what()}, {"error_code", std::string(to_string(e.code()))}}; }

}  // namespace

IntMatrix parse_matrix(std::string_view text, std::size_t n) {
  auto rows = split(text, ';');
  if (rows.size() > 1 && trim(rows.back()).empty()) rows.pop_back();
  if (rows.size() != n) {
    throw ParseError("expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()), std::string(text));
  }
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cells = split(rows[i], ',');
    if (cells.size() != n) {
      throw ParseError("row " + std::to_string(i + 1) + " has " + std::to_string(cells.size()) + " entries, expected " +
                           std::to_string(n),
                       trim(rows[i]));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const std::string t = trim(cells[j]);
      if (!is_integer_token(t)) throw ParseError("bad matrix token '" + t + "'", t);
      m(i, j) = Int(t);
    }
  }
  return m;
}

std::vector<std::int64_t> parse_range(std::string_view text) {
  std::vector<std::int64_t> out;
  for (const auto& raw : split(text, ',')) {
    const std::string part = trim(raw);
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_i64(part));
      continue;
    }
    const std::int64_t lo = parse_i64(part.substr(0, dots));
    const std::int64_t hi = parse_i64(part.substr(dots + 2));
    if (hi < lo) throw ParseError("empty range '" + part + "'", part);
    for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

void put_int(json& j, const std::string& key, const Int& v) {
  static const Int limit = Int(1) << 53;
  if (abs(v) <= limit) {
    j[key] = static_cast<std::int64_t>(v);
  } else {
    j[key + "_str"] = v.str();
  }
}

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

json make_record(std::string_view command, json params, std::uint64_t seed, json results, std::int64_t wall_ms) {
  json r;
  r["schema_version"] = std::string(kSchemaVersion);
  r["command"] = std::string(command);
  r["params"] = std::move(params);
  r["seed"] = seed;
  r["results"] = std::move(results);
  r["wall_time_ms"] = wall_ms;
  return r;
}

std::string payload(const json& record) {
  json copy = record;
  copy.erase("wall_time_ms");
  return copy.dump();
}

std::string to_csv(const std::vector<json>& records) {
  std::vector<std::string> columns{"schema_version", "command", "seed"};
  std::vector<std::map<std::string, std::string>> rows;
  auto add_column = [&](const std::string& c) {
    if (std::find(columns.begin(), columns.end(), c) == columns.end()) columns.push_back(c);
  };
  for (const json& r : records) {
    std::map<std::string, std::string> row;
    row["schema_version"] = cell(r.at("schema_version"));
    row["command"] = cell(r.at("command"));
    row["seed"] = cell(r.at("seed"));
    for (const char* section : {"params", "results"}) {
      for (const auto& [k, v] : r.at(section).items()) {
        const std::string name = std::string(section) + "." + k;
        add_column(name);
        row[name] = cell(v);
      }
    }
    row["wall_time_ms"] = cell(r.at("wall_time_ms"));
    rows.push_back(std::move(row));
  }
  columns.push_back("wall_time_ms");
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + csv_field(columns[i]);
  out += "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const auto it = row.find(columns[i]);
      out += (i ? "," : "") + csv_field(it == row.end() ? "" : it->second);
    }
    out += "\r\n";
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

json lift_results(const IntMatrix& x, std::int64_t q, std::uint64_t seed) {
  const LiftCertificate c = lift(x, q, seed);
  json r;
  r["gamma"] = matrix_json(c.gamma);
  put_int(r, "first_rows_max", c.first_rows_max);
  put_int(r, "last_row_max", c.last_row_max);
  r["trials_used"] = c.trials_used;
  r["used_fallback"] = c.used_fallback;
  r["det"] = det(c.gamma).str();
  r["verified"] = true;
  return r;
}

json hard_results(const HardInstance& h) {
  const RootWitness& w = h.witness;
  json r;
  r["q"] = h.q;
  r["n"] = h.n;
  r["modulus"] = w.modulus;
  r["alpha"] = w.alpha.value();
  r["beta"] = w.beta.value();
  r["abs_alpha"] = w.abs_alpha;
  r["abs_n_beta"] = w.abs_n_beta;
  r["source"] = w.source;
  r["x"] = matrix_json(h.x);
  put_int(r, "lower_bound_num", h.lower_bound_num);
  put_int(r, "lower_bound_den", h.lower_bound_den);
  put_int(r, "lower_bound_ceil", h.lower_bound_ceil());
  r["lower_bound"] = h.lower_bound();
  r["vacuous"] = h.vacuous();
  r["degenerate"] = w.degenerate;
  if (h.trace_residue) {
    put_int(r, "trace_residue", *h.trace_residue);
    put_int(r, "trace_modulus", *h.trace_modulus);
  }
  return r;
}

json oracle_check(const HardInstance& h, std::int64_t t_max) {
  const MinLift m = min_lift_norm(h.x, h.q, t_max);
  json r;
  r["t_max"] = t_max;
  r["scanned_to"] = m.scanned_to;
  r["reached"] = m.norm.has_value();
  r["min_max_norm"] = m.norm ? json(*m.norm) : json(nullptr);
  r["witness"] = m.witness ? matrix_json(*m.witness) : json(nullptr);
  r["holds"] = !m.norm || Int(*m.norm) >= h.lower_bound_ceil();
  return r;
}

json roots_point(std::int64_t q, std::uint64_t n, unsigned k, std::int64_t alpha_budget) {
  RootWitness best = find_large_root(q, n, alpha_budget, 0);
  if (auto alt = small_P_factor_root(q, n, k); alt && alt->abs_n_beta > best.abs_n_beta) best = *alt;
  const bool valid = pow_mod(best.beta.value(), n, q) == best.alpha.value();
  const double root_q = std::sqrt(static_cast<double>(q));
  json r;
  r["q"] = q;
  r["alpha"] = best.alpha.value();
  r["beta"] = best.beta.value();
  r["abs_alpha"] = best.abs_alpha;
  r["abs_n_beta"] = best.abs_n_beta;
  r["source"] = best.source;
  r["valid"] = valid;
  r["ratio_sqrt_q"] = static_cast<double>(best.abs_n_beta) / root_q;
  r["score"] = static_cast<double>(best.abs_n_beta) * static_cast<double>(best.abs_alpha) / root_q;
  return r;
}

json skewed_point(std::size_t n, std::int64_t t) {
  const std::uint64_t count = count_sl(EnumSpec::skewed(n, t));
  const double scale = std::pow(static_cast<double>(t), static_cast<double>(n * n - 1)) * std::log2(t + 1.0);
  json r;
  r["t"] = t;
  r["count"] = count;
  r["normalized"] = static_cast<double>(count) / scale;
  return r;
}

json diameter_point(Space space, std::size_t n, std::int64_t q, std::int64_t t_max) {
  const DiameterProfile p = diameter_profile(space, n, q, t_max);
  json r;
  r["space"] = std::string(to_string(space));
  r["q"] = q;
  r["points"] = p.points;
  r["pairs"] = p.pairs;
  r["unreached"] = p.unreached;
  r["diameter_norm"] = p.diameter_norm ? json(*p.diameter_norm) : json(nullptr);
  r["q50"] = p.q50;
  r["q90"] = p.q90;
  r["q99"] = p.q99;
  r["diameter_exponent"] = opt_json(p.diameter_exponent);
  r["q50_exponent"] = opt_json(p.q50_exponent);
  r["q90_exponent"] = opt_json(p.q90_exponent);
  r["q99_exponent"] = opt_json(p.q99_exponent);
  return r;
}

json bad_pair_point(std::int64_t q, std::int64_t t_max) {
  const DistanceRecord d = projective_bad_pair(q, t_max);
  json r;
  r["q"] = q;
  r["x"] = vec_json(d.x);
  r["y"] = vec_json(d.y);
  r["min_max_norm"] = d.min_max_norm ? json(*d.min_max_norm) : json(nullptr);
  r["witness"] = d.witness ? matrix_json(*d.witness) : json(nullptr);
  r["ratio"] = d.min_max_norm ? json(static_cast<double>(*d.min_max_norm) / static_cast<double>(q)) : json(nullptr);
  r["log_q_exponent"] = opt_json(d.log_q_exponent);
  return r;
}

json lift_bounds_point(std::size_t n, std::int64_t q, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(q) * 0x9e3779b97f4a7c15ULL + n));
  const double lq = std::log2(static_cast<double>(std::max<std::int64_t>(q, 2)));
  double first = 0, last = 0;
  std::uint64_t max_trials = 0, fallbacks = 0;
  Int max_first = 0, max_last = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const IntMatrix x = random_sl_mod(n, q, rng);
    const LiftCertificate c = lift(x, q, seed + i);
    first = std::max(first, c.first_rows_max.convert_to<double>() / (static_cast<double>(q) * lq));
    last = std::max(last, c.last_row_max.convert_to<double>() / (static_cast<double>(q) * q * lq));
    max_first = std::max(max_first, c.first_rows_max);
    max_last = std::max(max_last, c.last_row_max);
    max_trials = std::max(max_trials, c.trials_used);
    fallbacks += c.used_fallback ? 1 : 0;
  }
  json r;
  r["n"] = n;
  r["q"] = q;
  r["samples"] = samples;
  r["verified"] = samples;
  put_int(r, "max_first_rows", max_first);
  put_int(r, "max_last_row", max_last);
  r["first_ratio"] = first;
  r["last_ratio"] = last;
  r["max_trials"] = max_trials;
  r["fallbacks"] = fallbacks;
  return r;
}

namespace {

struct Sweep {
  std::string kind;
  std::size_t n = 2;
  std::string q_range = "2..12";
  std::string t_range = "1..8";
  unsigned k = 2;
  std::int64_t alpha_budget = 10;
  std::int64_t t_max = 64;
  std::size_t samples = 100;
  std::string space = "P";
  std::string csv;
};

// Runs the points concurrently; records come back in input order.
std::vector<json> run_points(const std::string& command, const std::vector<std::int64_t>& values,
                             const std::string& key, const json& shared, std::uint64_t seed,
                             const std::function<json(std::int64_t)>& body) {
  std::vector<json> records(values.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    json params = shared;
    params[key] = values[i];
    json results;
    try {
      results = body(values[i]);
    } catch (const Error& e) {
      results = error_json(e);
    } catch (const std::exception& e) {
      results = json{{"error", e.what()}, {"error_code", "Internal"}};
    }
    records[i] = make_record(command, std::move(params), seed, std::move(results), elapsed_ms(start));
  }
  return records;
}

int do_sweep(const Sweep& s, std::uint64_t seed, std::ostream& out) {
  json shared;
  shared["n"] = s.n;
  std::vector<std::int64_t> values;
  std::string key = "q";
  std::function<json(std::int64_t)> body;
  const std::string command = "sweep " + s.kind;
  if (s.kind == "roots") {
    values = parse_range(s.q_range);
    shared["k"] = s.k;
    shared["alpha_budget"] = s.alpha_budget;
    body = [&](std::int64_t q) { return roots_point(q, s.n, s.k, s.alpha_budget); };
  } else if (s.kind == "drs" || s.kind == "skewed") {
    values = parse_range(s.t_range);
    key = "t";
    if (s.kind == "skewed") {
      body = [&](std::int64_t t) { return skewed_point(s.n, t); };
    } else {
      // One histogram pass serves every T.
      const auto rows = drs_table(s.n, values);
      std::map<std::int64_t, DrsRow> by_t;
      for (const auto& r : rows) by_t[r.t] = r;
      body = [by_t](std::int64_t t) {
        const DrsRow& r = by_t.at(t);
        return json{{"t", r.t}, {"count", r.count}, {"ratio", opt_json(r.ratio)}};
      };
    }
  } else if (s.kind == "diameter") {
    if (s.space != "A" && s.space != "P") throw ParseError("space must be A or P", s.space);
    values = parse_range(s.q_range);
    shared["space"] = s.space;
    shared["t_max"] = s.t_max;
    const Space sp = s.space == "A" ? Space::Affine : Space::Projective;
    body = [&, sp](std::int64_t q) { return diameter_point(sp, s.n, q, s.t_max); };
  } else if (s.kind == "lift-bounds") {
    values = parse_range(s.q_range);
    shared["samples"] = s.samples;
    body = [&](std::int64_t q) { return lift_bounds_point(s.n, q, s.samples, seed); };
  } else {
    throw ParseError("unknown sweep kind '" + s.kind + "'", s.kind);
  }

  const auto records = run_points(command, values, key, shared, seed, body);
  std::size_t failed = 0;
  for (const json& r : records) {
    out << r.dump() << '\n';
    if (r.at("results").contains("error")) ++failed;
  }
  if (!s.csv.empty()) write_atomic(s.csv, to_csv(records));
  return (!records.empty() && failed == records.size()) ? kUsage : kOk;
}

void print_text(const json& record, std::ostream& out) {
  out << record.at("command").get<std::string>() << '\n';
  for (const auto& [k, v] : record.at("results").items()) out << "  " << k << ": " << v.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lift elements of SL_n(Z/qZ) to SL_n(Z) and run the accompanying experiments", "sllift"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  bool as_json = false;

  auto* lift_cmd = app.add_subcommand("lift", "Lift a matrix in SL_n(Z/qZ) to SL_n(Z)");
  std::size_t n = 2;
  std::int64_t q = 0;
  std::string matrix;
  lift_cmd->add_option("--n", n, "Matrix size")->required()->check(CLI::Range(std::size_t{1}, std::size_t{16}));
  lift_cmd->add_option("--q", q, "Modulus")->required()->check(CLI::PositiveNumber);
  lift_cmd->add_option("--matrix", matrix, "Rows separated by ';', entries by ',', or \"random\"")->required();
  lift_cmd->add_option("--seed", seed, "Random seed");
  lift_cmd->add_flag("--json", as_json, "Emit a JSON record");

  auto* hard_cmd = app.add_subcommand("hard", "Build an element whose every lift is large");
  std::int64_t alpha_budget = 17, verify = 0, sarnak_m = 0;
  hard_cmd->add_option("--n", n, "Matrix size")->check(CLI::Range(std::size_t{1}, std::size_t{16}));
  hard_cmd->add_option("--q", q, "Modulus");
  hard_cmd->add_option("--budget", alpha_budget, "Largest |alpha| tried")->check(CLI::PositiveNumber);
  hard_cmd->add_option("--verify-oracle", verify, "Check the bound against the exact minimum up to this norm");
  hard_cmd->add_option("--sarnak-m", sarnak_m, "Use the q = 8m diagonal family instead");
  hard_cmd->add_option("--seed", seed, "Recorded seed");
  hard_cmd->add_flag("--json", as_json, "Emit a JSON record");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment over a range of parameters");
  Sweep sw;
  sweep_cmd->add_option("kind", sw.kind, "roots | drs | skewed | diameter | lift-bounds")
      ->required()
      ->check(CLI::IsMember({"roots", "drs", "skewed", "diameter", "lift-bounds"}));
  sweep_cmd->add_option("--n", sw.n, "Matrix size")->check(CLI::Range(std::size_t{1}, std::size_t{8}));
  sweep_cmd->add_option("--q", sw.q_range, "Moduli: a..b, a, or a,b,c");
  sweep_cmd->add_option("--T", sw.t_range, "Norm caps: a..b, a, or a,b,c");
  sweep_cmd->add_option("--k", sw.k, "Root exponent parameter k");
  sweep_cmd->add_option("--budget", sw.alpha_budget, "Largest |alpha| tried");
  sweep_cmd->add_option("--t-max", sw.t_max, "Largest norm scanned per distance");
  sweep_cmd->add_option("--samples", sw.samples, "Random elements per modulus");
  sweep_cmd->add_option("--space", sw.space, "A (affine) or P (projective)");
  sweep_cmd->add_option("--seed", seed, "Random seed");
  sweep_cmd->add_option("--csv", sw.csv, "Also write the records as CSV");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (*lift_cmd) {
      IntMatrix x;
      if (matrix == "random") {
        std::mt19937_64 rng(seed);
        x = random_sl_mod(n, q, rng);
      } else {
        x = parse_matrix(matrix, n);
      }
      json params{{"n", n}, {"q", q}, {"matrix", matrix}};
      json rec;
      try {
        rec = make_record("lift", params, seed, lift_results(x, q, seed), elapsed_ms(start));
      } catch (const Error& e) {
        err << "lift: " << e.what() << '\n';
        if (as_json) out << make_record("lift", params, seed, error_json(e), elapsed_ms(start)).dump(2) << '\n';
        return exit_for(e);
      }
      if (as_json) {
        out << rec.dump(2) << '\n';
      } else {
        print_text(rec, out);
      }
      return kOk;
    }
    if (*hard_cmd) {
      HardInstance h;
      json params;
      if (sarnak_m > 0) {
        h = sarnak_instance(sarnak_m);
        params["sarnak_m"] = sarnak_m;
      } else {
        if (q < 2) throw ParseError("hard needs --q >= 2 or --sarnak-m", std::to_string(q));
        h = hard_instance(q, n, alpha_budget);
        params = json{{"n", n}, {"q", q}, {"budget", alpha_budget}};
      }
      if (verify > 0) params["verify_oracle"] = verify;
      json results = hard_results(h);
      int code = kOk;
      if (verify > 0) {
        try {
          results["oracle"] = oracle_check(h, verify);
          if (!results["oracle"]["holds"].get<bool>()) {
            err << "hard: oracle minimum is below the claimed lower bound\n";
            code = kUsage;
          }
        } catch (const Error& e) {
          results["oracle"] = error_json(e);
          results["flagged"] = true;
          err << "hard: " << e.what() << '\n';
          code = exit_for(e);
        }
      }
      const json rec = make_record("hard", params, seed, results, elapsed_ms(start));
      if (as_json) {
        out << rec.dump(2) << '\n';
      } else {
        print_text(rec, out);
      }
      return code;
    }
    return do_sweep(sw, seed, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace sllift::cli
