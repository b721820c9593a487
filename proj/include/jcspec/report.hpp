#pragma once

// Tabular output: fixed CSV headers per command, and a JSON form
// {meta: {...}, rows: [{col: value}, ...]} that mirrors the CSV columns.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "jcspec/asymptotics.hpp"
#include "jcspec/model.hpp"
#include "jcspec/perturbation.hpp"
#include "jcspec/projectors.hpp"
#include "jcspec/special_functions.hpp"
#include "jcspec/tridiagonal.hpp"

namespace jcspec::report {

/// Empty in CSV, null in JSON.
struct Null {};

using Cell = std::variant<Null, double, std::int64_t, std::string, bool>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
};

/// 15 significant digits, shortest form, '.' separator, no locale.
/// Non-finite values give an empty string.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return {};
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  return std::string(buf, res.ptr);
}

/// v rounded to 15 significant digits (what format_number prints).
inline double round15(double v) {
  if (v == 0.0) return 0.0;  // drops the sign of -0
  if (!std::isfinite(v)) return v;
  const std::string s = format_number(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

inline Cell number_or_null(double v) { return std::isfinite(v) ? Cell{v} : Cell{Null{}}; }

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(Null) const { return {}; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return csv_escape(s); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, c);
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(Null) const { return nullptr; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return round15(v);
    }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
  };
  return std::visit(Visitor{}, c);
}

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << csv_escape(t.header[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

inline nlohmann::ordered_json to_json(const Table& t) {
  nlohmann::ordered_json out;
  out["meta"] = t.meta;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < t.header.size(); ++i) obj[t.header[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  out["rows"] = std::move(rows);
  return out;
}

inline void write_json(std::ostream& os, const Table& t) { os << to_json(t).dump(2) << '\n'; }

/// Metadata common to every command.
inline nlohmann::ordered_json params_meta(std::string_view command, const ModelParams& p) {
  nlohmann::ordered_json m;
  m["command"] = std::string(command);
  m["omega"] = round15(p.omega());
  m["omega0"] = round15(p.omega0());
  m["g"] = round15(p.g());
  m["q"] = round15(p.q());
  m["convergent"] = p.convergent();
  return m;
}

inline nlohmann::ordered_json truncation_meta(const SpectralResult& r) {
  nlohmann::ordered_json m;
  m["n_basis"] = r.truncation.n_basis;
  m["converged_upto"] = r.converged_upto;
  m["tol_abs"] = round15(r.truncation.tol_abs);
  return m;
}

inline Table spectrum_table(MatrixKind kind, const ModelParams& p, const SpectralResult& r) {
  Table t;
  t.header = {"index", "eigenvalue"};
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) t.rows.push_back({std::int64_t(i), r.eigenvalues[i]});
  t.meta = params_meta("spectrum", p);
  t.meta["variant"] = std::string(to_string(kind));
  t.meta["truncation"] = truncation_meta(r);
  return t;
}

inline Table splitting_report(const ModelParams& p, const SplittingTable& s) {
  Table t;
  t.header = {"m", "lo_index", "hi_index", "lambda_lo", "lambda_hi", "delta", "rwa_delta"};
  for (const auto& r : s.rows) {
    t.rows.push_back({std::int64_t(r.m), std::int64_t(r.lo_index), std::int64_t(r.hi_index), r.lambda_lo,
                      r.lambda_hi, r.delta, r.rwa_delta ? Cell{*r.rwa_delta} : Cell{Null{}}});
  }
  t.meta = params_meta("splitting", p);
  t.meta["variant"] = std::string(to_string(s.variant));
  t.meta["resonant"] = is_resonant(p);
  return t;
}

inline nlohmann::ordered_json certificate_meta(const std::optional<M0Certificate>& c) {
  if (!c) return nullptr;
  nlohmann::ordered_json m;
  m["first_valid"] = c->first_valid;
  m["horizon"] = c->horizon;
  m["kind"] = "finite-horizon";
  return m;
}

/// One row per order k = 0..k_max; exact is the certified eigenvalue.
inline Table perturb_report(const ModelParams& p, const SeriesReport& s, double exact) {
  Table t;
  t.header = {"k", "correction", "partial_sum", "residual", "remainder_bound", "order_bound", "term_max"};
  for (std::size_t k = 0; k < s.corrections.size(); ++k) {
    t.rows.push_back({std::int64_t(k), s.corrections[k], s.partial_sums[k], number_or_null(std::abs(exact - s.partial_sums[k])),
                      number_or_null(s.remainder_bounds[k]), number_or_null(s.order_bounds[k]),
                      number_or_null(s.term_maxima[k])});
  }
  t.meta = params_meta("perturb", p);
  t.meta["variant"] = std::string(to_string(s.variant));
  t.meta["m"] = s.m;
  t.meta["exact"] = round15(exact);
  t.meta["sigma_m"] = round15(s.sigma_m);
  t.meta["t_m"] = round15(s.t_m);
  t.meta["m0_certificate"] = certificate_meta(s.m0);
  return t;
}

inline Table asymptotics_report(Variant v, const ModelParams& p, int k_max, const std::vector<ConvergenceRow>& rows) {
  Table t;
  t.header = {"m", "exact", "series", "remainder_bound", "asymptotic", "residual_series", "residual_asymptotic"};
  for (const auto& r : rows) {
    t.rows.push_back({std::int64_t(r.m), r.exact, r.partial_sums.back(), number_or_null(r.remainder_bound), r.asymptotic,
                      r.residual_series, r.residual_asymptotic});
  }
  t.meta = params_meta("asymptotics", p);
  t.meta["variant"] = std::string(to_string(v));
  t.meta["k_max"] = k_max;
  return t;
}

/// P^(m)_n(g) for n = 0..n_max with the contour-quadrature value alongside.
inline Table overlaps_report(int m, int n_max, const ModelParams& p) {
  if (m < 0 || n_max < 0) throw Error(Errc::IndexOutOfRange, "m and n_max must be >= 0");
  Table t;
  t.header = {"m", "n", "overlap", "contour", "contour_residual"};
  const auto rows = index_range(0, n_max + 1);
  const std::vector<int> col{m};
  const Matrix u = overlap_block(rows, col, p.g(), p.omega());
  for (int n = 0; n <= n_max; ++n) {
    const double closed = u(std::size_t(n), 0);
    const double quad = displaced_overlap_contour(m, n, p.g(), p.omega()).value;
    t.rows.push_back({std::int64_t(m), std::int64_t(n), closed, quad, std::abs(closed - quad)});
  }
  t.meta = params_meta("overlaps", p);
  return t;
}

/// Closed form against the parity-sum oracle for one element.
inline Table projectors_report(Projector proj, int k, int m, const ModelParams& p) {
  Table t;
  t.header = {"projector", "k", "m", "closed_form", "direct_sum", "defect", "complement"};
  const double closed = projector_element(proj, k, m, p);
  const double direct = projector_direct_sum(proj, k, m, p);
  const Projector other = proj == Projector::P1 ? Projector::P2 : Projector::P1;
  const double complement = closed + projector_element(other, k, m, p) - (k == m ? 1.0 : 0.0);
  t.rows.push_back({std::string(to_string(proj)), std::int64_t(k), std::int64_t(m), closed, direct,
                    std::abs(closed - direct), complement});
  t.meta = params_meta("projectors", p);
  return t;
}

}  // namespace jcspec::report
