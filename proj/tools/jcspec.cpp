// jcspec: spectra, overlaps, projectors and perturbation series of the
// Jaynes-Cummings model without the rotating-wave approximation.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jcspec/jcspec.hpp"
#include "jcspec/report.hpp"
#include "jcspec/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expand every `--args-from FILE` in place with the flags listed in FILE,
// one per line: "--flag value", "--flag=value" or a bare "--flag". Blank lines
// and lines starting with '#' are skipped.
std::vector<std::string> expand_args(int argc, char** argv) {
  std::vector<std::string> out;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    std::string path;
    if (a == "--args-from") {
      if (i + 1 >= argc) throw UsageError("--args-from needs a file name");
      path = argv[++i];
    } else if (a.rfind("--args-from=", 0) == 0) {
      path = a.substr(12);
    } else {
      out.push_back(std::move(a));
      continue;
    }
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read --args-from file: " + path);
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t\r");
      line = line.substr(first, last - first + 1);
      const auto sep = line.find_first_of(" \t");
      if (sep == std::string::npos) {
        out.push_back(line);
      } else {
        out.push_back(line.substr(0, sep));
        const auto value = line.find_first_not_of(" \t", sep);
        out.push_back(line.substr(value));
      }
    }
  }
  return out;
}

std::size_t truncation_cap(std::size_t flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("JC_SPECTRA_MAX_N")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0' || v < 64) throw UsageError("JC_SPECTRA_MAX_N must be an integer >= 64");
    return std::size_t(v);
  }
  return jcspec::SpectrumOptions{}.max_n;
}

jcspec::Variant parse_variant(const std::string& s) { return s == "h1" ? jcspec::Variant::H1 : jcspec::Variant::H2; }

jcspec::MatrixKind parse_kind(const std::string& s) {
  if (s == "a0") return jcspec::MatrixKind::A0;
  return jcspec::to_matrix_kind(parse_variant(s));
}

bool is_argument_error(jcspec::Errc c) {
  using jcspec::Errc;
  switch (c) {
    case Errc::NonPositiveOmega:
    case Errc::NegativeCoupling:
    case Errc::NonFinite:
    case Errc::InvalidTruncation:
    case Errc::ArgumentError:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace jcspec;

  CLI::App app{"Jaynes-Cummings spectra without the rotating-wave approximation", "jcspec"};
  app.require_subcommand(1, 1);

  double omega = 1.0, omega0 = 0.0, g = 0.0, tol = 1e-10;
  std::string format = "csv", output;
  std::size_t max_n = 0;
  app.add_option("--omega", omega, "field frequency (> 0)")->capture_default_str();
  app.add_option("--omega0", omega0, "atomic frequency (>= 0)")->required();
  app.add_option("--g", g, "coupling (>= 0)")->required();
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--output", output, "output file (default: standard output)");
  app.add_option("--tol", tol, "absolute eigenvalue tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--max-n", max_n, "truncation cap (overrides JC_SPECTRA_MAX_N)");
  app.fallthrough();

  std::string variant = "h2";
  int m = 0, m_max = 0, n_max = 0, k = 0, order = 3;
  std::vector<int> m_list;

  auto* spectrum = app.add_subcommand("spectrum", "certified eigenvalues 0..m-max");
  spectrum->add_option("--variant", variant)->check(CLI::IsMember({"h1", "h2", "a0"}))->capture_default_str();
  spectrum->add_option("--m-max", m_max)->required()->check(CLI::NonNegativeNumber);

  auto* overlaps = app.add_subcommand("overlaps", "displaced-oscillator overlaps with the contour oracle");
  overlaps->add_option("--m", m)->required()->check(CLI::NonNegativeNumber);
  overlaps->add_option("--n-max", n_max)->required()->check(CLI::NonNegativeNumber);

  std::string projector = "p2";
  auto* projectors = app.add_subcommand("projectors", "projector element: closed form vs parity sum");
  projectors->add_option("--variant", projector)->check(CLI::IsMember({"p1", "p2"}))->capture_default_str();
  projectors->add_option("--k", k)->required()->check(CLI::NonNegativeNumber);
  projectors->add_option("--m", m)->required()->check(CLI::NonNegativeNumber);

  int horizon = kDefaultM0Horizon;
  auto* perturb = app.add_subcommand("perturb", "perturbation series report");
  perturb->add_option("--variant", variant)->check(CLI::IsMember({"h1", "h2"}))->capture_default_str();
  perturb->add_option("--m", m)->required()->check(CLI::NonNegativeNumber);
  perturb->add_option("--order", order)->check(CLI::Range(0, kDefaultOrderCap))->capture_default_str();
  perturb->add_option("--horizon", horizon, "m0 certificate horizon")->check(CLI::PositiveNumber)->capture_default_str();

  auto* asymptotics = app.add_subcommand("asymptotics", "exact vs series vs asymptotic eigenvalues");
  asymptotics->add_option("--variant", variant)->check(CLI::IsMember({"h1", "h2"}))->capture_default_str();
  asymptotics->add_option("--m-list", m_list)->required()->delimiter(',')->check(CLI::NonNegativeNumber);
  asymptotics->add_option("--order", order)->check(CLI::Range(0, kDefaultOrderCap))->capture_default_str();

  auto* splitting = app.add_subcommand("splitting", "level splittings with the resonant RWA column");
  splitting->add_option("--variant", variant)->check(CLI::IsMember({"h1", "h2"}))->capture_default_str();
  splitting->add_option("--m-max", m_max)->required()->check(CLI::NonNegativeNumber);

  auto* validate = app.add_subcommand("validate", "run the invariant suite");

  std::vector<std::string> args;
  try {
    args = expand_args(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  report::Table table;
  bool all_pass = true;
  try {
    const ModelParams p = validate_params(omega, omega0, g);
    SpectrumOptions opts;
    opts.max_n = truncation_cap(max_n);

    if (spectrum->parsed()) {
      const auto kind = parse_kind(variant);
      const auto r = converged_spectrum(kind, p, std::size_t(m_max), tol, opts);
      table = report::spectrum_table(kind, p, r);
    } else if (overlaps->parsed()) {
      table = report::overlaps_report(m, n_max, p);
    } else if (projectors->parsed()) {
      table = report::projectors_report(projector == "p1" ? Projector::P1 : Projector::P2, k, m, p);
    } else if (perturb->parsed()) {
      const auto v = parse_variant(variant);
      const auto rep = series_report(v, m, p, order, horizon);
      const double exact = converged_spectrum(v, p, std::size_t(m), tol, opts).eigenvalues[std::size_t(m)];
      table = report::perturb_report(p, rep, exact);
      table.meta["tol_abs"] = report::round15(tol);
    } else if (asymptotics->parsed()) {
      const auto v = parse_variant(variant);
      table = report::asymptotics_report(v, p, order, convergence_table(v, p, m_list, order, tol, opts));
    } else if (splitting->parsed()) {
      table = report::splitting_report(p, splitting_table(parse_variant(variant), p, m_max, tol, opts));
    } else if (validate->parsed()) {
      table.header = {"check", "value", "threshold", "pass"};
      for (const auto& c : run_invariant_suite(p)) {
        table.rows.push_back({c.name, c.value, c.threshold, c.pass});
        all_pass = all_pass && c.pass;
      }
      table.meta = report::params_meta("validate", p);
      table.meta["all_pass"] = all_pass;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_argument_error(e.code()) ? kExitUsage : kExitComputation;
  }

  std::ostringstream text;
  if (format == "json") {
    report::write_json(text, table);
  } else {
    report::write_csv(text, table);
  }
  if (output.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!(out << text.str())) {
      std::cerr << "error: cannot write " << output << '\n';
      return kExitComputation;
    }
  }
  if (validate->parsed()) {
    std::cerr << (all_pass ? "validate: all checks passed" : "validate: FAILED") << '\n';
    return all_pass ? kExitOk : kExitComputation;
  }
  return kExitOk;
}
