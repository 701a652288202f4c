#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "eikamp/bessel_products.hpp"
#include "eikamp/eikonal.hpp"
#include "eikamp/errors.hpp"
#include "eikamp/model_file.hpp"
#include "eikamp/oracle.hpp"
#include "eikamp/special_functions.hpp"

namespace eikamp::cli {
namespace {

using eikonal::Complex;
using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr int kIoError = 74;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { text, csv, json };
enum class Spacing { linear, log };

struct GridSpec {
  double t_min = -4.0;
  double t_max = -0.25;
  int points = 5;
  Spacing spacing = Spacing::linear;
};

struct RunSpec {
  std::string model_path;
  double s = 1.0;
  GridSpec grid;
  double rel_tol = 1e-6;
  double abs_tol = 1e-12;
  Format format = Format::csv;
  std::string out_path;
  bool override_gate = false;
  unsigned threads = 0;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::vector<double> make_grid(const GridSpec& g) {
  if (g.points < 1) throw UsageError("--points must be at least 1");
  if (!(g.t_max < 0.0) || !std::isfinite(g.t_min)) {
    throw UsageError("the t-grid must satisfy t_min < t_max < 0");
  }
  if (g.points == 1) {
    if (!(g.t_min <= g.t_max)) throw UsageError("the t-grid must satisfy t_min <= t_max < 0");
    return {g.t_min};
  }
  if (!(g.t_min < g.t_max)) throw UsageError("the t-grid must satisfy t_min < t_max < 0");
  std::vector<double> ts(g.points);
  const double n = g.points - 1;
  for (int i = 0; i < g.points; ++i) {
    if (g.spacing == Spacing::linear) {
      ts[i] = g.t_min + (g.t_max - g.t_min) * (i / n);
    } else {
      const double lo = std::log(-g.t_min);
      const double hi = std::log(-g.t_max);
      ts[i] = -std::exp(lo + (hi - lo) * (i / n));
    }
  }
  ts.front() = g.t_min;
  ts.back() = g.t_max;
  return ts;
}

// Rows are independent; each is computed sequentially by one worker and
// stored at its grid index.
template <class Row, class F>
std::vector<Row> compute_rows(const std::vector<double>& ts, unsigned threads, F compute) {
  std::vector<Row> rows(ts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ts.size(); i = next++) rows[i] = compute(ts[i]);
  };
  unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(ts.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::ios_base::failure("cannot open output file '" + path + "'");
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct LoadedModel {
  eikonal::BornModel model;
  eikonal::EikonalProfile profile;
};

LoadedModel load_and_gate(const RunSpec& spec, std::ostream& err) {
  if (spec.model_path.empty()) throw UsageError("--model is required");
  if (!(spec.s > 0.0)) throw UsageError("--s must be positive");
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0)) {
    throw UsageError("tolerances must be positive");
  }
  eikonal::BornModel model = [&] {
    try {
      return io::load_model(spec.model_path);
    } catch (const DomainError& e) {
      throw ParseError(spec.model_path + ": " + e.what());
    }
  }();
  const auto profile = eikonal::eikonal_profile(model);
  eikonal::enforce_regime(profile, spec.override_gate);
  if (profile.status != eikonal::RegimeStatus::ok) {
    err << "warning: max|chi| = " << num(profile.max_abs_chi)
        << " is outside the moderately small regime (< " << eikonal::kChiWarningThreshold
        << ")\n";
  }
  return {std::move(model), profile};
}

eikonal::AmplitudeOptions amplitude_options(const RunSpec& spec) {
  eikonal::AmplitudeOptions opts;
  opts.quadrature.rel_tol = spec.rel_tol;
  opts.quadrature.abs_tol = spec.abs_tol;
  opts.override_chi_gate = spec.override_gate;
  return opts;
}

json model_header(const LoadedModel& m) {
  return json{{"kind", eikonal::to_string(m.model.kind())},
              {"reality", eikonal::to_string(m.model.reality())},
              {"max_abs_chi", m.profile.max_abs_chi},
              {"regime", eikonal::to_string(m.profile.status)}};
}

std::string csv_model_comment(const LoadedModel& m, double s) {
  return "# model=" + std::string(eikonal::to_string(m.model.kind())) + " s=" + num(s) +
         " max_abs_chi=" + num(m.profile.max_abs_chi) +
         " regime=" + std::string(eikonal::to_string(m.profile.status)) + "\n";
}

// ---- table -----------------------------------------------------------------

struct TableRow {
  double t = 0.0;
  eikonal::AmplitudeTerms terms;
  Complex amplitude{};
  double cross_section = 0.0;
  std::string status;
};

const std::vector<std::string> kTableColumns{
    "t",     "re_a1", "im_a1",     "re_a2",  "im_a2",  "re_a3", "im_a3",
    "re_a",  "im_a",  "dsigma_dt", "err_a2", "err_a3", "status"};

std::vector<double> table_numbers(const TableRow& r) {
  return {r.t,
          r.terms.a1.real(),
          r.terms.a1.imag(),
          r.terms.a2.real(),
          r.terms.a2.imag(),
          r.terms.a3.real(),
          r.terms.a3.imag(),
          r.amplitude.real(),
          r.amplitude.imag(),
          r.cross_section,
          r.terms.a2_error,
          r.terms.a3_error};
}

int cmd_table(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const auto ts = make_grid(spec.grid);
  const LoadedModel m = load_and_gate(spec, err);
  const auto opts = amplitude_options(spec);
  const auto rows = compute_rows<TableRow>(ts, spec.threads, [&](double t) {
    TableRow row;
    row.t = t;
    try {
      const auto rep = eikonal::compute_amplitude(m.model, {spec.s, t}, opts, m.profile);
      row.terms = rep.terms;
      row.amplitude = rep.amplitude;
      row.cross_section = rep.cross_section;
      row.status = "ok";
    } catch (const Error& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.terms = {{nan, nan}, {nan, nan}, {nan, nan}, nan, nan};
      row.amplitude = {nan, nan};
      row.cross_section = nan;
      row.status = std::string("failed: ") + e.what();
    }
    return row;
  });

  int failed = 0;
  for (const auto& r : rows) {
    if (r.status != "ok") {
      ++failed;
      err << "row t=" << num(r.t) << " " << r.status << "\n";
    }
  }

  Output o(spec.out_path, out);
  if (spec.format == Format::json) {
    json doc{{"schema_version", kSchemaVersion},
             {"command", "table"},
             {"s", spec.s},
             {"rel_tol", spec.rel_tol},
             {"abs_tol", spec.abs_tol},
             {"model", model_header(m)},
             {"columns", kTableColumns}};
    json jrows = json::array();
    for (const auto& r : rows) {
      json row;
      const auto v = table_numbers(r);
      for (std::size_t i = 0; i < v.size(); ++i) row[kTableColumns[i]] = jnum(v[i]);
      row["status"] = r.status;
      jrows.push_back(std::move(row));
    }
    doc["rows"] = std::move(jrows);
    *o << doc.dump(2) << "\n";
  } else {
    *o << "# eikamp-table v" << kSchemaVersion << "\n" << csv_model_comment(m, spec.s);
    for (std::size_t i = 0; i < kTableColumns.size(); ++i) {
      *o << (i ? "," : "") << kTableColumns[i];
    }
    *o << "\n";
    for (const auto& r : rows) {
      for (double v : table_numbers(r)) *o << num(v) << ",";
      *o << quoted(r.status) << "\n";
    }
  }
  if (failed) err << failed << " of " << rows.size() << " rows failed\n";
  return kOk;
}

// ---- compare ---------------------------------------------------------------

struct CompareRow {
  double t = 0.0;
  Complex approx{};
  Complex reference{};
  double rel_dev = 0.0;
  double reference_error = 0.0;
  std::string status;
};

const std::vector<std::string> kCompareColumns{"t",       "re_a",       "im_a",
                                               "re_oracle", "im_oracle", "rel_dev",
                                               "oracle_err", "status"};

int cmd_compare(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const auto ts = make_grid(spec.grid);
  const LoadedModel m = load_and_gate(spec, err);
  const auto opts = amplitude_options(spec);
  const auto rows = compute_rows<CompareRow>(ts, spec.threads, [&](double t) {
    CompareRow row;
    row.t = t;
    try {
      const eikonal::Kinematics kin(spec.s, t);
      row.approx = eikonal::compute_amplitude(m.model, kin, opts, m.profile).amplitude;
      const auto ref = oracle::direct_eikonal_amplitude(m.model, kin);
      row.reference = ref.value;
      row.reference_error = ref.error_estimate;
      row.rel_dev = std::abs(row.approx - row.reference) / std::abs(row.reference);
      row.status = "ok";
    } catch (const Error& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.approx = row.reference = {nan, nan};
      row.rel_dev = row.reference_error = nan;
      row.status = std::string("failed: ") + e.what();
    }
    return row;
  });

  std::vector<double> devs;
  for (const auto& r : rows) {
    if (r.status == "ok") {
      devs.push_back(r.rel_dev);
    } else {
      err << "row t=" << num(r.t) << " " << r.status << "\n";
    }
  }
  std::sort(devs.begin(), devs.end());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double max_dev = devs.empty() ? nan : devs.back();
  const double median = devs.empty()               ? nan
                        : devs.size() % 2 == 1     ? devs[devs.size() / 2]
                                                   : 0.5 * (devs[devs.size() / 2 - 1] +
                                                            devs[devs.size() / 2]);
  const double chi = m.profile.max_abs_chi;
  const double bound = 3.0 * chi * chi * chi * chi;
  const bool exceeded = !devs.empty() && max_dev > 10.0 * bound;
  const bool any_failed = devs.size() != rows.size();

  Output o(spec.out_path, out);
  if (spec.format == Format::json) {
    json doc{{"schema_version", kSchemaVersion},
             {"command", "compare"},
             {"s", spec.s},
             {"rel_tol", spec.rel_tol},
             {"abs_tol", spec.abs_tol},
             {"model", model_header(m)},
             {"columns", kCompareColumns}};
    json jrows = json::array();
    for (const auto& r : rows) {
      jrows.push_back(json{{"t", jnum(r.t)},
                           {"re_a", jnum(r.approx.real())},
                           {"im_a", jnum(r.approx.imag())},
                           {"re_oracle", jnum(r.reference.real())},
                           {"im_oracle", jnum(r.reference.imag())},
                           {"rel_dev", jnum(r.rel_dev)},
                           {"oracle_err", jnum(r.reference_error)},
                           {"status", r.status}});
    }
    doc["rows"] = std::move(jrows);
    doc["summary"] = json{{"max_rel_dev", jnum(max_dev)},
                          {"median_rel_dev", jnum(median)},
                          {"chi_max", chi},
                          {"bound", bound},
                          {"bound_exceeded", exceeded}};
    *o << doc.dump(2) << "\n";
  } else {
    *o << "# eikamp-compare v" << kSchemaVersion << "\n" << csv_model_comment(m, spec.s);
    for (std::size_t i = 0; i < kCompareColumns.size(); ++i) {
      *o << (i ? "," : "") << kCompareColumns[i];
    }
    *o << "\n";
    for (const auto& r : rows) {
      *o << num(r.t) << "," << num(r.approx.real()) << "," << num(r.approx.imag()) << ","
         << num(r.reference.real()) << "," << num(r.reference.imag()) << "," << num(r.rel_dev)
         << "," << num(r.reference_error) << "," << quoted(r.status) << "\n";
    }
    *o << "# max_rel_dev=" << num(max_dev) << " median_rel_dev=" << num(median)
       << " bound=" << num(bound) << "\n";
  }
  err << "max relative deviation " << num(max_dev) << ", median " << num(median)
      << ", bound 3 chi_max^4 = " << num(bound) << "\n";
  if (any_failed) return kBoundary;
  if (exceeded) {
    err << "max deviation exceeds 10x the chi^4 bound\n";
    return kBoundExceeded;
  }
  return kOk;
}

// ---- besselprod ------------------------------------------------------------

struct BesselprodSpec {
  std::vector<double> params;
  double rel_tol = 1e-6;
  Format format = Format::text;
};

int cmd_besselprod(const BesselprodSpec& spec, std::ostream& out, std::ostream& err) {
  const auto& p = spec.params;
  if (p.size() == 2) {
    throw UsageError(
        "two Bessel functions have no finite integral: int_0^inf x J0(ax) J0(bx) dx = "
        "delta(a - b) / a is a distribution in a, b; give 3 to 6 parameters");
  }
  if (p.size() < 3 || p.size() > 6) throw UsageError("besselprod takes 3 to 6 parameters");
  for (double v : p) {
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError("parameters must be positive reals");
  }

  double value = 0.0;
  double error = 0.0;
  std::string branch;
  std::string boundary = "none";
  if (p.size() == 3) {
    const besselprod::TripleParams tp{p[0], p[1], p[2]};
    const auto rep = besselprod::f3_classify(tp);
    branch = upper(besselprod::to_string(rep.branch));
    boundary = besselprod::to_string(rep.boundary);
    value = besselprod::f3_eval(tp);
  } else if (p.size() == 4) {
    const besselprod::QuadParams qp{p[0], p[1], p[2], p[3]};
    const auto rep = besselprod::f4_classify(qp);
    branch = upper(besselprod::to_string(rep.branch));
    boundary = besselprod::to_string(rep.boundary);
    value = besselprod::f4_eval(qp);
  } else {
    const double largest = *std::max_element(p.begin(), p.end());
    double rest = -largest;
    for (double v : p) rest += v;
    branch = largest > rest ? "VANISH" : "REDUCTION";
    quad::IntegralResult<double> r;
    if (p.size() == 5) {
      r = besselprod::f5_eval({p[0], p[1], p[2], p[3], p[4]}, spec.rel_tol);
    } else {
      r = besselprod::f6_eval({p[0], p[1], p[2], p[3], p[4], p[5]}, spec.rel_tol);
    }
    value = r.value;
    error = r.error_estimate;
  }

  if (spec.format == Format::json) {
    out << json{{"schema_version", kSchemaVersion},
                {"command", "besselprod"},
                {"params", p},
                {"value", value},
                {"error_estimate", error},
                {"branch", branch},
                {"boundary", boundary}}
               .dump(2)
        << "\n";
  } else if (spec.format == Format::csv) {
    out << "# eikamp-besselprod v" << kSchemaVersion << "\n"
        << "n,value,error_estimate,branch,boundary\n"
        << p.size() << "," << num(value) << "," << num(error) << "," << branch << ","
        << boundary << "\n";
  } else {
    out << "F" << p.size() << "(";
    for (std::size_t i = 0; i < p.size(); ++i) out << (i ? ", " : "") << num(p[i]);
    out << ") = " << num(value) << "\n"
        << "error_estimate = " << num(error) << "\n"
        << "branch = " << branch << "\n";
    if (boundary != "none") out << "boundary = " << boundary << "\n";
  }
  (void)err;
  return kOk;
}

// ---- selftest --------------------------------------------------------------

int cmd_selftest(std::ostream& out) {
  int failures = 0;
  auto check = [&](const std::string& name, double deviation, double limit) {
    const bool ok = deviation <= limit;
    failures += ok ? 0 : 1;
    out << (ok ? "PASS " : "FAIL ") << name << " (deviation " << num(deviation) << ", limit "
        << num(limit) << ")\n";
  };
  const double pi = std::numbers::pi;

  check("F3(3,4,5) = 1/(12 pi)",
        std::fabs(besselprod::f3_eval({3, 4, 5}) * 12.0 * pi - 1.0), 1e-14);
  {
    const std::vector<double> params{2.0, 3.0, 4.0, 4.5};
    const double closed = besselprod::f4_eval({2.0, 3.0, 4.0, 4.5});
    const double ref = oracle::reference_besselproduct(params).value;
    check("F4 closed form vs damped oracle", std::fabs(closed - ref) / ref, 1e-5);
  }
  check("K(0) = pi/2", std::fabs(special::elliptic_k(special::EllipticModulus(0.0)) - pi / 2), 4e-16);

  const double chi0 = 0.3;
  const double g = 4.0 * pi * chi0;
  const auto model = eikonal::BornModel::gaussian({g, 0.0}, 1.0);
  const eikonal::Kinematics kin(1.0, -1.0);
  const eikonal::Complex i{0.0, 1.0};
  eikonal::AmplitudeOptions opts;
  const auto rep = eikonal::compute_amplitude(model, kin, opts);
  const Complex a2_closed = -pi * chi0 * chi0 * std::exp(-0.25);
  const Complex a3_closed = -i * (2.0 * pi * chi0 * chi0 * chi0 / 9.0) * std::exp(-1.0 / 6.0);
  check("gaussian A2 closed form", std::abs(rep.terms.a2 - a2_closed) / std::abs(a2_closed),
        1e-6);
  check("gaussian A3 closed form", std::abs(rep.terms.a3 - a3_closed) / std::abs(a3_closed),
        1e-6);
  const auto series = oracle::gaussian_series_amplitude({g, 0.0}, 1.0, kin);
  const auto direct = oracle::direct_eikonal_amplitude(model, kin);
  check("oscillatory oracle vs gaussian series",
        std::abs(direct.value - series.value) / std::abs(series.value), 1e-6);
  return failures ? kBoundExceeded : kOk;
}

void add_grid_options(CLI::App& cmd, RunSpec& spec) {
  cmd.add_option("--model", spec.model_path, "Born model file")->required();
  cmd.add_option("--s", spec.s, "Squared centre-of-mass energy s (GeV^2)")
      ->capture_default_str();
  cmd.add_option("--t-min", spec.grid.t_min, "Lowest t (GeV^2, negative)")
      ->capture_default_str();
  cmd.add_option("--t-max", spec.grid.t_max, "Highest t (GeV^2, negative)")
      ->capture_default_str();
  cmd.add_option("--points", spec.grid.points, "Number of t values")->capture_default_str();
  cmd.add_option("--spacing", spec.grid.spacing, "linear | log")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Spacing>{{"linear", Spacing::linear}, {"log", Spacing::log}}))
      ->option_text("ENUM [linear]");
  cmd.add_option("--rel-tol", spec.rel_tol, "Relative quadrature tolerance")
      ->capture_default_str();
  cmd.add_option("--abs-tol", spec.abs_tol, "Absolute quadrature tolerance")
      ->capture_default_str();
  cmd.add_option("--format", spec.format, "csv | json")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"csv", Format::csv}, {"json", Format::json}}))
      ->option_text("ENUM [csv]");
  cmd.add_option("--out", spec.out_path, "Output file (default stdout)");
  cmd.add_flag("--override-chi-gate", spec.override_gate,
               "Proceed when 1 <= max|chi| <= 2");
  cmd.add_option("--threads", spec.threads, "Worker threads (0: hardware concurrency)")
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moderately small eikonal amplitudes and Bessel-product integrals", "eikamp"};
  app.require_subcommand(1);

  BesselprodSpec bp;
  auto* besselprod_cmd =
      app.add_subcommand("besselprod", "int_0^inf x J0(a1 x) ... J0(an x) dx for n = 3..6");
  besselprod_cmd->add_option("params", bp.params, "Positive parameters a1 ... an")->required();
  besselprod_cmd->add_option("--rel-tol", bp.rel_tol, "Tolerance for n = 5, 6")
      ->capture_default_str();
  besselprod_cmd->add_option("--format", bp.format, "text | csv | json")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{
          {"text", Format::text}, {"csv", Format::csv}, {"json", Format::json}}))
      ->option_text("ENUM [text]");

  RunSpec table_spec;
  auto* table_cmd = app.add_subcommand("table", "A1, A2, A3, A and dsigma/dt over a t-grid");
  add_grid_options(*table_cmd, table_spec);

  RunSpec compare_spec;
  auto* compare_cmd =
      app.add_subcommand("compare", "Three-term amplitude vs the oscillatory b-space integral");
  add_grid_options(*compare_cmd, compare_spec);

  auto* selftest_cmd = app.add_subcommand("selftest", "Quick numerical self-checks");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (besselprod_cmd->parsed()) return cmd_besselprod(bp, out, err);
    if (table_cmd->parsed()) return cmd_table(table_spec, out, err);
    if (compare_cmd->parsed()) return cmd_compare(compare_spec, out, err);
    if (selftest_cmd->parsed()) return cmd_selftest(out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const RegimeError& e) {
    err << "error: " << e.what() << "\n";
    return kBoundary;
  } catch (const BoundaryError& e) {
    err << "error: " << e.what() << "\n";
    return kBoundary;
  } catch (const ExtrapolationDivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kBoundary;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << " (estimate magnitude " << num(e.value_magnitude())
        << ", error " << num(e.error_estimate()) << ")\n";
    return kBoundary;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
  return kUsage;
}

}  // namespace eikamp::cli
