#pragma once

// Batch interface: build, calibrate, verify, scan. Exit codes: 0 pass,
// 1 verification failure or profile hash mismatch, 2 usage or configuration.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fnls/constructions.hpp"
#include "fnls/error.hpp"
#include "fnls/io.hpp"
#include "fnls/metrics.hpp"
#include "fnls/surface.hpp"
#include "fnls/verify.hpp"

namespace fnls::cli {

using nlohmann::json;

inline constexpr int kPass = 0;
inline constexpr int kFail = 1;
inline constexpr int kUsage = 2;

inline constexpr const char* kReportVersion = "fns-report-1";

struct FamilyFlags {
  std::string family = "flute";
  std::string law = "exp-linear";
  double rate = 1.0;
  double value = 1.0;
  double slope = 1.0;
  double twist_fraction = 0.0;
  std::string input;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family, "flute | torus-chain | custom-table")
        ->check(CLI::IsMember({"flute", "torus-chain", "custom-table"}));
    cmd->add_option("--law", law, "exp-linear | exp-double | constant | linear")
        ->check(CLI::IsMember({"exp-linear", "exp-double", "constant", "linear"}));
    cmd->add_option("--rate", rate, "exp-linear rate");
    cmd->add_option("--value", value, "constant length");
    cmd->add_option("--slope", slope, "linear slope");
    cmd->add_option("--twist-fraction", twist_fraction, "twist as a fraction of the length");
    cmd->add_option("--input", input, "fns-1 surface file for custom-table");
  }

  SurfaceFamily make() const {
    SurfaceFamily f;
    if (family == "custom-table") {
      if (input.empty()) fail(ErrorKind::Configuration, "custom-table needs --input");
      return io::custom_table_family(io::surface_from_json(io::read_json_file(input)));
    }
    f.kind = family == "flute" ? FamilyKind::Flute : FamilyKind::TorusChain;
    if (law == "exp-linear") f.length_law = LengthLaw::exp_linear(rate);
    if (law == "exp-double") f.length_law = LengthLaw::exp_double();
    if (law == "constant") f.length_law = LengthLaw::constant(value);
    if (law == "linear") f.length_law = LengthLaw::linear(slope);
    f.twist_law.fraction = twist_fraction;
    return f;
  }
};

/// "a:b" (step 1), "a:b:step" or "x,y,z".
inline std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.empty()) return out;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) fail(ErrorKind::Configuration, "bad grid entry '" + s + "'");
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) fail(ErrorKind::Configuration, "grid range must be a:b or a:b:step");
    const double a = number(parts[0]);
    const double b = number(parts[1]);
    const double step = parts.size() == 3 ? number(parts[2]) : 1.0;
    if (!(step > 0.0)) fail(ErrorKind::Configuration, "grid step must be positive");
    for (long k = 0;; ++k) {
      const double v = a + static_cast<double>(k) * step;
      if (v > b + 1e-9 * std::max(1.0, std::fabs(b))) break;
      out.push_back(v);
    }
    return out;
  }
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  return out;
}

inline std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct ProfileChoice {
  ConstantsProfile profile;
  std::string hash;
};

/// Default profile or the one stored at `path`; a stale hash is a failure.
inline std::optional<ProfileChoice> load_profile(const std::string& path, std::ostream& err) {
  if (path.empty()) return ProfileChoice{ConstantsProfile{}, io::profile_hash(ConstantsProfile{})};
  const io::LoadedProfile lp = io::profile_from_json(io::read_json_file(path));
  if (!lp.hash_ok()) {
    err << "profile hash mismatch in '" << path << "': stored " << lp.stored_hash << ", computed " << lp.computed_hash
        << "\n";
    return std::nullopt;
  }
  return ProfileChoice{lp.profile, lp.computed_hash};
}

inline json verify_item(const verify::CriterionResult& r, bool timing) {
  json assertions = json::array();
  for (const auto& a : r.assertions) {
    json values = json::object();
    for (const auto& m : a.values) values[m.name] = m.value;
    assertions.push_back({{"name", a.name}, {"pass", a.pass}, {"values", values}});
  }
  json item = {{"criterion", r.id}, {"title", r.title}, {"pass", r.pass()}, {"assertions", assertions}};
  if (timing) item["wall_time_s"] = r.seconds;
  return item;
}

inline std::string join_args(const std::vector<std::string>& args) {
  std::string s = "fnls";
  for (const auto& a : args) s += " " + a;
  return s;
}

/// Runs one command line (arguments without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fenchel-Nielsen coordinates, length-spectrum and quasiconformal bounds", "fnls"};
  app.require_subcommand(1);

  FamilyFlags build_fam;
  int build_depth = 0;
  std::string build_out;
  auto* build = app.add_subcommand("build", "write a truncated family member as an fns-1 surface file");
  build_fam.attach(build);
  build->add_option("--depth", build_depth, "truncation depth")->required()->check(CLI::PositiveNumber);
  build->add_option("--output", build_out, "output path (stdout when omitted)");

  FamilyFlags cal_fam;
  std::string cal_out;
  auto* calibrate = app.add_subcommand("calibrate", "measure D, C_cr and rho_floor on the standard grid");
  cal_fam.attach(calibrate);
  calibrate->add_option("--output", cal_out, "profile path (stdout when omitted)");

  std::string suite;
  std::string verify_profile;
  std::string report_path;
  bool verify_timing = false;
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("--suite", suite, "special-functions | holonomy | bounds-ordering | "
                                           "counterexample-trends | membership | path | all")
      ->required();
  verify_cmd->add_option("--profile", verify_profile, "constants profile");
  verify_cmd->add_option("--report", report_path, "JSON report path");
  verify_cmd->add_flag("--timing", verify_timing, "include wall time in the report");

  FamilyFlags scan_fam;
  std::string quantity;
  std::string grid_spec;
  std::string scan_out;
  std::string scan_profile;
  std::string tau_law = "linear";
  int scan_n = 10;
  long long twist_depth = 1;
  auto* scan = app.add_subcommand("scan", "tabulate a bound or estimate over a grid as CSV");
  scan_fam.attach(scan);
  scan->add_option("--quantity", quantity, "dls-upper | dls-lower | dqc-lower | dls-estimate | membership-ratio")
      ->required()
      ->check(CLI::IsMember({"dls-upper", "dls-lower", "dqc-lower", "dls-estimate", "membership-ratio"}));
  scan->add_option("--grid", grid_spec, "a:b[:step] or comma list; n for dls-upper, depth for "
                                        "membership-ratio, twist otherwise")
      ->required();
  scan->add_option("--n", scan_n, "twisted curve C_n (depth n+1)")->check(CLI::PositiveNumber);
  scan->add_option("--twist-depth", twist_depth, "twisted duals |k| <= K for dls-estimate")->check(CLI::NonNegativeNumber);
  scan->add_option("--tau-law", tau_law, "membership-ratio twist law: linear | exp")
      ->check(CLI::IsMember({"linear", "exp"}));
  scan->add_option("--profile", scan_profile, "constants profile");
  scan->add_option("--output", scan_out, "CSV path (stdout when omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  auto emit = [&](const std::string& path, const std::string& text) {
    if (path.empty()) {
      out << text;
    } else {
      io::write_text_file(path, text);
    }
  };

  try {
    if (*build) {
      const Surface s = build_family(build_fam.make(), build_depth);
      emit(build_out, io::dump(io::to_json(s)));
      return kPass;
    }

    if (*calibrate) {
      const ConstantsProfile cp = calibrate_constants(cal_fam.make(), CalibrationGrid::standard());
      emit(cal_out, io::dump(io::to_json(cp)));
      return kPass;
    }

    if (*verify_cmd) {
      const std::vector<int> ids = verify::suite_criteria(suite);
      const auto profile = load_profile(verify_profile, err);
      if (!profile) return kFail;
      const auto start = std::chrono::steady_clock::now();
      json items = json::array();
      bool all = true;
      for (int id : ids) {
        const verify::CriterionResult r = verify::run_criterion(id, profile->profile);
        all = all && r.pass();
        items.push_back(verify_item(r, verify_timing));
        out << (r.pass() ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.title << "\n";
      }
      json report = {{"version", kReportVersion},
                     {"command", join_args(args)},
                     {"profile_hash", profile->hash},
                     {"items", items},
                     {"pass", all}};
      if (verify_timing)
        report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (!report_path.empty()) io::write_text_file(report_path, io::dump(report));
      return all ? kPass : kFail;
    }

    if (*scan) {
      const std::vector<double> grid = parse_grid(grid_spec);
      if (grid.empty()) {
        err << "usage error: empty grid\n";
        return kUsage;
      }
      const auto profile = load_profile(scan_profile, err);
      if (!profile) return kFail;
      const ConstantsProfile& cp = profile->profile;
      const SurfaceFamily fam = scan_fam.make();
      std::string csv;
      auto row = [&](std::initializer_list<std::string> cells) {
        bool first = true;
        for (const auto& c : cells) {
          if (!first) csv += ",";
          csv += c;
          first = false;
        }
        csv += "\n";
      };
      auto as_index = [](double v) {
        if (!(v >= 1.0) || v != std::floor(v)) fail(ErrorKind::Configuration, "grid entries must be positive integers here");
        return static_cast<std::size_t>(v);
      };

      if (quantity == "dls-upper") {
        row({"n", "twist", "dls_upper"});
        for (double v : grid) {
          const std::size_t n = as_index(v);
          row({std::to_string(n), csv_number(loglog_twist(fam.length_law, n)),
               csv_number(diverging_upper_at_law(fam.length_law, n, cp.thresholds))});
        }
      } else if (quantity == "membership-ratio") {
        row({"depth", "max_twist_ratio", "verdict"});
        for (double v : grid) {
          const int depth = static_cast<int>(as_index(v));
          std::optional<MembershipResult> m;
          if (tau_law == "linear") {
            const CumulativeReport c = cumulative_point(fam, SequenceSpec::nondense(1.0), depth, cp);
            m = ls_membership(MarkedPair(c.base.graph, c.base.point, c.point), cp.membership_n, cp,
                              proportional_growth(fam.length_law, 1.0));
          } else {
            m = ls_membership(exponential_twist_pair(fam, depth), cp.membership_n, cp, exponential_growth(fam.length_law));
          }
          row({std::to_string(depth), csv_number(m->max_twist_ratio), to_string(m->verdict)});
        }
      } else {
        const Surface s = build_family(fam, scan_n + 1);
        const CurveIndex i = fam.kind == FamilyKind::TorusChain ? static_cast<CurveIndex>(3 * scan_n)
                                                                : static_cast<CurveIndex>(scan_n);
        const std::size_t count = s.graph.curve_count();
        if (quantity == "dls-lower") {
          row({"t", "exact", "dls_lower"});
          for (double t : grid)
            row({csv_number(t), csv_number(twist_length_ratio(s.graph, s.point, i, t)),
                 csv_number(dls_twist_lower(s.graph, s.point, i, t, cp).value)});
        } else if (quantity == "dqc-lower") {
          const double rho = min_sin_angle(Holonomy(s.graph, s.point), i);
          std::vector<double> rhos(count, 1.0);
          rhos[i - 1] = rho;
          row({"t", "rho", "dqc_lower"});
          for (double t : grid)
            row({csv_number(t), csv_number(rho),
                 csv_number(dqc_lower_multitwist(TwistVector::single(count, i, t), rhos, cp).value)});
        } else {
          row({"t", "dls_estimate"});
          for (double t : grid) {
            const MarkedPair p(s.graph, s.point, apply_twist(s.graph, s.point, TwistVector::single(count, i, t)));
            row({csv_number(t), csv_number(dls_estimate(p, twist_depth, s.graph.depth(), cp).value)});
          }
        }
      }
      emit(scan_out, csv);
      return kPass;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace fnls::cli
