#pragma once

// Command-line front end. Exit codes: 0 success, 1 negative verdict,
// 2 malformed input.

#include "herisson/builders.hpp"
#include "herisson/congruence.hpp"
#include "herisson/io.hpp"
#include "herisson/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace herisson::cli {

inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;
inline constexpr int kMalformed = 2;

namespace detail {

inline std::string fixed(double x) { return io::detail::fmt(x, "%.10f"); }

inline std::vector<double> numbers_after(const std::string& spec, std::size_t count) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "missing parameters in " + spec);
  std::vector<double> out;
  std::stringstream ss(spec.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error(ErrorCode::ParseError, "bad number '" + item + "' in " + spec);
    out.push_back(v);
  }
  if (out.size() != count) throw Error(ErrorCode::ParseError, "wrong parameter count in " + spec);
  return out;
}

}  // namespace detail

/// Builds the fixture named by `spec`: cube, box:a,b,c, tetra:r, bowtie:rho,
/// waisted:k or tiling.
inline Herisson example_from_spec(const std::string& spec) {
  const std::string name = spec.substr(0, spec.find(':'));
  if (spec == "cube") return cube();
  if (spec == "tiling") return space_filling_prism();
  if (name == "box") {
    const auto v = detail::numbers_after(spec, 3);
    return box(v[0], v[1], v[2]);
  }
  if (name == "tetra") return regular_tetrahedron(detail::numbers_after(spec, 1)[0]);
  if (name == "bowtie") return reflected_truncated_tetrahedron(detail::numbers_after(spec, 1)[0]);
  if (name == "waisted") {
    const double k = detail::numbers_after(spec, 1)[0];
    if (k != std::floor(k) || k < 1 || k > 1e6) throw Error(ErrorCode::DomainError, "waist length must be a positive integer");
    return waisted_bitetrahedron(static_cast<int>(k));
  }
  throw Error(ErrorCode::ParseError, "unknown example '" + spec + "'");
}

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotComparable:
    case ErrorCode::NotSameClass:
    case ErrorCode::PreconditionFailed:
      return kNegative;
    default:
      return kMalformed;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Polyhedral herissons: validation, areas, Minkowski solving, congruence."};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Machine-readable JSON on stdout");

  std::string file_a, file_b, output, seed, target, trace, obj, svg, example;
  double tol = SolveOptions{}.tol_area;
  bool allow_non_general = false;
  std::string jac_mode = "analytic";

  auto* validate_cmd = app.add_subcommand("validate", "Check a fan (or herisson) file");
  validate_cmd->add_option("fan", file_a)->required();

  auto* areas_cmd = app.add_subcommand("areas", "Print oriented face areas and the balance residual");
  areas_cmd->add_option("herisson", file_a)->required();

  auto* solve_cmd = app.add_subcommand("solve", "Solve for support numbers with prescribed oriented areas");
  solve_cmd->add_option("fan", file_a)->required();
  solve_cmd->add_option("--seed", seed, "Seed support numbers")->required();
  solve_cmd->add_option("--target", target, "Target oriented areas")->required();
  solve_cmd->add_option("--tol", tol, "Relative area tolerance");
  solve_cmd->add_flag("--allow-non-general", allow_non_general, "Permit equipment outside general position");
  solve_cmd->add_option("--trace", trace, "Write the continuation trace as JSON lines");
  solve_cmd->add_option("--jacobian", jac_mode, "analytic or fd")->check(CLI::IsMember({"analytic", "fd"}));

  auto* congruent_cmd = app.add_subcommand("congruent", "Decide congruence of two parallel herissons");
  congruent_cmd->add_option("first", file_a)->required();
  congruent_cmd->add_option("second", file_b)->required();

  auto* sum_cmd = app.add_subcommand("sum", "Minkowski sum of two parallel herissons");
  sum_cmd->add_option("first", file_a)->required();
  sum_cmd->add_option("second", file_b)->required();
  sum_cmd->add_option("-o,--output", output)->required();

  auto* example_cmd = app.add_subcommand("example", "Write a builder fixture");
  example_cmd->add_option("name", example, "cube | box:a,b,c | tetra:r | bowtie:rho | waisted:k | tiling")->required();
  example_cmd->add_option("-o,--output", output)->required();

  auto* export_cmd = app.add_subcommand("export", "Write OBJ or SVG views");
  export_cmd->add_option("input", file_a)->required();
  export_cmd->add_option("--obj", obj, "OBJ mesh of a herisson");
  export_cmd->add_option("--svg", svg, "Stereographic SVG of a fan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kMalformed;
  }

  try {
    if (validate_cmd->parsed()) {
      const ValidationReport report = validate(io::load_fan(file_a));
      if (json) {
        io::Json j{{"ok", report.ok()}, {"violations", io::Json::array()}};
        for (const auto& v : report.violations) j["violations"].push_back({{"issue", to_string(v.issue)}, {"detail", v.detail}});
        out << j.dump(2) << "\n";
      } else if (report.ok()) {
        out << "ok\n";
      } else {
        for (const auto& v : report.violations) out << to_string(v.issue) << ": " << v.detail << "\n";
      }
      return report.ok() ? kOk : kNegative;
    }

    if (areas_cmd->parsed()) {
      const Herisson H = io::load_herisson(file_a);
      const double residual = balance_residual(H.oriented_areas, H.fan()).norm();
      if (json) {
        out << io::Json{{"oriented_areas", io::detail::values_json(H.oriented_areas.f)},
                        {"signs", H.signs},
                        {"balance_residual", residual}}
                   .dump(2)
            << "\n";
      } else {
        out << "face  sign  area\n";
        for (int j = 0; j < H.face_count(); ++j) {
          char row[96];
          std::snprintf(row, sizeof row, "%4d  %+d    %s\n", j, H.signs[j], detail::fixed(H.oriented_areas[j]).c_str());
          out << row;
        }
        out << "balance residual " << io::detail::fmt(residual, "%.3g") << "\n";
      }
      return kOk;
    }

    if (solve_cmd->parsed()) {
      const Fan fan = io::load_fan(file_a);
      SolveOptions opts;
      opts.tol_area = tol;
      opts.allow_non_general_position = allow_non_general;
      opts.jacobian_mode = jac_mode == "fd" ? JacobianMode::FiniteDifference : JacobianMode::Analytic;
      const SolveOutcome result =
          solve_minkowski(fan, SupportVector(io::load_values(seed)), AreaVector(io::load_values(target)), opts);
      if (!trace.empty()) io::write_text(trace, io::trace_jsonl(result.trace));
      if (json) {
        out << io::Json{{"status", to_string(result.status)},
                        {"t_reached", result.t_reached},
                        {"h", io::detail::values_json(result.h_final.h)},
                        {"steps", result.trace.size() - 1}}
                   .dump(2)
            << "\n";
      } else {
        out << "status " << to_string(result.status) << "\nt reached " << result.t_reached << "\nface  h\n";
        for (int j = 0; j < result.h_final.size(); ++j) {
          char row[64];
          std::snprintf(row, sizeof row, "%4d  %s\n", j, detail::fixed(result.h_final[j]).c_str());
          out << row;
        }
      }
      return result.status == SolveStatus::Converged ? kOk : kNegative;
    }

    if (congruent_cmd->parsed()) {
      const auto v = congruent_and_parallel(io::load_herisson(file_a), io::load_herisson(file_b));
      const bool ok = v.kind == CongruenceVerdict::Kind::Congruent;
      if (json) {
        io::Json j{{"verdict", to_string(v.kind)}};
        if (ok) j["translation"] = io::detail::vec_json(v.translation);
        else j["face"] = v.face;
        if (v.kind == CongruenceVerdict::Kind::Distinct) j["index"] = v.index;
        if (v.kind == CongruenceVerdict::Kind::HypothesisFailure) j["first_inside_second"] = v.first_inside_second;
        out << j.dump(2) << "\n";
      } else if (ok) {
        out << "congruent, translation " << v.translation.x() << " " << v.translation.y() << " " << v.translation.z() << "\n";
      } else if (v.kind == CongruenceVerdict::Kind::HypothesisFailure) {
        out << "face pair " << v.face << ": the " << (v.first_inside_second ? "first" : "second")
            << " face fits inside the other\n";
      } else {
        out << "distinct, witness face pair " << v.face << " with index " << v.index << "\n";
      }
      return ok ? kOk : kNegative;
    }

    if (sum_cmd->parsed()) {
      io::save_herisson(output, minkowski_sum(io::load_herisson(file_a), io::load_herisson(file_b)));
      return kOk;
    }

    if (example_cmd->parsed()) {
      io::save_herisson(output, example_from_spec(example));
      return kOk;
    }

    if (export_cmd->parsed()) {
      if (obj.empty() && svg.empty()) {
        err << "export needs --obj or --svg\n";
        return kMalformed;
      }
      const io::Json j = io::parse(io::read_text(file_a));
      if (!obj.empty()) io::write_text(obj, io::to_obj(io::herisson_from_json(j)));
      if (!svg.empty()) io::write_text(svg, io::to_svg(io::fan_from_json(j)));
      return kOk;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kMalformed;
}

}  // namespace herisson::cli
