#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <entloss.h>

namespace {

// Exit codes: 0 ok, 1 bound failure, 2 config/parse error, 3 internal
// numerical inconsistency.
int status_exit(entloss_status st) {
  std::cerr << "error (" << entloss_status_name(st)
            << "): " << entloss_last_error() << "\n";
  return st == ENTLOSS_INTERNAL_INCONSISTENCY ? 3 : 2;
}

int write_output(const std::string& path, const char* text) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error (io_error): cannot open " << path << "\n";
    return 2;
  }
  out << text;
  out.flush();
  if (!out) {
    std::cerr << "error (io_error): cannot write " << path << "\n";
    return 2;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-loss and recovery bound toolkit"};
  app.require_subcommand(1);

  CLI::App* verify = app.add_subcommand(
      "verify", "Run the inequality verification suites");
  std::uint64_t seed = 42;
  std::string dims;
  int instances = 0;
  std::string out_path;
  std::string format = "json";
  bool quick = false;
  std::vector<std::string> tolerance_overrides;
  verify->add_option("--seed", seed, "Master RNG seed (default 42)");
  verify->add_option("--dims", dims,
                     "Dimension pairs, e.g. 2x2,2x3,3x3 (default all three)");
  verify->add_option(
      "--instances", instances,
      "Random instances per dimension pair (0 keeps per-family defaults)");
  verify->add_option("--out", out_path, "Output file (default stdout)");
  verify->add_option("--format", format, "Report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  verify->add_flag("--quick", quick,
                   "Cap restarts at 8 and instances at 50 for fast runs");
  verify->add_option(
      "--tolerance", tolerance_overrides,
      "Override a family tolerance as family=value (repeatable)");

  CLI::App* fig2 = app.add_subcommand(
      "fig2", "Emit the formation floor curve as CSV");
  int grid = 1001;
  std::string fig2_out;
  fig2->add_option("--grid", grid, "Uniform grid size, at least 2");
  fig2->add_option("--out", fig2_out, "Output file (default stdout)");

  CLI::App* report = app.add_subcommand(
      "report", "Single-channel report with all bound records");
  std::string channel_spec;
  std::string state_spec;
  std::string report_out;
  std::uint64_t report_seed = 42;
  bool report_quick = false;
  report
      ->add_option("--channel", channel_spec,
                   "Channel spec: @file.json, name, or name:k=v,k=v")
      ->required();
  report->add_option("--state", state_spec,
                     "Input state spec (default maximally mixed)");
  report->add_option("--out", report_out, "Output file (default stdout)");
  report->add_option("--seed", report_seed, "RNG seed (default 42)");
  report->add_flag("--quick", report_quick, "Reduced optimizer budgets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (verify->parsed()) {
    nlohmann::ordered_json cfg;
    cfg["seed"] = seed;
    if (verify->count("--dims") > 0) {
      cfg["dims"] = dims;
    }
    if (verify->count("--instances") > 0) {
      cfg["instances_per_dim"] = instances;
    }
    cfg["quick"] = quick;
    if (!tolerance_overrides.empty()) {
      nlohmann::ordered_json tols = nlohmann::ordered_json::object();
      for (const std::string& item : tolerance_overrides) {
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
          std::cerr << "error (config_error): --tolerance expects "
                       "family=value, got: "
                    << item << "\n";
          return 2;
        }
        char* end = nullptr;
        std::string value = item.substr(eq + 1);
        double v = std::strtod(value.c_str(), &end);
        if (value.empty() || end != value.c_str() + value.size()) {
          std::cerr << "error (config_error): --tolerance value is not a "
                       "number: "
                    << item << "\n";
          return 2;
        }
        tols[item.substr(0, eq)] = v;
      }
      cfg["tolerances"] = tols;
    }

    char* text = nullptr;
    int code = 0;
    entloss_status st = entloss_verify_run(
        cfg.dump().c_str(), format == "csv" ? 1 : 0, &text, &code);
    if (st != ENTLOSS_OK) {
      return status_exit(st);
    }
    int wr = write_output(out_path, text);
    entloss_string_free(text);
    return wr != 0 ? wr : code;
  }

  if (fig2->parsed()) {
    char* text = nullptr;
    entloss_status st = entloss_fig2_csv(grid, &text);
    if (st != ENTLOSS_OK) {
      return status_exit(st);
    }
    int wr = write_output(fig2_out, text);
    entloss_string_free(text);
    return wr;
  }

  char* text = nullptr;
  entloss_status st = entloss_report_run(
      channel_spec.c_str(), state_spec.empty() ? nullptr : state_spec.c_str(),
      report_seed, report_quick ? 1 : 0, &text);
  if (st != ENTLOSS_OK) {
    return status_exit(st);
  }
  int wr = write_output(report_out, text);
  entloss_string_free(text);
  return wr;
}
