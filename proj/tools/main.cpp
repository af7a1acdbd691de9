// Command-line driver over the case registry.
// Exit codes: 0 all pass (flagged included), 1 any fail, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ibd/registry.hpp"

namespace {

using namespace ibd;

double parse_double(const std::string& s, const std::string& what) {
  size_t idx = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &idx);
  } catch (const std::exception&) {
    throw RegistryError(what + ": not a number: " + s);
  }
  if (idx != s.size()) throw RegistryError(what + ": not a number: " + s);
  return v;
}

void apply_param_arg(RunOptions& opts, const std::string& arg) {
  size_t eq = arg.find('=');
  if (eq == std::string::npos || eq == 0)
    throw RegistryError("--param expects k=v, got: " + arg);
  opts.params[arg.substr(0, eq)] = parse_double(arg.substr(eq + 1), "--param " + arg);
}

int emit(const std::vector<CaseRecord>& records, const std::string& format) {
  if (format == "csv")
    std::cout << to_csv(records);
  else if (format == "json")
    std::cout << to_json(records);
  else
    std::cout << to_markdown(records);
  return any_failed(records) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"integration-by-differentiation case runner"};
  app.require_subcommand(1);

  std::string format = "md";
  double tol = -1.0;
  uint64_t seed = 20240817;
  bool midpoint = false;
  std::string config_path;
  std::vector<std::string> param_args;
  std::string filter = "*";
  std::string case_id;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--tol", tol, "tolerance override (case defaults otherwise)");
    cmd->add_option("--seed", seed, "Monte Carlo seed");
    cmd->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"md", "csv", "json"}));
    cmd->add_option("--param", param_args, "case parameter override k=v (repeatable)");
    cmd->add_flag("--heaviside-midpoint", midpoint, "use the H(0) = 1/2 convention");
    cmd->add_option("--config", config_path, "flat key=value config file");
  };

  app.add_subcommand("list", "case ids with one-line descriptions and anchors");
  CLI::App* run_cmd = app.add_subcommand("run", "run a single case");
  run_cmd->add_option("case", case_id, "case id")->required();
  add_common(run_cmd);
  CLI::App* verify_cmd = app.add_subcommand("verify-all", "run every matching case");
  verify_cmd->add_option("--filter", filter, "glob over case ids");
  add_common(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("list")) {
      for (const CaseInfo& info : case_catalog())
        std::printf("%-24s %s  [%s]\n", info.id.c_str(), info.description.c_str(),
                    info.anchor.c_str());
      return 0;
    }

    CLI::App* active = app.got_subcommand("run") ? run_cmd : verify_cmd;
    RunOptions opts;

    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw RegistryError("cannot open config file: " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      for (const auto& [key, val] : parse_config(ss.str())) {
        // command-line flags win over file values
        if (key == "tol") {
          if (!active->count("--tol")) tol = parse_double(val, "config tol");
        } else if (key == "seed") {
          if (!active->count("--seed")) {
            try {
              size_t idx = 0;
              seed = std::stoull(val, &idx);
              if (idx != val.size()) throw std::invalid_argument(val);
            } catch (const std::exception&) {
              throw RegistryError("config seed: not a nonnegative integer: " + val);
            }
          }
        } else if (key == "format") {
          if (val != "md" && val != "csv" && val != "json")
            throw RegistryError("config format must be md, csv or json");
          if (!active->count("--format")) format = val;
        } else if (key == "filter") {
          if (!active->count("--filter")) filter = val;
        } else if (key == "heaviside-midpoint") {
          if (!active->count("--heaviside-midpoint")) midpoint = (val != "0");
        } else {
          opts.params[key] = parse_double(val, "config " + key);
        }
      }
    }

    for (const std::string& arg : param_args) apply_param_arg(opts, arg);
    opts.tol = tol;
    opts.seed = seed;
    opts.heaviside_midpoint = midpoint;

    std::vector<CaseRecord> records;
    if (app.got_subcommand("run"))
      records.push_back(run_case(case_id, opts));
    else
      records = verify_all(filter, opts);
    return emit(records, format);
  } catch (const RegistryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
