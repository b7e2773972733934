// Command-line front end; talks to the library exclusively through the C API.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "heavytail.h"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(1);
  }
  out << content;
}

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  long long seed = -1;
};

json load_config(const GlobalOpts& g) {
  json cfg = json::object();
  if (!g.config_path.empty()) {
    try {
      cfg = json::parse(read_file(g.config_path));
    } catch (const json::exception& e) {
      std::cerr << "error: bad config JSON: " << e.what() << "\n";
      std::exit(2);
    }
  }
  if (g.seed >= 0) cfg["seed"] = static_cast<uint64_t>(g.seed);
  return cfg;
}

int run_command(const char* name, const json& cfg, const GlobalOpts& g) {
  char* resp = ht_cmd(name, cfg.dump().c_str());
  if (!resp) {
    std::cerr << "error: " << ht_last_error() << "\n";
    return ht_last_status() == HT_EINVAL ? 2 : 1;
  }
  json doc = json::parse(resp);
  ht_string_free(resp);
  for (auto& [fname, content] : doc["outputs"].items())
    write_file(g.out_dir + "/" + fname, content.get<std::string>());
  if (g.format == "json" || !doc["summary"].empty())
    std::cout << doc["summary"].dump(2) << "\n";
  return doc.value("exit_code", 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uniform tail bounds for normed sums of heavy-tailed variables"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOpts g;
  app.add_option("--config", g.config_path, "JSON config file")->expected(1);
  app.add_option("--seed", g.seed, "override the RNG seed");
  app.add_option("--out", g.out_dir, "output directory for CSV/JSON files");
  app.add_option("--format", g.format, "summary format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // model describe
  auto* model_cmd = app.add_subcommand("model", "model inspection");
  auto* describe = model_cmd->add_subcommand("describe", "normalize and classify a model");
  bool emit_nu = false;
  describe->add_flag("--emit-nu", emit_nu, "also export nu and tail-transform curves");

  // psi
  auto* psi_cmd = app.add_subcommand("psi", "export psi / psi-bar curves");
  bool psi_bar = false;
  double t_min = 1e-6, t_max = 10.0;
  int t_points = 200;
  psi_cmd->add_flag("--bar", psi_bar, "also export the envelope");
  psi_cmd->add_option("--tmin", t_min);
  psi_cmd->add_option("--tmax", t_max);
  psi_cmd->add_option("--points", t_points);

  // norming
  auto* norming_cmd = app.add_subcommand("norming", "norming-sequence table");

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "evaluate a bound curve");
  std::string theorem = "thm21";
  std::string model_path;
  double x_min = 10.0, x_max = 1e6;
  int points = 100;
  bound_cmd->add_option("--theorem", theorem,
                        "thm21|thm22|cor21|heavy|intermediate|moderate|martingale|"
                        "interpolation|tnu|weighted|superheavy");
  bound_cmd->add_option("--model", model_path, "model JSON file");
  bound_cmd->add_option("--xmin", x_min);
  bound_cmd->add_option("--xmax", x_max);
  bound_cmd->add_option("--points", points);

  auto* simulate_cmd = app.add_subcommand("simulate", "normed-sum Monte Carlo");
  auto* verify_cmd = app.add_subcommand("verify", "simulate and check a bound");
  verify_cmd->add_option("--theorem", theorem);
  auto* ci_cmd = app.add_subcommand("ci", "confidence interval / coverage experiment");
  auto* fields_cmd = app.add_subcommand("fields", "covering numbers and entropy integrals");
  std::string points_file, samples_file;
  fields_cmd->add_option("--points-file", points_file, "CSV: index,coord1[,coord2...]");
  fields_cmd->add_option("--samples-file", samples_file, "CSV: one replicate per row");
  auto* report_cmd = app.add_subcommand("report", "bundled describe/verify/ci run");

  CLI11_PARSE(app, argc, argv);

  json cfg = load_config(g);
  try {
    if (describe->parsed() || model_cmd->parsed()) {
      if (emit_nu) cfg["emit_nu"] = true;
      return run_command("model-describe", cfg, g);
    }
    if (psi_cmd->parsed()) {
      if (psi_bar) cfg["bar"] = true;
      if (!cfg.contains("t_grid"))
        cfg["t_grid"] = {{"min", t_min}, {"max", t_max}, {"points", t_points}};
      return run_command("psi", cfg, g);
    }
    if (norming_cmd->parsed()) return run_command("norming", cfg, g);
    if (bound_cmd->parsed()) {
      cfg["theorem"] = theorem;
      if (!model_path.empty()) cfg["model"] = json::parse(read_file(model_path));
      cfg["x_min"] = x_min;
      cfg["x_max"] = x_max;
      cfg["points"] = points;
      if (!cfg.contains("x_grid"))
        cfg["x_grid"] = {{"min", x_min}, {"max", x_max}, {"points", points}};
      return run_command("bound", cfg, g);
    }
    if (simulate_cmd->parsed()) return run_command("simulate", cfg, g);
    if (verify_cmd->parsed()) {
      if (verify_cmd->count("--theorem") || !cfg.contains("theorem"))
        cfg["theorem"] = theorem;
      return run_command("verify", cfg, g);
    }
    if (ci_cmd->parsed()) return run_command("ci", cfg, g);
    if (fields_cmd->parsed()) {
      if (!points_file.empty()) {
        // CSV rows: index,coord...
        std::ifstream in(points_file);
        if (!in) {
          std::cerr << "error: cannot read " << points_file << "\n";
          return 2;
        }
        json pts = json::array();
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          if (first) {
            first = false;
            if (line.find_first_not_of("0123456789.,-+eE \t") != std::string::npos)
              continue;  // header row
          }
          json row = json::array();
          std::stringstream ss(line);
          std::string cell;
          bool skip_index = true;
          while (std::getline(ss, cell, ',')) {
            if (skip_index) {
              skip_index = false;
              continue;
            }
            row.push_back(std::stod(cell));
          }
          pts.push_back(row);
        }
        cfg["points"] = pts;
      }
      if (!samples_file.empty()) {
        std::ifstream in(samples_file);
        if (!in) {
          std::cerr << "error: cannot read " << samples_file << "\n";
          return 2;
        }
        json rows = json::array();
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          if (line.find_first_not_of("0123456789.,-+eE \t") != std::string::npos)
            continue;
          json row = json::array();
          std::stringstream ss(line);
          std::string cell;
          while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
          rows.push_back(row);
        }
        cfg["samples"] = rows;
      }
      return run_command("fields", cfg, g);
    }
    if (report_cmd->parsed()) return run_command("report", cfg, g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
