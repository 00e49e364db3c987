// commutant: command-line front end for the kernel/operator pipelines.

#include <cstdio>
#include <cstdlib>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commutant/error.hpp"
#include "commutant/report.hpp"

using namespace commutant;

namespace {

struct Overrides {
  int basis = 0;
  int quad = 0;
  double tol = 0.0;
};

int run_one(const std::string& command, Scenario s, const Overrides& o, const std::string& outDir, bool toStdout) {
  s.command = command;
  if (o.basis > 0) s.basisSize = o.basis;
  if (o.quad > 0) s.N = o.quad;
  if (o.tol > 0.0) s.tol = o.tol;
  const RunResult r = run_scenario(s);
  if (!r.message.empty()) std::cerr << s.name << ": " << r.message << '\n';
  if (toStdout) std::cout << r.report.dump(2) << '\n';
  try {
    if (!outDir.empty()) write_outputs(r, s, outDir);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  return r.exitCode;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite convolution kernels and their commuting differential operators"};
  app.require_subcommand(1);

  std::vector<std::string> scenarios;
  std::string caseJson, coeffJson, outDir;
  Overrides o;
  int jobs = 1;
  bool list = false;
  if (const char* env = std::getenv("COMMUTANT_OUT")) outDir = env;

  for (const char* name : {"catalog", "verify", "spectrum", "svd", "classify", "normality"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--scenario", scenarios, "scenario JSON file (repeatable)");
    sub->add_option("--case", caseJson, "inline case descriptor as JSON");
    sub->add_option("--out", outDir, "output directory (default $COMMUTANT_OUT)");
    sub->add_option("--basis", o.basis, "Legendre basis size");
    sub->add_option("--quad", o.quad, "quadrature nodes N");
    sub->add_option("--tol", o.tol, "acceptance tolerance");
    sub->add_option("--jobs", jobs, "scenarios run in parallel")->check(CLI::PositiveNumber);
    if (std::string(name) == "catalog") sub->add_flag("--list", list, "list the case variants");
    if (std::string(name) == "classify") sub->add_option("--coeffs", coeffJson, "raw coefficients as JSON");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  std::vector<Scenario> batch;
  try {
    for (const auto& path : scenarios)
      for (auto& one : expand_batch(load_scenario(path))) batch.push_back(std::move(one));
    if (!caseJson.empty() || !coeffJson.empty() || command == "catalog") {
      json j = {{"name", command}, {"command", command}};
      if (!caseJson.empty()) j["case"] = json::parse(caseJson);
      if (!coeffJson.empty()) j["coefficients"] = json::parse(coeffJson);
      if (batch.empty() || command != "catalog") batch.push_back(scenario_from_json(j));
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "malformed JSON: " << e.what() << '\n';
    return 2;
  }
  if (batch.empty()) {
    std::cerr << "nothing to run: give --scenario, --case or --coeffs\n";
    return 2;
  }
  (void)list;

  const bool toStdout = outDir.empty();
  int worst = 0;
  for (size_t start = 0; start < batch.size(); start += static_cast<size_t>(jobs)) {
    std::vector<std::future<int>> running;
    for (size_t i = start; i < std::min(batch.size(), start + jobs); ++i)
      running.push_back(std::async(std::launch::async, run_one, command, batch[i], o, outDir, toStdout && jobs == 1));
    for (auto& f : running) worst = std::max(worst, f.get());
  }
  return worst;
}
