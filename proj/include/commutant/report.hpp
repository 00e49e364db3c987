#pragma once

// JSON wire format for the core types, report structs for each pipeline,
// scenario files and the runner shared by the CLI and the tests.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "commutant/catalog.hpp"
#include "commutant/classifier.hpp"
#include "commutant/normality.hpp"
#include "commutant/verifier.hpp"

namespace commutant {

using json = nlohmann::json;

inline constexpr const char* kSchema = "commutant-kernels/1";

json cplx_to_json(Cplx z);
Cplx cplx_from_json(const json& j);  // [re, im] or a bare number
json real_to_json(double x);         // non-finite values become null
double real_from_json(const json& j);

json exppoly_to_json(const ExpPoly& f);
ExpPoly exppoly_from_json(const json& j);
json diffop_to_json(const DiffOp& L);
DiffOp diffop_from_json(const json& j);
json kernel_to_json(const KernelSpec& k);
KernelSpec kernel_from_json(const json& j);
json case_to_json(const PairCase& c);
PairCase case_from_json(const json& j);
json taylor_to_json(const TaylorData& d);
TaylorData taylor_from_json(const json& j);

struct VerifyReport {
  std::string caseName;
  bool validated = false;
  double gridResidualMax = 0.0;
  int gridExcluded = 0;
  std::map<int, double> commutatorNorms;
  std::optional<double> phiSlope;
  std::vector<GridSample> samples;  // CSV only
};

struct SpectrumReport {
  std::string caseName;
  int basisSize = 0;
  bool selfAdjoint = false;
  double hermitianDefect = 0.0;
  std::vector<Cplx> eigenvalues;
  std::vector<double> residuals;
  std::vector<Cplx> kappas;
  std::vector<double> kappaResiduals;
};

struct SvdReport {
  std::string caseName;
  bool regular = false;
  std::vector<Cplx> removable;
  std::vector<double> sigmas;
  std::vector<Cplx> chis;
  std::vector<int> lModes;
  std::vector<double> crossResiduals;
  std::vector<double> kstarkResiduals;
  std::vector<bool> belowFloor;
  double gramResidualU = 0.0, gramResidualV = 0.0;
  std::vector<std::string> warnings;
};

struct NormalitySegmentReport {
  Segment segment;
  std::array<double, 3> selfAdjointResiduals{};
  bool selfAdjoint = false;
  bool normal = false;
  bool normalDirect = false;
  double directResidual = 0.0;
  Cplx rescale = 1.0;
  std::optional<double> gamma;
  std::array<double, 4> pairResiduals{};
  std::vector<NamedResidual> conditions;
};

struct NormalityOutput {
  std::string caseName;
  std::vector<NormalitySegmentReport> segments;
};

json to_json(const VerifyReport& r);
json to_json(const SpectrumReport& r);
json to_json(const SvdReport& r);
json to_json(const ClassificationResult& r);
json to_json(const NormalityOutput& r);
VerifyReport verify_report_from_json(const json& j);
SpectrumReport spectrum_report_from_json(const json& j);
SvdReport svd_report_from_json(const json& j);
ClassificationResult classification_from_json(const json& j);
NormalityOutput normality_output_from_json(const json& j);

std::string csv_of(const VerifyReport& r);
std::string csv_of(const SpectrumReport& r);
std::string csv_of(const SvdReport& r);

struct Scenario {
  std::string name;
  std::string command;  // catalog, verify, spectrum, svd, classify, normality
  std::optional<PairCase> kase;
  std::vector<PairCase> cases;  // batch form; expanded one scenario per case
  Cplx tau = 0.0;
  std::optional<TaylorData> coeffs;
  std::optional<DiffOp> op;
  int basisSize = 96;
  int N = 64;
  std::vector<int> Ns{32, 64, 128};
  int modes = 5;
  std::optional<double> tol;
  std::vector<std::string> outputs{"json", "csv"};
};

Scenario scenario_from_json(const json& j);
Scenario load_scenario(const std::string& path);
// A batch scenario becomes name_0, name_1, ... with one case each.
std::vector<Scenario> expand_batch(const Scenario& s);

struct RunResult {
  int exitCode = 0;
  json report;
  std::string csv;
  std::string message;
};

// 0 success, 2 invalid scenario or parameters, 3 numerical failure or a
// result outside the scenario tolerance.
RunResult run_scenario(const Scenario& s);
void write_outputs(const RunResult& r, const Scenario& s, const std::string& dir);

}  // namespace commutant
