#include "commutant/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "commutant/error.hpp"
#include "commutant/spectral.hpp"
#include "commutant/verifier.hpp"

namespace commutant {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json cplx_list(const std::vector<Cplx>& v) {
  json out = json::array();
  for (Cplx z : v) out.push_back(cplx_to_json(z));
  return out;
}

std::vector<Cplx> cplx_list_from(const json& j) {
  std::vector<Cplx> out;
  for (const auto& e : j) out.push_back(cplx_from_json(e));
  return out;
}

json real_list(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(real_to_json(x));
  return out;
}

std::vector<double> real_list_from(const json& j) {
  std::vector<double> out;
  for (const auto& e : j) out.push_back(real_from_json(e));
  return out;
}

json segment_to_json(const Segment& s) { return json::array({cplx_to_json(s.a), cplx_to_json(s.b)}); }
Segment segment_from_json(const json& j) { return {cplx_from_json(j.at(0)), cplx_from_json(j.at(1))}; }

std::vector<Cplx> cvec(const json& j, const char* key) { return cplx_list_from(j.at(key)); }
Cplx cget(const json& j, const char* key, Cplx dflt = 0.0) {
  return j.contains(key) ? cplx_from_json(j.at(key)) : dflt;
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParameterDomain:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ConventionMismatch:
    case ErrorCode::IoFailure:
      return 2;
    default:
      return 3;
  }
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace

json cplx_to_json(Cplx z) { return json::array({real_to_json(z.real()), real_to_json(z.imag())}); }

Cplx cplx_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidArgument, "complex value must be [re, im]");
  return {real_from_json(j[0]), real_from_json(j[1])};
}

json real_to_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double real_from_json(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

json exppoly_to_json(const ExpPoly& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) terms.push_back({{"exp", cplx_to_json(t.exponent)}, {"poly", cplx_list(t.poly)}});
  return {{"terms", terms}};
}

ExpPoly exppoly_from_json(const json& j) {
  if (j.is_number() || j.is_array()) return ExpPoly::constant(cplx_from_json(j));
  std::vector<ExpTerm> terms;
  for (const auto& t : j.at("terms")) terms.push_back({cplx_from_json(t.at("exp")), cplx_list_from(t.at("poly"))});
  return ExpPoly(std::move(terms));
}

json diffop_to_json(const DiffOp& L) {
  return {{"a", exppoly_to_json(L.a)},
          {"b", exppoly_to_json(L.b)},
          {"c", exppoly_to_json(L.c)},
          {"segment", segment_to_json(L.segment)}};
}

DiffOp diffop_from_json(const json& j) {
  DiffOp L;
  L.a = exppoly_from_json(j.at("a"));
  L.b = exppoly_from_json(j.at("b"));
  L.c = exppoly_from_json(j.at("c"));
  if (j.contains("segment")) L.segment = segment_from_json(j.at("segment"));
  return L;
}

json kernel_to_json(const KernelSpec& k) {
  static const char* kinds[] = {"one", "z", "sinh_half"};
  return {{"numerator", exppoly_to_json(k.numerator)},
          {"denominator", {{"kind", kinds[static_cast<int>(k.denom.kind)]}, {"lambda", cplx_to_json(k.denom.lambda)}}},
          {"tau", cplx_to_json(k.tau)}};
}

KernelSpec kernel_from_json(const json& j) {
  KernelSpec k;
  k.numerator = exppoly_from_json(j.at("numerator"));
  const std::string kind = j.at("denominator").at("kind");
  if (kind == "one") k.denom = Denominator::one();
  else if (kind == "z") k.denom = Denominator::z();
  else if (kind == "sinh_half") k.denom = Denominator::sinh_half(cplx_from_json(j.at("denominator").at("lambda")));
  else throw Error(ErrorCode::InvalidArgument, "unknown denominator kind " + kind);
  k.tau = cget(j, "tau");
  return k;
}

json case_to_json(const PairCase& c) {
  json j;
  j["variant"] = case_name(c);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MainCase>) {
          j["lambda"] = cplx_to_json(v.lambda);
          j["mu"] = cplx_to_json(v.mu);
          j["alpha1"] = cplx_to_json(v.alpha1);
          j["alpha2"] = cplx_to_json(v.alpha2);
        } else if constexpr (std::is_same_v<T, Special1Case>) {
          j["m"] = v.m;
          j["alpha"] = cplx_to_json(v.alpha);
          j["beta"] = cplx_to_json(v.beta);
        } else if constexpr (std::is_same_v<T, Special2Case>) {
          j["lambda"] = cplx_to_json(v.lambda);
          j["alpha"] = cplx_to_json(v.alpha);
          j["beta"] = cplx_to_json(v.beta);
        } else if constexpr (std::is_same_v<T, Special3Case>) {
          j["beta"] = cplx_to_json(v.beta);
          j["p"] = cplx_list(v.p);
        } else if constexpr (std::is_same_v<T, Special4Case>) {
          j["p"] = cplx_list(v.p);
          j["beta"] = cplx_to_json(v.beta);
        } else if constexpr (std::is_same_v<T, C2Item1Case>) {
          j["lambda"] = cplx_to_json(v.lambda);
          j["mu"] = cplx_to_json(v.mu);
          j["alpha1"] = cplx_to_json(v.alpha1);
          j["alpha2"] = cplx_to_json(v.alpha2);
          j["n"] = v.n;
        } else if constexpr (std::is_same_v<T, C2Item2Case>) {
          j["lambda"] = cplx_to_json(v.lambda);
          j["alpha"] = cplx_to_json(v.alpha);
          j["beta"] = cplx_to_json(v.beta);
          j["n"] = v.n;
        } else if constexpr (std::is_same_v<T, C2Item3Case>) {
          j["beta"] = cplx_to_json(v.beta);
          j["b"] = v.b;
        } else {
          j["beta"] = cplx_to_json(v.beta);
          j["a"] = v.a;
          j["b"] = v.b;
        }
      },
      c);
  return j;
}

PairCase case_from_json(const json& j) {
  const std::string v = j.at("variant");
  if (v == "Main") return MainCase{cget(j, "lambda"), cget(j, "mu"), cget(j, "alpha1"), cget(j, "alpha2")};
  if (v == "Special1") return Special1Case{j.value("m", 0L), cget(j, "alpha"), cget(j, "beta")};
  if (v == "Special2") return Special2Case{cget(j, "lambda"), cget(j, "alpha"), cget(j, "beta")};
  if (v == "Special3") return Special3Case{cget(j, "beta"), cvec(j, "p")};
  if (v == "Special4") return Special4Case{cvec(j, "p"), cget(j, "beta")};
  if (v == "C2Item1")
    return C2Item1Case{cget(j, "lambda"), cget(j, "mu"), cget(j, "alpha1"), cget(j, "alpha2"), j.value("n", 0L)};
  if (v == "C2Item2") return C2Item2Case{cget(j, "lambda"), cget(j, "alpha"), cget(j, "beta"), j.value("n", 0L)};
  if (v == "C2Item3") return C2Item3Case{cget(j, "beta"), j.value("b", 1.0)};
  if (v == "C2Item4") return C2Item4Case{cget(j, "beta"), j.value("a", 0.0), j.value("b", 1.0)};
  throw Error(ErrorCode::InvalidArgument, "unknown case variant " + v);
}

json taylor_to_json(const TaylorData& d) {
  return {{"pole", cplx_to_json(d.poleCoeff)},
          {"coeffs", cplx_list(d.coeffs)},
          {"convention", d.convention == Convention::FactorialNormalized ? "factorial" : "plain"}};
}

TaylorData taylor_from_json(const json& j) {
  TaylorData d;
  d.poleCoeff = cget(j, "pole");
  d.coeffs = cvec(j, "coeffs");
  const std::string conv = j.value("convention", "factorial");
  if (conv == "factorial") d.convention = Convention::FactorialNormalized;
  else if (conv == "plain") d.convention = Convention::PlainPowers;
  else throw Error(ErrorCode::InvalidArgument, "convention must be factorial or plain");
  return d;
}

json to_json(const VerifyReport& r) {
  json norms = json::object();
  for (const auto& [n, v] : r.commutatorNorms) norms[std::to_string(n)] = real_to_json(v);
  return {{"schema", kSchema},
          {"case", r.caseName},
          {"validated", r.validated},
          {"grid_residual_max", real_to_json(r.gridResidualMax)},
          {"grid_excluded", r.gridExcluded},
          {"commutator_norms", norms},
          {"phi_slope", r.phiSlope ? real_to_json(*r.phiSlope) : json(nullptr)}};
}

VerifyReport verify_report_from_json(const json& j) {
  VerifyReport r;
  r.caseName = j.at("case");
  r.validated = j.at("validated");
  r.gridResidualMax = real_from_json(j.at("grid_residual_max"));
  r.gridExcluded = j.at("grid_excluded");
  for (const auto& [k, v] : j.at("commutator_norms").items()) r.commutatorNorms[std::stoi(k)] = real_from_json(v);
  if (!j.at("phi_slope").is_null()) r.phiSlope = real_from_json(j.at("phi_slope"));
  return r;
}

json to_json(const SpectrumReport& r) {
  return {{"schema", kSchema},
          {"case", r.caseName},
          {"basis_size", r.basisSize},
          {"self_adjoint", r.selfAdjoint},
          {"hermitian_defect", real_to_json(r.hermitianDefect)},
          {"eigenvalues", cplx_list(r.eigenvalues)},
          {"residuals", real_list(r.residuals)},
          {"kappas", cplx_list(r.kappas)},
          {"kappa_residuals", real_list(r.kappaResiduals)}};
}

SpectrumReport spectrum_report_from_json(const json& j) {
  SpectrumReport r;
  r.caseName = j.at("case");
  r.basisSize = j.at("basis_size");
  r.selfAdjoint = j.at("self_adjoint");
  r.hermitianDefect = real_from_json(j.at("hermitian_defect"));
  r.eigenvalues = cvec(j, "eigenvalues");
  r.residuals = real_list_from(j.at("residuals"));
  r.kappas = cvec(j, "kappas");
  r.kappaResiduals = real_list_from(j.at("kappa_residuals"));
  return r;
}

json to_json(const SvdReport& r) {
  return {{"schema", kSchema},
          {"case", r.caseName},
          {"regular", r.regular},
          {"removable", cplx_list(r.removable)},
          {"sigmas", real_list(r.sigmas)},
          {"chis", cplx_list(r.chis)},
          {"l_modes", r.lModes},
          {"cross_residuals", real_list(r.crossResiduals)},
          {"kstark_residuals", real_list(r.kstarkResiduals)},
          {"below_floor", r.belowFloor},
          {"gram_residual_u", real_to_json(r.gramResidualU)},
          {"gram_residual_v", real_to_json(r.gramResidualV)},
          {"warnings", r.warnings}};
}

SvdReport svd_report_from_json(const json& j) {
  SvdReport r;
  r.caseName = j.at("case");
  r.regular = j.at("regular");
  r.removable = cvec(j, "removable");
  r.sigmas = real_list_from(j.at("sigmas"));
  r.chis = cvec(j, "chis");
  r.lModes = j.at("l_modes").get<std::vector<int>>();
  r.crossResiduals = real_list_from(j.at("cross_residuals"));
  r.kstarkResiduals = real_list_from(j.at("kstark_residuals"));
  r.belowFloor = j.at("below_floor").get<std::vector<bool>>();
  r.gramResidualU = real_from_json(j.at("gram_residual_u"));
  r.gramResidualV = real_from_json(j.at("gram_residual_v"));
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

json to_json(const ClassificationResult& r) {
  static const char* ab[] = {"none", "A", "B"};
  return {{"schema", kSchema},
          {"verdict", verdict_name(r.verdict)},
          {"lambda2", cplx_to_json(r.lambda2)},
          {"mu2", cplx_to_json(r.mu2)},
          {"nu", cplx_to_json(r.nu)},
          {"alpha1", cplx_to_json(r.alpha1)},
          {"case_ab", ab[static_cast<int>(r.caseAB)]},
          {"constraints", r.constraints},
          {"gauge_applied", cplx_to_json(r.gaugeApplied)},
          {"consistency_residual", real_to_json(r.consistencyResidual)},
          {"diagnostics", r.diagnostics}};
}

ClassificationResult classification_from_json(const json& j) {
  ClassificationResult r;
  const std::string v = j.at("verdict");
  for (Verdict x : {Verdict::RegularCommuting, Verdict::SingularCandidate, Verdict::Trivial, Verdict::NoCommutant})
    if (verdict_name(x) == v) r.verdict = x;
  r.lambda2 = cget(j, "lambda2");
  r.mu2 = cget(j, "mu2");
  r.nu = cget(j, "nu");
  r.alpha1 = cget(j, "alpha1");
  const std::string ab = j.at("case_ab");
  r.caseAB = ab == "A" ? CaseAB::A : ab == "B" ? CaseAB::B : CaseAB::None;
  r.constraints = j.at("constraints").get<std::vector<std::string>>();
  r.gaugeApplied = cget(j, "gauge_applied");
  r.consistencyResidual = real_from_json(j.at("consistency_residual"));
  r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  return r;
}

json to_json(const NormalityOutput& r) {
  json segs = json::array();
  for (const auto& s : r.segments) {
    json conds = json::array();
    for (const auto& c : s.conditions) conds.push_back({{"name", c.name}, {"residual", real_to_json(c.value)}});
    segs.push_back({{"segment", segment_to_json(s.segment)},
                    {"self_adjoint_residuals", real_list({s.selfAdjointResiduals.begin(), s.selfAdjointResiduals.end()})},
                    {"self_adjoint", s.selfAdjoint},
                    {"normal", s.normal},
                    {"normal_direct", s.normalDirect},
                    {"direct_residual", real_to_json(s.directResidual)},
                    {"rescale", cplx_to_json(s.rescale)},
                    {"gamma", s.gamma ? real_to_json(*s.gamma) : json(nullptr)},
                    {"pair_residuals", real_list({s.pairResiduals.begin(), s.pairResiduals.end()})},
                    {"conditions", conds}});
  }
  return {{"schema", kSchema}, {"case", r.caseName}, {"segments", segs}};
}

NormalityOutput normality_output_from_json(const json& j) {
  NormalityOutput r;
  r.caseName = j.at("case");
  for (const auto& s : j.at("segments")) {
    NormalitySegmentReport x;
    x.segment = segment_from_json(s.at("segment"));
    const auto sa = real_list_from(s.at("self_adjoint_residuals"));
    std::copy(sa.begin(), sa.end(), x.selfAdjointResiduals.begin());
    x.selfAdjoint = s.at("self_adjoint");
    x.normal = s.at("normal");
    x.normalDirect = s.at("normal_direct");
    x.directResidual = real_from_json(s.at("direct_residual"));
    x.rescale = cplx_from_json(s.at("rescale"));
    if (!s.at("gamma").is_null()) x.gamma = real_from_json(s.at("gamma"));
    const auto pr = real_list_from(s.at("pair_residuals"));
    std::copy(pr.begin(), pr.end(), x.pairResiduals.begin());
    for (const auto& c : s.at("conditions")) x.conditions.push_back({c.at("name"), real_from_json(c.at("residual"))});
    r.segments.push_back(std::move(x));
  }
  return r;
}

std::string csv_of(const VerifyReport& r) {
  std::ostringstream os;
  os << "y_re,y_im,z_re,z_im,abs_F\n";
  for (const auto& s : r.samples)
    os << g17(s.y.real()) << ',' << g17(s.y.imag()) << ',' << g17(s.z.real()) << ',' << g17(s.z.imag()) << ','
       << g17(s.absF) << '\n';
  return os.str();
}

std::string csv_of(const SpectrumReport& r) {
  std::ostringstream os;
  os << "n,chi_re,chi_im,residual,kappa_re,kappa_im,kappa_residual\n";
  for (size_t n = 0; n < r.eigenvalues.size(); ++n) {
    os << n << ',' << g17(r.eigenvalues[n].real()) << ',' << g17(r.eigenvalues[n].imag()) << ',' << g17(r.residuals[n]);
    if (n < r.kappas.size())
      os << ',' << g17(r.kappas[n].real()) << ',' << g17(r.kappas[n].imag()) << ',' << g17(r.kappaResiduals[n]);
    else
      os << ",,,";
    os << '\n';
  }
  return os.str();
}

std::string csv_of(const SvdReport& r) {
  std::ostringstream os;
  os << "n,sigma,residual,chi_re,chi_im,kstark_residual\n";
  for (size_t n = 0; n < r.sigmas.size(); ++n)
    os << n << ',' << g17(r.sigmas[n]) << ',' << g17(r.crossResiduals[n]) << ',' << g17(r.chis[n].real()) << ','
       << g17(r.chis[n].imag()) << ',' << g17(r.kstarkResiduals[n]) << '\n';
  return os.str();
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  s.name = j.at("name");
  if (s.name.empty() || s.name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.") !=
                            std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "scenario name must be filesystem-safe: " + s.name);
  s.command = j.at("command");
  if (j.contains("case")) s.kase = case_from_json(j.at("case"));
  if (j.contains("cases"))
    for (const auto& c : j.at("cases")) s.cases.push_back(case_from_json(c));
  s.tau = cget(j, "tau");
  if (j.contains("coefficients")) s.coeffs = taylor_from_json(j.at("coefficients"));
  if (j.contains("operator")) s.op = diffop_from_json(j.at("operator"));
  if (j.contains("resolutions")) {
    const json& r = j.at("resolutions");
    s.basisSize = r.value("basisSize", s.basisSize);
    s.N = r.value("N", s.N);
    if (r.contains("Ns")) s.Ns = r.at("Ns").get<std::vector<int>>();
    s.modes = r.value("modes", s.modes);
  }
  if (j.contains("tolerances") && j.at("tolerances").contains("tol")) s.tol = j.at("tolerances").at("tol").get<double>();
  if (j.contains("outputs")) s.outputs = j.at("outputs").get<std::vector<std::string>>();
  if (s.basisSize < 4 || s.basisSize > kMaxBasis) throw Error(ErrorCode::InvalidArgument, "basisSize outside [4, 200]");
  if (s.N < 4 || s.N > 512) throw Error(ErrorCode::InvalidArgument, "N outside [4, 512]");
  for (int n : s.Ns)
    if (n < 4 || n > kMaxBasis) throw Error(ErrorCode::InvalidArgument, "commutator resolution outside [4, 200]");
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open scenario " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed scenario: ") + e.what());
  }
  return scenario_from_json(j);
}

std::vector<Scenario> expand_batch(const Scenario& s) {
  if (s.cases.empty()) return {s};
  std::vector<Scenario> out;
  for (size_t i = 0; i < s.cases.size(); ++i) {
    Scenario one = s;
    one.cases.clear();
    one.kase = s.cases[i];
    one.name = s.name + "_" + std::to_string(i);
    out.push_back(std::move(one));
  }
  return out;
}

namespace {

CommutingPair scenario_pair(const Scenario& s) {
  if (!s.kase) throw Error(ErrorCode::InvalidArgument, "scenario needs a case");
  CommutingPair p = build_pair_unchecked(*s.kase);
  if (s.tau != Cplx(0.0)) p = gauge_transform(p, s.tau);
  return p;
}

RunResult run_verify(const Scenario& s) {
  RunResult out;
  const CommutingPair p = scenario_pair(s);
  VerifyReport r;
  r.caseName = case_name(p.kase);
  r.validated = validate_pair(p).passed();
  const GridResidual g = grid_residual(p);
  r.gridResidualMax = g.relative;
  r.gridExcluded = g.excluded;
  r.samples = g.samples;
  for (int n : s.Ns) r.commutatorNorms[n] = commutator_norm(p, n);
  if (!p.two_segments() && p.kernel.denom.kind != DenomKind::One && is_nonremovable_pole(p.kernel, 0.0)) {
    const TestFunction u = standard_test_functions(p.op.segment)[3];
    r.phiSlope = phi_slope(p.kernel, p.op, u, 0.3).slope;
  }
  out.report = to_json(r);
  out.csv = csv_of(r);
  if (!r.validated) {
    out.exitCode = 2;
    out.message = "pair fails boundary, admissibility or nontriviality checks";
  } else if (s.tol && r.gridResidualMax > *s.tol) {
    out.exitCode = 3;
    out.message = "grid residual above tolerance";
  }
  return out;
}

RunResult run_spectrum(const Scenario& s) {
  RunResult out;
  SpectrumReport r;
  DiffOp L;
  std::optional<CommutingPair> p;
  if (s.op) {
    L = *s.op;
    r.caseName = "operator";
  } else {
    p = scenario_pair(s);
    L = p->op;
    r.caseName = case_name(p->kase);
  }
  const Spectrum sp = solve_L_eigen(L, s.basisSize);
  r.basisSize = sp.basisSize;
  r.selfAdjoint = sp.selfAdjoint;
  r.hermitianDefect = sp.hermitianDefect;
  const int m = std::min(s.modes, sp.basisSize);
  r.eigenvalues.assign(sp.eigenvalues.begin(), sp.eigenvalues.begin() + m);
  r.residuals.assign(sp.residuals.begin(), sp.residuals.begin() + m);
  if (p && !p->two_segments()) {
    const KSpectrum ks = k_spectrum_from_L(*p, sp, s.N, m);
    r.kappas = ks.kappas;
    r.kappaResiduals = ks.residuals;
  }
  out.report = to_json(r);
  out.csv = csv_of(r);
  if (s.tol && (max_of(r.residuals) > *s.tol || max_of(r.kappaResiduals) > *s.tol)) {
    out.exitCode = 3;
    out.message = "spectral residual above tolerance";
  }
  return out;
}

RunResult run_svd(const Scenario& s) {
  RunResult out;
  const CommutingPair p = scenario_pair(s);
  if (s.N > kMaxBasis) throw Error(ErrorCode::InvalidArgument, "SVD pipeline needs N <= 200");
  const SvdResult sv = svd_pipeline(p, s.basisSize, s.N, s.modes);
  SvdReport r;
  r.caseName = case_name(p.kase);
  r.regular = sv.regular;
  r.removable = classify_regularity(p).removable;
  r.sigmas = sv.sigmas;
  r.chis = sv.chis;
  r.lModes = sv.lModes;
  r.crossResiduals = sv.crossResiduals;
  r.kstarkResiduals = sv.kstarkResiduals;
  r.belowFloor = sv.belowFloor;
  r.gramResidualU = sv.gramResidualU;
  r.gramResidualV = sv.gramResidualV;
  r.warnings = sv.warnings;
  out.report = to_json(r);
  out.csv = csv_of(r);
  if (s.tol && max_of(r.crossResiduals) > *s.tol) {
    out.exitCode = 3;
    out.message = "target-side residual above tolerance";
  }
  return out;
}

RunResult run_classify(const Scenario& s) {
  RunResult out;
  TaylorData d;
  if (s.coeffs) d = *s.coeffs;
  else d = taylor_data(scenario_pair(s).kernel, Convention::FactorialNormalized);
  out.report = to_json(classify(d));
  return out;
}

NormalitySegmentReport normality_segment(const DiffOp& L) {
  NormalitySegmentReport x;
  x.segment = L.segment;
  x.selfAdjointResiduals = self_adjoint_residuals(L);
  x.selfAdjoint = is_self_adjoint(L);
  const NormalityReport n = is_normal(L);
  x.normal = n.normal;
  x.normalDirect = n.directResidual <= kCommuteTol;
  x.directResidual = n.directResidual;
  x.rescale = n.rescale;
  x.gamma = n.gamma;
  x.pairResiduals = n.pairTest.residuals;
  x.conditions = n.conditions;
  return x;
}

RunResult run_normality(const Scenario& s) {
  RunResult out;
  NormalityOutput r;
  if (s.op) {
    r.caseName = "operator";
    r.segments.push_back(normality_segment(*s.op));
  } else {
    const CommutingPair p = scenario_pair(s);
    r.caseName = case_name(p.kase);
    r.segments.push_back(normality_segment(p.op));
    if (p.opTarget) r.segments.push_back(normality_segment(*p.opTarget));
  }
  out.report = to_json(r);
  return out;
}

RunResult run_catalog() {
  RunResult out;
  json cases = json::array();
  for (const auto& c : list_cases())
    cases.push_back({{"name", c.name}, {"parameters", c.parameters}, {"domain", c.domain}, {"kernel", c.kernel}});
  out.report = {{"schema", kSchema}, {"cases", cases}};
  return out;
}

}  // namespace

RunResult run_scenario(const Scenario& s) {
  try {
    if (s.command == "catalog") return run_catalog();
    if (s.command == "verify") return run_verify(s);
    if (s.command == "spectrum") return run_spectrum(s);
    if (s.command == "svd") return run_svd(s);
    if (s.command == "classify") return run_classify(s);
    if (s.command == "normality") return run_normality(s);
    return {2, json::object(), "", "unknown command " + s.command};
  } catch (const Error& e) {
    return {exit_code_for(e.code()), json{{"schema", kSchema}, {"error", error_code_name(e.code())}, {"message", e.what()}},
            "", e.what()};
  } catch (const json::exception& e) {
    return {2, json{{"schema", kSchema}, {"error", "InvalidArgument"}, {"message", e.what()}}, "", e.what()};
  }
}

void write_outputs(const RunResult& r, const Scenario& s, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir);
  auto want = [&](const std::string& kind) {
    return std::find(s.outputs.begin(), s.outputs.end(), kind) != s.outputs.end();
  };
  if (want("json")) {
    std::ofstream f(std::filesystem::path(dir) / (s.name + ".json"));
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write report for " + s.name);
    f << r.report.dump(2) << '\n';
  }
  if (want("csv") && !r.csv.empty()) {
    std::ofstream f(std::filesystem::path(dir) / (s.name + ".csv"));
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write CSV for " + s.name);
    f << r.csv;
  }
}

}  // namespace commutant
