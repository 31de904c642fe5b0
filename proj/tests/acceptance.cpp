// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fne/orbit.hpp"
#include "fne/report.hpp"
#include "fne/verify.hpp"

using namespace fne;

namespace {

// Pinned tolerances.
constexpr double kHarmonicSeconds = 60.0;
constexpr double kBlockSeconds = 300.0;
constexpr double kRhoLimitTol = 2e-5;
constexpr double kWeakProbeCap = 0.1;
constexpr double kFirmTol = 1e-12;
constexpr double kFirmInfinityTol = 1e-15;
constexpr double kIdentityTol = 1e-12;
constexpr double kDriftTol = 1e-10;
constexpr unsigned kBlockThreads = 8;
constexpr std::uint64_t kSeed = 20240601;

int failures = 0;

void verdict(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("CRITERION %d %s: %s [%s]\n", id, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Every record whose id starts with `prefix` passes; returns the worst margin.
bool all_with_prefix(const VerificationReport& r, const std::string& prefix, double* worst = nullptr,
                     std::size_t* count = nullptr) {
  bool ok = true;
  double w = INFINITY;
  std::size_t c = 0;
  for (const auto& rec : r.records())
    if (rec.check_id.rfind(prefix, 0) == 0) {
      ok = ok && rec.pass;
      w = std::min(w, rec.margin);
      ++c;
    }
  if (worst) *worst = w;
  if (count) *count = c;
  return ok && c > 0;
}

const CheckRecord* need(const VerificationReport& r, const std::string& id) {
  const CheckRecord* rec = r.first(id);
  if (!rec) std::printf("missing record %s in suite %s\n", id.c_str(), r.name().c_str());
  return rec;
}

std::string fmt(double x) { return format_double(x); }

}  // namespace

int main() {
  verify::SuiteOptions harmonic_opts;
  harmonic_opts.seed = kSeed;
  harmonic_opts.threads = 1;

  verify::SuiteOptions block_opts;
  block_opts.seed = kSeed;
  block_opts.threads = kBlockThreads;

  verify::AuxiliaryOptions aux_opts;
  aux_opts.seed = kSeed;
  verify::RealizationOptions real_opts;
  real_opts.seed = kSeed;

  // 1. Harmonic suite.
  auto t0 = std::chrono::steady_clock::now();
  const VerificationReport harmonic = verify::suite_harmonic(0.125, 10000, harmonic_opts);
  const double harmonic_time = seconds_since(t0);
  {
    const Orbit orbit(build_harmonic_mesh(0.125, 10000));
    bool strict = true;
    for (std::size_t n = 1; n < orbit.size(); ++n) strict = strict && orbit.rho(n + 1) < orbit.rho(n);
    const double rho_inf = std::exp(-std::numbers::pi * std::numbers::pi / 384.0);
    const double rho_gap = std::fabs(orbit.rho(10000) - rho_inf);

    const CheckRecord* floor = need(harmonic, "cesaro.harmonic_floor");

    // t_n >= 2 needs n of order 5e6 at delta = 1/8, far past N = 1e4.
    std::size_t far = 0;
    double far_max = 0.0;
    for (std::size_t n = 1; n <= orbit.size(); ++n)
      if (orbit.t(n) >= 2.0) ++far;
    const Orbit longer(build_harmonic_mesh(0.125, 6'000'000));
    std::size_t far_long = 0;
    for (std::size_t n = 1; n <= longer.size(); ++n)
      if (longer.t(n) >= 2.0) {
        far_max = std::max(far_max, weak_probe(longer, 0.0, n));
        ++far_long;
      }

    const bool ok = harmonic.all_passed() && harmonic_time < kHarmonicSeconds && strict &&
                    rho_gap <= kRhoLimitTol && floor && floor->pass && far_long > 0 && far_max <= kWeakProbeCap;
    std::ostringstream d;
    d << "suite " << harmonic.passed() << "/" << harmonic.total() << " in " << fmt(harmonic_time)
      << "s; rho strictly decreasing=" << (strict ? "yes" : "no") << "; |rho_N - exp(-pi^2/384)|=" << fmt(rho_gap)
      << "; min ||y_n||-floor=" << (floor ? fmt(floor->margin) : "missing") << "; indices with t_n>=2: " << far
      << " at N=1e4, " << far_long << " at N=6e6 with max weak_probe(0,n)=" << fmt(far_max);
    verdict(1, ok, "harmonic suite delta=1/8 N=1e4", d.str());
  }

  // 4 runs before 2 because 2 reads the block report.
  t0 = std::chrono::steady_clock::now();
  const VerificationReport block = verify::suite_block(8, 4, block_opts);
  const double block_time = seconds_since(t0);

  // 2. Firm nonexpansiveness on both meshes.
  {
    bool ok = true;
    std::ostringstream d;
    for (const VerificationReport* r : {&harmonic, &block}) {
      const CheckRecord* sweep = need(*r, "orbit.firm_residual");
      const CheckRecord* inf = need(*r, "orbit.firm_residual_infinity");
      const bool full = sweep && sweep->params["n_max"].get<std::size_t>() == 2000 &&
                        sweep->params["pairs"].get<std::size_t>() == 2000u * 1999u / 2u;
      const bool good = full && sweep->margin >= -kFirmTol && inf && inf->margin >= -kFirmInfinityTol;
      ok = ok && good;
      d << r->name() << ": min over " << (sweep ? sweep->params["pairs"].dump() : "?")
        << " pairs=" << (sweep ? fmt(sweep->margin) : "?")
        << ", max |n=inf residual|=" << (inf ? fmt(-inf->margin) : "?") << "; ";
    }
    verdict(2, ok, "firm residual, all pairs m<n<=2000 and n=inf", d.str());
  }

  // 3. Orbit identities for n <= 1e4.
  {
    const CheckRecord* succ = need(harmonic, "orbit.successor_gram");
    const CheckRecord* orth = need(harmonic, "orbit.orthogonality");
    const CheckRecord* acute = need(harmonic, "orbit.acute_gram");
    const bool ok = succ && orth && acute && -succ->margin <= kIdentityTol && -orth->margin <= kIdentityTol &&
                    acute->margin > 0.0;
    std::ostringstream d;
    d << "max rel successor residual=" << (succ ? fmt(-succ->margin) : "?")
      << ", max rel orthogonality residual=" << (orth ? fmt(-orth->margin) : "?")
      << ", min sampled Gram=" << (acute ? fmt(acute->margin) : "?");
    verdict(3, ok, "orbit identities n<=1e4", d.str());
  }

  // 4. Block suite.
  {
    const char* required[] = {"block.step_upper",       "block.step_lower",          "block.unit_size_lower",
                              "block.unit_size_upper",  "block.unit_end_index",      "block.size_lower",
                              "block.unit_spread",      "block.unit_mean_lower",     "block.block_mean_upper",
                              "block.end_mean_upper",   "block.cluster_bound",       "block.q_admissible"};
    bool ok = block.all_passed() && block_time < kBlockSeconds;
    std::ostringstream d;
    for (const char* id : required) {
      std::size_t c = 0;
      const bool good = all_with_prefix(block, id, nullptr, &c) && c == 4;
      if (!good) d << id << " failed; ";
      ok = ok && good;
    }
    const CheckRecord* trend = need(block, "block.end_mean_first_exceeds_last");
    const CheckRecord* above = need(block, "block.unit_means_above_threshold");
    ok = ok && trend && trend->margin > 0.0 && above && above->pass;
    d << "suite " << block.passed() << "/" << block.total() << " in " << fmt(block_time) << "s with "
      << kBlockThreads << " threads";
    if (trend)
      d << "; ||y_j_end(1)||=" << fmt(trend->params["first"].get<double>())
        << " > ||y_j_end(4)||=" << fmt(trend->params["last"].get<double>());
    if (above) d << "; min ||y_j_unit(k)|| - threshold=" << fmt(above->margin);
    verdict(4, ok, "block suite q1=8 K=4", d.str());
  }

  // 5. Auxiliary inequalities.
  const VerificationReport aux = verify::suite_auxiliary(aux_opts);
  {
    std::ostringstream d;
    for (const char* id : {"aux.exp_ineq_grid", "aux.expexp_random", "aux.sep_sum_random", "aux.sep_sum_symmetric"})
      if (const CheckRecord* r = need(aux, id)) d << id << "=" << fmt(r->margin) << " ";
    verdict(5, aux.all_passed(), "auxiliary inequalities (1e6 grid, 1e5 pairs, 1e3 point sets)", d.str());
  }

  // 6. Realization cross-validation.
  const VerificationReport real = verify::suite_realization(real_opts);
  {
    std::ostringstream d;
    for (const char* id : {"curve.coord_vs_kernel", "curve.l2_vs_kernel", "curve.derivative_identities"})
      if (const CheckRecord* r = need(real, id)) d << id << " max err=" << fmt(-r->margin) << " ";
    verdict(6, real.all_passed(), "realization cross-validation", d.str());
  }

  // 7. Mesh equivalences.
  {
    const CheckRecord* hf = need(harmonic, "mesh.forms_agree");
    const CheckRecord* bf = need(block, "mesh.forms_agree");
    double drift_worst = 0.0;
    std::size_t drift_count = 0;
    const bool drift_ok = all_with_prefix(block, "block.drift_constant", &drift_worst, &drift_count);
    const bool ok = hf && hf->pass && bf && bf->pass && drift_ok && drift_count == 4 && -drift_worst <= kDriftTol;
    std::ostringstream d;
    d << "forms agree harmonic=" << (hf && hf->pass ? "yes" : "no") << " block=" << (bf && bf->pass ? "yes" : "no")
      << "; max in-block relative drift change=" << fmt(-drift_worst);
    verdict(7, ok, "mesh step-size forms and in-block drift constancy", d.str());
  }

  // 8. Determinism.
  {
    const bool h = verify::suite_harmonic(0.125, 10000, harmonic_opts).dump_json() == harmonic.dump_json();
    const bool b = verify::suite_block(8, 4, block_opts).dump_json() == block.dump_json();
    const bool a = verify::suite_auxiliary(aux_opts).dump_json() == aux.dump_json();
    const bool r = verify::suite_realization(real_opts).dump_json() == real.dump_json();
    std::ostringstream d;
    d << "byte-identical reruns: harmonic=" << h << " block=" << b << " aux=" << a << " realization=" << r;
    verdict(8, h && b && a && r, "determinism of JSON reports", d.str());
  }

  for (const VerificationReport* r : {&harmonic, &block, &aux, &real}) std::printf("%s\n", r->summary_line().c_str());
  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
