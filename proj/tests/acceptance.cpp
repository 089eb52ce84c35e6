// Full-size acceptance run. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "pbp/io.hpp"
#include "pbp/verify.hpp"

using namespace pbp;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  std::vector<VerificationReport> reports;
  double seconds = 0.0;
};

using Runner = std::function<std::vector<VerificationReport>(const VerifyContext&)>;

Outcome timed(const Runner& run, int threads) {
  VerifyContext ctx;
  ctx.threads = threads;
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{run(ctx)};
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

std::string fingerprint(const std::vector<VerificationReport>& rs) {
  std::string s;
  for (const auto& r : rs) s += report_to_json(r, false).dump() + "\n";
  return s;
}

std::string summary(const std::vector<VerificationReport>& rs) {
  std::string s;
  char buf[256];
  for (const auto& r : rs) {
    if (r.comparison == Comparison::between) {
      std::snprintf(buf, sizeof buf, "%s%s=%.6g in [%g,%g]", s.empty() ? "" : "; ", r.test_name.c_str(), r.statistic,
                    r.threshold, r.threshold_upper);
    } else {
      std::snprintf(buf, sizeof buf, "%s%s=%.6g %s %g%s", s.empty() ? "" : "; ", r.test_name.c_str(), r.statistic,
                    comparison_symbol(r.comparison), r.threshold, r.control ? " (control)" : "");
    }
    s += buf;
    if (r.details.contains("mean_within_3se")) {
      std::snprintf(buf, sizeof buf, "; mean=%.5f vs %.5f +- 3*%.2g", r.details.at("mean"), r.details.at("mean_target"),
                    r.details.at("standard_error"));
      s += buf;
    }
  }
  return s;
}

struct Criterion {
  int id;
  const char* title;
  double time_limit;
  Runner run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "cancellation identity", 5.0,
       [](const VerifyContext&) {
         return std::vector{test_cancellation(1000000, kSeed), test_cancellation(1000000, kSeed, 2.1, true)};
       }},
      {2, "bridge pinning and sign constancy", 120.0,
       [](const VerifyContext& c) {
         auto a = test_bridge_properties(1000, 1.0, kSeed, c);
         auto b = test_bridge_properties(1000, 2.0, kSeed, c);
         a.test_name = "bridge_y1";
         b.test_name = "bridge_y2";
         return std::vector{a, b};
       }},
      {3, "Bessel(3) law from 0", 600.0,
       [](const VerifyContext& c) { return std::vector{test_bes3_law(100000, kSeed, c)}; }},
      {4, "small-driver containment", 60.0,
       [](const VerifyContext& c) {
         return std::vector{test_small_driver_bound(500, 0.15, BoundMode::sup2, kSeed, c),
                            test_small_driver_bound(500, 0.15, BoundMode::inf0, kSeed, c)};
       }},
      {5, "CE1 construction validity", 300.0,
       [](const VerifyContext& c) { return std::vector{test_ce1_validity(200, kSeed, c)}; }},
      {6, "CE1 non-uniqueness witness", 600.0,
       [](const VerifyContext& c) { return std::vector{demo_nonuniqueness(DemoCase::ce1_c3, 200, kSeed, c)}; }},
      {7, "CE2 two solutions on one driver", 600.0,
       [](const VerifyContext& c) { return std::vector{demo_nonuniqueness(DemoCase::ce2, 200, kSeed, c)}; }},
      {8, "solver convergence", 600.0,
       [](const VerifyContext& c) { return std::vector{test_convergence(20, kSeed, c)}; }},
  };

  bool all = true;
  std::vector<std::string> prints;
  for (const auto& cr : criteria) {
    const auto o = timed(cr.run, 1);
    bool ok = o.seconds < cr.time_limit;
    for (const auto& r : o.reports) ok = ok && r.as_expected();
    all = all && ok;
    prints.push_back(fingerprint(o.reports));
    std::printf("%s criterion %d %s: %s; runtime %.1f s (limit %.0f s)\n", ok ? "PASS" : "FAIL", cr.id, cr.title,
                summary(o.reports).c_str(), o.seconds, cr.time_limit);
    std::fflush(stdout);
  }

  // Determinism: criteria 1, 2 and 4-8 at full size, the Bessel law at a
  // tenth of its size, each under 4 and 8 threads against the 1-thread run.
  bool same = true;
  std::string diffs;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Runner run = criteria[i].run;
    std::string reference = prints[i];
    if (criteria[i].id == 3) {
      run = [](const VerifyContext& c) { return std::vector{test_bes3_law(10000, kSeed, c)}; };
      reference = fingerprint(timed(run, 1).reports);
    }
    for (int threads : {4, 8}) {
      if (fingerprint(timed(run, threads).reports) != reference) {
        same = false;
        diffs += " " + std::to_string(criteria[i].id) + "@" + std::to_string(threads);
      }
    }
  }
  all = all && same;
  std::printf("%s criterion 9 determinism across 1, 4 and 8 threads: %s\n", same ? "PASS" : "FAIL",
              same ? "byte-identical reports" : ("differs at" + diffs).c_str());
  return all ? 0 : 1;
}
