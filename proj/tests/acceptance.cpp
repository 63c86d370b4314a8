// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "dhk/verify.hpp"

int main(int argc, char** argv) {
  dhk::verify::VerifyConfig cfg;
  if (argc > 1) cfg.seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  for (const auto& [name, run] : dhk::verify::suites()) {
    dhk::verify::SuiteReport r;
    std::string note;
    try {
      r = run(cfg);
    } catch (const std::exception& e) {
      r.suite = name;
      note = std::string(" error: ") + e.what();
    }
    bool ok = note.empty() && r.ok();
    failed += !ok;
    std::printf("%s criterion %d (%s): %s = %.3g (tol %.3g), %.2f s (limit %.0f s)%s\n", ok ? "PASS" : "FAIL", r.criterion,
                r.suite.c_str(), r.metric.c_str(), r.measured, r.tolerance, r.seconds, r.time_limit, note.c_str());
    if (!ok && note.empty()) std::printf("  details: %s\n", r.details.dump().c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
