// Acceptance suite: one line per criterion, exit status 0 only when all twelve pass.

#include <qcd/verify/acceptance.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
  qcd::verify::SuiteConfig cfg;
  if (argc > 1) cfg.seed = std::strtoull(argv[1], nullptr, 10);
  std::printf("acceptance suite, seed %llu\n", static_cast<unsigned long long>(cfg.seed));
  const auto res = qcd::verify::run_suite(cfg, [](const qcd::verify::CriterionResult& r) {
    std::printf("  %s %2d %-48s %s (%.2f s)\n", r.passed ? "✓" : "✗ FAILED", r.id, r.name.c_str(),
                r.detail.c_str(), r.seconds);
    std::fflush(stdout);
  });
  std::size_t passed = 0;
  for (const auto& c : res.criteria) passed += c.passed;
  std::printf("%zu/%zu criteria passed in %.2f s\n", passed, res.criteria.size(), res.seconds);
  return res.passed() ? 0 : 1;
}
