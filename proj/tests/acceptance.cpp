// Acceptance run: one line per criterion, details for failing assertions.
// Usage: acceptance [--criterion k]

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "fnls/verify.hpp"

namespace {

bool report(const fnls::verify::CriterionResult& r) {
  const bool in_budget = r.budget <= 0.0 || r.seconds <= r.budget;
  const bool ok = r.pass() && in_budget;
  std::printf("%s  criterion %2d  %s  [%.2f s]\n", ok ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
  for (const auto& a : r.assertions) {
    if (a.pass) continue;
    std::printf("        failed: %s", a.name.c_str());
    for (const auto& m : a.values) std::printf("  %s=%.12g", m.name.c_str(), m.value);
    std::printf("\n");
  }
  if (!in_budget) std::printf("        over the %.0f s budget\n", r.budget);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  if (argc == 3 && std::strcmp(argv[1], "--criterion") == 0) {
    ids = {std::atoi(argv[2])};
  } else if (argc != 1) {
    std::fprintf(stderr, "usage: acceptance [--criterion k]\n");
    return 2;
  }
  bool all = true;
  try {
    for (int id : ids) all = report(fnls::verify::run_criterion(id)) && all;
  } catch (const fnls::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return all ? 0 : 1;
}
