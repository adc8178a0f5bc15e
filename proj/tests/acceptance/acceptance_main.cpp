#include <cstdio>
#include <cstring>

#include "mcf/verify/acceptance.hpp"

int main(int argc, char** argv) {
  mcf::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
  bool ok = true;
  for (int id = 1; id <= mcf::kCriteriaCount; ++id) {
    const auto r = mcf::run_criterion(id, opt);
    std::printf("%s\n", mcf::format_result(r).c_str());
    std::fflush(stdout);
    ok = ok && (r.pass || r.skipped);
  }
  return ok ? 0 : 1;
}
