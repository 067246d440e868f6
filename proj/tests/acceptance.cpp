// Acceptance gate: criteria 1-9 on the default configuration (or the file
// given as the first argument). One line per criterion; exit 0 iff all pass.
#include <cstdio>
#include <exception>

#include "mfglab/config.hpp"
#include "mfglab/verify.hpp"

int main(int argc, char** argv) {
  try {
    const mfglab::RunConfig cfg = argc > 1 ? mfglab::load_config(argv[1]) : mfglab::parse_config("");
    const mfglab::AcceptanceReport rep = mfglab::run_acceptance(cfg);
    for (const auto& c : rep.criteria) std::printf("%s\n", mfglab::format_criterion(c).c_str());
    std::printf("%s\n", rep.all_passed() ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL");
    return rep.all_passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::printf("ACCEPTANCE ERROR: %s\n", e.what());
    return 2;
  }
}
