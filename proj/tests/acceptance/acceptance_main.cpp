// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
//   spde_lrt_acceptance [--only 1,4,9] [--m M] [--seed S] [--workers W]

#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  spde_lrt::acceptance::Options opt;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string_view flag = argv[i];
    const std::string value = argv[i + 1];
    if (flag == "--only") {
      std::size_t pos = 0;
      while (pos < value.size()) {
        const auto comma = value.find(',', pos);
        opt.only.push_back(std::stoi(value.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    } else if (flag == "--m") {
      opt.m = std::stoll(value);
    } else if (flag == "--seed") {
      opt.seed = std::stoull(value);
    } else if (flag == "--workers") {
      opt.workers = static_cast<unsigned>(std::stoul(value));
    } else {
      std::cerr << "unknown flag " << flag << '\n';
      return 2;
    }
  }
  int failed = 0;
  spde_lrt::acceptance::run_all(opt, [&](const spde_lrt::acceptance::CriterionResult& r) {
    std::cout << spde_lrt::acceptance::format_line(r) << std::endl;
    failed += r.passed ? 0 : 1;
  });
  std::cout << (failed == 0 ? "all acceptance criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
