#include "itodilate/acceptance.hpp"

#include <iostream>

int main() {
  const auto results = itodilate::acceptance::run_all(itodilate::acceptance::kDefaultSeed);
  int failures = 0;
  for (const auto& r : results) {
    std::cout << itodilate::acceptance::summary_line(r) << "\n";
    if (!r.passed) ++failures;
  }
  std::cout << (results.size() - static_cast<std::size_t>(failures)) << "/" << results.size()
            << " acceptance criteria passed\n";
  return failures == 0 ? 0 : 1;
}
