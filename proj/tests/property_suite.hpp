#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nclift::test {

struct PropertySuiteResult {
  std::size_t cases_run = 0;
  std::vector<std::string> failures;
};

PropertySuiteResult run_property_suite(unsigned seed);

}  // namespace nclift::test
