#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hfb {

struct SelftestCase {
    std::string name;
    bool passed = false;
    double error = 0.0;
    double tolerance = 0.0;
};

// brute-force oracle suites: composition, convolution, FFT, block exponential, quadrature
std::vector<SelftestCase> run_selftest(std::ostream& log);

}  // namespace hfb
