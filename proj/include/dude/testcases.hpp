#pragma once

#include <stdexcept>
#include <string>

#include "matrix.hpp"
#include "msa.hpp"

namespace dude {

struct PaperTestcase {
  int number = 0;
  char variant = 0;  // 'a' or 'b' for test 6
  RateMatrix rates_dl;
  RateMatrix rates_ul;
  MsaParams params;
};

// Rate matrices (bits/s/Hz, users x stations) of the six hand-built scenarios.
// Test 1 only publishes uplink rates; it reuses the downlink matrix shared by tests 2-4.
inline PaperTestcase load_paper_testcase(int n, char variant = 0) {
  const RateMatrix dl_shared{{8, 1, 29}, {0.5, 15, 1}, {25, 2, 2}, {8, 28, 0.9}};
  const RateMatrix ul3{{8, 1, 25}, {0.5, 15, 1}, {30, 1, 5.2}, {0.3, 32, 0.5}};
  PaperTestcase tc;
  tc.number = n;
  tc.params.alpha = 0.5;
  tc.params.epsilon_u = 2.0;
  tc.params.gamma = 0.004;
  tc.params.iterations = 8000;
  tc.params.formula = AllocationFormula::modified;
  if (n != 6 && variant != 0) throw std::invalid_argument("test " + std::to_string(n) + " has no variants");
  switch (n) {
    case 1:
      tc.rates_dl = dl_shared;
      tc.rates_ul = {{28, 30, 28}, {0.5, 15, 1}, {30, 1, 5.2}, {0.3, 32, 0.5}};
      break;
    case 2:
      tc.rates_dl = dl_shared;
      tc.rates_ul = {{2, 1, 25}, {0.5, 15, 1}, {30, 1, 5.2}, {0.3, 32, 0.5}};
      tc.params.formula = AllocationFormula::original;
      break;
    case 3:
      tc.rates_dl = dl_shared;
      tc.rates_ul = ul3;
      break;
    case 4:
      tc.rates_dl = dl_shared;
      tc.rates_ul = {{25, 1, 0.5}, {0.5, 15, 1}, {30, 1, 0.1}, {0.3, 32, 0.5}};
      break;
    case 5:
      tc.rates_dl = {{8, 1, 29, 1}, {0.5, 15, 1, 1}, {25, 2, 2, 1}, {8, 28, 0.9, 1}};
      tc.rates_ul = {{8, 1, 25, 1}, {0.5, 15, 1, 1}, {30, 1, 5.2, 1}, {0.3, 32, 0.5, 1}};
      break;
    case 6:
      if (variant == 0 || variant == 'a') {
        tc.variant = 'a';
        tc.rates_dl = {{8, 1, 30, 0, 1}, {0.5, 15, 1, 0, 1}, {25, 2, 2, 0, 1}, {8, 28, 0.9, 0, 1}};
        tc.rates_ul = {{8, 1, 20, 0, 1}, {0.5, 15, 1, 0, 1}, {27, 1, 5.2, 0, 1}, {0.3, 32, 0.5, 0, 1}};
      } else if (variant == 'b') {
        tc.variant = 'b';
        tc.rates_dl = {{8, 1, 30, 0, 1}, {0.5, 15, 1, 8, 2}, {25, 2, 2, 0, 1}, {8, 28, 0.9, 0, 1}};
        tc.rates_ul = {{8, 1, 20, 0, 1}, {0.5, 15, 1, 1, 3}, {27, 1, 5.2, 0, 1}, {0.3, 32, 0.5, 0, 1}};
      } else {
        throw std::invalid_argument(std::string("unknown test 6 variant: ") + variant);
      }
      break;
    default:
      throw std::invalid_argument("unknown paper testcase: " + std::to_string(n));
  }
  return tc;
}

}  // namespace dude
