#include "robreg/datasets.hpp"

#include <cmath>

#include "robreg/errors.hpp"

namespace robreg {

Dataset pdi_households(double y11) {
  if (!std::isfinite(y11))
    throw parameter_error("pdi_households: y11 must be finite");
  Dataset d;
  d.y = {20.8,  9.6,  38.6,  74.1, 108.8, 98.7,  44.8,  77.2,  93.2, 107.2,
         y11,   93.6, 113.7, 123.5, 93.5, 148.1, 147.1, 154.0, 149.5, 173.5};
  d.x = {1.0, 1.0, 2.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0,
         3.0, 4.0, 4.0, 4.0, 4.0, 5.0, 5.0, 5.0, 6.0, 6.0};
  return d;
}

Dataset food_expenditure() {
  Dataset d;
  d.y = {31.7, 68.4, 54.4, 53.5,  78.4, 66.4,  64.1, 44.6, 99.0, 53.3,
         67.3, 68.6, 63.0, 100.6, 82.2, 113.4, 6.1,  76.6, 92.7, 41.1};
  d.x = {102.9, 144.9, 155.8, 176.5, 177.4, 182.2, 197.9, 199.2, 211.3, 215.9,
         216.0, 216.7, 220.3, 222.8, 229.0, 250.0, 250.2, 275.4, 342.4, 696.4};
  return d;
}

}  // namespace robreg
