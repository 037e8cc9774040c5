#ifndef ROBREG_DATASETS_HPP
#define ROBREG_DATASETS_HPP

#include "robreg/model.hpp"

namespace robreg {

// Embedded sample datasets used by the CLI and the benchmark workflows.

// Household disposable income: y = total disposable income (thousands),
// x = number of individuals in the household, 20 rows. The 11th response
// is a free slot (CLI name "table1"); its conventional base value is 85.
Dataset pdi_households(double y11 = 85.0);

// Weekly food expenditure (y) against weekly income (x) for 20
// households (CLI name "table2"). Rows 17 and 20 (1-based) are the
// conventional outliers.
Dataset food_expenditure();

}  // namespace robreg

#endif  // ROBREG_DATASETS_HPP
