#pragma once

#include "circtrade/matrix.hpp"

namespace circtrade {

// Scores of the mean-centered rows on the top two principal components
// (n x 2). Each component is signed so its largest-magnitude loading is
// positive. Throws DegenerateDimension when cols < 2.
DenseMatrix project_2d(const DenseMatrix& points);

}  // namespace circtrade
