#pragma once

#include "ebcc/field.hpp"

namespace ebcc::bench {

// du/dx + dv/dy on a uniform grid; x runs along columns, y along rows.
// Central differences inside, second-order one-sided differences at the edges.
Field2D horizontal_divergence(const Field2D& u, const Field2D& v, double dx, double dy);

}  // namespace ebcc::bench
