#pragma once

#include <optional>

#include "ebcc/field.hpp"

namespace ebcc::bench {

// Uniform midtread scalar quantizer baseline: index = round(x / step). Its
// compression ratio is charged at the zeroth-order entropy of the indices,
// which favours the baseline over any real entropy coder.
struct QuantizedField {
  Field2D reconstruction;
  double step = 0.0;
  double entropy_bits = 0.0;  // per sample
  double ratio = 0.0;
};

QuantizedField uniform_quantize(const Field2D& f, double step);

// Step whose ratio lies within target * (1 +- tolerance); empty if the
// bisection cannot land there.
std::optional<QuantizedField> quantize_to_ratio(const Field2D& f, double target_ratio, double tolerance = 0.1);

}  // namespace ebcc::bench
