#pragma once

#include "adi/grid.hpp"

#include <vector>

namespace adi::test {

/// Owning copy of a field's values; safe to iterate when the field is a temporary.
inline std::vector<double> values_of(const ScalarField& f) { return {f.values().begin(), f.values().end()}; }

} // namespace adi::test
