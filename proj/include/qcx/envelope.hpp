#pragma once

#include <vector>

#include "qcx/common.hpp"

namespace qcx {

struct AffineFunctional {
    Point a;
    double b = 0;
    double operator()(const Point& x) const { return dot(a, x) + b; }
};

// Degenerate sample geometry makes the envelope objective unbounded below;
// reported distinctly from infeasibility (which cannot occur here).
struct UnboundedEnvelope : NumericError {
    using NumericError::NumericError;
};

// Minimal affine upper bound at `center`: minimize l(center) subject to
// l(xs[i]) >= us[i]. Dense two-phase primal simplex, free variables split,
// Bland's rule. Constraints with us[i] = -inf are vacuous and dropped.
AffineFunctional fit_affine_upper_envelope(const std::vector<Point>& xs,
                                           const std::vector<double>& us, const Point& center);

}  // namespace qcx
