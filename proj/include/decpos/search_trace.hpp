// Copyright 2026 The decpos Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DECPOS_SEARCH_TRACE_HPP
#define DECPOS_SEARCH_TRACE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace decpos {

/// Per-iteration bookkeeping common to both policy search loops.
struct TraceRow {
    long iteration = 0;
    /// Best value seen in any sample up to and including this iteration.
    double best_value = 0.0;
    /// Elite threshold that gated this iteration's filter, i.e. the previous
    /// iteration's worst elite value (-inf on the first iteration and on the
    /// iteration after an entropy injection).
    double worst_elite = 0.0;
    /// Entropies of the macro-action sampling distributions, all robots
    /// concatenated node-major.
    std::vector<double> ma_entropies;
    /// Entropies of the node-transition distributions (exact for
    /// discretized tables, kernel-approximated for transition functions).
    std::vector<double> transition_entropies;
    bool inject_allowed = false;
    bool injected = false;
};

struct SearchTrace {
    std::vector<TraceRow> rows;
};

/// True iff the value history has length >= window and the spread of its
/// last `window` entries is at most tol relative to their magnitude.
inline bool value_converged(const std::vector<double>& history, int window,
                            double tol) {
    if (window < 1 || static_cast<long>(history.size()) < window) return false;
    double lo = history[history.size() - window];
    double hi = lo;
    for (std::size_t i = history.size() - window; i < history.size(); ++i) {
        lo = std::min(lo, history[i]);
        hi = std::max(hi, history[i]);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) return false;
    return (hi - lo) <= tol * std::max(1.0, std::abs(hi));
}

}  // namespace decpos

#endif
