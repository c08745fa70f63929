#include "twoway/rng.hpp"

#include "twoway/math.hpp"

namespace twoway {

double RngStream::next_normal() {
    return normal_quantile(next_unit());
}

}  // namespace twoway
