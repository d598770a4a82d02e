#include "noma/rng.hpp"

#include <cmath>

namespace noma {

double Rng::exponential() noexcept
{
    return -std::log(uniform());
}

double Rng::gamma_integer(int shape) noexcept
{
    // product of uniforms, one log; shapes here are small
    double prod = 1.0;
    double sum = 0.0;
    for (int i = 0; i < shape; ++i) {
        prod *= uniform();
        if (prod < 1e-280) {
            sum -= std::log(prod);
            prod = 1.0;
        }
    }
    return sum - std::log(prod);
}

} // namespace noma
