#pragma once

// Exact discrete samplers tuned for the simulator's hot loop.
//
// Poisson: multiplication of uniforms below mean 10, Hormann's transformed
// rejection with squeeze (PTRS) above. Binomial: sequential inversion when the
// mean is small, the standard library otherwise.

#include "reserve/random.hpp"

namespace reserve {

long long sample_poisson(double mean, Engine& rng);
long long sample_binomial(long long trials, double p, Engine& rng);

}  // namespace reserve
