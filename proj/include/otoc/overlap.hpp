#pragma once

#include "otoc/rbm.hpp"
#include "otoc/sampler.hpp"

namespace otoc {

// Normalized overlap <Psi2|Psi1> / sqrt(<Psi1|Psi1><Psi2|Psi2>) from two
// one-sided Monte Carlo runs:
//   v1 = <Psi1|Psi2>/<Psi1|Psi1>  (sampling |Psi1|^2)
//   v2 = <Psi2|Psi1>/<Psi2|Psi2>  (sampling |Psi2|^2)
// so that sqrt(v1* v2) is the overlap. The square root is taken as
// sqrt(|v1||v2|) with the phase given by the variance-weighted circular
// mean of arg(v1*) and arg(v2), which share the phase of <Psi2|Psi1>;
// this removes the principal-branch ambiguity entirely.
struct OverlapEstimate {
    Complex value;
    double std_error = 0.0;  // chain-wise jackknife
    Complex v1;
    Complex v2;
};

OverlapEstimate overlap(const RbmState& psi1, const RbmState& psi2, const SamplerConfig& cfg,
                        int n_threads = 0);

}  // namespace otoc
