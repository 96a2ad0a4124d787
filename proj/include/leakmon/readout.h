// Copyright 2026 The leakmon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef _LEAKMON_READOUT_H
#define _LEAKMON_READOUT_H

#include <array>

namespace leakmon {

/// One-dimensional Gaussian readout response of the states |0>, |1>, |2>.
struct IqModel {
    std::array<double, 3> mu{0, 0, 0};
    double sigma = 1;

    void validate() const;
    /// Normal density of state m at I.
    double density(int m, double I) const;
    /// Log density of state m at I, up to a constant shared by all states.
    double log_density(int m, double I) const;
};

/// Discrimination fidelity of two equal-width Gaussians with the given SNR.
double fidelity_from_snr(double snr);

/// Inverse of fidelity_from_snr on [0.5, 1).
double snr_for_fidelity(double fidelity);

/// Model with sigma = 1 and means placed so the 0/1 and 1/2 fidelities are as given.
IqModel build_model(double f01, double f12);

/// Posterior probabilities of the three states under equal priors.
std::array<double, 3> state_posteriors(double I, const IqModel &model);

/// Posterior probability of |2> under equal priors.
double leak_probability(double I, const IqModel &model);

}  // namespace leakmon

#endif
