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

#include "leakmon/readout.h"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace leakmon {

void IqModel::validate() const {
    if (!(sigma > 0)) {
        throw std::domain_error("readout sigma must be positive");
    }
}

double IqModel::log_density(int m, double I) const {
    double z = (I - mu[m]) / sigma;
    return -0.5 * z * z;
}

double IqModel::density(int m, double I) const {
    return std::exp(log_density(m, I)) / (sigma * std::sqrt(2 * std::numbers::pi));
}

double fidelity_from_snr(double snr) {
    if (snr < 0) {
        throw std::domain_error("snr must be non-negative");
    }
    return 1 - 0.5 * std::erfc(snr / std::numbers::sqrt2);
}

double snr_for_fidelity(double fidelity) {
    if (!(fidelity >= 0.5 && fidelity < 1)) {
        throw std::domain_error("fidelity must lie in [0.5, 1)");
    }
    if (fidelity == 0.5) {
        return 0;
    }
    return std::numbers::sqrt2 * boost::math::erfc_inv(2 * (1 - fidelity));
}

IqModel build_model(double f01, double f12) {
    IqModel model;
    model.sigma = 1;
    model.mu[0] = 0;
    model.mu[1] = 2 * snr_for_fidelity(f01);
    model.mu[2] = model.mu[1] + 2 * snr_for_fidelity(f12);
    return model;
}

std::array<double, 3> state_posteriors(double I, const IqModel &model) {
    std::array<double, 3> l;
    for (int m = 0; m < 3; m++) {
        l[m] = model.log_density(m, I);
    }
    double top = *std::max_element(l.begin(), l.end());
    double norm = 0;
    for (auto &v : l) {
        v = std::exp(v - top);
        norm += v;
    }
    for (auto &v : l) {
        v /= norm;
    }
    return l;
}

double leak_probability(double I, const IqModel &model) {
    return state_posteriors(I, model)[2];
}

}  // namespace leakmon
