/*
   Copyright 2026 The recdel Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "recdel/series.hpp"

#include <cmath>

#include "recdel/exact.hpp"

namespace recdel {

std::string_view to_string(GfName name) noexcept
{
    switch (name) {
    case GfName::P0:
        return "P0";
    case GfName::P1:
        return "P1";
    case GfName::mu:
        return "mu";
    case GfName::mu2:
        return "mu2";
    case GfName::H:
        return "H";
    case GfName::h:
        return "h";
    }
    return "?";
}

GfName parse_gf_name(std::string_view name)
{
    for (GfName g : {GfName::P0, GfName::P1, GfName::mu, GfName::mu2, GfName::H, GfName::h}) {
        if (to_string(g) == name) {
            return g;
        }
    }
    throw std::domain_error("unknown generating function '" + std::string(name)
                            + "' (expected P0, P1, mu, mu2, H or h)");
}

double root_gf_value(const ProcessParams& params, double z)
{
    const double p = params.p();
    const double q = params.q();
    const double disc = 1.0 - 4.0 * p * q * z * z;
    if (disc < 0) {
        throw std::domain_error("root_gf_value: z lies beyond the branch points");
    }
    return 2.0 / (1.0 - 2.0 * q * z + std::sqrt(disc));
}

double bivariate_gf_value(const ProcessParams& params, double z, double u)
{
    const double p = params.p();
    const double q = params.q();
    const double num = q * (1.0 - u) * z * root_gf_value(params, z) - u;
    const double den = q * z - u * (1.0 - p * u * z);
    const double scale = std::fabs(q * z) + std::fabs(u) + std::fabs(p * u * u * z);
    if (std::fabs(den) <= 1e-14 * std::max(scale, 1e-300)) {
        throw std::domain_error("bivariate_gf_value: denominator vanishes at (z, u)");
    }
    return num / den;
}

double bivariate_check(const ProcessParams& params, double z, double u, std::size_t order)
{
    if (std::fabs(z) > 0.5 || std::fabs(u) > 1.0) {
        throw std::domain_error("bivariate_check: needs |z| <= 1/2 and |u| <= 1");
    }
    const double closed = bivariate_gf_value(params, z, u);

    StratumChain<double> chain(params);
    Accumulator<double> total;
    double zn = 1.0;
    for (std::size_t n = 0; n <= order; ++n) {
        if (n > 0) {
            chain.advance();
            zn *= z;
        }
        // Horner in u over the row of time n.
        const auto& probs = chain.current().probs;
        double row = 0.0;
        for (std::size_t k = probs.size(); k-- > 0;) {
            row = row * u + probs[k];
        }
        total.add(row * zn);
    }
    return std::fabs(total.value() - closed);
}

} // namespace recdel
