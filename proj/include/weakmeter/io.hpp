// Copyright 2026 The weakmeter authors
//
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

#pragma once

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

#include "weakmeter/catsmile.hpp"
#include "weakmeter/core.hpp"
#include "weakmeter/pointer.hpp"

namespace weakmeter {

// Full-precision decimal form (17 significant digits round-trips a double).
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Parses complex literals of the form "re" or "re±imi", e.g. "0.5-0.5i",
// "1e-3+2.5i". A bare trailing "i" is accepted as a unit imaginary part
// ("1+i"), and "<num>i" as a pure imaginary number.
inline Complex parse_complex(std::string_view text) {
    const auto fail = [&]() -> Complex {
        throw std::invalid_argument("parse_complex: cannot parse '" + std::string(text) +
                                    "' (expected \"re\" or \"re±imi\")");
    };
    std::string s(text);
    std::erase_if(s, [](unsigned char c) { return std::isspace(c); });
    if (s.empty()) return fail();

    const char* begin = s.c_str();
    char* end = nullptr;
    const double first = std::strtod(begin, &end);
    if (end == begin) return fail();

    if (*end == '\0') {
        if (!std::isfinite(first)) return fail();
        return Complex(first, 0.0);
    }
    // "<num>i": a pure imaginary literal.
    if (end[0] == 'i' && end[1] == '\0') {
        if (!std::isfinite(first)) return fail();
        return Complex(0.0, first);
    }
    // "re±i" shorthand for a unit imaginary part.
    if ((end[0] == '+' || end[0] == '-') && end[1] == 'i' && end[2] == '\0') {
        if (!std::isfinite(first)) return fail();
        return Complex(first, end[0] == '+' ? 1.0 : -1.0);
    }
    const char* imag_begin = end;
    if (*imag_begin != '+' && *imag_begin != '-') return fail();
    char* imag_end = nullptr;
    const double second = std::strtod(imag_begin, &imag_end);
    if (imag_end == imag_begin || imag_end[0] != 'i' || imag_end[1] != '\0') return fail();
    if (!std::isfinite(first) || !std::isfinite(second)) return fail();
    return Complex(first, second);
}

// --------------------------------- JSON -------------------------------------

inline nlohmann::json complex_to_json(Complex z) {
    return nlohmann::json{{"re", z.real()}, {"im", z.imag()}};
}

// A state is serialized as four reals: [c1.re, c1.im, c2.re, c2.im].
inline nlohmann::json state_to_json(const TwoLevelState& s) {
    return nlohmann::json::array({s.c1.real(), s.c1.imag(), s.c2.real(), s.c2.imag()});
}

// Two-qubit states serialize as eight reals over the (L+, L-, R+, R-) order.
inline nlohmann::json state_to_json(const FourLevelState& s) {
    nlohmann::json out = nlohmann::json::array();
    for (const Complex& c : s.amps) {
        out.push_back(c.real());
        out.push_back(c.imag());
    }
    return out;
}

// --------------------------------- CSV --------------------------------------

// Rows of `f,P,B1sq,B2sq,interference`. The component arrays must share the
// distribution's grid.
inline void write_distribution_csv(std::ostream& out, const PointerDistribution& dist,
                                   const DistributionComponents& comps) {
    if (comps.grid.n_points != dist.grid.n_points || comps.grid.f_min != dist.grid.f_min ||
        comps.grid.f_max != dist.grid.f_max) {
        throw std::invalid_argument("write_distribution_csv: component grid mismatch");
    }
    out << "f,P,B1sq,B2sq,interference\n";
    for (int k = 0; k < dist.grid.n_points; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        out << format_full(dist.grid.point(k)) << ',' << format_full(dist.values[i]) << ','
            << format_full(comps.direct1[i]) << ',' << format_full(comps.direct2[i]) << ','
            << format_full(comps.interference[i]) << '\n';
    }
}

}  // namespace weakmeter
