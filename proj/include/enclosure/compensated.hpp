// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

namespace enclosure
{
//! Error-free transformation: a + b == sum + err exactly (Knuth).
struct TwoSum
{
    double sum;
    double err;
};

inline TwoSum two_sum(double a, double b)
{
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

/*!
 * Correctly cancelling sum of a handful of doubles.
 *
 * Builds a nonoverlapping expansion with error-free additions (Shewchuk's
 * grow-expansion), then sums its components from smallest to largest. Equal
 * terms of opposite sign cancel exactly, whatever the magnitudes of the
 * other terms.
 */
template<std::size_t N>
double exact_sum(std::array<double, N> const& terms)
{
    std::array<double, N> expansion{};
    std::size_t len = 0;
    for (double x : terms)
    {
        double q = x;
        std::size_t out = 0;
        for (std::size_t i = 0; i < len; ++i)
        {
            auto [s, e] = two_sum(q, expansion[i]);
            q = s;
            if (e != 0)
                expansion[out++] = e;
        }
        if (q != 0)
            expansion[out++] = q;
        len = out;
    }
    double total = 0;
    for (std::size_t i = 0; i < len; ++i)
        total += expansion[i];
    return total;
}

//! (a_head + a_tail) - (b_head + b_tail), rounded once.
inline double compensated_difference(double a_head, double a_tail, double b_head, double b_tail)
{
    return exact_sum(std::array<double, 4>{a_head, a_tail, -b_head, -b_tail});
}

inline std::complex<double> compensated_difference(std::complex<double> a_head,
                                                   std::complex<double> a_tail,
                                                   std::complex<double> b_head,
                                                   std::complex<double> b_tail)
{
    return {compensated_difference(a_head.real(), a_tail.real(), b_head.real(), b_tail.real()),
            compensated_difference(a_head.imag(), a_tail.imag(), b_head.imag(), b_tail.imag())};
}

}  // namespace enclosure
