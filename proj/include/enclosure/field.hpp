// Copyright 2026 The enclosure-kit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"

namespace enclosure
{
using Complex = std::complex<double>;
using DomainPtr = std::shared_ptr<GridDomain const>;

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

//---------------------------------------------------------------------------//
/*!
 * Values at every node of a grid, in flat node order.
 */
template<class T>
class GridFunction
{
  public:
    using value_type = T;

    explicit GridFunction(DomainPtr domain, T fill = T{})
        : domain_(std::move(domain)), values_(domain_->node_count(), fill)
    {
    }
    GridFunction(DomainPtr domain, std::vector<T> values);

    GridDomain const& domain() const { return *domain_; }
    DomainPtr const& domain_ptr() const { return domain_; }

    std::size_t size() const { return values_.size(); }
    T& operator[](std::size_t k) { return values_[k]; }
    T const& operator[](std::size_t k) const { return values_[k]; }
    std::span<T> values() { return values_; }
    std::span<T const> values() const { return values_; }

    bool all_finite() const
    {
        return std::all_of(values_.begin(), values_.end(), [](T v) { return is_finite(v); });
    }

  private:
    DomainPtr domain_;
    std::vector<T> values_;
};

template<class T>
GridFunction<T>::GridFunction(DomainPtr domain, std::vector<T> values)
    : domain_(std::move(domain)), values_(std::move(values))
{
    if (values_.size() != domain_->node_count())
    {
        throw std::invalid_argument("grid function size does not match the grid");
    }
}

using RealField = GridFunction<double>;
using ComplexField = GridFunction<Complex>;

//---------------------------------------------------------------------------//
enum class TraceRole
{
    dirichlet,
    neumann
};

/*!
 * Complex values at the enumerated boundary nodes.
 *
 * The represented value at node k is the unevaluated sum head[k] + tail[k].
 * Traces of split solutions (linear part plus a much smaller nonlinear
 * correction) carry the exact two-term sum so the correction survives next
 * to the linear response. Plain traces have an empty tail.
 */
class BoundaryTrace
{
  public:
    BoundaryTrace(DomainPtr domain, TraceRole role);
    BoundaryTrace(DomainPtr domain, TraceRole role, std::vector<Complex> head,
                  std::vector<Complex> tail = {});

    GridDomain const& domain() const { return *domain_; }
    DomainPtr const& domain_ptr() const { return domain_; }
    TraceRole role() const { return role_; }

    std::size_t size() const { return head_.size(); }
    std::span<Complex const> head() const { return head_; }
    std::span<Complex> head() { return head_; }
    //! Empty unless the trace is compensated.
    std::span<Complex const> tail() const { return tail_; }
    bool has_tail() const { return !tail_.empty(); }

    //! Rounded value head + tail.
    Complex operator[](std::size_t k) const
    {
        return tail_.empty() ? head_[k] : head_[k] + tail_[k];
    }

  private:
    DomainPtr domain_;
    TraceRole role_;
    std::vector<Complex> head_;
    std::vector<Complex> tail_;
};

}  // namespace enclosure
