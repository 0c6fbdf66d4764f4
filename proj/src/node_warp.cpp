#include "genprony/node_warp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "genprony/errors.hpp"

namespace genprony
{

NodeWarp::NodeWarp(std::vector<double> nodes, double h, WarpKind kind)
    : m_nodes(std::move(nodes)), m_h(h), m_kind(kind)
{
    if (m_nodes.size() < 2)
    {
        throw std::invalid_argument("NodeWarp: at least two nodes required");
    }
    if (!(h > 0.0))
    {
        throw std::invalid_argument("NodeWarp: step must be positive");
    }
    for (std::size_t i = 0; i < m_nodes.size(); ++i)
    {
        if (!std::isfinite(m_nodes[i]))
        {
            throw std::invalid_argument("NodeWarp: non-finite node " +
                                        std::to_string(i));
        }
        if (i > 0 && !(m_nodes[i] > m_nodes[i - 1]))
        {
            throw std::invalid_argument(
                "NodeWarp: nodes must be strictly increasing (node " +
                std::to_string(i) + ")");
        }
    }
    if (m_kind == WarpKind::kCubic)
    {
        const std::size_t n = m_nodes.size();
        std::vector<double> secant(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k)
        {
            secant[k] = m_h / (m_nodes[k + 1] - m_nodes[k]);
        }
        m_slopes.resize(n);
        m_slopes[0]     = secant[0];
        m_slopes[n - 1] = secant[n - 2];
        for (std::size_t k = 1; k + 1 < n; ++k)
        {
            m_slopes[k] = 0.5 * (secant[k - 1] + secant[k]);
        }
        // Fritsch-Carlson limiter
        for (std::size_t k = 0; k + 1 < n; ++k)
        {
            const double a = m_slopes[k] / secant[k];
            const double b = m_slopes[k + 1] / secant[k];
            const double r = a * a + b * b;
            if (r > 9.0)
            {
                const double tau = 3.0 / std::sqrt(r);
                m_slopes[k]     = tau * a * secant[k];
                m_slopes[k + 1] = tau * b * secant[k];
            }
        }
    }
}

std::size_t NodeWarp::segment(double y) const
{
    const auto it = std::upper_bound(m_nodes.begin(), m_nodes.end(), y);
    const auto idx = static_cast<std::size_t>(it - m_nodes.begin());
    return std::clamp<std::size_t>(idx == 0 ? 0 : idx - 1, 0, m_nodes.size() - 2);
}

double NodeWarp::operator()(double y) const
{
    const double lo = m_nodes.front();
    const double hi = m_nodes.back();
    const double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (!(y >= lo - tol && y <= hi + tol))
    {
        throw DomainError("NodeWarp: point outside the node range");
    }
    y = std::clamp(y, lo, hi);
    const std::size_t k = segment(y);
    const double w = m_nodes[k + 1] - m_nodes[k];
    const double t = (y - m_nodes[k]) / w;
    const double p0 = m_h * static_cast<double>(k);
    if (m_kind == WarpKind::kLinear)
    {
        return p0 + m_h * t;
    }
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * p0 + h10 * w * m_slopes[k] + h01 * (p0 + m_h) +
           h11 * w * m_slopes[k + 1];
}

double NodeWarp::inverse(double t) const
{
    const double tmax = m_h * static_cast<double>(m_nodes.size() - 1);
    const double tol = 1e-12 * std::max(1.0, tmax);
    if (!(t >= -tol && t <= tmax + tol))
    {
        throw DomainError("NodeWarp: value outside [0, (K-1) h]");
    }
    t = std::clamp(t, 0.0, tmax);
    const auto k = std::min(static_cast<std::size_t>(t / m_h), m_nodes.size() - 2);
    if (m_kind == WarpKind::kLinear)
    {
        const double frac = t / m_h - static_cast<double>(k);
        return m_nodes[k] + frac * (m_nodes[k + 1] - m_nodes[k]);
    }
    double a = m_nodes[k];
    double b = m_nodes[k + 1];
    for (int it = 0; it < 200 && b - a > 1e-16 * std::max(1.0, std::abs(a)); ++it)
    {
        const double mid = 0.5 * (a + b);
        if ((*this)(mid) < t)
        {
            a = mid;
        }
        else
        {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

} // namespace genprony
