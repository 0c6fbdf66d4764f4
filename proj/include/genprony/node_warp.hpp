#ifndef GENPRONY_NODE_WARP_HPP
#define GENPRONY_NODE_WARP_HPP

#include <cstddef>
#include <utility>
#include <vector>

namespace genprony
{

enum class WarpKind
{
    kLinear, ///< piecewise-linear interpolation of (y_l, l h)
    kCubic,  ///< monotone cubic Hermite (Fritsch-Carlson slopes)
};

///
/// Strictly increasing map Phi with Phi(y_l) = l h on a set of increasing
/// nodes y_0 < ... < y_{K-1}. Defined on [y_0, y_{K-1}]; the inverse on
/// [0, (K-1) h].
///
class NodeWarp
{
public:
    /// Throws std::invalid_argument for fewer than two nodes, non-increasing
    /// nodes or h <= 0.
    NodeWarp(std::vector<double> nodes, double h,
             WarpKind kind = WarpKind::kLinear);

    double operator()(double y) const;
    double inverse(double t) const;

    const std::vector<double>& nodes() const
    {
        return m_nodes;
    }

    double step() const
    {
        return m_h;
    }

    WarpKind kind() const
    {
        return m_kind;
    }

private:
    std::size_t segment(double y) const;

    std::vector<double> m_nodes;
    std::vector<double> m_slopes; // dPhi/dy at nodes, cubic only
    double m_h;
    WarpKind m_kind;
};

inline NodeWarp build_node_warp(std::vector<double> nodes, double h,
                                WarpKind kind = WarpKind::kLinear)
{
    return NodeWarp(std::move(nodes), h, kind);
}

} // namespace genprony

#endif // GENPRONY_NODE_WARP_HPP
