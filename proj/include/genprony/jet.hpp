#ifndef GENPRONY_JET_HPP
#define GENPRONY_JET_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace genprony
{

///
/// Truncated Taylor expansion `a_0 + a_1 t + ... + a_{n-1} t^{n-1}` of a
/// function around a fixed point. Binary operations truncate to the shorter
/// operand, so a product of two length-n jets is exact to order n-1.
///
class Jet
{
public:
    using value_type = std::complex<double>;

    Jet() = default;

    explicit Jet(std::vector<value_type> coeffs) : m_c(std::move(coeffs))
    {
    }

    /// Constant jet of the given length.
    static Jet constant(value_type v, std::size_t length)
    {
        std::vector<value_type> c(length, value_type(0.0));
        if (length > 0)
        {
            c[0] = v;
        }
        return Jet(std::move(c));
    }

    /// The independent variable x = x0 + t.
    static Jet variable(double x0, std::size_t length)
    {
        Jet j = constant(x0, length);
        if (length > 1)
        {
            j.m_c[1] = 1.0;
        }
        return j;
    }

    std::size_t size() const
    {
        return m_c.size();
    }

    value_type operator[](std::size_t k) const
    {
        return m_c[k];
    }

    value_type& operator[](std::size_t k)
    {
        return m_c[k];
    }

    /// Value of the k-th derivative at the expansion point.
    value_type derivative_value(std::size_t k) const
    {
        double fact = 1.0;
        for (std::size_t i = 2; i <= k; ++i)
        {
            fact *= static_cast<double>(i);
        }
        return m_c[k] * fact;
    }

    /// Jet of d/dx, one coefficient shorter.
    Jet derivative() const
    {
        if (m_c.empty())
        {
            return Jet();
        }
        std::vector<value_type> d(m_c.size() - 1);
        for (std::size_t k = 0; k + 1 < m_c.size(); ++k)
        {
            d[k] = static_cast<double>(k + 1) * m_c[k + 1];
        }
        return Jet(std::move(d));
    }

    Jet truncated(std::size_t length) const
    {
        std::vector<value_type> c(m_c.begin(),
                                  m_c.begin() + static_cast<std::ptrdiff_t>(
                                                    std::min(length, size())));
        return Jet(std::move(c));
    }

    friend Jet operator+(const Jet& a, const Jet& b)
    {
        const std::size_t n = std::min(a.size(), b.size());
        std::vector<value_type> c(n);
        for (std::size_t k = 0; k < n; ++k)
        {
            c[k] = a.m_c[k] + b.m_c[k];
        }
        return Jet(std::move(c));
    }

    friend Jet operator-(const Jet& a, const Jet& b)
    {
        return a + (-b);
    }

    friend Jet operator-(const Jet& a)
    {
        Jet r = a;
        for (auto& v : r.m_c)
        {
            v = -v;
        }
        return r;
    }

    friend Jet operator*(const Jet& a, const Jet& b)
    {
        const std::size_t n = std::min(a.size(), b.size());
        std::vector<value_type> c(n, value_type(0.0));
        for (std::size_t i = 0; i < n; ++i)
        {
            for (std::size_t j = 0; i + j < n; ++j)
            {
                c[i + j] += a.m_c[i] * b.m_c[j];
            }
        }
        return Jet(std::move(c));
    }

    friend Jet operator*(value_type s, const Jet& a)
    {
        Jet r = a;
        for (auto& v : r.m_c)
        {
            v *= s;
        }
        return r;
    }

    friend Jet operator+(value_type s, const Jet& a)
    {
        Jet r = a;
        if (!r.m_c.empty())
        {
            r.m_c[0] += s;
        }
        return r;
    }

    friend Jet reciprocal(const Jet& a)
    {
        const std::size_t n = a.size();
        if (n == 0)
        {
            return Jet();
        }
        if (a.m_c[0] == value_type(0.0))
        {
            throw std::domain_error("Jet reciprocal of a zero constant term");
        }
        std::vector<value_type> b(n);
        b[0] = 1.0 / a.m_c[0];
        for (std::size_t k = 1; k < n; ++k)
        {
            value_type acc = 0.0;
            for (std::size_t j = 1; j <= k; ++j)
            {
                acc += a.m_c[j] * b[k - j];
            }
            b[k] = -acc * b[0];
        }
        return Jet(std::move(b));
    }

    friend Jet operator/(const Jet& a, const Jet& b)
    {
        return a * reciprocal(b);
    }

    friend Jet exp(const Jet& a)
    {
        const std::size_t n = a.size();
        if (n == 0)
        {
            return Jet();
        }
        std::vector<value_type> b(n);
        b[0] = std::exp(a.m_c[0]);
        for (std::size_t k = 1; k < n; ++k)
        {
            value_type acc = 0.0;
            for (std::size_t j = 1; j <= k; ++j)
            {
                acc += static_cast<double>(j) * a.m_c[j] * b[k - j];
            }
            b[k] = acc / static_cast<double>(k);
        }
        return Jet(std::move(b));
    }

    friend Jet sin(const Jet& a)
    {
        return sin_cos(a).first;
    }

    friend Jet cos(const Jet& a)
    {
        return sin_cos(a).second;
    }

private:
    static std::pair<Jet, Jet> sin_cos(const Jet& a)
    {
        const std::size_t n = a.size();
        std::vector<value_type> s(n);
        std::vector<value_type> c(n);
        if (n > 0)
        {
            s[0] = std::sin(a.m_c[0]);
            c[0] = std::cos(a.m_c[0]);
        }
        for (std::size_t k = 1; k < n; ++k)
        {
            value_type as = 0.0;
            value_type ac = 0.0;
            for (std::size_t j = 1; j <= k; ++j)
            {
                const value_type ja = static_cast<double>(j) * a.m_c[j];
                as += ja * c[k - j];
                ac += ja * s[k - j];
            }
            s[k] = as / static_cast<double>(k);
            c[k] = -ac / static_cast<double>(k);
        }
        return {Jet(std::move(s)), Jet(std::move(c))};
    }

    std::vector<value_type> m_c;
};

} // namespace genprony

#endif // GENPRONY_JET_HPP
