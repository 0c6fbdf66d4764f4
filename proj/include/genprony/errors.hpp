#ifndef GENPRONY_ERRORS_HPP
#define GENPRONY_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace genprony
{

///
/// A linear system or decomposition is too ill-conditioned (or rank
/// deficient) for its solution to be trusted. Carries the condition estimate
/// that triggered the failure, or 0 when none applies.
///
class IllPosedError : public std::runtime_error
{
public:
    explicit IllPosedError(const std::string& what, double condition = 0.0)
        : std::runtime_error(what), m_condition(condition)
    {
    }

    double condition() const noexcept
    {
        return m_condition;
    }

private:
    double m_condition;
};

/// The ESPRIT pencil or a Gauss-Newton normal matrix is numerically singular.
class DegenerateError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// An operation needs model derivatives that the model does not provide.
class CapabilityError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

///
/// A point falls outside the model's validity interval. `index()` names the
/// first offending sample when the failure concerns a sequence.
///
class DomainError : public std::domain_error
{
public:
    explicit DomainError(const std::string& what,
                         std::ptrdiff_t index = -1)
        : std::domain_error(what), m_index(index)
    {
    }

    std::ptrdiff_t index() const noexcept
    {
        return m_index;
    }

private:
    std::ptrdiff_t m_index;
};

/// |H(x)| is too small to divide by when normalizing samples.
class DivisionHazardError : public DomainError
{
public:
    using DomainError::DomainError;
};

} // namespace genprony

#endif // GENPRONY_ERRORS_HPP
