#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "genprony/errors.hpp"
#include "genprony/numerics.hpp"
#include "oracles.hpp"

using namespace genprony;
using namespace std::complex_literals;

TEST_SUITE("numerics")
{

TEST_CASE("hankel of a constant sequence")
{
    const CMatrix h = build_hankel(CVector::Ones(4), 2, 3);
    CHECK(h.rows() == 2);
    CHECK(h.cols() == 3);
    CHECK(h == CMatrix::Ones(2, 3));
}

TEST_CASE("hankel entries are values[m + k]")
{
    CVector v(5);
    v << 0, 1, 2, 3, 4;
    const CMatrix h = build_hankel(HankelSpec{v, 3, 3});
    for (Index m = 0; m < 3; ++m)
        for (Index k = 0; k < 3; ++k)
            CHECK(h(m, k) == Complex(static_cast<double>(m + k)));
}

TEST_CASE("hankel shape for N = 15, L = 10")
{
    const CMatrix h = build_hankel(CVector::Random(30), 30 - 10, 11);
    CHECK(h.rows() == 20);
    CHECK(h.cols() == 11);
}

TEST_CASE("hankel anti-diagonals reproduce the sequence")
{
    const CVector v = CVector::Random(9);
    const CMatrix h = build_hankel(v, 4, 6);
    for (Index m = 0; m < 4; ++m)
        for (Index k = 0; k < 6; ++k)
            CHECK(h(m, k) == v(m + k));
}

TEST_CASE("hankel rejects a sequence that is too short")
{
    CHECK_THROWS_AS(build_hankel(CVector::Ones(4), 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_hankel(CVector::Ones(4), 0, 3), std::invalid_argument);
}

TEST_CASE("svd of trivial matrices")
{
    const SvdResult z = svd(CMatrix::Zero(3, 2));
    CHECK(z.sigma.maxCoeff() == 0.0);
    const SvdResult id = svd(CMatrix::Identity(3, 3));
    for (Index i = 0; i < 3; ++i)
        CHECK(id.sigma(i) == doctest::Approx(1.0));
}

TEST_CASE("svd reconstructs and sorts")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial)
    {
        const Index r = 3 + trial % 5;
        const Index c = 2 + trial % 7;
        CMatrix a(r, c);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < c; ++j)
                a(i, j) = oracle::uniform_complex(rng, -1, 1);
        const SvdResult s = svd(a);
        const CMatrix back = s.U * s.sigma.cast<Complex>().asDiagonal() * s.W;
        CHECK((back - a).norm() <= 1e-10 * a.norm());
        for (Index i = 1; i < s.sigma.size(); ++i)
            CHECK(s.sigma(i) <= s.sigma(i - 1));
        CHECK(s.sigma.minCoeff() >= 0.0);
    }
}

TEST_CASE("svd rejects non-finite input")
{
    CMatrix a = CMatrix::Ones(2, 2);
    a(1, 0) = std::nan("");
    CHECK_THROWS_AS(svd(a), std::invalid_argument);
}

TEST_CASE("exact two-term hankel has rank two")
{
    CVector c(2), z(2);
    c << 1, 1;
    z << 0.5, 2.0;
    const CVector f = oracle::power_sum(c, z, 8);
    const SvdResult s = svd(build_hankel(f, 6, 3));
    CHECK(s.sigma(2) <= 1e-10 * s.sigma(0));
    CHECK(numerical_rank(s.sigma, 1e-8 * s.sigma(0)).rank == 2);
}

TEST_CASE("numerical rank counts values above the threshold")
{
    RVector s(3);
    s << 5, 3, 1e-12;
    const RankEstimate r = numerical_rank(s, 1e-8);
    CHECK(r.rank == 2);
    CHECK(r.gap_ratio == doctest::Approx(3e12));
    RVector all(3);
    all << 5, 3, 1;
    CHECK(numerical_rank(all, 1e-8).rank == 3);
    CHECK(std::isinf(numerical_rank(all, 1e-8).gap_ratio));
    CHECK(numerical_rank(s, 0.5, RankMode::kRelative).rank == 2);
    CHECK(numerical_rank(s, 0.7, RankMode::kRelative).rank == 1);
    CHECK_THROWS_AS(numerical_rank(s, 0.0), std::invalid_argument);
}

TEST_CASE("polynomial roots of small polynomials")
{
    CVector p1(2);
    p1 << -1, 1;
    const CVector r1 = polynomial_roots(PronyPolynomial(p1));
    CHECK(std::abs(r1(0) - 1.0) < 1e-14);

    CVector p2(3);
    p2 << 6, -5, 1;
    const CVector r2 = polynomial_roots(PronyPolynomial(p2));
    CVector expected(2);
    expected << 2, 3;
    CHECK(oracle::matched_error(r2, expected) < 1e-12);
}

TEST_CASE("polynomial rejects degree zero and non-monic input")
{
    CHECK_THROWS_AS(PronyPolynomial(CVector::Ones(1)), std::invalid_argument);
    CVector p(2);
    p << 1, 2;
    CHECK_THROWS_AS(PronyPolynomial{p}, std::invalid_argument);
    CHECK(PronyPolynomial::normalized(p).coefficients()(0) == Complex(0.5));
}

TEST_CASE("roots of expanded random polynomials")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Index m = 1 + trial % 6;
        CVector roots(m);
        bool separated = false;
        while (!separated)
        {
            for (Index j = 0; j < m; ++j)
                roots(j) = oracle::uniform_complex(rng, -1.5, 1.5);
            separated = true;
            for (Index i = 0; i < m; ++i)
                for (Index j = i + 1; j < m; ++j)
                    separated = separated && std::abs(roots(i) - roots(j)) >= 0.1;
        }
        // expand by hand: coefficients of prod (z - r_j)
        std::vector<Complex> c{1.0};
        for (Index j = 0; j < m; ++j)
        {
            std::vector<Complex> next(c.size() + 1, 0.0);
            for (std::size_t k = 0; k < c.size(); ++k)
            {
                next[k + 1] += c[k];
                next[k] -= roots(j) * c[k];
            }
            c = next;
        }
        const CVector coeffs = Eigen::Map<CVector>(c.data(), static_cast<Index>(c.size()));
        const PronyPolynomial p(coeffs);
        CHECK((p.coefficients() - PronyPolynomial::from_roots(roots).coefficients()).norm() < 1e-12);
        const CVector found = polynomial_roots(p);
        CHECK(oracle::matched_error(found, roots) < 1e-9);
        for (Index j = 0; j < m; ++j)
            CHECK(std::abs(p(found(j))) <= 1e-8 * std::max(1.0, coeffs.norm()));
    }
}

TEST_CASE("vandermonde least squares")
{
    CVector z1(1), pre1(1);
    z1 << 1;
    pre1 << 1;
    const VandermondeFit f1 = vandermonde_lsq(z1, CVector::Constant(4, 4.0), pre1);
    CHECK(std::abs(f1.coefficients(0) - 4.0) < 1e-14);
    CHECK(f1.residual < 1e-14);

    CVector z(2), pre(2), rhs(4);
    z << 2, 3;
    pre << 1, 1;
    rhs << 2, 5, 13, 35;
    const VandermondeFit f = vandermonde_lsq(z, rhs, pre);
    CHECK(std::abs(f.coefficients(0) - 1.0) < 1e-10);
    CHECK(std::abs(f.coefficients(1) - 1.0) < 1e-10);
    CHECK(f.residual <= 1e-10);
}

TEST_CASE("vandermonde least squares with offset prefactors")
{
    // f_l = sum c_j exp(alpha_j (h l + g0)) -> prefactor z_j^(g0 / h)
    CVector alpha(3), c(3);
    alpha << -0.2 + 0.5i, 0.1, -1.0 - 0.3i;
    c << 1.0 - 1.0i, 2.0, 0.5i;
    const double h = 0.3;
    const double g0 = 1.7;
    CVector z(3), pre(3), rhs = CVector::Zero(12);
    for (Index j = 0; j < 3; ++j)
    {
        z(j) = std::exp(alpha(j) * h);
        pre(j) = std::exp(alpha(j) * g0);
        for (Index l = 0; l < 12; ++l)
            rhs(l) += c(j) * std::exp(alpha(j) * (h * static_cast<double>(l) + g0));
    }
    const VandermondeFit f = vandermonde_lsq(z, rhs, pre);
    CHECK((f.coefficients - c).norm() < 1e-12);
}

TEST_CASE("vandermonde least squares rejects repeated nodes")
{
    CVector z(2), pre(2);
    z << 1.0, 1.0 + 1e-13;
    pre << 1, 1;
    CHECK_THROWS_AS(vandermonde_lsq(z, CVector::Ones(4), pre), IllPosedError);
}

TEST_CASE("log branch")
{
    CHECK(std::abs(log_branch(1.0, 1.0)) == 0.0);
    CHECK(std::abs(log_branch(std::exp(1i * std::numbers::pi / 4.0), 1.0) -
                   1i * std::numbers::pi / 4.0) < 1e-15);
    CHECK(std::abs(log_branch(std::exp(-0.5), 0.5) - (-1.0)) < 1e-15);
    CHECK_THROWS_AS(log_branch(0.0, 1.0), std::invalid_argument);
    // boundary of the strip belongs to the upper end for both signs of h
    CHECK(log_branch(-1.0, 1.0).imag() == doctest::Approx(std::numbers::pi));
    CHECK(log_branch(-1.0, -1.0).imag() == doctest::Approx(std::numbers::pi));
}

TEST_CASE("log branch inverts exponentiation inside the strip")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.999, 0.999);
    for (int trial = 0; trial < 200; ++trial)
    {
        const double h = (trial % 2 ? 1.0 : -1.0) * (0.05 + std::abs(u(rng)));
        const Complex alpha(3.0 * u(rng), u(rng) * std::numbers::pi / std::abs(h));
        CHECK(std::abs(log_branch(std::exp(alpha * h), h) - alpha) <= 1e-12 * (1 + std::abs(alpha)));
    }
}

TEST_CASE("greedy matching")
{
    CVector a(3), b(3);
    a << 0.0, 1.0, 2.0;
    b << 2.1, -0.1, 0.95;
    const auto m = greedy_match(a, b);
    REQUIRE(m.size() == 3);
    CHECK(m[0] == std::pair<Index, Index>{0, 1});
    CHECK(m[1] == std::pair<Index, Index>{1, 2});
    CHECK(m[2] == std::pair<Index, Index>{2, 0});
    CHECK(matched_max_error(a, b) == doctest::Approx(0.1));

    // permutation invariance
    CVector b2(3);
    b2 << b(2), b(0), b(1);
    CHECK(matched_max_error(a, b2) == doctest::Approx(matched_max_error(a, b)));
    CHECK(std::isinf(matched_max_error(a, b.head(2))));
}

} // TEST_SUITE
