#include "quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace iho::quad {

namespace {
constexpr unsigned max_depth = 15;
}

double integrate(std::function<double(double)> const& f, double a, double b, double rel_tol)
{
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, rel_tol);
}

cplx integrate_complex(std::function<cplx(double)> const& f, double a, double b, double rel_tol)
{
    using boost::math::quadrature::gauss_kronrod;
    double const re = gauss_kronrod<double, 61>::integrate(
        [&](double x) { return f(x).real(); }, a, b, max_depth, rel_tol);
    double const im = gauss_kronrod<double, 61>::integrate(
        [&](double x) { return f(x).imag(); }, a, b, max_depth, rel_tol);
    return {re, im};
}

}  // namespace iho::quad
