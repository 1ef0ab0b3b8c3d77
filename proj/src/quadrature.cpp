#include "sfem/quadrature.hpp"

#include "sfem/errors.hpp"

#include <fmt/format.h>

namespace sfem::quadrature {

namespace {

// Orbit of (a, a, 1 - 2a) under permutation.
void add_orbit3(QuadratureRule& rule, double a, double w)
{
    const double b = 1.0 - 2.0 * a;
    rule.points.push_back({b, a, a});
    rule.points.push_back({a, b, a});
    rule.points.push_back({a, a, b});
    rule.weights.insert(rule.weights.end(), 3, w);
}

// Orbit of (a, b, c) with distinct entries.
void add_orbit6(QuadratureRule& rule, double a, double b, double w)
{
    const double c = 1.0 - a - b;
    rule.points.push_back({a, b, c});
    rule.points.push_back({b, c, a});
    rule.points.push_back({c, a, b});
    rule.points.push_back({b, a, c});
    rule.points.push_back({a, c, b});
    rule.points.push_back({c, b, a});
    rule.weights.insert(rule.weights.end(), 6, w);
}

QuadratureRule make_centroid()
{
    QuadratureRule r;
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(1.0);
    r.degree = 1;
    return r;
}

QuadratureRule make_edge_midpoints()
{
    QuadratureRule r;
    add_orbit3(r, 0.5, 1.0 / 3.0);
    r.degree = 2;
    return r;
}

// Dunavant (1985) degree-4 and degree-6 rules.
QuadratureRule make_six_point()
{
    QuadratureRule r;
    add_orbit3(r, 0.445948490915964886318329253883, 0.223381589678011465944907843300);
    add_orbit3(r, 0.091576213509770743459571463402, 0.109951743655321867388425489951);
    r.degree = 4;
    return r;
}

QuadratureRule make_twelve_point()
{
    QuadratureRule r;
    add_orbit3(r, 0.249286745170910421291638553107, 0.116786275726379366030690271270);
    add_orbit3(r, 0.063089014491502228340331602870, 0.050844906370206816920936809106);
    add_orbit6(r, 0.053145049844816947353249671631, 0.310352451033784405416607733956,
               0.082851075618373575193553456421);
    r.degree = 6;
    return r;
}

} // namespace

const QuadratureRule& centroid()
{
    static const QuadratureRule rule = make_centroid();
    return rule;
}

const QuadratureRule& edge_midpoints()
{
    static const QuadratureRule rule = make_edge_midpoints();
    return rule;
}

const QuadratureRule& six_point()
{
    static const QuadratureRule rule = make_six_point();
    return rule;
}

const QuadratureRule& twelve_point()
{
    static const QuadratureRule rule = make_twelve_point();
    return rule;
}

const QuadratureRule& of_degree(int degree)
{
    if (degree <= 1) return centroid();
    if (degree == 2) return edge_midpoints();
    if (degree <= 4) return six_point();
    if (degree <= 6) return twelve_point();
    throw DomainError(fmt::format("no triangle rule of degree {}", degree));
}

} // namespace sfem::quadrature
