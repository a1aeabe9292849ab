#include "hjbr/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hjbr {

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

}  // namespace

DomainSpec::DomainSpec(double alpha_, int dim_) : alpha(alpha_), dim(dim_) {
    if (!(alpha > 0.0)) throw std::invalid_argument("domain: alpha must be > 0");
    if (dim < 1) throw std::invalid_argument("domain: dim must be >= 1");
}

double phi_eval(const DomainSpec& domain, double x) {
    const double a = domain.alpha;
    const double r2 = x * x;
    return std::exp(a * a - r2) * (r2 - a * a) / (2.0 * a);
}

double phi_eval(const DomainSpec& domain, std::span<const double> x) {
    const double a = domain.alpha;
    const double r2 = norm2(x);
    return std::exp(a * a - r2) * (r2 - a * a) / (2.0 * a);
}

double phi_grad1(const DomainSpec& domain, double x) {
    const double a = domain.alpha;
    const double r2 = x * x;
    return (x / a) * std::exp(a * a - r2) * (1.0 + a * a - r2);
}

std::vector<double> phi_grad(const DomainSpec& domain, std::span<const double> x) {
    const double a = domain.alpha;
    const double r2 = norm2(x);
    const double scale = std::exp(a * a - r2) * (1.0 + a * a - r2) / a;
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = scale * x[i];
    return g;
}

Projection1 project_to_domain(const DomainSpec& domain, double x) {
    const double a = domain.alpha;
    if (x > a) return {a, x - a};
    if (x < -a) return {-a, -a - x};
    return {x, 0.0};
}

Projection project_to_domain(const DomainSpec& domain, std::span<const double> x) {
    const double a = domain.alpha;
    const double r = std::sqrt(norm2(x));
    Projection p;
    p.x.assign(x.begin(), x.end());
    if (r <= a) return p;
    double scale = a / r;
    for (double& v : p.x) v *= scale;
    // rescaling can overshoot by an ulp; containment is a hard contract
    while (norm2(p.x) > a * a) {
        for (double& v : p.x) v *= (1.0 - 2.0 * std::numeric_limits<double>::epsilon());
    }
    p.dl = r - a;
    return p;
}

bool contains(const DomainSpec& domain, double x) {
    return std::abs(x) <= domain.alpha;
}

bool contains(const DomainSpec& domain, std::span<const double> x) {
    return std::sqrt(norm2(x)) <= domain.alpha;
}

double boundary_distance(const DomainSpec& domain, double x) {
    return std::abs(std::abs(x) - domain.alpha);
}

}  // namespace hjbr
