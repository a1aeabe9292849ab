#pragma once

#include <span>
#include <vector>

namespace hjbr {

/// Compact state space described by a defining function phi:
/// the interval [-alpha, alpha] when dim == 1, the closed ball of radius
/// alpha when dim > 1. phi < 0 inside, phi = 0 on the boundary, phi > 0 in a
/// neighbourhood outside, and ||grad phi|| = 1 on the boundary, so -grad phi
/// is the unit inward normal used as the reflection direction.
struct DomainSpec {
    double alpha = 1.0;
    int dim = 1;

    DomainSpec(double alpha_, int dim_ = 1);
};

/// phi(x) = e^(alpha^2 - |x|^2) (|x|^2 - alpha^2) / (2 alpha).
double phi_eval(const DomainSpec& domain, std::span<const double> x);
double phi_eval(const DomainSpec& domain, double x);

/// grad phi(x) = (x / alpha) e^(alpha^2 - |x|^2) (1 + alpha^2 - |x|^2).
std::vector<double> phi_grad(const DomainSpec& domain, std::span<const double> x);
double phi_grad1(const DomainSpec& domain, double x);

struct Projection {
    std::vector<double> x;  // nearest point of the domain
    double dl = 0.0;        // distance moved; discrete local-time increment
};

struct Projection1 {
    double x = 0.0;
    double dl = 0.0;
};

/// Euclidean projection onto the domain. For the interval and the ball the
/// projection direction on the boundary coincides with -grad phi, so dl is
/// the local-time increment of a unit-normal reflection.
Projection project_to_domain(const DomainSpec& domain, std::span<const double> x);
Projection1 project_to_domain(const DomainSpec& domain, double x);

bool contains(const DomainSpec& domain, std::span<const double> x);
bool contains(const DomainSpec& domain, double x);

/// Distance from x to the boundary (0 exactly on it).
double boundary_distance(const DomainSpec& domain, double x);

}  // namespace hjbr
