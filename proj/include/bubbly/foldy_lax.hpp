#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "bubbly/cloud.hpp"
#include "bubbly/errors.hpp"
#include "bubbly/greens.hpp"
#include "bubbly/media.hpp"
#include "bubbly/scattering.hpp"

namespace bubbly {

// Dense point-interaction system: unit diagonal, off-diagonal coupling
// 4 pi f_s G(x_i - x_j, k_w).
struct InteractionMatrix {
    Eigen::MatrixXcd entries;
    std::complex<double> f_s;
    double k_w = 0.0;

    Eigen::Index size() const { return entries.rows(); }
};

struct IncidentTrace {
    Eigen::VectorXcd values;  // u_in at each bubble center
    std::string source;       // free-form description, recorded only
};

inline InteractionMatrix assemble(const BubbleCloud& cloud, std::complex<double> f_s,
                                  double k_w) {
    const auto n = static_cast<Eigen::Index>(cloud.size());
    InteractionMatrix m;
    m.f_s = f_s;
    m.k_w = k_w;
    m.entries.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m.entries(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = (cloud.centers[i] - cloud.centers[j]).norm();
            if (!(d > 0.0))
                throw invalid_input_error("coincident bubble centers in assembly");
            const std::complex<double> off = 4.0 * std::numbers::pi * f_s * greens_fn(d, k_w);
            m.entries(i, j) = off;
            m.entries(j, i) = off;
        }
    }
    if (!m.entries.allFinite())
        throw invalid_input_error("non-finite entries in interaction matrix");
    return m;
}

// LU factorization of an InteractionMatrix, reusable across right-hand sides.
// The matrix must outlive the solver (it is referenced for residual checks).
class FoldySolver {
public:
    explicit FoldySolver(const InteractionMatrix& m) : matrix_(&m), lu_(m.entries) {
        const double min_pivot = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (!(min_pivot > 0.0))
            throw singular_system_error("interaction matrix is numerically singular", min_pivot);
    }

    // Solve with one iterative-refinement pass whenever the residual exceeds
    // 1e-8 times the right-hand side norm.
    Eigen::MatrixXcd solve(const Eigen::MatrixXcd& b) const {
        Eigen::MatrixXcd x = lu_.solve(b);
        const double bnorm = b.norm();
        if (bnorm > 0.0) {
            const Eigen::MatrixXcd residual = b - matrix_->entries * x;
            if (residual.norm() > 1e-8 * bnorm)
                x += lu_.solve(residual);
        }
        return x;
    }

    // 1-norm condition estimate (reciprocal of Eigen's rcond).
    double condition_estimate() const { return 1.0 / lu_.rcond(); }
    bool ill_conditioned() const { return condition_estimate() > 1e12; }

private:
    const InteractionMatrix* matrix_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

inline Eigen::VectorXcd solve_incident(const InteractionMatrix& m, const IncidentTrace& incident) {
    if (incident.values.size() != m.size())
        throw invalid_input_error("incident trace length does not match matrix size");
    return FoldySolver(m).solve(incident.values);
}

// Total field outside the cloud: incident plus one monopole per scatterer with
// amplitude -4 pi f_s v_i.
inline std::complex<double> total_field(const Eigen::Vector3d& x, const BubbleCloud& cloud,
                                        std::complex<double> f_s, double k_w,
                                        const Eigen::VectorXcd& solved,
                                        const std::function<std::complex<double>(
                                            const Eigen::Vector3d&)>& incident_fn) {
    if (solved.size() != static_cast<Eigen::Index>(cloud.size()))
        throw invalid_input_error("solved vector length does not match cloud size");
    std::complex<double> scattered = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double r = (x - cloud.centers[i]).norm();
        if (r < cloud.radius)
            throw near_field_error("evaluation point inside a bubble");
        scattered += greens_fn(r, k_w) * solved(static_cast<Eigen::Index>(i));
    }
    return incident_fn(x) - 4.0 * std::numbers::pi * f_s * scattered;
}

// Effective Green's function of the bubbly medium for a point source at the
// origin: the total field G(x) - 4 pi f_s sum_i G(x - x_i) [M^{-1} g]_i with
// g_j = G(x_j). Reduces to the free-space kernel without bubbles.
inline std::complex<double> effective_green(const Eigen::Vector3d& x, double omega,
                                            const BubbleCloud& cloud, const MediaParams& media,
                                            const ScatteringModel& model) {
    const DerivedAcoustics ac = derive_acoustics(media, omega, model.radius);
    const double k_w = ac.k_w;
    if (cloud.size() == 0)
        return greens_fn(x.norm(), k_w);
    const std::complex<double> f_s = monopole_amplitude(model, omega);
    const InteractionMatrix m = assemble(cloud, f_s, k_w);
    const FoldySolver solver(m);
    const auto n = static_cast<Eigen::Index>(cloud.size());
    Eigen::VectorXcd g(n);
    for (Eigen::Index i = 0; i < n; ++i)
        g(i) = greens_fn(cloud.centers[static_cast<std::size_t>(i)].norm(), k_w);
    const Eigen::VectorXcd w = solver.solve(g);
    return total_field(
        x, cloud, f_s, k_w, w,
        [k_w](const Eigen::Vector3d& p) { return greens_fn(p.norm(), k_w); });
}

}
