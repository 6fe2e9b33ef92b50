// operators.hpp — Dense complex operator types, Hermitian eigendecomposition,
// basis changes, and matrix elements of a perturbation operator.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nhpt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr double kHermiticityTol = 1e-12;
constexpr double kDegeneracyTol = 1e-10;

// General (possibly non-Hermitian) N×N operator, N ≥ 2. Energy units, ħ = 1.
struct GeneralOperator {
    Matrix entries;

    GeneralOperator() = default;
    explicit GeneralOperator(Matrix m) : entries(std::move(m)) {
        if (entries.rows() != entries.cols()) {
            throw std::invalid_argument("GeneralOperator: matrix must be square");
        }
        if (entries.rows() < 2) {
            throw std::invalid_argument("GeneralOperator: dimension must be >= 2");
        }
    }

    Eigen::Index dim() const { return entries.rows(); }
};

// Self-adjoint operator: entries(i,j) == conj(entries(j,i)) to 1e-12 absolute.
struct HermitianOperator {
    Matrix entries;

    HermitianOperator() = default;
    explicit HermitianOperator(Matrix m) : entries(std::move(m)) {
        if (entries.rows() != entries.cols()) {
            throw std::invalid_argument("HermitianOperator: matrix must be square");
        }
        if (entries.rows() < 2) {
            throw std::invalid_argument("HermitianOperator: dimension must be >= 2");
        }
        const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
        if (asym > kHermiticityTol) {
            std::ostringstream os;
            os << "HermitianOperator: input is not Hermitian, max |H - H^dag| = " << asym;
            throw std::invalid_argument(os.str());
        }
    }

    Eigen::Index dim() const { return entries.rows(); }

    GeneralOperator as_general() const { return GeneralOperator(entries); }
};

// Sorted eigensystem of a Hermitian operator: omegas ascending, columns of
// `vectors` orthonormal, H0 v_n = omega_n v_n.
struct EigenSystem {
    Eigen::VectorXd omegas;
    Matrix vectors;

    Eigen::Index dim() const { return omegas.size(); }
    double spread() const { return omegas(omegas.size() - 1) - omegas(0); }
};

namespace detail {

// Phase convention: rotate v so its largest-magnitude component is real and
// positive. Near-ties resolve to the lowest index so sign patterns like
// (1,-1)/sqrt(2) come out reproducibly.
inline void fix_phase(Eigen::Ref<Vector> v) {
    const Eigen::Index n = v.size();
    double maxmag = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) maxmag = std::max(maxmag, std::abs(v(i)));
    if (maxmag == 0.0) return;
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(v(i)) >= maxmag * (1.0 - 1e-9)) { pivot = i; break; }
    }
    const Complex p = v(pivot);
    v *= std::abs(p) / p;
}

inline Eigen::Index first_significant(const Vector& v) {
    const double thr = 1e-8 * v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > thr) return i;
    }
    return v.size();
}

} // namespace detail

// Eigendecomposition of H0 with deterministic ordering and phases.
inline EigenSystem eigendecompose(const HermitianOperator& h0) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h0.entries);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecompose: solver failed to converge");
    }
    EigenSystem es;
    es.omegas = solver.eigenvalues();   // ascending
    es.vectors = solver.eigenvectors();

    const Eigen::Index n = es.dim();
    // Within degenerate blocks, order columns by first significant component.
    Eigen::Index b = 0;
    while (b < n) {
        Eigen::Index e = b + 1;
        while (e < n && es.omegas(e) - es.omegas(b) < kDegeneracyTol) ++e;
        if (e - b > 1) {
            std::vector<Eigen::Index> idx;
            for (Eigen::Index i = b; i < e; ++i) idx.push_back(i);
            std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index c) {
                return detail::first_significant(es.vectors.col(a)) <
                       detail::first_significant(es.vectors.col(c));
            });
            Matrix block(n, e - b);
            for (Eigen::Index k = 0; k < e - b; ++k) block.col(k) = es.vectors.col(idx[k]);
            es.vectors.block(0, b, n, e - b) = block;
        }
        b = e;
    }
    for (Eigen::Index i = 0; i < n; ++i) detail::fix_phase(es.vectors.col(i));
    return es;
}

// Matrix elements (H1)_{l,s} = <l| H1 |s> = v_l^dag H1 v_s in the given basis.
inline GeneralOperator matrix_elements(const GeneralOperator& h1, const EigenSystem& basis) {
    if (h1.dim() != basis.dim()) {
        throw std::invalid_argument("matrix_elements: dimension mismatch");
    }
    return GeneralOperator(basis.vectors.adjoint() * h1.entries * basis.vectors);
}

// Interaction-picture amplitudes from bare-basis amplitudes at time t:
// psi = sum_l c_l exp(-i omega_l t) v_l  =>  c_l = exp(+i omega_l t) <v_l|psi>.
inline Vector bare_to_eigen(const Vector& psi, const EigenSystem& basis, double t) {
    if (psi.size() != basis.dim()) {
        throw std::invalid_argument("bare_to_eigen: dimension mismatch");
    }
    Vector c = basis.vectors.adjoint() * psi;
    for (Eigen::Index l = 0; l < c.size(); ++l) {
        c(l) *= std::exp(Complex(0.0, basis.omegas(l) * t));
    }
    return c;
}

inline Vector eigen_to_bare(const Vector& c, const EigenSystem& basis, double t) {
    if (c.size() != basis.dim()) {
        throw std::invalid_argument("eigen_to_bare: dimension mismatch");
    }
    Vector phased = c;
    for (Eigen::Index l = 0; l < c.size(); ++l) {
        phased(l) *= std::exp(Complex(0.0, -basis.omegas(l) * t));
    }
    return basis.vectors * phased;
}

} // namespace nhpt
