// transition_matrix.hpp — W(n, m) = |c_m(infinity)|^2 given c_l(-infinity) = delta_{l,n}.

#pragma once

#include <Eigen/Dense>

#include <string>

namespace nhpt {

enum class TransitionSource { FirstOrder, Numeric };

struct TransitionMatrix {
    Eigen::MatrixXd W;                  // row n: initial state, column m: final state
    TransitionSource source = TransitionSource::Numeric;
    // first-order theory covers only m != n; the survival diagonal is stored
    // as the unperturbed value 1 and flagged here
    bool diagonal_is_unperturbed = false;
    Eigen::MatrixXcd final_amplitudes;  // numeric source only: c_m(t_end) per initial n

    Eigen::Index dim() const { return W.rows(); }
};

inline std::string to_string(TransitionSource s) {
    return s == TransitionSource::FirstOrder ? "first_order" : "numeric";
}

} // namespace nhpt
