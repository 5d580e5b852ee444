#include "dct2net/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace dct2net {

void adam_step(Eigen::MatrixXd& params, const Eigen::MatrixXd& grad, OptimizerState& state,
               double lr) {
    if (grad.rows() != params.rows() || grad.cols() != params.cols() ||
        state.first_moment.rows() != params.rows() || state.first_moment.cols() != params.cols()) {
        throw std::invalid_argument("adam_step: parameter, gradient and state shapes differ");
    }
    ++state.step;
    state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * grad;
    state.second_moment =
        state.beta2 * state.second_moment + (1.0 - state.beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    params.array() -= lr * (state.first_moment.array() / c1) /
                      ((state.second_moment.array() / c2).sqrt() + state.epsilon);
}

} // namespace dct2net
