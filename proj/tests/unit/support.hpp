#pragma once

#include <Eigen/Core>
#include <cmath>
#include <random>

#include "spinchain/model.hpp"

namespace test {

inline double max_abs_diff(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b) { return (a - b).cwiseAbs().maxCoeff(); }

// Plain Shannon entropy of a probability list, bits.
inline double shannon(std::initializer_list<double> ps) {
    double s = 0;
    for(double p : ps)
        if(p > 0) s -= p * std::log2(p);
    return s;
}

inline spinchain::ModelSpec spec_for(int n, double alpha) {
    return alpha < 0 ? spinchain::ModelSpec::nearest_neighbour(n, 1.0) : spinchain::ModelSpec::power_law(n, 1.0, alpha);
}

} // namespace test
