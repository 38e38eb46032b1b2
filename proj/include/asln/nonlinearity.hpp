#pragma once

#include "asln/types.hpp"

#include <cmath>
#include <string>

namespace asln {

/// Scalar basis functions of the generative process. Sign maps 0 to +1 so
/// outputs are always in {-1, +1}.
enum class Nonlinearity { Sign, Cube, Relu, Tanh, Identity };

inline bool is_odd(Nonlinearity nl) { return nl != Nonlinearity::Relu; }

inline double apply(Nonlinearity nl, double x) {
    switch (nl) {
        case Nonlinearity::Sign: return x >= 0.0 ? 1.0 : -1.0;
        case Nonlinearity::Cube: return x * x * x;
        case Nonlinearity::Relu: return x > 0.0 ? x : 0.0;
        case Nonlinearity::Tanh: return std::tanh(x);
        case Nonlinearity::Identity: return x;
    }
    return x;
}

inline const char* name(Nonlinearity nl) {
    switch (nl) {
        case Nonlinearity::Sign: return "sign";
        case Nonlinearity::Cube: return "cube";
        case Nonlinearity::Relu: return "relu";
        case Nonlinearity::Tanh: return "tanh";
        case Nonlinearity::Identity: return "identity";
    }
    return "?";
}

inline Nonlinearity nonlinearity_from_name(const std::string& s) {
    if (s == "sign") return Nonlinearity::Sign;
    if (s == "cube") return Nonlinearity::Cube;
    if (s == "relu") return Nonlinearity::Relu;
    if (s == "tanh") return Nonlinearity::Tanh;
    if (s == "identity") return Nonlinearity::Identity;
    throw config_error("unknown nonlinearity: " + s);
}

}  // namespace asln
