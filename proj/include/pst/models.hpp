#pragma once

#include <string>
#include <vector>

#include "pst/symbol.hpp"

#include <nlohmann/json_fwd.hpp>

namespace pst {

/// Construct a named model symbol at fiber normalization |xi| = 1.
///
/// Phase coordinate conventions (documented per model):
///   prtrem   (w1, w2)            [[w1-w2, w2],[w2, -w1-w2]]
///   jordan   (w1, w2)            [[w1, 1],[0, w2]]
///   w2iw3    (w1, w2, w3, w4)    [[w2+i w3, w1],[w1, w2-i w3]]  (w4 inert)
///   ex1      (t, tau)            [[t^2, t^3],[t^3, t^4]]
///   ex2      (t, tau)            [[t^2+t^8, t^3-t^7],[t^3-t^7, t^4+t^6]]
///   scalarex (t, tau)            [tau + i t^k]            params: k (even, default 2)
///   simplex  (t, tau, x, xi)     tau*M0 + i F(t)          params: f in {ex1, ex2, t2},
///                                                         m0 (matrix, default Id)
///   sex      alias of simplex
///   subex    (t, tau, x, xi)     tau Id + alpha xi diag(1,-1) + i (t-beta x)^2 xi Id
///                                params: alpha, beta      (chart xi > 0)
///   saex     (x1, x2, xi1, xi2)  [[xi1, x1 xi2],[x1 xi2, -xi1]]
///   identity (w1..w_pd)          Id_N                     params: N, phase_dim
///   zero     (w1..w_pd)          0                        params: N, phase_dim
///   morimoto (t, tau)            [exp(-1/|t|^sigma)]      params: sigma (default 1)
MatrixSymbol model_library(const std::string& name, const nlohmann::json& params);

struct ModelInfo {
    std::string name;
    std::string params;
    std::string description;
};
std::vector<ModelInfo> list_models();

/// The F(t) curves of the two damping examples, as univariate data.
Matrix f_ex1(double t);
Matrix f_ex2(double t);

}  // namespace pst
