#pragma once

#include <Eigen/Dense>

#include "hotspot/model_config.hpp"
#include "hotspot/vb/state.hpp"

namespace hotspot::vb::reference {

/// Serial, cache-free beta/gamma/z and tau updates for one response. The
/// partial residual is rebuilt from scratch for every predictor and the tau
/// rate uses the expanded cross-term form. Slow; kept to check the fast path.
void update_response(VariationalState& st, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                     const ModelSpec& spec, Eigen::Index t);

/// update_response for every response, in order.
void update_responses(VariationalState& st, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                      const ModelSpec& spec);

}  // namespace hotspot::vb::reference
