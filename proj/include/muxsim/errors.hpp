#pragma once

#include <stdexcept>

namespace muxsim {

// Invalid or infeasible configuration: bad key, violated invariant,
// controller timing that cannot place photons in the output window.
// The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Failure while evaluating an otherwise valid experiment (undefined ratio,
// oracle cutoff too small, ...). The CLI maps this to exit code 3.
class sim_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace muxsim
