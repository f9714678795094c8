#pragma once

#include <stdexcept>
#include <string>

namespace icflow {

struct NonPositiveRadius : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedMode : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFiniteIntegrand : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidK : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flow termination conditions. These are terminal: the engine never clamps
// its way past a lost hypothesis.
struct StarShapeLost : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvexityLost : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& msg, int line_no = 0)
      : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg
                                       : msg),
        line(line_no) {}
  int line;
};

}  // namespace icflow
