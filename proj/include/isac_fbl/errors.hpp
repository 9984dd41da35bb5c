#pragma once

#include <stdexcept>
#include <string>

namespace isac_fbl {

// Configuration / input problems. The CLI maps these to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : ConfigError {
  using ConfigError::ConfigError;
};
struct ValidationError : ConfigError {
  using ConfigError::ConfigError;
};
struct IoError : ConfigError {
  using ConfigError::ConfigError;
};
struct InvalidSpec : ConfigError {
  using ConfigError::ConfigError;
};

// Numerical failures. The CLI maps these to exit code 2.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateCodebook : NumericError {
  using NumericError::NumericError;
};
struct RankDeficient : NumericError {
  using NumericError::NumericError;
};
struct WorstCaseSingular : NumericError {
  using NumericError::NumericError;
};
struct NeumannDiverges : NumericError {
  using NumericError::NumericError;
};
struct SingularGram : NumericError {
  using NumericError::NumericError;
};
struct SingularFim : NumericError {
  using NumericError::NumericError;
};

}  // namespace isac_fbl
