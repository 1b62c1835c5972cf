#pragma once

#include <stdexcept>

namespace starris {

struct NotHermitian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPsd : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoSignChange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidGrid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Singular : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace starris
