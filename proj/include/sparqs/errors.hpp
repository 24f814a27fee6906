#pragma once

#include <stdexcept>
#include <string>

namespace sparqs {

// All library failures derive from std::runtime_error so callers can catch
// one family; the concrete type tells which contract was violated.

class invalid_dimension : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_label : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_operator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class grid_mismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class schedule_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class nonfinite_objective : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sparqs
