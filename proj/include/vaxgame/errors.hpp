#pragma once

#include <stdexcept>
#include <string>

namespace vaxgame {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NotMixedRegime : public Error {
 public:
  using Error::Error;
};

// c_v1 - c_f(M) >= 0: no number of influencers makes eradication an ESS
class InsufficientInfluence : public Error {
 public:
  using Error::Error;
};

class NotAdmissible : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vaxgame
