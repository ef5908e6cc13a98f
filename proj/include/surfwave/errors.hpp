#pragma once

#include <stdexcept>
#include <string>

namespace surfwave {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Repeated eigenvalue: a band edge, Floquet factorization unavailable.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

class ResonancePole : public Error {
 public:
  using Error::Error;
};

class ZeroPermittivity : public Error {
 public:
  using Error::Error;
};

class BranchPoint : public Error {
 public:
  using Error::Error;
};

class ChiZero : public Error {
 public:
  using Error::Error;
};

class NotDecaying : public Error {
 public:
  enum class Side { Stratified, Lorentz };
  NotDecaying(Side side, const std::string& what) : Error(what), side_(side) {}
  Side side() const { return side_; }

 private:
  Side side_;
};

class PoleEncountered : public Error {
 public:
  explicit PoleEncountered(std::string denominator)
      : Error("pole encountered: " + denominator + " vanishes"), denominator_(std::move(denominator)) {}
  const std::string& denominator() const { return denominator_; }

 private:
  std::string denominator_;
};

class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class InadmissibleRoot : public Error {
 public:
  using Error::Error;
};

}  // namespace surfwave
