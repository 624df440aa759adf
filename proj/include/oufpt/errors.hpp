// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace oufpt {

// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NonPositiveParameter : public Error {
  public:
    using Error::Error;
};

class SubthresholdInitialCondition : public Error {
  public:
    using Error::Error;
};

class NegativeTime : public Error {
  public:
    using Error::Error;
};

class NonPositiveSPrime : public Error {
  public:
    using Error::Error;
};

class OutOfInterval : public Error {
  public:
    using Error::Error;
};

class NonPositiveTime : public Error {
  public:
    using Error::Error;
};

class InvalidLine : public Error {
  public:
    using Error::Error;
};

class TimeOrderViolation : public Error {
  public:
    using Error::Error;
};

class NonPositiveB : public Error {
  public:
    using Error::Error;
};

// Lemma hypothesis violated; carries the threshold the argument failed to clear.
class HypothesisNotMet : public Error {
  public:
    HypothesisNotMet(const std::string& what, double threshold)
        : Error(what), threshold_(threshold) {}
    double threshold() const { return threshold_; }

  private:
    double threshold_;
};

class BelowOnset : public Error {
  public:
    using Error::Error;
};

class QuadratureNonConvergence : public Error {
  public:
    QuadratureNonConvergence(const std::string& what, double error_estimate)
        : Error(what), error_estimate_(error_estimate) {}
    double error_estimate() const { return error_estimate_; }

  private:
    double error_estimate_;
};

class InvalidConfig : public Error {
  public:
    using Error::Error;
};

class NoCapturedPaths : public Error {
  public:
    using Error::Error;
};

class InsufficientTailData : public Error {
  public:
    using Error::Error;
};

// Iteration budget exhausted; carries the last residual seen.
class NonConvergence : public Error {
  public:
    NonConvergence(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

  private:
    double residual_;
};

class EmptyGrid : public Error {
  public:
    using Error::Error;
};

}  // namespace oufpt
