#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccfm {

// Two families: configuration problems (bad input, exit code 2) and numeric
// problems found while computing (exit code 3).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidConfig : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

/// Integration step does not resolve the shortest positive delay.
class StepTooLarge : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

/// A headway y_i + b_i reached zero or below.
class DomainBreakdown : public NumericError {
  public:
    DomainBreakdown(double time, std::size_t pair, const std::string& what)
        : NumericError(what), time_(time), pair_(pair) {}

    double time() const noexcept { return time_; }
    /// 1-based pair index.
    std::size_t pair() const noexcept { return pair_; }

  private:
    double time_;
    std::size_t pair_;
};

/// Fractional (or negative) power of a non-positive follower velocity.
class NegativeVelocityBase : public NumericError {
  public:
    NegativeVelocityBase(double time, std::size_t pair, const std::string& what)
        : NumericError(what), time_(time), pair_(pair) {}

    double time() const noexcept { return time_; }
    std::size_t pair() const noexcept { return pair_; }

  private:
    double time_;
    std::size_t pair_;
};

class NonConvergence : public NumericError {
  public:
    NonConvergence(const std::string& what, double last_re, double last_im = 0.0)
        : NumericError(what), last_re_(last_re), last_im_(last_im) {}

    double last_real() const noexcept { return last_re_; }
    double last_imag() const noexcept { return last_im_; }

  private:
    double last_re_;
    double last_im_;
};

class DegenerateSpectrum : public NumericError {
  public:
    using NumericError::NumericError;
};

/// Input lies outside the locally stable region where a quantity is defined.
class UnstableInput : public NumericError {
  public:
    using NumericError::NumericError;
};

/// A pipeline stage was invoked before the stage it depends on.
class StagedComputationError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace ccfm
