#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace finsler {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands with different dimensions or caps, or an index outside the caps.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A divisor, root or logarithm argument whose constant term is (near) singular.
class SingularPoint : public Error {
public:
    SingularPoint(const std::string& what, double constant_term)
        : Error(what + " (constant term " + std::to_string(constant_term) + ")"),
          constant_term_(constant_term) {}

    double constant_term() const noexcept { return constant_term_; }

private:
    double constant_term_;
};

/// (x, y) outside the admissible cone of a field.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Metric tensor with |det g| below the degeneracy threshold.
class DegenerateMetric : public Error {
public:
    DegenerateMetric(const std::string& what, double det)
        : Error(what), det_(det) {}

    double det() const noexcept { return det_; }

private:
    double det_;
};

class SingularParameter : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Requested data that the entry does not provide (no closed-form spray, no printed component).
class Unavailable : public Error {
public:
    using Error::Error;
};

class SamplerStarvation : public Error {
public:
    SamplerStarvation(const std::string& what, double rejection_rate)
        : Error(what), rejection_rate_(rejection_rate) {}

    double rejection_rate() const noexcept { return rejection_rate_; }

private:
    double rejection_rate_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset, std::vector<std::string> expected)
        : Error(what), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

}  // namespace finsler
