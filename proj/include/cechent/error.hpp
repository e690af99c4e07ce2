#pragma once

#include <stdexcept>
#include <string>

namespace cechent {

/// Base class for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ModelMismatchError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class NotACoverError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Raised when no cover element contains the image of some element.
/// `element` names the offending element so the caller can refine.
class NoCarrierError : public Error {
public:
    NoCarrierError(std::string element, const std::string& what)
        : Error(what), element_(std::move(element)) {}
    const std::string& element() const noexcept { return element_; }

private:
    std::string element_;
};

class AssignmentError : public Error {
public:
    using Error::Error;
};

class ComplexityError : public Error {
public:
    using Error::Error;
};

} // namespace cechent
