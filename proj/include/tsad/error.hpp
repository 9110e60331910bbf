#pragma once

#include <stdexcept>
#include <string>

namespace tsad {

// Base of every error raised by the library. Subclasses only carry the
// category; the message says what went wrong.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text: a filename, a data line, a CSV cell.
class ParseError : public Error {
public:
    using Error::Error;
};

// Well-formed input that violates a precondition (lengths, ranges).
class ValidationError : public Error {
public:
    using Error::Error;
};

// A hyperparameter outside its admissible domain.
class ParameterError : public Error {
public:
    using Error::Error;
};

// An object used in the wrong lifecycle state, e.g. transform before fit.
class StateError : public Error {
public:
    using Error::Error;
};

// Invalid component configuration (unknown kind, bad params).
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace tsad

namespace tsad {

// Rethrows the in-flight exception as the same library category with
// `prefix` prepended to its message. Must be called from inside a catch block.
[[noreturn]] inline void rethrow_with_prefix(const std::string& prefix) {
    try {
        throw;
    } catch (const ParseError& e) {
        throw ParseError(prefix + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(prefix + e.what());
    } catch (const ParameterError& e) {
        throw ParameterError(prefix + e.what());
    } catch (const StateError& e) {
        throw StateError(prefix + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    } catch (const IoError& e) {
        throw IoError(prefix + e.what());
    } catch (const std::exception& e) {
        throw Error(prefix + e.what());
    }
}

}  // namespace tsad
