#pragma once

#include <stdexcept>
#include <string>

namespace deacs {

/// Malformed input data (CSV cells, JSON documents, DMU matrices).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration: unknown column, bad fold count, and so on.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A file that cannot be opened or fully written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical result that contradicts a mathematical guarantee.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace deacs
