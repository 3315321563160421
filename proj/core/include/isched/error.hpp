#ifndef ISCHED_ERROR_HPP
#define ISCHED_ERROR_HPP

#include <stdexcept>
#include <string>

namespace isched {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidGeometry : public Error {
public:
    using Error::Error;
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class MalformedArray : public Error {
public:
    using Error::Error;
};

/// A phase opened two competing paths.
class ConstraintViolation : public Error {
public:
    using Error::Error;
};

class NoFeasibleSchedule : public Error {
public:
    using Error::Error;
};

class OracleTooLarge : public Error {
public:
    using Error::Error;
};

class InvalidCycle : public Error {
public:
    using Error::Error;
};

/// JSON syntax error. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string &what, int line, int column)
        : Error(what), line_(line), column_(column) {}

    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return column_; }

private:
    int line_;
    int column_;
};

} // namespace isched

#endif // ISCHED_ERROR_HPP
