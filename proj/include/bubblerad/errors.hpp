#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bubblerad {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a documented invariant (negative radius, rmin >= r0, ...).
class invalid_argument : public error {
public:
    using error::error;
};

/// An evaluation point lies outside the domain of a trajectory.
class out_of_domain : public error {
public:
    using error::error;
};

/// Quadrature or extrapolation failed to reach the requested accuracy.
class numerical_error : public error {
public:
    numerical_error(const std::string& what, double achieved_error)
        : error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

/// Malformed or inconsistent configuration text. Carries the 1-based
/// line (and column for syntax errors; 0 when not applicable).
class config_error : public error {
public:
    enum class kind { syntax, unknown_key, missing_key, range, conflicting_key };

    config_error(kind k, std::size_t line, std::size_t column, const std::string& message)
        : error(format(line, column, message)), kind_(k), line_(line), column_(column) {}

    kind error_kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(std::size_t line, std::size_t column, const std::string& message) {
        if (line == 0)
            return "config: " + message;
        std::string loc = "config:" + std::to_string(line);
        if (column != 0)
            loc += ":" + std::to_string(column);
        return loc + ": " + message;
    }

    kind kind_;
    std::size_t line_;
    std::size_t column_;
};

/// Malformed trajectory CSV. `row` is the 1-based line number in the file.
class csv_error : public error {
public:
    enum class kind { bad_header, bad_field, nonmonotonic_time, nonpositive_radius, too_few_rows };

    csv_error(kind k, std::size_t row, const std::string& message)
        : error(row == 0 ? message : "line " + std::to_string(row) + ": " + message), kind_(k), row_(row) {}

    kind error_kind() const noexcept { return kind_; }
    std::size_t row() const noexcept { return row_; }

private:
    kind kind_;
    std::size_t row_;
};

/// Filesystem failure; the message always names the path.
class io_error : public error {
public:
    using error::error;
};

}  // namespace bubblerad
