#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bubbly {

// Base class for all library errors. kind() returns a stable machine-readable
// tag used by the CLI error records.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
    virtual const char* kind() const noexcept { return "error"; }
};

class invalid_input_error : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "invalid-input"; }
};

class domain_error : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "domain"; }
};

class degenerate_configuration_error : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "degenerate-configuration"; }
};

class packing_failure_error : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "packing-failure"; }
};

class singular_evaluation_error : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "singular-evaluation"; }
};

class near_field_error : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "near-field"; }
};

class singular_system_error : public error {
public:
    singular_system_error(const std::string& msg, double pivot_magnitude)
        : error(msg), pivot(pivot_magnitude) {}
    const char* kind() const noexcept override { return "singular-system"; }
    double pivot;
};

class invalid_window_error : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "invalid-window"; }
};

class config_mismatch_error : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "config-mismatch"; }
};

class unbounded_width_error : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "unbounded-width"; }
};

class io_error : public error {
public:
    using error::error;
    const char* kind() const noexcept override { return "io"; }
};

class parse_error : public error {
public:
    parse_error(const std::string& msg, std::size_t line_number, const std::string& field_name)
        : error(msg), line(line_number), field(field_name) {}
    const char* kind() const noexcept override { return "parse"; }
    std::size_t line;
    std::string field;
};

class validation_error : public error {
public:
    validation_error(const std::string& msg, const std::string& field_name)
        : error(msg), field(field_name) {}
    const char* kind() const noexcept override { return "validation"; }
    std::string field;
};

}
