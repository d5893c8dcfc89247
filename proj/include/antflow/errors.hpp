#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace antflow {

// Base for every error the library raises. Callers that only care about
// "something in antflow failed" can catch this.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class excess_occupancy : public error {
public:
    using error::error;
};

class invalid_rates : public error {
public:
    using error::error;
};

class invalid_argument : public error {
public:
    using error::error;
};

class no_ant_at_site : public error {
public:
    using error::error;
};

class domain_error : public error {
public:
    using error::error;
};

class empty_trajectory : public error {
public:
    using error::error;
};

class too_few_ants : public error {
public:
    using error::error;
};

class parse_error : public error {
public:
    parse_error(std::size_t line, const std::string& what)
        : error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class negative_count : public error {
public:
    negative_count(std::size_t line, const std::string& what)
        : error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class non_positive_travel_time : public error {
public:
    using error::error;
};

class missing_predecessor : public error {
public:
    using error::error;
};

class empty_interval : public error {
public:
    using error::error;
};

class non_positive_sample : public error {
public:
    using error::error;
};

class empty_input : public error {
public:
    using error::error;
};

} // namespace antflow
