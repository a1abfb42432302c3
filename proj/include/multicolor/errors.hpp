#pragma once

#include <stdexcept>
#include <string>

namespace multicolor {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Arguments outside the documented domain (bad b, improper coloring, ...).
class invalid_parameters : public error {
public:
    explicit invalid_parameters(const std::string& what) : error(what) {}
};

// An enumeration or search would exceed its configured cap.
class capacity_error : public error {
public:
    explicit capacity_error(const std::string& what) : error(what) {}
};

// Malformed textual input; carries a 1-based line number when known.
class parse_error : public error {
public:
    parse_error(const std::string& what, int line)
        : error("line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit parse_error(const std::string& what) : error(what), line_(0) {}
    int line() const { return line_; }

private:
    int line_;
};

// A vertex mapping that is not total or maps out of range.
class invalid_mapping : public error {
public:
    explicit invalid_mapping(const std::string& what) : error(what) {}
};

// A coloring mentioning colors outside the palette.
class invalid_coloring : public error {
public:
    explicit invalid_coloring(const std::string& what) : error(what) {}
};

// Witness encode/decode fed with an assignment or coloring that does not
// certify what it claims to certify.
class witness_error : public error {
public:
    explicit witness_error(const std::string& what) : error(what) {}
};

// Circuit evaluation with unassigned inputs.
class evaluation_error : public error {
public:
    explicit evaluation_error(const std::string& what) : error(what) {}
};

} // namespace multicolor
