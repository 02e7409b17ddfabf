#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace logkg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No "YYYY-MM-DD HH:MM:SS.mmm PID LEVEL component" header could be read.
class MalformedHeader : public Error {
public:
    using Error::Error;
};

class NotInVocabulary : public Error {
public:
    explicit NotInVocabulary(const std::string& name)
        : Error("predicate not in vocabulary: " + name), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Strict Turtle rejection. `offset` is a byte offset into the parsed text.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset, std::size_t line, std::size_t column)
        : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          offset_(offset), line_(line), column_(column) {}

    std::size_t offset() const noexcept { return offset_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t offset_;
    std::size_t line_;
    std::size_t column_;
};

class ZeroTotal : public Error {
public:
    ZeroTotal() : Error("validity percentage requested over zero results") {}
};

class MissingExamples : public Error {
public:
    using Error::Error;
};

/// Network, timeout or protocol failure from a completion provider.
class ProviderError : public Error {
public:
    ProviderError(const std::string& what, bool transient) : Error(what), transient_(transient) {}
    bool transient() const noexcept { return transient_; }

private:
    bool transient_;
};

/// Bad or inconsistent input data (unreadable files, broken JSONL, unknown tags).
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace logkg
