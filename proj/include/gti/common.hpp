#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace gti {

using DocId = std::uint32_t;
using TermId = std::uint32_t;
using Score = double;

inline constexpr Score kNegInf = -std::numeric_limits<Score>::infinity();

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (negative length, bad coefficient, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Corpus rejected while building an index.
class BuildError : public Error {
  public:
    using Error::Error;
};

/// Scaled alignment requested but the corpus lacks the statistics for it.
class AlignmentError : public Error {
  public:
    using Error::Error;
};

/// Malformed input file. `section()` names the part of the file that failed.
class ParseError : public Error {
  public:
    ParseError(std::string section, const std::string& what)
        : Error(section + ": " + what), m_section(std::move(section))
    {}
    [[nodiscard]] auto section() const -> const std::string& { return m_section; }

  private:
    std::string m_section;
};

/// Index file written by an incompatible format version.
class VersionError : public Error {
  public:
    VersionError(std::uint32_t found, std::uint32_t expected)
        : Error("index format version " + std::to_string(found) + " unsupported (expected "
                + std::to_string(expected) + ")"),
          m_found(found)
    {}
    [[nodiscard]] auto found() const -> std::uint32_t { return m_found; }

  private:
    std::uint32_t m_found;
};

}  // namespace gti
