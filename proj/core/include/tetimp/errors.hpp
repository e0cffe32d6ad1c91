#pragma once

#include <stdexcept>
#include <string>

namespace tetimp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput : Error { using Error::Error; };
struct EmptyMesh : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct DegenerateCell : Error { using Error::Error; };
struct NotAnEdge : Error { using Error::Error; };
struct NotFlippable : Error { using Error::Error; };
struct CorruptRecord : Error { using Error::Error; };
struct StepFloorReached : Error { using Error::Error; };
struct MissingSurface : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct VanishingGradient : Error { using Error::Error; };
struct OpenBoundary : Error { using Error::Error; };

struct IoError : Error { using Error::Error; };

// Parse failures carry the offending file and line.
struct ParseError : IoError {
  ParseError(const std::string& file, long line, const std::string& what)
      : IoError(file + ":" + std::to_string(line) + ": " + what),
        file_name(file), line_number(line) {}
  std::string file_name;
  long line_number;
};

struct CountMismatch : ParseError { using ParseError::ParseError; };
struct IndexError : ParseError { using ParseError::ParseError; };

} // namespace tetimp
