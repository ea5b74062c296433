#pragma once

// Dimer file format (JSON):
//   {"description": "...",
//    "nodes": [{"id": 0, "color": "black", "pos": ["1/3", "0"]}, ...],
//    "edges": [{"id": 0, "black": 0, "white": 3, "offset": [0, -1]}, ...],
//    "rotations": {"0": [2, 0, 1], ...}}          (optional)
//
// Polynomial file format (JSON):
//   {"terms": [{"exp": [1, 0], "re": "1", "im": "0"}, ...]}   ("im" optional)

#include <stdexcept>
#include <string>

#include "dimers/dimer.hpp"
#include "dimers/laurent.hpp"

namespace dimers {

/// Malformed input. Syntax errors carry a 1-based line and column; schema
/// errors carry line 0 and name the offending JSON path instead.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    /// what() without the position suffix.
    const std::string& message() const { return message_; }

private:
    std::string message_;
    std::size_t line_, column_;
};

/// 1-based (line, column) of a byte offset.
std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte);

DimerModel parse_dimer(const std::string& text);
DimerModel read_dimer(const std::string& path);

std::string dimer_to_json(const DimerModel& g, const std::string& description = {});
void write_dimer(const DimerModel& g, const std::string& path, const std::string& description = {});

LaurentPolynomial parse_polynomial_json(const std::string& text);
LaurentPolynomial read_polynomial(const std::string& path);
std::string polynomial_to_json(const LaurentPolynomial& w);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dimers
