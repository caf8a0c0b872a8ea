#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace racg {

// Generator id: index into a DefiningGraph's generator order.
using Gen = std::uint8_t;

inline constexpr std::size_t kMaxGenerators = 255;

struct lookup_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_parameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Mixing values that belong to different defining graphs.
struct graph_mismatch : std::logic_error {
  using std::logic_error::logic_error;
};

struct parse_error : std::runtime_error {
  parse_error(const std::string& msg, int line_no)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + msg),
        line(line_no) {}
  int line;
};

// A search exceeded its configured memory/node capacity.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Query violates a precondition (endpoint inside the forbidden ball, ...).
struct invalid_query : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct insufficient_data : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace racg
