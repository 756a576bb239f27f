#pragma once

#include <string>

#include "annc/network.hpp"

namespace annc {

/// Thrown on malformed network files.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Network wire format:
///   {"layers":[{"weights":[[row-major reals]],"bias":[reals]}]}
/// Doubles are written in shortest round-trip decimal form, so
/// save -> load reproduces every entry bit for bit.
std::string to_json(const Network& net);
Network from_json(const std::string& text);

void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

}  // namespace annc
