#pragma once

#include <string>

#include "snc/network.hpp"

namespace snc {

/// Parses the network document format:
///
///   {"servers": [{"id": 1, "service": {"type": "constant_rate", "rate": 5.0}},
///                {"id": 2, "service": {"type": "mmp", "transition": [[...]],
///                                      "emissions": [...]}}],
///    "flows": [{"id": 1, "first": 1, "last": 2,
///               "arrival": {"transition": [[...]], "emissions": [...]}}]}
///
/// Emissions are {"type": "constant", "value": v},
/// {"type": "bernoulli_scaled", "value": v, "prob": p} or
/// {"type": "poisson", "mean": m}. Servers are ordered by id, which must be
/// 1..n. Throws ParseError.
TandemNetwork parse_network(const std::string& text);

/// Reads a file and parses it; I/O failures raise ParseError with field "".
TandemNetwork load_network(const std::string& path);

/// Inverse of parse_network, pretty-printed.
std::string network_to_json(const TandemNetwork& net);

/// Replaces the number at `pointer` (JSON pointer syntax) in a network
/// document and returns the new document. Throws ParseError if the pointer
/// does not resolve to a number.
std::string set_number(const std::string& text, const std::string& pointer, double value);

/// Reads the number at `pointer`.
double get_number(const std::string& text, const std::string& pointer);

}  // namespace snc
