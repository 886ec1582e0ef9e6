#pragma once

// Text formats.
//
// Network file (JSON):
//   {"inputs": 2,
//    "nodes": [{"id": "h", "bias": "1/2", "activation": "relu"}, ...],
//    "edges": [{"from": "x0", "to": "h", "weight": "-3"}, ...],
//    "output": "out"}
// Input nodes are referred to as "x0", "x1", ...; activations are "relu",
// "identity" or {"pwl": {"breakpoints": [...], "pieces": [[slope, intercept], ...]}}.
// Every number is a rational string "p" or "p/q". Unknown fields are rejected.
//
// Summary file (JSON): {"k": [...], "Wi": [...], "p": int, "d": int} with Wi
// the parameters entering each layer.
//
// Label file: n lines of m characters '0'/'1'; line j column i is f(e_j, e_i).
//
// Points file (JSON): array of input vectors, each an array of rational strings.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vclab/network.hpp"

namespace vclab {

nlohmann::json network_to_json(const Network& net);
Network network_from_json(const nlohmann::json& doc);

Network load_network(const std::filesystem::path& path);
void save_network(const Network& net, const std::filesystem::path& path);

ArchSummary summary_from_json(const nlohmann::json& doc);

/// A file accepted wherever an architecture is expected: either a full
/// network or a bare summary, told apart by their fields.
std::variant<Network, ArchSummary> load_architecture(const std::filesystem::path& path);

LabelMatrix parse_labels(const std::string& text);
std::string format_labels(const LabelMatrix& f);
LabelMatrix load_labels(const std::filesystem::path& path);
void save_labels(const LabelMatrix& f, const std::filesystem::path& path);

std::vector<std::vector<Rational>> points_from_json(const nlohmann::json& doc);
std::vector<std::vector<Rational>> load_points(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

} // namespace vclab
