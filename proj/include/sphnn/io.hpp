#pragma once

#include <map>
#include <string>

#include "sphnn/config.hpp"
#include "sphnn/reasoner.hpp"

namespace sphnn {

// Model schema: {"dim":k,"spheres":{"term":{"center":[...],"radius":x}}}.
// The radius is exported in linear form.
std::string configuration_to_json(const Configuration& config);
Configuration configuration_from_json(const std::string& text);

// Deterministic SVG with one labelled circle per sphere; 2-D models only.
std::string render_svg(const Configuration& config);

// Embedding file: one `term v1 v2 ... vk` line per term; consistent k,
// unit-normalized on load, duplicate terms rejected.
std::map<std::string, Vec> parse_embeddings(const std::string& text);

// FNV-1a over the numeric fields; reproducibility stamp for JSON outputs.
std::string config_hash(const OptimConfig& cfg);

}  // namespace sphnn
