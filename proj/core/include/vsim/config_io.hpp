#pragma once

#include <cstdint>
#include <string>

#include "vsim/kernel.hpp"
#include "vsim/microgrid.hpp"

namespace vsim::io {

/// Loads a microgrid configuration from a JSON document (see README for the
/// schema). Unknown keys are rejected to catch typos early.
MicrogridConfig load_microgrid_config(const std::string& path);

/// Parses a kernel specification: either the shorthand "const:<value>" or a
/// path to a piecewise-kernel JSON file with polynomial segment boundaries
/// and constant or tabulated factors.
PiecewiseKernel parse_kernel_spec(const std::string& spec);

/// FNV-1a 64-bit hash of a file's bytes, as a hex string. Used to stamp
/// result documents with the configuration they came from.
std::string file_hash_hex(const std::string& path);

} // namespace vsim::io
