#pragma once

#include <filesystem>
#include <string>

#include "mfglab/grid.hpp"

namespace mfglab {

struct StoredField {
  ScalarField field;
  std::string quantity;
};

// Writes `<stem>.f64` (raw little-endian doubles, row-major) and the
// key=value sidecar `<stem>.hdr` with dim, n, half_width and quantity.
void write_field(const std::filesystem::path& stem, const ScalarField& f, const std::string& quantity);
StoredField read_field(const std::filesystem::path& stem);

}  // namespace mfglab
