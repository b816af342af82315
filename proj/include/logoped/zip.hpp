#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace logoped::zip {

struct Entry {
  std::string name;
  std::string data;
  bool crc_ok = true;  // reader only: stored CRC-32 matched the data
};

/// Archive with stored (uncompressed) entries in the given order and a
/// fixed 1980-01-01 timestamp, so equal inputs give equal bytes.
std::string write(const std::vector<Entry>& entries);

/// Reads stored or deflated entries via the central directory.
/// Throws Error(CorruptArchive) on structural damage or duplicate names.
/// CRC mismatches are reported per entry, not thrown.
std::vector<Entry> read(std::string_view archive);

}  // namespace logoped::zip
