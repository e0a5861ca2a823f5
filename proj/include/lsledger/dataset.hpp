#pragma once

// A classified ledger with its certification stream, transaction stream and
// the four transaction substreams, plus the binary snapshot that persists it.

#include <array>
#include <filesystem>
#include <memory>

#include "lsledger/ingest.hpp"
#include "lsledger/stream.hpp"

namespace lsl {

struct Dataset {
  std::shared_ptr<const KeyTable> keys;
  NodeClassification classification;
  LinkStream certifications;
  LinkStream transactions;
  // Indexed by Substream.
  std::array<LinkStream, 4> substreams;

  const LinkStream& sub(Substream s) const { return substreams[static_cast<std::size_t>(s)]; }
};

Dataset build_dataset(const LedgerRecords& records);

// Columnar little-endian snapshot. Throws IoError on write/read failure and
// StateError on a missing or corrupt file.
void write_snapshot(const Dataset& data, const std::filesystem::path& path);
Dataset read_snapshot(const std::filesystem::path& path);

}  // namespace lsl
