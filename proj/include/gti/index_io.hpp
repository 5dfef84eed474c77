#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gti/index.hpp"

namespace gti {

inline constexpr char kIndexMagic[4] = {'2', 'G', 'T', 'I'};
inline constexpr std::uint32_t kIndexFormatVersion = 1;

/// Binary encoding of an index; layout documented in FORMATS.md.
[[nodiscard]] auto encode_index(DualIndex const& index) -> std::vector<std::uint8_t>;

/// Inverse of encode_index. Throws ParseError naming the failing section, or
/// VersionError when the version field does not match.
[[nodiscard]] auto decode_index(std::vector<std::uint8_t> const& bytes) -> DualIndex;

void serialize_index(DualIndex const& index, std::filesystem::path const& path);
[[nodiscard]] auto load_index(std::filesystem::path const& path) -> DualIndex;

/// Corpus text format: `doc_id<TAB>term:tf:learned term:tf:learned ...`, one document per line.
[[nodiscard]] auto read_corpus(std::istream& in) -> Corpus;
[[nodiscard]] auto read_corpus(std::filesystem::path const& path) -> Corpus;
void write_corpus(std::ostream& out, Corpus const& corpus);

}  // namespace gti
