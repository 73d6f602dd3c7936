#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "gklo/quiver.hpp"

namespace gklo {

/// A quiver-spec document (JSON). See schemas/quiver-spec.schema.json.
struct SpecDocument {
    RawQuiver quiver;
    std::map<std::string, int> v, w;
    struct Options {
        std::optional<std::string> mode;
        std::optional<int> series_order;
        std::optional<int> trials;
        std::optional<std::uint64_t> seed;
    } options;
};

/// Throws Error(Parse) with "line L, column C" for syntax errors and the
/// JSON pointer of the offending field for shape errors.
SpecDocument parse_spec_document(std::string_view text);
/// Throws Error(Io) when the file cannot be read.
SpecDocument load_spec_document(const std::string& path);

/// Canonical document text for a quiver and dimension vector.
std::string write_spec_document(const SpecDocument& doc);

}  // namespace gklo
