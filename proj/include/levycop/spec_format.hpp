#pragma once

#include <map>
#include <string>
#include <variant>

#include "levycop/copulas.hpp"
#include "levycop/generators.hpp"
#include "levycop/levy.hpp"

namespace levycop {

// Declarative text format: one `key: value` per line, '#' starts a comment.
// Nested objects use dotted key prefixes. Examples:
//
//   object: copula            object: levy-copula       object: levy-measure
//   family: archimedean       family: archimedean-levy  form: radial-simplex
//   d: 2                      d: 2                      d: 1
//   generator.side: proper    generator.side: levy      radial.family: power-tail
//   generator.family: clayton generator.family: clayton radial.scale: 1

using SpecEntries = std::map<std::string, std::string>;

/// Splits text into entries. Throws ParseError on malformed lines or
/// duplicate keys.
SpecEntries parse_spec_entries(const std::string& text);

using SpecObject = std::variant<ProperGenerator, LevyGenerator, CopulaSpec, LevyCopulaSpec, TailIntegralSpec>;

/// Builds the object described by `text`. Throws ParseError on unknown
/// objects, families or keys and on missing or malformed values.
SpecObject parse_spec(const std::string& text);
SpecObject load_spec_file(const std::string& path);

/// Inverse of parse_spec for everything that has a declarative form.
/// Throws ArgumentError for objects built from code only (Williamson
/// generators, custom copulas other than images of Levy copulas).
std::string to_spec_text(const ProperGenerator& g);
std::string to_spec_text(const LevyGenerator& g);
std::string to_spec_text(const CopulaSpec& c);
std::string to_spec_text(const LevyCopulaSpec& f);
std::string to_spec_text(const SpecObject& o);

/// Dimension of any spec object.
int spec_dimension(const SpecObject& o);
/// "generator", "copula", "levy-copula" or "levy-measure".
std::string spec_object_name(const SpecObject& o);

}  // namespace levycop
