#pragma once

#include <string>

#include "gogtree/gog.hpp"

namespace gogtree {

/// Parses the graph-of-groups text format.
///
///   file        := (decl NEWLINE)*
///   decl        := groupdecl | vertexdecl | edgedecl | basedecl
///   groupdecl   := "group" NAME "=" ("cyclic" INT [SYMBOL] | "symmetric" INT
///                                    | "table" "{" names "|" row ("," row)* "}")
///   vertexdecl  := "vertex" NAME ":" GROUPNAME
///   edgedecl    := "edge" NAME ":" GROUPNAME "from" VERTEX "via" "{" maps "}"
///                                            "to" VERTEX "via" "{" maps "}"
///   maps        := ELEM "->" WORD ("," ELEM "->" WORD)*
///   basedecl    := "base" VERTEXNAME
///
/// '#' starts a comment. A WORD is one element name or a '*'-joined product.
/// The optional SYMBOL after "cyclic INT" names the generator (default "g").
/// If no base is declared the first vertex is used. Maps may be given on a
/// generating set; they are extended multiplicatively and verified.
GogPtr parse_gog(const std::string& text, int order_cap = kDefaultOrderCap);

/// Reads a file and parses it; errors carry the file path.
GogPtr parse_gog_file(const std::string& path, int order_cap = kDefaultOrderCap);

}  // namespace gogtree
