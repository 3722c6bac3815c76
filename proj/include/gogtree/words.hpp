#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gogtree/gog.hpp"

namespace gogtree {

/// One letter of a path word: either an element of a vertex group (read at
/// that vertex) or an oriented edge traversal (+1: side a -> side b).
struct Token {
  enum Kind : uint8_t { VtxElem, EdgeLetter };
  Kind kind;
  int idx;  // vertex index or edge index
  int val;  // element, or direction +1 / -1

  static Token vtx(int vertex, Elem g) { return {VtxElem, vertex, g}; }
  static Token edge(int edge, int dir) { return {EdgeLetter, edge, dir}; }
  bool operator==(const Token& o) const {
    return kind == o.kind && idx == o.idx && val == o.val;
  }
};

size_t hash_tokens(std::span<const Token> toks);

struct CanonResult {
  std::vector<Token> tokens;  // [r0][E1][r1]...[Ek][h], odd length >= 1
  int end_vertex;
};

/// Rewrites a token path starting at `start_vertex` into the transversal
/// normal form: every syllable before an edge letter is the canonical coset
/// representative of the departure-end image, and no pinch subword remains.
/// Throws on ill-formed paths (edge letter not incident, element at the
/// wrong vertex).
CanonResult canonicalize(const GraphOfGroups& g, int start_vertex, std::span<const Token> raw);

/// An element of the fundamental group, stored in canonical form as a loop
/// word at the base vertex. Two PathWords are equal iff their token
/// sequences coincide.
class PathWord {
public:
  PathWord() = default;
  static PathWord identity(const GogPtr& g);
  /// Canonicalizes a raw loop word at the base vertex.
  static PathWord from_raw(const GogPtr& g, std::span<const Token> raw);

  const GogPtr& gog() const { return gog_; }
  const std::vector<Token>& tokens() const { return toks_; }
  bool is_identity() const;
  /// Number of edge letters in the canonical form.
  int edge_length() const { return static_cast<int>(toks_.size() / 2); }

  bool operator==(const PathWord& o) const { return gog_ == o.gog_ && toks_ == o.toks_; }
  bool operator<(const PathWord& o) const;

private:
  friend PathWord element_mul(const PathWord&, const PathWord&);
  friend PathWord element_inv(const PathWord&);
  GogPtr gog_;
  std::vector<Token> toks_;
};

PathWord element_mul(const PathWord& x, const PathWord& y);
PathWord element_inv(const PathWord& x);

/// A single vertex-group element at any vertex, conjugated to the base via
/// the spanning tree: the path word for p_v · g · p_v^-1.
PathWord vertex_element(const GogPtr& g, int vertex, Elem x);
/// The stable letter of an edge: p_a · e · p_b^-1 (trivial for tree edges).
PathWord stable_letter(const GogPtr& g, int edge, int dir = +1);

/// Expands a word over the standard generators (vertex elements and stable
/// letters) into raw path tokens. Generator words are how elements are
/// entered from outside; canonical forms are what comes back.
std::vector<Token> expand_generator_word(const GraphOfGroups& g, std::span<const Token> gens);

/// Translation length: 0 iff the element is elliptic, otherwise the edge
/// count of the cyclically reduced form.
int translation_length(const PathWord& x);

/// Reverse and invert a token path (the inverse path).
std::vector<Token> invert_tokens(const GraphOfGroups& g, std::span<const Token> toks);

// ---- serialization --------------------------------------------------------

/// Prints a canonical word: syllables joined by U+00B7, vertex elements as
/// GROUP.name, edge letters as edge-id with a superscript -1 when reversed.
std::string print_word(const PathWord& w);

/// Parses a word in the printed format as a generator word: each vertex
/// element token contributes p_v g p_v^-1 (resolved positionally when it
/// matches the running path position, otherwise by unique group name), each
/// edge letter contributes its stable letter. Round-trips print_word exactly.
PathWord parse_word(const GogPtr& g, const std::string& text, int syllable_cap = 24);

}  // namespace gogtree
