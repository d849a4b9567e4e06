#pragma once

#include <string>
#include <vector>

#include "braidtrack/errors.hpp"

namespace braidtrack {

struct BraidLetter {
  int index;  // 1..n-1
  int sign;   // +1 or -1

  bool operator==(const BraidLetter&) const = default;
};

struct BraidWord {
  int n = 1;  // strand count
  std::vector<BraidLetter> letters;

  bool operator==(const BraidWord&) const = default;
  int length() const { return static_cast<int>(letters.size()); }
};

/// image[p] (1-based values) is the label sitting at position p+1 after the
/// word acts on [1..n] by adjacent position swaps, letters left to right.
/// Under this convention the strand ending at position p started at
/// position image[p].
struct Permutation {
  std::vector<int> image;

  bool operator==(const Permutation&) const = default;
  int n() const { return static_cast<int>(image.size()); }
  bool is_identity() const;
};

Permutation identity_permutation(int n);
Permutation compose(const Permutation& first, const Permutation& then);
Permutation inverse(const Permutation& p);
int permutation_sign(const Permutation& p);

BraidWord make_word(int n, std::vector<BraidLetter> letters);
BraidWord concat(const BraidWord& a, const BraidWord& b);

/// Cancels adjacent inverse pairs until none remain; idempotent.
BraidWord free_reduce(BraidWord w);

Permutation permutation(const BraidWord& w);

int exponent_sum(const BraidWord& w);

enum class RelationKind { braid, commute };
enum class MoveDir { forward, backward };

/// Rewrites the relation pattern found at `pos`:
///   braid forward:  (i,s)(i+1,s)(i,s)   -> (i+1,s)(i,s)(i+1,s)
///   braid backward: (i,s)(i-1,s)(i,s)   -> (i-1,s)(i,s)(i-1,s)
///   commute:        (i,s)(j,r), |i-j|>=2 -> (j,r)(i,s)
/// Throws on pattern mismatch.
BraidWord relation_move(const BraidWord& w, std::size_t pos, RelationKind kind, MoveDir dir);

/// Reversed word with flipped signs; w * invert(w) freely reduces to the
/// identity.
BraidWord invert(const BraidWord& w);

enum class RenderFormat { ascii, svg, tikz };

std::string render(const BraidWord& w, RenderFormat format);

/// Compact text form: "s2 s1 s2 s1", inverses as "s3^-1". The empty word is
/// the empty string.
std::string word_to_string(const BraidWord& w);
BraidWord word_from_string(int n, const std::string& text);

/// JSON {"n":3,"letters":[[2,1],[1,1]]}.
std::string word_to_json(const BraidWord& w);
BraidWord word_from_json(const std::string& text);

}  // namespace braidtrack
