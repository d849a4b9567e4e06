#include "braidtrack/braid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace braidtrack {

namespace {

void check_letter(int n, BraidLetter l) {
  if (l.index < 1 || l.index > n - 1)
    throw Error("braid letter index " + std::to_string(l.index) + " out of range for " +
                std::to_string(n) + " strands");
  if (l.sign != 1 && l.sign != -1) throw Error("braid letter sign must be +1 or -1");
}

}  // namespace

bool Permutation::is_identity() const {
  for (int p = 0; p < n(); ++p)
    if (image[static_cast<std::size_t>(p)] != p + 1) return false;
  return true;
}

Permutation identity_permutation(int n) {
  Permutation p;
  p.image.resize(static_cast<std::size_t>(n));
  std::iota(p.image.begin(), p.image.end(), 1);
  return p;
}

Permutation compose(const Permutation& first, const Permutation& then) {
  if (first.n() != then.n()) throw Error("permutation size mismatch");
  Permutation out;
  out.image.resize(first.image.size());
  for (int p = 0; p < then.n(); ++p)
    out.image[static_cast<std::size_t>(p)] =
        first.image[static_cast<std::size_t>(then.image[static_cast<std::size_t>(p)] - 1)];
  return out;
}

Permutation inverse(const Permutation& p) {
  Permutation out;
  out.image.resize(p.image.size());
  for (int q = 0; q < p.n(); ++q)
    out.image[static_cast<std::size_t>(p.image[static_cast<std::size_t>(q)] - 1)] = q + 1;
  return out;
}

int permutation_sign(const Permutation& p) {
  std::vector<bool> seen(p.image.size(), false);
  int sign = 1;
  for (std::size_t k = 0; k < p.image.size(); ++k) {
    if (seen[k]) continue;
    std::size_t cursor = k;
    int len = 0;
    while (!seen[cursor]) {
      seen[cursor] = true;
      cursor = static_cast<std::size_t>(p.image[cursor] - 1);
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

BraidWord make_word(int n, std::vector<BraidLetter> letters) {
  if (n < 1) throw Error("strand count must be at least 1");
  for (BraidLetter l : letters) check_letter(n, l);
  return BraidWord{n, std::move(letters)};
}

BraidWord concat(const BraidWord& a, const BraidWord& b) {
  if (a.n != b.n) throw Error("cannot concatenate words on different strand counts");
  BraidWord out = a;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return out;
}

BraidWord free_reduce(BraidWord w) {
  std::vector<BraidLetter> stack;
  stack.reserve(w.letters.size());
  for (BraidLetter l : w.letters) {
    if (!stack.empty() && stack.back().index == l.index && stack.back().sign == -l.sign)
      stack.pop_back();
    else
      stack.push_back(l);
  }
  w.letters = std::move(stack);
  return w;
}

Permutation permutation(const BraidWord& w) {
  Permutation p = identity_permutation(w.n);
  for (BraidLetter l : w.letters) {
    check_letter(w.n, l);
    std::swap(p.image[static_cast<std::size_t>(l.index - 1)],
              p.image[static_cast<std::size_t>(l.index)]);
  }
  return p;
}

int exponent_sum(const BraidWord& w) {
  int sum = 0;
  for (BraidLetter l : w.letters) sum += l.sign;
  return sum;
}

BraidWord relation_move(const BraidWord& w, std::size_t pos, RelationKind kind, MoveDir dir) {
  BraidWord out = w;
  auto& ls = out.letters;
  if (kind == RelationKind::braid) {
    if (pos + 3 > ls.size()) throw Error("relation_move: braid pattern does not fit at pos");
    BraidLetter a = ls[pos], b = ls[pos + 1], c = ls[pos + 2];
    int delta = (dir == MoveDir::forward) ? 1 : -1;
    if (!(a == c && b.index == a.index + delta && a.sign == b.sign))
      throw Error("relation_move: no braid pattern at pos");
    ls[pos] = b;
    ls[pos + 1] = a;
    ls[pos + 2] = b;
  } else {
    if (pos + 2 > ls.size()) throw Error("relation_move: commute pattern does not fit at pos");
    BraidLetter a = ls[pos], b = ls[pos + 1];
    if (std::abs(a.index - b.index) < 2) throw Error("relation_move: letters do not commute");
    std::swap(ls[pos], ls[pos + 1]);
  }
  return out;
}

BraidWord invert(const BraidWord& w) {
  BraidWord out;
  out.n = w.n;
  out.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back({it->index, -it->sign});
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string word_to_string(const BraidWord& w) {
  std::string out;
  for (BraidLetter l : w.letters) {
    if (!out.empty()) out += " ";
    out += "s" + std::to_string(l.index);
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

BraidWord word_from_string(int n, const std::string& text) {
  BraidWord out;
  out.n = n;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] != 's') throw ParseError("expected 's'", i);
    ++i;
    std::size_t start = i;
    int idx = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      idx = idx * 10 + (text[i] - '0');
      ++i;
    }
    if (i == start) throw ParseError("expected generator index", i);
    int sign = 1;
    if (i + 2 < text.size() && text[i] == '^' && text[i + 1] == '-' && text[i + 2] == '1') {
      sign = -1;
      i += 3;
    } else if (i < text.size() && text[i] == '^') {
      throw ParseError("only ^-1 is supported", i);
    }
    check_letter(n, {idx, sign});
    out.letters.push_back({idx, sign});
  }
  return out;
}

std::string word_to_json(const BraidWord& w) {
  nlohmann::ordered_json j;
  j["n"] = w.n;
  nlohmann::ordered_json ls = nlohmann::ordered_json::array();
  for (BraidLetter l : w.letters) ls.push_back({l.index, l.sign});
  j["letters"] = ls;
  return j.dump();
}

BraidWord word_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  BraidWord out;
  out.n = j.at("n").get<int>();
  for (const auto& l : j.at("letters")) {
    BraidLetter letter{l.at(0).get<int>(), l.at(1).get<int>()};
    check_letter(out.n, letter);
    out.letters.push_back(letter);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Renderers

namespace {

std::string render_tikz(const BraidWord& w) {
  std::string tokens;
  for (BraidLetter l : w.letters) {
    if (!tokens.empty()) tokens += " ";
    tokens += "a_{" + std::to_string(l.index) + "}";
    if (l.sign < 0) tokens += "^{-1}";
  }
  return "\\begin{tikzpicture}\n\\braid[number of strands=" + std::to_string(w.n) +
         "] (braid) " + tokens + " ;\n\\end{tikzpicture}\n";
}

// Vertical strands, time moving down, three text rows per letter plus a bar
// row between letters. The under-strand is broken at the crossing center:
// for a positive letter the NE-SW diagonal is drawn through.
std::string render_ascii(const BraidWord& w) {
  const int spacing = 4;
  auto center = [&](int strand) { return 2 + spacing * strand; };
  const int width = center(w.n - 1) + 3;
  std::vector<std::string> rows;
  auto bar_row = [&]() {
    std::string r(static_cast<std::size_t>(width), ' ');
    for (int k = 0; k < w.n; ++k) r[static_cast<std::size_t>(center(k))] = '|';
    return r;
  };
  rows.push_back(bar_row());
  for (BraidLetter l : w.letters) {
    int c1 = center(l.index - 1), c2 = center(l.index);
    std::string a = bar_row(), b(static_cast<std::size_t>(width), ' '), c = bar_row();
    a[static_cast<std::size_t>(c1)] = '\\';
    a[static_cast<std::size_t>(c2)] = '/';
    for (int k = 0; k < w.n; ++k)
      if (k != l.index - 1 && k != l.index) b[static_cast<std::size_t>(center(k))] = '|';
    b[static_cast<std::size_t>((c1 + c2) / 2)] = (l.sign > 0) ? '\\' : '/';
    c[static_cast<std::size_t>(c1)] = '/';
    c[static_cast<std::size_t>(c2)] = '\\';
    rows.push_back(a);
    rows.push_back(b);
    rows.push_back(c);
    rows.push_back(bar_row());
  }
  std::string out;
  for (const auto& r : rows) {
    std::string trimmed = r;
    while (!trimmed.empty() && trimmed.back() == ' ') trimmed.pop_back();
    out += trimmed + "\n";
  }
  return out;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Strand polylines with a gap in the under-strand at each crossing.
std::string render_svg(const BraidWord& w) {
  const double xstep = 30, ystep = 40, margin = 20;
  const int rows = w.length();
  const double width = margin * 2 + xstep * (w.n - 1);
  const double height = margin * 2 + ystep * std::max(rows, 1);
  auto xpos = [&](int slot) { return margin + xstep * slot; };
  auto ypos = [&](int row) { return margin + ystep * row; };

  std::vector<int> slot_of(static_cast<std::size_t>(w.n));  // strand -> slot
  std::iota(slot_of.begin(), slot_of.end(), 0);

  std::vector<std::ostringstream> paths(static_cast<std::size_t>(w.n));
  for (int k = 0; k < w.n; ++k)
    paths[static_cast<std::size_t>(k)] << "M " << fmt2(xpos(k)) << " " << fmt2(ypos(0));

  for (int row = 0; row < rows; ++row) {
    BraidLetter l = w.letters[static_cast<std::size_t>(row)];
    int slot_lo = l.index - 1, slot_hi = l.index;
    int strand_lo = -1, strand_hi = -1;
    for (int k = 0; k < w.n; ++k) {
      if (slot_of[static_cast<std::size_t>(k)] == slot_lo) strand_lo = k;
      if (slot_of[static_cast<std::size_t>(k)] == slot_hi) strand_hi = k;
    }
    // Positive sign: the strand leaving the low slot crosses over.
    int over = (l.sign > 0) ? strand_lo : strand_hi;
    int under = (over == strand_lo) ? strand_hi : strand_lo;
    double y0 = ypos(row), y1 = ypos(row + 1);
    double x_under0 = xpos(slot_of[static_cast<std::size_t>(under)]);
    double x_under1 = xpos((under == strand_lo) ? slot_hi : slot_lo);
    double x_over1 = xpos((over == strand_lo) ? slot_hi : slot_lo);
    const double gap = 0.18;
    paths[static_cast<std::size_t>(under)]
        << " L " << fmt2(x_under0 + (x_under1 - x_under0) * (0.5 - gap)) << " "
        << fmt2(y0 + (y1 - y0) * (0.5 - gap)) << " M "
        << fmt2(x_under0 + (x_under1 - x_under0) * (0.5 + gap)) << " "
        << fmt2(y0 + (y1 - y0) * (0.5 + gap)) << " L " << fmt2(x_under1) << " " << fmt2(y1);
    paths[static_cast<std::size_t>(over)] << " L " << fmt2(x_over1) << " " << fmt2(y1);
    std::swap(slot_of[static_cast<std::size_t>(strand_lo)],
              slot_of[static_cast<std::size_t>(strand_hi)]);
    for (int k = 0; k < w.n; ++k)
      if (k != strand_lo && k != strand_hi)
        paths[static_cast<std::size_t>(k)]
            << " L " << fmt2(xpos(slot_of[static_cast<std::size_t>(k)])) << " " << fmt2(y1);
  }
  if (rows == 0)
    for (int k = 0; k < w.n; ++k)
      paths[static_cast<std::size_t>(k)] << " L " << fmt2(xpos(k)) << " " << fmt2(ypos(1));

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt2(width) << "\" height=\""
      << fmt2(height) << "\" viewBox=\"0 0 " << fmt2(width) << " " << fmt2(height) << "\">\n";
  for (int k = 0; k < w.n; ++k)
    out << "  <path d=\"" << paths[static_cast<std::size_t>(k)].str()
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string render(const BraidWord& w, RenderFormat format) {
  switch (format) {
    case RenderFormat::tikz: return render_tikz(w);
    case RenderFormat::ascii: return render_ascii(w);
    case RenderFormat::svg: return render_svg(w);
  }
  throw Error("unknown render format");
}

}  // namespace braidtrack
