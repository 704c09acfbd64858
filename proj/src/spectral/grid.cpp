#include "visco/spectral/grid.hpp"

#include <string>

#include "visco/errors.hpp"

namespace visco {

namespace {
void check_axis(int n) {
  if (n < 8 || n % 2 != 0) {
    throw ConfigError("grid axis must be an even integer >= 8, got " + std::to_string(n));
  }
}
}  // namespace

Grid::Grid(int a, int b, int c, Dealias d) : n1(a), n2(b), n3(c), dealias(d) {
  check_axis(a);
  check_axis(b);
  check_axis(c);
}

double Grid::spacing(int axis) const {
  const int n = axis == 0 ? n1 : axis == 1 ? n2 : n3;
  return kTwoPi / n;
}

Grid Grid::scaled(int num, int den) const {
  auto s = [&](int n) {
    int m = (n * num + den - 1) / den;
    return m + (m % 2);
  };
  return Grid(s(n1), s(n2), s(n3), dealias);
}

Grid Grid::product_grid(int degree) const {
  switch (dealias) {
    case Dealias::TwoThirds:
      return *this;
    case Dealias::Pad3Half:
      // degree-3 products need the 2x grid to keep the retained band alias-free
      return degree >= 3 ? scaled(2, 1) : scaled(3, 2);
    case Dealias::Pad2x:
      return scaled(2, 1);
  }
  return *this;
}

const char* to_string(Dealias d) {
  switch (d) {
    case Dealias::TwoThirds: return "two-thirds";
    case Dealias::Pad3Half: return "pad3/2";
    case Dealias::Pad2x: return "pad2x";
  }
  return "?";
}

Dealias parse_dealias(const char* s) {
  const std::string v(s);
  if (v == "two-thirds") return Dealias::TwoThirds;
  if (v == "pad3/2" || v == "pad3half") return Dealias::Pad3Half;
  if (v == "pad2x") return Dealias::Pad2x;
  throw ConfigError("unknown dealias mode '" + v + "'");
}

}  // namespace visco
