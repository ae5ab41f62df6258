#pragma once

#include <array>
#include <cstdint>

namespace minij {

// Four-point nullability lattice: Nullable on top, Bottom underneath, and
// Null / NonNull incomparable in between.
//
// Null and NonNull are analysis-internal refinements of the two declared
// qualifiers; declarations only ever carry NonNull or Nullable.
enum class Nullness : uint8_t { Bottom = 0, Null = 1, NonNull = 2, Nullable = 3 };

constexpr std::array<Nullness, 4> kAllNullness = {
    Nullness::Bottom, Nullness::Null, Nullness::NonNull, Nullness::Nullable};

constexpr bool nullness_le(Nullness a, Nullness b) {
  if (a == b) return true;
  if (a == Nullness::Bottom) return true;
  if (b == Nullness::Nullable) return true;
  return false;
}

constexpr Nullness nullness_join(Nullness a, Nullness b) {
  if (a == b) return a;
  if (a == Nullness::Bottom) return b;
  if (b == Nullness::Bottom) return a;
  return Nullness::Nullable;
}

constexpr Nullness nullness_meet(Nullness a, Nullness b) {
  if (a == b) return a;
  if (a == Nullness::Nullable) return b;
  if (b == Nullness::Nullable) return a;
  return Nullness::Bottom;
}

/// May the value be null at runtime per the analysis?
constexpr bool maybe_null(Nullness n) {
  return n == Nullness::Null || n == Nullness::Nullable;
}

/// Subtype check over declared qualifiers: src assignable to dst.
constexpr bool assignable(Nullness src, Nullness dst) {
  return nullness_join(src, dst) == dst;
}

constexpr const char* nullness_name(Nullness n) {
  switch (n) {
    case Nullness::Bottom: return "Bottom";
    case Nullness::Null: return "Null";
    case Nullness::NonNull: return "NonNull";
    case Nullness::Nullable: return "Nullable";
  }
  return "?";
}

}  // namespace minij
