#pragma once

// Exact arithmetic on the circle R/Z.
//
// Points are 128-bit binary fractions: a TorusPoint with raw value r stands for
// r / 2^128. Multiplying by an integer q wraps modulo 2^128, which is exactly
// "q·x mod 1", so scans over q up to 1e9 keep ~98 bits below the binary point.
//
// Arcs and unions of arcs live on the same 2^-128 grid. All set operations
// are integer operations; measures are exact integers in units of 2^-128.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sdlab {

__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

/// Exact measure in units of 2^-128 (the full circle is 2^128, hence >128 bits).
using MeasureUnits = boost::multiprecision::uint256_t;

inline constexpr u128 kU128Max = ~u128{0};
inline constexpr u128 kHalfTurn = u128{1} << 127;

/// Integer and fractional part of q · x for x = raw/2^128.
struct WideProduct {
  std::uint64_t whole;
  u128 frac;
};

inline WideProduct mul_wide(u128 raw, std::uint64_t q) {
  const u128 lo = static_cast<u128>(static_cast<std::uint64_t>(raw)) * q;
  const u128 hi = (raw >> 64) * q;
  const u128 frac = lo + (hi << 64);
  const std::uint64_t carry = frac < lo ? 1 : 0;
  return {static_cast<std::uint64_t>(hi >> 64) + carry, frac};
}

/// floor(p * 2^128 / q) for 0 <= p < q.
u128 fixed_ratio(std::uint64_t p, std::uint64_t q);

/// Raw fraction -> long double, correctly rounded to 64 mantissa bits.
long double raw_to_real(u128 raw);

class TorusPoint {
 public:
  constexpr TorusPoint() = default;
  static constexpr TorusPoint from_raw(u128 raw) { return TorusPoint(raw); }
  /// p/q mod 1, rounded down onto the 2^-128 grid.
  static TorusPoint from_ratio(std::int64_t p, std::uint64_t q);
  /// x mod 1; x must be finite.
  static TorusPoint from_real(long double x);

  constexpr u128 raw() const { return raw_; }
  long double value() const { return raw_to_real(raw_); }

  TorusPoint operator+(TorusPoint o) const { return TorusPoint(raw_ + o.raw_); }
  TorusPoint operator-(TorusPoint o) const { return TorusPoint(raw_ - o.raw_); }
  TorusPoint operator-() const { return TorusPoint(u128{0} - raw_); }
  /// q · x mod 1 (exact).
  TorusPoint times(std::uint64_t q) const { return TorusPoint(raw_ * q); }
  WideProduct multiply(std::uint64_t q) const { return mul_wide(raw_, q); }
  /// (m · x / 2) mod 1, exact except for the discarded last bit.
  TorusPoint half_multiple(std::uint64_t m) const;
  /// x / 2 as a point of [0, 1/2) (drops the last bit).
  TorusPoint half() const { return TorusPoint(raw_ >> 1); }
  /// Keep only the leading `bits` fractional bits (rounding toward zero).
  TorusPoint truncated(int bits) const;

  /// Distance to the nearest integer, exact on the grid.
  u128 dist_raw() const { return raw_ >= kHalfTurn ? u128{0} - raw_ : raw_; }
  long double dist() const { return raw_to_real(dist_raw()); }

  friend constexpr auto operator<=>(TorusPoint, TorusPoint) = default;

 private:
  constexpr explicit TorusPoint(u128 raw) : raw_(raw) {}
  u128 raw_ = 0;
};

/// ‖x‖: distance from x to the nearest integer. Throws on non-finite input.
long double dist_nearest(long double x);

/// Closed arc [center - radius, center + radius] with radius < 1/2.
class TorusInterval {
 public:
  TorusInterval(TorusPoint center, u128 radius);
  /// Quantizes a real radius onto the grid (rounding down). Requires radius < 1/2.
  static TorusInterval from_real(TorusPoint center, long double radius);

  TorusPoint center() const { return center_; }
  u128 radius() const { return radius_; }

 private:
  TorusPoint center_;
  u128 radius_;
};

/// Real radius -> grid units, or nullopt-like sentinel kU128Max when >= 1/2.
u128 radius_units(long double radius);

/// A piece of a union after cutting the circle at 0: covers [lo, last + 1)
/// in grid units, so measure = last - lo + 1.
struct Segment {
  u128 lo;
  u128 last;
  friend constexpr bool operator==(Segment, Segment) = default;
};

/// Finite union of closed arcs, canonical: segments sorted, disjoint, and
/// never touching (touching arcs are merged). The full circle is a sentinel.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  static IntervalUnion empty() { return {}; }
  static IntervalUnion full_circle();
  static IntervalUnion from_arc(const TorusInterval& arc);
  static IntervalUnion from_arcs(std::span<const TorusInterval> arcs);
  /// Canonicalizes arbitrary (possibly overlapping, unsorted) segments.
  static IntervalUnion from_segments(std::vector<Segment> segments);

  bool is_full() const { return full_; }
  bool is_empty() const { return !full_ && segments_.empty(); }
  const std::vector<Segment>& segments() const { return segments_; }
  /// Circular arcs; a piece cut at 0 counts once.
  std::size_t arc_count() const {
    if (full_) return 1;
    const bool wraps = segments_.size() > 1 && segments_.front().lo == 0 &&
                       segments_.back().last == kU128Max;
    return segments_.size() - (wraps ? 1 : 0);
  }

  MeasureUnits measure_units() const;
  long double measure() const;
  bool contains(TorusPoint x) const;

  IntervalUnion intersect(const IntervalUnion& other) const;
  IntervalUnion unite(const IntervalUnion& other) const;

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  bool full_ = false;
  std::vector<Segment> segments_;
};

/// Appends the (one or two) cut segments of an arc; nothing for radius 0.
void append_arc_segments(const TorusInterval& arc, std::vector<Segment>& out);

long double units_to_real(const MeasureUnits& units);

/// Alias for IntervalUnion::measure, named after the operation it implements.
inline long double union_measure(const IntervalUnion& u) { return u.measure(); }
inline IntervalUnion intersect(const IntervalUnion& u, const IntervalUnion& v) {
  return u.intersect(v);
}

std::string to_string(u128 v);

}  // namespace sdlab
