#include "sdlab/torus.hpp"

#include <algorithm>
#include <cmath>

#include "sdlab/error.hpp"

namespace sdlab {

u128 fixed_ratio(std::uint64_t p, std::uint64_t q) {
  require(q > 0, "fixed_ratio: zero denominator");
  require(p < q, "fixed_ratio: numerator must be below denominator");
  const u128 top = static_cast<u128>(p) << 64;
  const u128 hi = top / q;
  const u128 rem = top % q;
  const u128 lo = (rem << 64) / q;
  return (hi << 64) | lo;
}

long double raw_to_real(u128 raw) {
  const auto hi = static_cast<std::uint64_t>(raw >> 64);
  const auto lo = static_cast<std::uint64_t>(raw);
  return std::ldexp(static_cast<long double>(hi), -64) +
         std::ldexp(static_cast<long double>(lo), -128);
}

TorusPoint TorusPoint::from_ratio(std::int64_t p, std::uint64_t q) {
  require(q > 0, "from_ratio: zero denominator");
  const i128 sq = static_cast<i128>(q);
  i128 r = static_cast<i128>(p) % sq;
  if (r < 0) r += sq;
  return TorusPoint(fixed_ratio(static_cast<std::uint64_t>(r), q));
}

TorusPoint TorusPoint::from_real(long double x) {
  require(std::isfinite(x), "from_real: non-finite input");
  long double f = x - std::floor(x);
  if (f >= 1.0L) f = 0.0L;
  // f has at most 64 significant bits, so f * 2^128 converts exactly.
  return TorusPoint(static_cast<u128>(std::ldexp(f, 128)));
}

TorusPoint TorusPoint::half_multiple(std::uint64_t m) const {
  const WideProduct p = mul_wide(raw_, m);
  return TorusPoint((p.frac >> 1) | (static_cast<u128>(p.whole & 1U) << 127));
}

TorusPoint TorusPoint::truncated(int bits) const {
  require(bits >= 1 && bits <= 128, "truncated: bits must be in [1, 128]");
  if (bits == 128) return *this;
  const u128 mask = ~((u128{1} << (128 - bits)) - 1);
  return TorusPoint(raw_ & mask);
}

long double dist_nearest(long double x) {
  require(std::isfinite(x), "dist_nearest: non-finite input");
  const long double f = x - std::floor(x);
  return std::min(f, 1.0L - f);
}

u128 radius_units(long double radius) {
  require(std::isfinite(radius) && radius >= 0.0L, "radius must be finite and nonnegative");
  if (radius >= 0.5L) return kU128Max;
  return static_cast<u128>(std::ldexp(radius, 128));
}

TorusInterval::TorusInterval(TorusPoint center, u128 radius) : center_(center), radius_(radius) {
  require(radius < kHalfTurn, "TorusInterval: radius must be below 1/2 (use the full circle)");
}

TorusInterval TorusInterval::from_real(TorusPoint center, long double radius) {
  return TorusInterval(center, radius_units(radius));
}

void append_arc_segments(const TorusInterval& arc, std::vector<Segment>& out) {
  if (arc.radius() == 0) return;
  const u128 length = arc.radius() << 1;
  const u128 lo = arc.center().raw() - arc.radius();
  const u128 last = lo + (length - 1);
  if (last >= lo) {
    out.push_back({lo, last});
  } else {
    out.push_back({lo, kU128Max});
    out.push_back({0, last});
  }
}

IntervalUnion IntervalUnion::full_circle() {
  IntervalUnion u;
  u.full_ = true;
  return u;
}

IntervalUnion IntervalUnion::from_arc(const TorusInterval& arc) {
  std::vector<Segment> segs;
  append_arc_segments(arc, segs);
  return from_segments(std::move(segs));
}

IntervalUnion IntervalUnion::from_arcs(std::span<const TorusInterval> arcs) {
  std::vector<Segment> segs;
  segs.reserve(arcs.size() + 1);
  for (const auto& arc : arcs) append_arc_segments(arc, segs);
  return from_segments(std::move(segs));
}

IntervalUnion IntervalUnion::from_segments(std::vector<Segment> segments) {
  IntervalUnion u;
  if (segments.empty()) return u;
  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
  std::vector<Segment> merged;
  merged.reserve(segments.size());
  merged.push_back(segments.front());
  for (std::size_t i = 1; i < segments.size(); ++i) {
    Segment& cur = merged.back();
    const Segment& next = segments[i];
    // Closed-arc semantics: [lo, last+1] touching next.lo merges.
    if (cur.last == kU128Max || next.lo <= cur.last + 1) {
      cur.last = std::max(cur.last, next.last);
    } else {
      merged.push_back(next);
    }
  }
  if (merged.size() == 1 && merged[0].lo == 0 && merged[0].last == kU128Max) {
    return full_circle();
  }
  u.segments_ = std::move(merged);
  return u;
}

MeasureUnits IntervalUnion::measure_units() const {
  if (full_) return MeasureUnits(1) << 128;
  // Canonical segments leave a gap, so the sum stays below 2^128.
  u128 total = 0;
  for (const auto& s : segments_) total += (s.last - s.lo) + 1;
  MeasureUnits m = static_cast<std::uint64_t>(total >> 64);
  m <<= 64;
  m += static_cast<std::uint64_t>(total);
  return m;
}

long double units_to_real(const MeasureUnits& units) {
  if (units >> 128 != 0) return std::ldexp(units.convert_to<long double>(), -128);
  const MeasureUnits hi = units >> 64;
  const MeasureUnits lo = units & MeasureUnits(~std::uint64_t{0});
  return std::ldexp(static_cast<long double>(hi.convert_to<std::uint64_t>()), -64) +
         std::ldexp(static_cast<long double>(lo.convert_to<std::uint64_t>()), -128);
}

long double IntervalUnion::measure() const { return units_to_real(measure_units()); }

bool IntervalUnion::contains(TorusPoint x) const {
  if (full_) return true;
  const u128 v = x.raw();
  auto it = std::upper_bound(segments_.begin(), segments_.end(), v,
                             [](u128 value, const Segment& s) { return value < s.lo; });
  if (it == segments_.begin()) return false;
  --it;
  return v <= it->last;
}

IntervalUnion IntervalUnion::intersect(const IntervalUnion& other) const {
  if (full_) return other;
  if (other.full_) return *this;
  IntervalUnion out;
  const auto& a = segments_;
  const auto& b = other.segments_;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const u128 lo = std::max(a[i].lo, b[j].lo);
    const u128 last = std::min(a[i].last, b[j].last);
    if (lo <= last) out.segments_.push_back({lo, last});
    if (a[i].last < b[j].last) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& other) const {
  if (full_ || other.full_) return full_circle();
  std::vector<Segment> all;
  all.reserve(segments_.size() + other.segments_.size());
  std::merge(segments_.begin(), segments_.end(), other.segments_.begin(), other.segments_.end(),
             std::back_inserter(all),
             [](const Segment& x, const Segment& y) { return x.lo < y.lo; });
  return from_segments(std::move(all));
}

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return {s.rbegin(), s.rend()};
}

}  // namespace sdlab
