#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gcx/exterior/expr.hpp"

namespace gcx {

enum class CoordKind : std::uint8_t { real, radial, angle, complex };

std::string_view coord_kind_name(CoordKind k);

struct Coordinate {
  std::string name;
  CoordKind kind = CoordKind::real;
  // Names of the real and imaginary parts of a complex coordinate (x1, y1).
  std::string re_name;
  std::string im_name;
};

/// One real dimension of the chart's cotangent basis. A complex coordinate
/// contributes two slots, z and its conjugate (Wirtinger basis dz, dz̄).
struct Slot {
  std::string symbol;
  int coordinate = 0;
  bool conjugate = false;
};

/// Named coordinate system. The conjugate symbol of complex coordinate `z1`
/// is `z1bar`; its differential prints as `dz1bar`.
class Chart {
 public:
  Chart(std::string name, std::vector<Coordinate> coordinates);

  const std::string& name() const { return name_; }
  const std::vector<Coordinate>& coordinates() const { return coordinates_; }
  const std::vector<Slot>& slots() const { return slots_; }
  int dim() const { return static_cast<int>(slots_.size()); }

  std::optional<int> slot_index(const std::string& symbol) const;
  const Coordinate* coordinate(const std::string& name) const;
  CoordKind slot_kind(int slot) const { return coordinates_[slots_[slot].coordinate].kind; }

  /// The other slot of a complex pair; real slots are their own partner.
  int partner_slot(int slot) const;
  /// Symbol -> conjugate symbol, both directions, for complex coordinates.
  const std::map<std::string, std::string>& partners() const { return partners_; }
  /// x1 -> (z1 + z1bar)/2, y1 -> (z1 - z1bar)/(2i).
  const std::map<std::string, Expr>& real_part_rewrites() const { return rewrites_; }

  Expr symbol(int slot) const { return Expr::symbol(slots_[slot].symbol); }
  std::string differential_name(int slot) const { return "d" + slots_[slot].symbol; }

  std::string str() const;

 private:
  std::string name_;
  std::vector<Coordinate> coordinates_;
  std::vector<Slot> slots_;
  std::map<std::string, std::string> partners_;
  std::map<std::string, Expr> rewrites_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::string name, std::vector<Coordinate> coordinates);

enum class Relation : std::uint8_t { lt, le, gt, ge, eq, ne };

std::string_view relation_text(Relation r);

/// `lhs rel rhs`. Ordering relations need a real-valued lhs. A constraint on a
/// bare coordinate or on a complex modulus |z| doubles as a sampling bound.
struct Constraint {
  Expr lhs;
  Relation rel = Relation::gt;
  Gaussian rhs;
  std::string hint_coordinate;  // empty when lhs is not a simple coordinate form
  bool modulus = false;

  static Constraint make(const Chart& chart, Expr lhs, Relation rel, Gaussian rhs);
  bool holds(const Point& p, double tolerance = 1e-12) const;
  std::string str() const;
};

/// Conjunction of constraints; the empty region is the whole chart.
class Region {
 public:
  Region() = default;
  explicit Region(std::vector<Constraint> constraints) : constraints_(std::move(constraints)) {}

  const std::vector<Constraint>& constraints() const { return constraints_; }
  bool empty() const { return constraints_.empty(); }
  bool contains(const Point& p) const;
  /// First violated constraint, if any.
  std::optional<Constraint> violated(const Point& p) const;
  Region intersect(const Region& other) const;
  /// Rewrites constraint left-hand sides through a substitution onto `chart`.
  Region substitute(const Chart& chart, const std::map<std::string, Expr>& values) const;

  std::string str() const;

 private:
  std::vector<Constraint> constraints_;
};

/// Completes a point: missing coordinates default to 0 (radial ones to 1) and
/// conjugate slots are filled from their partners.
Point make_point(const Chart& chart, const std::map<std::string, Gaussian>& coordinate_values);

/// Deterministic stream of rational sample points in a region. Bounds come
/// from constraint hints, the rest is rejection sampling.
class PointSampler {
 public:
  PointSampler(const Chart& chart, const Region& region, std::uint64_t seed);

  /// Next admissible point; throws SamplingError past the attempt budget.
  Point next();
  void set_budget(long attempts) { budget_ = attempts; }
  long attempts() const { return attempts_; }

 private:
  struct Interval {
    Rational lo;
    Rational hi;
  };
  Rational draw(const Interval& iv);
  Rational uniform01();

  const Chart& chart_;
  Region region_;
  std::mt19937_64 rng_;
  std::map<std::string, Interval> bounds_;
  std::map<std::string, Interval> modulus_;
  std::map<std::string, Gaussian> fixed_;
  long attempts_ = 0;
  long budget_ = 100000;
};

/// Rational approximation with a power-of-two denominator.
Rational to_rational(double v, int bits = 20);

}  // namespace gcx
