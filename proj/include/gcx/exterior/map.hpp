#pragma once

#include <map>
#include <string>

#include "gcx/exterior/chart.hpp"
#include "gcx/exterior/form.hpp"

namespace gcx {

/// Smooth map between charts, one source expression per target coordinate.
/// A complex target coordinate is given by its holomorphic image; the image
/// of its conjugate slot is the conjugate expression.
class CoordinateMap {
 public:
  CoordinateMap(std::string name, ChartPtr source, ChartPtr target, std::map<std::string, Expr> images,
                Region domain = {});

  const std::string& name() const { return name_; }
  const ChartPtr& source() const { return source_; }
  const ChartPtr& target() const { return target_; }
  const std::map<std::string, Expr>& images() const { return images_; }
  const Region& domain() const { return domain_; }

  /// Image of a target slot symbol (z or zbar) as a source expression.
  const Expr& slot_image(int target_slot) const { return slot_images_[target_slot]; }
  /// Target slot symbol -> source expression, for substitution.
  const std::map<std::string, Expr>& substitution() const { return substitution_; }

 private:
  std::string name_;
  ChartPtr source_;
  ChartPtr target_;
  std::map<std::string, Expr> images_;
  Region domain_;
  std::vector<Expr> slot_images_;
  std::map<std::string, Expr> substitution_;
};

CoordinateMap identity_map(const ChartPtr& chart);

/// g ∘ f, defined where f is.
CoordinateMap compose(const CoordinateMap& g, const CoordinateMap& f);

/// f*a; the result lives on f's source chart, restricted to f's domain.
MixedForm pullback(const CoordinateMap& f, const MixedForm& a);
Expr pullback(const CoordinateMap& f, const Expr& e);

}  // namespace gcx
