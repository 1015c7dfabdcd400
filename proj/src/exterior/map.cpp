#include "gcx/exterior/map.hpp"

namespace gcx {

CoordinateMap::CoordinateMap(std::string name, ChartPtr source, ChartPtr target, std::map<std::string, Expr> images,
                             Region domain)
    : name_(std::move(name)),
      source_(std::move(source)),
      target_(std::move(target)),
      images_(std::move(images)),
      domain_(std::move(domain)) {
  for (const auto& [coord, e] : images_) {
    if (!target_->coordinate(coord)) {
      throw Error("map '" + name_ + "': target chart '" + target_->name() + "' has no coordinate '" + coord + "'");
    }
    for (const std::string& s : symbols(e)) {
      if (!source_->slot_index(s)) {
        throw Error("map '" + name_ + "': '" + s + "' is not a coordinate of source chart '" + source_->name() + "'");
      }
    }
  }
  for (const Coordinate& c : target_->coordinates()) {
    if (!images_.count(c.name)) throw Error("map '" + name_ + "': no image given for target coordinate '" + c.name + "'");
  }
  for (const Slot& s : target_->slots()) {
    const Coordinate& c = target_->coordinates()[s.coordinate];
    const Expr& img = images_.at(c.name);
    slot_images_.push_back(s.conjugate ? conjugate(img, source_->partners()) : img);
    substitution_[s.symbol] = slot_images_.back();
  }
  // Angle-valued targets must wind an integer number of times in each source angle.
  for (const Coordinate& c : target_->coordinates()) {
    if (c.kind != CoordKind::angle) continue;
    for (const Slot& s : source_->slots()) {
      if (source_->coordinates()[s.coordinate].kind != CoordKind::angle) continue;
      Expr slope = try_expand(diff(images_.at(c.name), s.symbol));
      const bool integral = slope.is_constant() && slope.value().is_real() && slope.value().re().get_den() == 1;
      if (!integral) {
        throw Error("map '" + name_ + "': angle target '" + c.name + "' is not integer-linear in source angle '" +
                    s.symbol + "'");
      }
    }
  }
}

CoordinateMap identity_map(const ChartPtr& chart) {
  std::map<std::string, Expr> images;
  for (const Coordinate& c : chart->coordinates()) images[c.name] = Expr::symbol(c.name);
  return CoordinateMap("id_" + chart->name(), chart, chart, std::move(images));
}

CoordinateMap compose(const CoordinateMap& g, const CoordinateMap& f) {
  if (f.target() != g.source()) {
    throw ChartMismatch("compose: '" + f.name() + "' lands on " + f.target()->name() + " but '" + g.name() +
                        "' starts on " + g.source()->name());
  }
  std::map<std::string, Expr> images;
  for (const auto& [coord, e] : g.images()) images[coord] = try_expand(substitute(e, f.substitution()));
  Region dom = f.domain().intersect(g.domain().substitute(*f.source(), f.substitution()));
  return CoordinateMap(g.name() + "∘" + f.name(), f.source(), g.target(), std::move(images), std::move(dom));
}

Expr pullback(const CoordinateMap& f, const Expr& e) { return try_expand(substitute(e, f.substitution())); }

MixedForm pullback(const CoordinateMap& f, const MixedForm& a) {
  if (a.chart() != f.target()) {
    throw ChartMismatch("pullback: form lives on " + a.chart()->name() + ", map '" + f.name() + "' targets " +
                        f.target()->name());
  }
  const ChartPtr& src = f.source();
  const int n = f.target()->dim();
  std::vector<MixedForm> dimage;
  dimage.reserve(n);
  for (int s = 0; s < n; ++s) dimage.push_back(d(MixedForm::scalar(src, f.slot_image(s))));

  Region dom = f.domain().intersect(a.domain().substitute(*src, f.substitution()));
  MixedForm out(src, dom);
  for (const auto& [m, c] : a.terms()) {
    MixedForm term = MixedForm::scalar(src, pullback(f, c));
    for (int s = 0; s < n && !term.is_zero(); ++s) {
      if (m & (Mask{1} << s)) term = wedge(term, dimage[s]);
    }
    out = out + term;
  }
  return out.with_domain(dom);
}

}  // namespace gcx
