#include "gcx/gcs/surgery.hpp"

namespace gcx {

namespace {

Expr sym(const std::string& s) { return Expr::symbol(s); }
Expr q_(long n) { return Expr(Rational(n)); }
const Expr I = Expr::imaginary_unit();

int slot(const Chart& c, const std::string& s) {
  auto i = c.slot_index(s);
  if (!i) throw ChartMismatch("chart '" + c.name() + "' has no coordinate '" + s + "'");
  return *i;
}

MixedForm dx(const ChartPtr& c, const std::string& s) { return MixedForm::differential(c, slot(*c, s)); }

void require_complex(const Chart& c, const std::string& name) {
  const Coordinate* co = c.coordinate(name);
  if (!co || co->kind != CoordKind::complex) {
    throw ChartMismatch("chart '" + c.name() + "' needs a complex coordinate '" + name + "'");
  }
}

void require_valid(const SurgeryParams& s) {
  const ParamCheck check = validate_surgery_params(s);
  if (!check.ok) throw TopologyError("invalid surgery parameters: " + check.violation);
}

Region make_region(const Chart& c, std::vector<std::tuple<Expr, Relation, Gaussian>> parts) {
  std::vector<Constraint> cs;
  for (auto& [lhs, rel, rhs] : parts) cs.push_back(Constraint::make(c, lhs, rel, rhs));
  return Region(std::move(cs));
}

SpinorStructure build(const ChartPtr& chart, const SurgeryParams& s, const BumpPtr& xi, const MixedForm& extra,
                      bool gluck, const std::string& name, const CheckOptions& opts) {
  require_valid(s);
  require_complex(*chart, "z1");
  require_complex(*chart, "z2");
  if (gluck) require_complex(*chart, "z3");
  MixedForm rho = q_(1) * MixedForm::scalar(chart, sym("z1"));
  const MixedForm c = surgery_exponent(chart, s, xi, gluck);
  rho = wedge(rho, exp_form(c));
  if (extra.chart() && !extra.is_zero()) {
    require_same_chart(rho, extra, "symplectic factor");
    if (extra.min_degree() != 2 || extra.max_degree() != 2) throw DegreeError("symplectic factor must be a 2-form");
    const Agreement closed = forms_agree(d(extra), MixedForm(chart), opts);
    if (!closed.agree) throw Error("symplectic factor is not closed: " + closed.detail);
    rho = wedge(rho, exp_form(I * extra));
  }
  return SpinorStructure(name, rho, MixedForm(chart), surgery_certificate(chart, s, c), std::nullopt, opts);
}

}  // namespace

BumpPtr default_radial_bump() {
  static const BumpPtr b = std::make_shared<Bump>(Bump{"xi", Rational(1, 10), Rational(3, 10)});
  return b;
}

MixedForm surgery_exponent(const ChartPtr& chart, const SurgeryParams& s, const BumpPtr& xi, bool gluck) {
  const Expr z1 = sym("z1"), z1b = sym("z1bar");
  const Expr mod2 = z1 * z1b;
  const Expr xi_arg = gluck ? mod2 : sqrt(mod2);
  const MixedForm dz1 = dx(chart, "z1"), dz1b = dx(chart, "z1bar");
  const MixedForm dz2 = dx(chart, "z2"), dz2b = dx(chart, "z2bar");
  const Expr a = q_(s.a), b = q_(s.b), p = q_(s.p), q = q_(s.q);
  MixedForm c = (-(p / q_(4)) * Expr::bump(xi, 0, xi_arg) / mod2) * wedge(dz1, dz1b);
  c = c + (-(b / q_(2))) * wedge(dz2, dz2b);
  const MixedForm bracket = (a / q_(2) - q) * dz2 - (a / q_(2) + q) * dz2b;
  c = c + wedge((Expr(1) / (q_(2) * z1)) * dz1, bracket);
  if (gluck) {
    const Expr z3 = sym("z3"), z3b = sym("z3bar");
    const Expr factor = q_(-2) / pow(Expr(1) + z3 * z3b, 2);
    c = c + factor * wedge(dz2, z3b * dx(chart, "z3") + z3 * dx(chart, "z3bar"));
  }
  return c;
}

GeneralizedSection surgery_certificate(const ChartPtr& chart, const SurgeryParams& s, const MixedForm& exponent) {
  GeneralizedSection cert = GeneralizedSection::zero(chart);
  const Rational half_a = Rational(s.a) / 2;
  const Rational plus = half_a + s.q;
  const Rational minus = half_a - s.q;
  if (plus != 0) {
    cert.vector.accumulate(slot(*chart, "z2bar"), Expr(Rational(2) / plus));
  } else {
    cert.vector.accumulate(slot(*chart, "z2"), Expr(Rational(-2) / minus));
  }
  cert.covector = (Expr(1) / sym("z1")) * dx(chart, "z1") - interior(cert.vector, exponent);
  return cert;
}

SpinorStructure build_luttinger_spinor(const ChartPtr& chart, const SurgeryParams& s, const BumpPtr& xi,
                                       const MixedForm& sigma_form, const CheckOptions& opts) {
  return build(chart, s, xi, sigma_form, false, "luttinger", opts);
}

SpinorStructure build_gluck_spinor(const ChartPtr& chart, const SurgeryParams& s, const BumpPtr& xi,
                                   const MixedForm& r_form, const CheckOptions& opts) {
  return build(chart, s, xi, r_form, true, "gluck", opts);
}

namespace {

LuttingerModel assemble_model(const SurgeryParams& s, const BumpPtr& xi, const CheckOptions& opts) {
  require_valid(s);
  const ChartPtr lut = make_chart("lut", {{"z1", CoordKind::complex, "", ""}, {"z2", CoordKind::complex, "", ""}});
  const ChartPtr polar = make_chart("polar", {{"r", CoordKind::radial, "", ""},
                                              {"th0", CoordKind::angle, "", ""},
                                              {"th1", CoordKind::angle, "", ""},
                                              {"th2", CoordKind::angle, "", ""}});
  const ChartPtr target = make_chart("target", {{"R", CoordKind::radial, "", ""},
                                                {"Th0", CoordKind::angle, "", ""},
                                                {"Th1", CoordKind::angle, "", ""},
                                                {"Th2", CoordKind::angle, "", ""}});
  const Expr r = sym("r"), th0 = sym("th0"), th1 = sym("th1"), th2 = sym("th2");
  const Expr p = q_(s.p), q = q_(s.q), a = q_(s.a), b = q_(s.b);

  const Region glue = make_region(*polar, {{r, Relation::gt, Gaussian(Rational(1, 2))}});
  CoordinateMap phi("phi", polar, target,
                    {{"R", sqrt(log(q_(2) * r))}, {"Th0", p * th0 + a * th2}, {"Th1", th1}, {"Th2", q * th0 + b * th2}},
                    glue);
  CoordinateMap psi("psi", polar, lut, {{"z1", r * exp(I * th0)}, {"z2", th1 + I * th2}});
  const Expr z1 = sym("z1"), z1b = sym("z1bar"), z2 = sym("z2"), z2b = sym("z2bar");
  CoordinateMap psi_inv("psi_inv", lut, polar,
                        {{"r", sqrt(z1 * z1b)},
                         {"th0", -(I / q_(2)) * log(z1 / z1b)},
                         {"th1", (z2 + z2b) / q_(2)},
                         {"th2", (z2 - z2b) / (q_(2) * I)}},
                        make_region(*lut, {{sqrt(z1 * z1b), Relation::gt, Gaussian(0)}}));

  MixedForm exponent = surgery_exponent(lut, s, xi, false);
  const Expr R = sym("R");
  MixedForm omega = R * wedge(dx(target, "R"), dx(target, "Th0")) + wedge(dx(target, "Th1"), dx(target, "Th2"));
  MixedForm bw = (-q / r) * wedge(dx(polar, "r"), dx(polar, "th1")) +
                 (-(a / q_(2))) * wedge(dx(polar, "th0"), dx(polar, "th2"));
  Region annulus = make_region(*polar, {{r, Relation::gt, Gaussian(Rational(1, 2))}, {r, Relation::lt, Gaussian(1)}});
  Region collar = make_region(*polar, {{r, Relation::gt, Gaussian(Rational(4, 5))}, {r, Relation::lt, Gaussian(1)}});
  SpinorStructure rho0 = build_luttinger_spinor(lut, s, xi, MixedForm(lut), opts);
  return LuttingerModel{s,     xi,     lut,   polar, target, std::move(phi), std::move(psi), std::move(psi_inv),
                        std::move(exponent), std::move(omega), std::move(bw), std::move(annulus), std::move(collar),
                        std::move(rho0)};
}

}  // namespace

LuttingerModel make_luttinger_model(const SurgeryParams& s, const BumpPtr& xi, const CheckOptions& opts) {
  return assemble_model(s, xi, opts);
}

Agreement check_extension_lemma(const LuttingerModel& m, const CheckOptions& opts) {
  const MixedForm lhs = pullback(m.psi, m.rho0.rho());
  const Expr r = sym("r"), th0 = sym("th0");
  const MixedForm sympl = pullback(m.phi, m.omega_tilde);
  const MixedForm rhs = (r * exp(I * th0)) * exp_form(m.b_witness + I * sympl);
  return forms_agree(lhs, rhs, opts, m.annulus);
}

GluedModel glue_luttinger_model(const LuttingerModel& m, bool cutoff, const Rational& beta, const CheckOptions& opts) {
  const SurgeryParams& s = m.params;
  const ChartPtr& target = m.target;
  const Expr p = q_(s.p), q = q_(s.q);
  const MixedForm bj = Expr(beta) * wedge(dx(target, "Th1"), q * dx(target, "Th0") - p * dx(target, "Th2"));
  const MixedForm rho_j = exp_form(bj + I * m.omega_tilde);
  SpinorStructure outside("outside", rho_j, MixedForm(target), GeneralizedSection::zero(target), std::nullopt, opts);

  // φ*B_J only involves θ1, θ2, so its pullback to the disk is smooth and the
  // z1 != 0 guard of Ψ⁻¹ can be dropped
  MixedForm bj_inside = pullback(m.psi_inv, pullback(m.phi, bj));
  for (const auto& [mask, c] : bj_inside.terms()) {
    if (!c.is_constant()) throw Error("pulled back B_J is not constant; cannot extend over the disk");
  }
  bj_inside = bj_inside.with_domain(Region{});
  MixedForm shift = bj_inside;
  if (cutoff) {
    static const BumpPtr eta = std::make_shared<Bump>(Bump{"eta", Rational(3, 5), Rational(4, 5)});
    const Expr mod = sqrt(sym("z1") * sym("z1bar"));
    shift = shift - Expr::bump(eta, 0, mod) * real_part(m.exponent);
  }
  SpinorStructure inside = b_field_transform(m.rho0, shift, opts).renamed("inside");

  GluedModel g{{Piece{"outside", outside, Region{}, {}},
                Piece{"inside", inside,
                      make_region(*m.lut, {{sqrt(sym("z1") * sym("z1bar")), Relation::lt, Gaussian(1)}}), {}}},
               {Overlap{"outside", "inside", m.phi, m.psi, m.collar, true}}};
  return g;
}

}  // namespace gcx
