#include <doctest.h>

#include <algorithm>

#include "generators.hpp"
#include "gcx/exterior/equality.hpp"
#include "gcx/exterior/form.hpp"
#include "gcx/exterior/map.hpp"

using namespace gcx;
using gcx::testing::agree;

namespace {

ChartPtr c2() {
  return make_chart("C2", {{"z1", CoordKind::complex, "x1", "y1"}, {"z2", CoordKind::complex, "x2", "y2"}});
}

MixedForm dslot(const ChartPtr& c, const std::string& s) { return MixedForm::differential(c, *c->slot_index(s)); }

// Sign of sorting a sequence of distinct indices, computed by bubble sort.
int permutation_sign(std::vector<int> seq) {
  int sign = 1;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = 0; j + 1 < seq.size() - i; ++j) {
      if (seq[j] > seq[j + 1]) {
        std::swap(seq[j], seq[j + 1]);
        sign = -sign;
      }
    }
  }
  return sign;
}

std::vector<int> indices(Mask m) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i) {
    if (m & (Mask{1} << i)) out.push_back(i);
  }
  return out;
}

// Wedge product computed monomial by monomial through explicit permutations.
MixedForm oracle_wedge(const MixedForm& a, const MixedForm& b) {
  MixedForm out(a.chart());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      std::vector<int> seq = indices(ma);
      for (int j : indices(mb)) seq.push_back(j);
      out.accumulate(ma | mb, Expr(permutation_sign(seq)) * ca * cb);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("wedge: antisymmetry, unit and the brute-force sign oracle") {
  auto c = c2();
  MixedForm dz1 = dslot(c, "z1"), dz2 = dslot(c, "z2");
  MixedForm dz12 = wedge(dz1, dz2);
  CHECK(dz12.terms().size() == 1);
  CHECK(dz12.coefficient(0b101) == Expr(1));
  CHECK(wedge(dz2, dz1).coefficient(0b101) == Expr(-1));
  CHECK(wedge(dz1, dz1).is_zero());
  MixedForm one = MixedForm::scalar(c, Expr(1));
  MixedForm rho = MixedForm::scalar(c, Expr::symbol("z1")) + dz12;
  CHECK(agree(wedge(one, rho), rho));

  auto r4 = make_chart("R4", {{"x1", CoordKind::real, "", ""}, {"y1", CoordKind::real, "", ""},
                              {"x2", CoordKind::real, "", ""}, {"y2", CoordKind::real, "", ""}});
  MixedForm a = wedge(MixedForm::differential(r4, 0), MixedForm::differential(r4, 1));
  MixedForm b = wedge(MixedForm::differential(r4, 2), MixedForm::differential(r4, 3));
  CHECK(wedge(a, b).coefficient(0b1111) == Expr(1));

  testing::Generator gen(11);
  auto r5 = testing::real_chart("u", 5);
  for (int k = 0; k < 50; ++k) {
    MixedForm x = gen.mixed(r5, false), y = gen.mixed(r5, false);
    MixedForm w = wedge(x, y);
    MixedForm o = oracle_wedge(x, y);
    CHECK(forms_agree(w, o).structural);
    CHECK(forms_agree(w, o).agree);
  }
}

TEST_CASE("wedge across charts is rejected") {
  auto a = c2();
  auto b = c2();
  CHECK_THROWS_AS(wedge(MixedForm::differential(a, 0), MixedForm::differential(b, 0)), ChartMismatch);
}

TEST_CASE("exterior derivative examples") {
  auto polar = make_chart("P", {{"r", CoordKind::radial, "", ""}, {"th0", CoordKind::angle, "", ""},
                                {"th1", CoordKind::angle, "", ""}});
  Expr r = Expr::symbol("r");
  MixedForm f = Expr(r) * wedge(MixedForm::differential(polar, 0), MixedForm::differential(polar, 1));
  CHECK(d(f).is_zero());

  auto c = c2();
  MixedForm rho = MixedForm::scalar(c, Expr::symbol("z1")) + wedge(dslot(c, "z1"), dslot(c, "z2"));
  CHECK(agree(d(rho), dslot(c, "z1")));

  auto xi = std::make_shared<const Bump>(Bump{"xi", Rational(1, 10), Rational(3, 10)});
  MixedForm g = Expr::bump(xi, 0, r) * MixedForm::differential(polar, 2);
  MixedForm expected = Expr::bump(xi, 1, r) * wedge(MixedForm::differential(polar, 0), MixedForm::differential(polar, 2));
  CHECK(agree(d(g), expected));
}

TEST_CASE("interior product examples") {
  auto t = testing::real_chart("th", 2);
  VectorField e1(t);
  e1.accumulate(0, Expr(1));
  CHECK(agree(interior(e1, wedge(MixedForm::differential(t, 0), MixedForm::differential(t, 1))),
              MixedForm::differential(t, 1)));
  CHECK(interior(e1, MixedForm::scalar(t, Expr::symbol("th1"))).is_zero());

  // ι_Y(α∧β) = α(Y)β − β(Y)α with Y = −∂_{z2}, α = dz1, β = dz2
  auto c = c2();
  VectorField y(c);
  y.accumulate(*c->slot_index("z2"), Expr(-1));
  MixedForm alpha = dslot(c, "z1"), beta = dslot(c, "z2");
  MixedForm oracle = evaluate_one_form(alpha, y) * beta - evaluate_one_form(beta, y) * alpha;
  MixedForm got = interior(y, wedge(alpha, beta));
  CHECK(agree(got, oracle));
  CHECK(agree(got, dslot(c, "z1")));
}

TEST_CASE("clifford action examples") {
  auto r1 = testing::real_chart("x", 2);
  MixedForm dx = MixedForm::differential(r1, 0);
  GeneralizedSection s1{VectorField(r1), dx};
  CHECK(agree(clifford(s1, MixedForm::scalar(r1, Expr(1))), dx));
  VectorField dxv(r1);
  dxv.accumulate(0, Expr(1));
  GeneralizedSection s2{dxv, MixedForm(r1)};
  CHECK(agree(clifford(s2, dx), MixedForm::scalar(r1, Expr(1))));

  auto c = make_chart("M", {{"z1", CoordKind::complex, "", ""}, {"z2", CoordKind::complex, "", ""},
                            {"u1", CoordKind::real, "", ""}, {"v1", CoordKind::real, "", ""}});
  MixedForm omega0 = wedge(dslot(c, "u1"), dslot(c, "v1"));
  MixedForm e = exp_form(Expr::imaginary_unit() * omega0);
  MixedForm rho0 = wedge(MixedForm::scalar(c, Expr::symbol("z1")) + wedge(dslot(c, "z1"), dslot(c, "z2")), e);
  VectorField v(c);
  v.accumulate(*c->slot_index("z2"), Expr(-1));
  GeneralizedSection cert{v, MixedForm(c)};
  CHECK(agree(clifford(cert, rho0), wedge(dslot(c, "z1"), e)));
  CHECK(agree(d(rho0), clifford(cert, rho0)));
}

TEST_CASE("exp_form examples") {
  auto r2 = testing::real_chart("x", 2);
  MixedForm w = wedge(MixedForm::differential(r2, 0), MixedForm::differential(r2, 1));
  CHECK(agree(exp_form(w), MixedForm::scalar(r2, Expr(1)) + w));
  CHECK(agree(exp_form(MixedForm(r2)), MixedForm::scalar(r2, Expr(1))));

  auto r4 = testing::real_chart("x", 4);
  MixedForm a = wedge(MixedForm::differential(r4, 0), MixedForm::differential(r4, 1));
  MixedForm b = wedge(MixedForm::differential(r4, 2), MixedForm::differential(r4, 3));
  // brute force: 1 + (a+b) + (a+b)^2/2 with the square taken by the oracle wedge
  MixedForm s = a + b;
  MixedForm expected = MixedForm::scalar(r4, Expr(1)) + s + Expr(Rational(1, 2)) * oracle_wedge(s, s);
  CHECK(agree(exp_form(s), expected));
  CHECK(exp_form(s).coefficient(0b1111) == Expr(1));

  CHECK_THROWS_AS(exp_form(MixedForm::differential(r4, 0)), DegreeError);
  CHECK_THROWS_AS(exp_form(MixedForm::scalar(r4, Expr(1))), DegreeError);
}

TEST_CASE("pullback examples") {
  auto c = c2();
  MixedForm rho = MixedForm::scalar(c, Expr::symbol("z1")) + wedge(dslot(c, "z1"), dslot(c, "z2"));
  CHECK(agree(pullback(identity_map(c), rho), rho));

  // Gluck roll τ(θ0, h, θS) = (θ0, h, θS + θ0)
  auto cyl = make_chart("cyl", {{"th0", CoordKind::angle, "", ""}, {"h", CoordKind::real, "", ""},
                                {"thS", CoordKind::angle, "", ""}});
  CoordinateMap tau("tau", cyl, cyl,
                    {{"th0", Expr::symbol("th0")}, {"h", Expr::symbol("h")},
                     {"thS", Expr::symbol("thS") + Expr::symbol("th0")}});
  CHECK(agree(pullback(tau, MixedForm::differential(cyl, 2)),
              MixedForm::differential(cyl, 2) + MixedForm::differential(cyl, 0)));

  // gluing map with (p, a, b, q) = (0, 1, 0, 1)
  auto polar = make_chart("polar", {{"r", CoordKind::radial, "", ""}, {"th0", CoordKind::angle, "", ""},
                                    {"th1", CoordKind::angle, "", ""}, {"th2", CoordKind::angle, "", ""}});
  auto target = make_chart("target", {{"R", CoordKind::radial, "", ""}, {"Th0", CoordKind::angle, "", ""},
                                      {"Th1", CoordKind::angle, "", ""}, {"Th2", CoordKind::angle, "", ""}});
  Expr r = Expr::symbol("r");
  CoordinateMap phi("phi", polar, target,
                    {{"R", sqrt(log(Expr(2) * r))}, {"Th0", Expr::symbol("th2")}, {"Th1", Expr::symbol("th1")},
                     {"Th2", Expr::symbol("th0")}});
  MixedForm pulled = pullback(phi, MixedForm::differential(target, 3));
  CHECK(agree(pulled, MixedForm::differential(polar, 1)));

  // numeric Jacobian of the radial component against the symbolic dR
  MixedForm dR = pullback(phi, MixedForm::differential(target, 0));
  testing::Generator gen(3);
  for (int k = 0; k < 10; ++k) {
    const double r0 = 0.6 + 0.5 * static_cast<double>(gen.integer(0, 100)) / 100.0;
    Point p = make_point(*polar, {{"r", Gaussian(to_rational(r0))}});
    const double h = 1e-6;
    auto radius = [&](double rv) { return std::sqrt(std::log(2 * rv)); };
    const double fd = (radius(r0 + h) - radius(r0 - h)) / (2 * h);
    CHECK(eval_numeric(dR.coefficient(1), p).real() == doctest::Approx(fd).epsilon(1e-6));
  }

  CHECK_THROWS_AS(CoordinateMap("bad", polar, target,
                                {{"R", r}, {"Th0", Expr(Rational(1, 2)) * Expr::symbol("th0")},
                                 {"Th1", Expr::symbol("th1")}, {"Th2", Expr::symbol("th2")}}),
                  Error);
}

TEST_CASE("courant bracket and pairing examples") {
  auto r3 = make_chart("R3", {{"x", CoordKind::real, "", ""}, {"y", CoordKind::real, "", ""},
                              {"z", CoordKind::real, "", ""}});
  auto vec = [&](int slot) {
    VectorField v(r3);
    v.accumulate(slot, Expr(1));
    return v;
  };
  MixedForm zero(r3);
  GeneralizedSection dx_{vec(0), zero}, dy_{vec(1), zero};
  CHECK(courant_bracket(dx_, dy_, zero).is_zero());

  GeneralizedSection ydx{VectorField(r3), Expr::symbol("y") * MixedForm::differential(r3, 0)};
  GeneralizedSection br = courant_bracket(dx_, ydx, zero);
  CHECK(br.vector.is_zero());
  CHECK(agree(br.covector, Expr(Rational(-1, 2)) * MixedForm::differential(r3, 1)));

  MixedForm vol = wedge(wedge(MixedForm::differential(r3, 0), MixedForm::differential(r3, 1)),
                        MixedForm::differential(r3, 2));
  GeneralizedSection hb = courant_bracket(dx_, dy_, vol);
  CHECK(hb.vector.is_zero());
  CHECK(agree(hb.covector, MixedForm::differential(r3, 2)));
  CHECK_THROWS_AS(courant_bracket(dx_, dy_, MixedForm::differential(r3, 0)), DegreeError);

  GeneralizedSection a{vec(0), MixedForm(r3)};
  GeneralizedSection b{VectorField(r3), MixedForm::differential(r3, 0)};
  CHECK(pairing(a, b) == Expr(Rational(1, 2)));
  GeneralizedSection c{vec(0), MixedForm::differential(r3, 0)};
  CHECK(pairing(c, c) == Expr(1));
  GeneralizedSection e{vec(0), MixedForm::differential(r3, 1)};
  GeneralizedSection f{vec(1), -MixedForm::differential(r3, 0)};
  CHECK(pairing(e, f).is_zero());
}

TEST_CASE("conjugation and real/imaginary parts on a complex chart") {
  auto c = c2();
  MixedForm dz11 = wedge(dslot(c, "z1"), dslot(c, "z1bar"));
  // conj(dz ∧ dz̄) = dz̄ ∧ dz = −dz ∧ dz̄
  CHECK(agree(conj(dz11), -dz11));
  // dz ∧ dz̄ = −2i dx ∧ dy is purely imaginary
  CHECK(real_part(dz11).is_zero());
  CHECK(agree(imag_part(dz11), Expr(Gaussian(Rational(0), Rational(-1))) * dz11));
}
