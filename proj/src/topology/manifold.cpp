#include "gcx/topology/manifold.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace gcx {

std::string spin_name(Spin s) {
  switch (s) {
    case Spin::spin: return "spin";
    case Spin::non_spin: return "non-spin";
    case Spin::unknown: return "unknown";
  }
  return "unknown";
}

std::string locus_kind_name(LocusKind k) {
  switch (k) {
    case LocusKind::luttinger: return "luttinger";
    case LocusKind::gluck: return "gluck";
    case LocusKind::branch: return "branch";
  }
  return "?";
}

long LabelFactor::b1() const {
  switch (kind) {
    case Kind::torus: return 2;
    case Kind::surface: return 2L * genus;
    case Kind::sphere:
    case Kind::point: return 0;
    case Kind::generic: return generic_b1;
  }
  return 0;
}

namespace {

std::string subscript(long n) {
  static const char* digits[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
  const std::string s = std::to_string(n);
  std::string out;
  for (char c : s) out += c == '-' ? std::string("₋") : std::string(digits[c - '0']);
  return out;
}

}  // namespace

std::string LabelFactor::str(bool ascii) const {
  switch (kind) {
    case Kind::torus: return ascii ? "T2" : "T²";
    case Kind::surface: return ascii ? "Sigma_" + std::to_string(genus) : "Σ" + subscript(genus);
    case Kind::sphere: return ascii ? "S2" : "S²";
    case Kind::point: return "pt";
    case Kind::generic: return name;
  }
  return "?";
}

LabelFactor parse_label_factor(const std::string& raw) {
  std::string t;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  }
  if (t == "T2" || t == "T²") return LabelFactor::torus();
  if (t == "S2" || t == "S²") return LabelFactor::sphere();
  if (t == "pt" || t == "point") return LabelFactor::point();
  for (const std::string prefix : {"Sigma_", "Sigma", "Σ_", "Σ"}) {
    if (t.rfind(prefix, 0) == 0 && t.size() > prefix.size()) {
      const std::string rest = t.substr(prefix.size());
      if (std::all_of(rest.begin(), rest.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        return LabelFactor::surface(std::stoi(rest));
      }
    }
  }
  const auto open = t.find("(b1=");
  if (open != std::string::npos && t.back() == ')') {
    const std::string num = t.substr(open + 4, t.size() - open - 5);
    try {
      return LabelFactor::generic(t.substr(0, open), std::stol(num));
    } catch (const std::exception&) {
    }
  }
  throw TopologyError("unknown label factor '" + raw + "' (use T2, S2, pt, Sigma_g or Name(b1=n))");
}

long TypeChangeComponent::b1() const {
  long s = 0;
  for (const LabelFactor& f : factors) s += f.b1();
  return s;
}

std::string TypeChangeComponent::label(bool ascii) const {
  std::string out;
  for (const LabelFactor& f : factors) {
    if (f.kind == LabelFactor::Kind::point) continue;
    if (!out.empty()) out += ascii ? "x" : "×";
    out += f.str(ascii);
  }
  return out.empty() ? "pt" : out;
}

void ManifoldDescriptor::validate() const {
  if (dim <= 0 || dim % 2 != 0) throw TopologyError(name + ": dimension must be a positive even integer");
  if (signature && dim % 4 != 0) throw TopologyError(name + ": signature is only defined in dimension 0 mod 4");
  if (h2) {
    if (h2->b2 < 0) throw TopologyError(name + ": b2 must be nonnegative");
    for (long t : h2->torsion) {
      if (t < 2) throw TopologyError(name + ": torsion coefficients must be at least 2");
    }
  }
  for (std::size_t i = 0; i < loci.size(); ++i) {
    for (std::size_t j = i + 1; j < loci.size(); ++j) {
      if (loci[i].name == loci[j].name) throw TopologyError(name + ": duplicate locus '" + loci[i].name + "'");
    }
  }
}

const SurgeryLocus& ManifoldDescriptor::locus(const std::string& locus_name) const {
  for (const SurgeryLocus& l : loci) {
    if (l.name == locus_name) return l;
  }
  throw TopologyError(name + ": no locus named '" + locus_name + "'");
}

ParamCheck validate_surgery_params(const SurgeryParams& s) {
  ParamCheck out;
  out.matrix = {{{s.p, 0, s.q}, {0, 1, 0}, {s.a, 0, s.b}}};
  out.determinant = s.p * s.b - s.a * s.q;
  const long f0 = -s.a * s.q;
  const long f1 = s.p * s.b - s.a * s.q;
  if (std::labs(out.determinant) != 1) {
    out.violation = "determinant pb - aq = " + std::to_string(out.determinant) + ", expected +1 or -1";
  } else if (f0 == 0) {
    out.violation = "f(t) = pbt - aq vanishes at t = 0";
  } else if (f1 == 0) {
    out.violation = "f(t) = pbt - aq vanishes at t = 1";
  } else if ((f0 < 0) != (f1 < 0)) {
    out.violation = "f(t) = pbt - aq changes sign on [0,1]: f(0) = " + std::to_string(f0) +
                    ", f(1) = " + std::to_string(f1);
  }
  out.ok = out.violation.empty();
  return out;
}

GroupPresentation glue_fundamental_group(const GluingData& g, const SurgeryParams& s) {
  const GroupPresentation torus = GroupPresentation::parse("<t1, t2 | [t1, t2]>");
  const FreeProduct fp = free_product(g.complement, torus);
  const Word t1{fp.group.generator_index(fp.renamed.at("t1")) + 1};
  const Word t2{fp.group.generator_index(fp.renamed.at("t2")) + 1};
  for (const Word* w : {&g.meridian, &g.l1, &g.l2}) {
    for (int l : *w) {
      if (l == 0 || std::abs(l) > g.complement.rank()) throw TopologyError("gluing word uses an undeclared generator");
    }
  }
  const std::vector<Word> identifications{
      concat(power(g.meridian, s.p), power(g.l2, s.q)),
      concat(inverse(t1), g.l1),
      concat(inverse(t2), concat(power(g.meridian, s.a), power(g.l2, s.b))),
  };
  return quotient_normal_closure(fp.group, identifications);
}

namespace {

std::string params_str(const SurgeryParams& s) {
  return "(p,q,a,b) = (" + std::to_string(s.p) + "," + std::to_string(s.q) + "," + std::to_string(s.a) + "," +
         std::to_string(s.b) + ")";
}

ManifoldDescriptor surgery(const ManifoldDescriptor& m, const std::string& locus_name, const SurgeryParams& s,
                           LocusKind kind) {
  m.validate();
  const SurgeryLocus& l = m.locus(locus_name);
  const std::string what = kind == LocusKind::luttinger ? "Luttinger surgery" : "Gluck twist";
  if (l.kind != kind) {
    throw TopologyError(what + " needs a " + locus_kind_name(kind) + " locus; '" + l.name + "' is " +
                        locus_kind_name(l.kind));
  }
  if (m.dim < 6) throw TopologyError(what + " needs dimension at least 6");
  if (!l.neighborhood_trivial) throw TopologyError("locus '" + l.name + "' has no trivial D2 neighborhood");
  if (!l.j_symplectic) throw TopologyError("locus '" + l.name + "' is not J-symplectic");
  const ParamCheck check = validate_surgery_params(s);
  if (!check.ok) throw TopologyError("invalid surgery parameters " + params_str(s) + ": " + check.violation);

  ManifoldDescriptor out = m;
  TypeChangeComponent c;
  if (kind == LocusKind::luttinger) {
    c.factors = l.sigma;
    c.factors.push_back(LabelFactor::torus());
    c.origin = "luttinger:" + l.name;
  } else {
    c.factors.push_back(LabelFactor::torus());
    c.factors.insert(c.factors.end(), l.sigma.begin(), l.sigma.end());
    c.factors.push_back(LabelFactor::sphere());
    c.origin = "gluck:" + l.name;
  }
  out.components.push_back(std::move(c));
  out.notes.push_back(what + " along " + l.name + " with " + params_str(s) + ", det " +
                      std::to_string(check.determinant));
  if (kind == LocusKind::gluck) {
    out.notes.push_back("gluing restricts to torus surgery of multiplicity " + std::to_string(s.p) +
                        " on D2xT2 and to the Gluck twist on D2xS2");
    const bool r_point = std::all_of(l.sigma.begin(), l.sigma.end(),
                                     [](const LabelFactor& f) { return f.kind == LabelFactor::Kind::point; });
    if (r_point) out.notes.push_back("R is a point: reduces to the 6-dimensional surgery");
  }
  if (l.gluing) {
    out.pi1 = glue_fundamental_group(*l.gluing, s);
    out.notes.push_back("pi1 from van Kampen gluing (abelianization-verified)");
  } else {
    out.pi1.reset();
    out.notes.push_back("pi1 unknown: no gluing data for locus " + l.name);
  }
  // surgery changes H2 and spin in ways the tool does not infer
  out.h2.reset();
  if (out.spin != Spin::unknown) {
    out.spin = Spin::unknown;
    out.notes.push_back("spin not inferred after surgery");
  }
  return out;
}

}  // namespace

ManifoldDescriptor apply_luttinger(const ManifoldDescriptor& m, const std::string& locus, const SurgeryParams& s) {
  return surgery(m, locus, s, LocusKind::luttinger);
}

ManifoldDescriptor apply_gluck(const ManifoldDescriptor& m, const std::string& locus, const SurgeryParams& s) {
  return surgery(m, locus, s, LocusKind::gluck);
}

ManifoldDescriptor apply_cover(const ManifoldDescriptor& m, long d, const std::optional<GroupPresentation>& pi1_witness) {
  m.validate();
  if (d < 1) throw TopologyError("cover degree must be at least 1");
  if (d == 1) return m;
  ManifoldDescriptor out = m;
  out.euler = m.euler * d;
  if (m.signature) out.signature = *m.signature * d;
  out.components.clear();
  for (long i = 1; i <= d; ++i) {
    for (const TypeChangeComponent& c : m.components) {
      TypeChangeComponent copy = c;
      copy.origin = c.origin + "/sheet" + std::to_string(i);
      out.components.push_back(std::move(copy));
    }
  }
  out.pi1 = pi1_witness;
  out.h2.reset();
  if (m.spin != Spin::spin) out.spin = Spin::unknown;
  out.notes.push_back(std::to_string(d) + "-fold cover" + (pi1_witness ? "" : ", pi1 unknown"));
  return out;
}

ManifoldDescriptor apply_branched_cover(const ManifoldDescriptor& m, const BranchingData& data) {
  if (data.components.empty()) return apply_cover(m, data.degree);
  m.validate();
  const long d = data.degree;
  if (d < 1) throw TopologyError("cover degree must be at least 1");
  long correction = 0;
  for (const BranchComponent& bc : data.components) {
    const SurgeryLocus& l = m.locus(bc.locus);
    if (l.kind != LocusKind::branch) throw TopologyError("'" + l.name + "' is not a branch locus");
    if (!l.j_symplectic) throw TopologyError("branch locus '" + l.name + "' is not J-symplectic");
    long sum = 0, ramification = 0;
    for (long t : bc.indices) {
      if (t < 2) throw TopologyError("branching index " + std::to_string(t) + " over '" + l.name + "' is below 2");
      sum += t;
      ramification += t - 1;
    }
    if (sum > d) {
      throw TopologyError("branching indices over '" + l.name + "' sum to " + std::to_string(sum) +
                          ", more than the degree " + std::to_string(d));
    }
    correction += l.euler * ramification;
  }
  ManifoldDescriptor out = m;
  out.euler = d * m.euler - correction;
  out.signature.reset();
  out.components.clear();
  for (long i = 1; i <= d; ++i) {
    for (const TypeChangeComponent& c : m.components) {
      TypeChangeComponent copy = c;
      copy.origin = c.origin + "/sheet" + std::to_string(i);
      out.components.push_back(std::move(copy));
    }
  }
  out.spin = Spin::unknown;
  out.pi1.reset();
  out.h2.reset();
  out.notes.push_back(std::to_string(d) +
                      "-fold branched cover; chi = d*chi - sum chi(B)(t-1) (stratified convention); "
                      "signature, spin and pi1 unknown");
  return out;
}

}  // namespace gcx
