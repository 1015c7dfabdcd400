#include "gcx/gcs/piecewise.hpp"

namespace gcx {

Agreement agree_up_to_scale(const MixedForm& a, const MixedForm& b, const CheckOptions& opts, const Region& region) {
  const Expr a0 = a.coefficient(0);
  const Expr b0 = b.coefficient(0);
  if (try_expand(a0).is_zero() || try_expand(b0).is_zero()) return forms_agree(a, b, opts, region);
  return forms_agree(b0 * a, a0 * b, opts, region);
}

namespace {

const Piece& find_piece(const std::vector<Piece>& pieces, const std::string& name) {
  for (const Piece& p : pieces) {
    if (p.name == name) return p;
  }
  throw Error("overlap refers to unknown piece '" + name + "'");
}

SpinorStructure restricted(const Piece& p) {
  if (p.region.empty()) return p.spinor;
  const SpinorStructure& s = p.spinor;
  return SpinorStructure(s.name(), s.rho().with_domain(s.rho().domain().intersect(p.region)), s.h(), s.certificate());
}

}  // namespace

PiecewiseResult assemble_piecewise(const std::vector<Piece>& pieces, const std::vector<Overlap>& overlaps,
                                   const CheckOptions& opts) {
  PiecewiseResult out;
  out.ok = true;
  for (const Piece& p : pieces) {
    PieceResult r;
    r.name = p.name;
    const SpinorStructure s = restricted(p);
    r.integrable = check_integrable(s, opts);
    r.stable = check_stable(s, opts, p.witnesses);
    if (!r.integrable.integrable) {
      out.ok = false;
      if (out.detail.empty()) out.detail = "piece " + p.name + " is not integrable: " + r.integrable.detail;
    }
    if (!r.stable.stable) {
      out.ok = false;
      if (out.detail.empty()) out.detail = "piece " + p.name + " is not stable: " + r.stable.detail;
    }
    if (r.stable.locus != "empty") out.loci.push_back(r.stable.locus);
    out.pieces.push_back(std::move(r));
  }
  for (const Overlap& o : overlaps) {
    const Piece& a = find_piece(pieces, o.first);
    const Piece& b = find_piece(pieces, o.second);
    if (o.to_first.target() != a.spinor.chart() || o.to_second.target() != b.spinor.chart()) {
      throw ChartMismatch("overlap maps do not land on the pieces' charts");
    }
    OverlapResult r;
    r.first = o.first;
    r.second = o.second;
    r.required = o.required;
    const MixedForm ra = pullback(o.to_first, a.spinor.rho());
    const MixedForm rb = pullback(o.to_second, b.spinor.rho());
    const Agreement spin = agree_up_to_scale(ra, rb, opts, o.region);
    r.spinors_agree = spin.agree;
    const Agreement twist = forms_agree(pullback(o.to_first, a.spinor.h()), pullback(o.to_second, b.spinor.h()), opts,
                                        o.region);
    r.h_agree = twist.agree;
    if (!spin.agree) {
      r.first_difference = spin.first_difference;
      if (spin.first_difference) r.difference_monomial = ra.monomial_str(*spin.first_difference);
      r.detail = "spinors differ: " + spin.detail;
    } else if (!twist.agree) {
      r.first_difference = twist.first_difference;
      if (twist.first_difference) r.difference_monomial = ra.monomial_str(*twist.first_difference);
      r.detail = "twisting forms differ: " + twist.detail;
    } else {
      r.detail = "agree on " + (o.region.empty() ? std::string("the whole chart") : o.region.str());
    }
    if (o.required && !(r.spinors_agree && r.h_agree)) {
      out.ok = false;
      if (out.detail.empty()) out.detail = "overlap " + o.first + "/" + o.second + ": " + r.detail;
    }
    out.overlaps.push_back(std::move(r));
  }
  if (out.ok) out.detail = "all pieces and overlaps check out";
  return out;
}

}  // namespace gcx
