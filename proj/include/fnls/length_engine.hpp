#pragma once

// Holonomy of finite truncations from Fenchel-Nielsen data, geodesic lengths
// of pants curves and twisted duals, crossing angles, and the twist flow.
//
// Each interior curve C_i is evaluated inside its own X-piece: the one-holed
// torus (C_i bounds a handle) or four-holed sphere (two distinct pants) formed
// by the pants adjacent to C_i. Every enumerated curve lives in one X-piece,
// and lengths in a piece equal lengths in the surface.
//
// Normal form of a piece: C_i lifts to the imaginary axis with
// A = diag(e^{l/2}, e^{-l/2}). A positive twist is a left earthquake: the
// side to the left of the axis is translated by diag(e^{t/2}, e^{-t/2}),
// pushing boundary points x < 0 to e^t x.

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "fnls/error.hpp"
#include "fnls/ext_scalar.hpp"
#include "fnls/hyp_core.hpp"
#include "fnls/mat2.hpp"
#include "fnls/surface.hpp"

namespace fnls {

/// Twist magnitudes t_i per curve (1-based, zero on boundary legs).
class TwistVector {
 public:
  TwistVector() = default;
  explicit TwistVector(std::size_t curve_count) : t_(curve_count, 0.0) {}
  explicit TwistVector(std::vector<double> t) : t_(std::move(t)) {}

  static TwistVector single(std::size_t curve_count, CurveIndex i, double t) {
    TwistVector v(curve_count);
    v.set(i, t);
    return v;
  }

  std::size_t size() const noexcept { return t_.size(); }
  double operator[](CurveIndex i) const { return i >= 1 && i <= t_.size() ? t_[i - 1] : 0.0; }

  void set(CurveIndex i, double t) {
    if (i == 0 || i > t_.size()) fail(ErrorKind::Range, "TwistVector: curve index out of range");
    if (!std::isfinite(t)) fail(ErrorKind::Domain, "TwistVector: twist must be finite");
    t_[i - 1] = t;
  }

  double sup_norm() const {
    double m = 0.0;
    for (double t : t_) m = std::max(m, std::fabs(t));
    return m;
  }

  const std::vector<double>& values() const noexcept { return t_; }

 private:
  std::vector<double> t_;
};

/// tau_i -> tau_i + t_i; lengths untouched.
inline FNPoint apply_twist(const PantsGraph& g, const FNPoint& x, const TwistVector& t) {
  std::vector<CurveCoord> coords = x.coords();
  if (t.size() > coords.size()) fail(ErrorKind::Range, "apply_twist: twist vector longer than the point");
  for (CurveIndex i = 1; i <= t.size(); ++i) {
    if (t[i] == 0.0) continue;
    if (g.curve(i).boundary()) fail(ErrorKind::Domain, "apply_twist: boundary legs cannot be twisted");
    coords[i - 1].twist += t[i];
  }
  return FNPoint(g, std::move(coords));
}

enum class PieceKind { Torus, Sphere };

struct BoundaryGenerator {
  Slot slot;         // the hole of the piece this element goes around
  ExtScalar length;  // prescribed length, 0 for cusps
  Mat2 element;
};

/// Local holonomy around one interior curve.
struct XPiece {
  PieceKind kind = PieceKind::Sphere;
  CurveIndex curve = 0;
  ExtScalar length;
  double twist = 0.0;
  Mat2 alpha;  // positive-trace lift of C_i
  Mat2 dual;   // torus: the dual at the current twist
  Mat2 gb;     // sphere: right-side seam element
  Mat2 gc;     // sphere: left-side seam element, twisted
  std::vector<BoundaryGenerator> boundary;
};

namespace detail {

inline ExtScalar slot_cosh_half(const FNPoint& x, const Slot& s) {
  if (s.kind == SlotKind::Cusp) return ext(1.0);
  const ExtScalar& len = x.length(s.curve);
  if (len < ext(1e-4)) {
    const double l = len.fits_double() ? len.to_double() : 0.0;
    return ext(1.0 + l * l / 8.0);
  }
  return ext_cosh(len.to_double() / 2.0);
}

inline ExtScalar slot_length(const FNPoint& x, const Slot& s) {
  return s.kind == SlotKind::Cusp ? ExtScalar{} : x.length(s.curve);
}

// Element going around the second hole of a pants whose third hole is the
// imaginary axis with holonomy -A; its axis lies right of the imaginary axis
// with fixed-point product 1, so the common perpendicular meets the axis at i.
// x_tr and y_tr are the traces around the first and second hole.
inline Mat2 seam_element(const ExtScalar& l, const ExtScalar& x_tr, const ExtScalar& y_tr) {
  const ExtScalar lam_inv = ExtScalar::from_log(-(l.fits_double() ? l.to_double() : 0.0) / 2.0);
  const ExtScalar s = -(x_tr + y_tr * lam_inv) / (ext(2.0) * sinh_half(l));
  const ExtScalar p = y_tr - s;
  const ExtScalar qq = ext(1.0) - p * s;
  if (qq.sign() <= 0) fail(ErrorKind::InternalConsistency, "seam_element: pants data not realizable");
  const ExtScalar q = p.sign() > 0 ? -sqrt(qq) : sqrt(qq);
  return {p, q, -q, s};
}

// z -> -1/z conjugation, swapping the two sides of the imaginary axis.
inline Mat2 flip(const Mat2& m) { return {m.d, -m.c, -m.b, m.a}; }

inline std::array<Slot, 2> other_slots(const Pants& p, int slot) {
  std::array<Slot, 2> out{};
  int k = 0;
  for (int s = 0; s < 3; ++s)
    if (s != slot) out[k++] = p.slots[s];
  return out;
}

inline ExtScalar ext_acosh(const ExtScalar& y) {
  if (y < ext(1.0)) fail(ErrorKind::Domain, "acosh argument below 1");
  if (y > ext(1e8)) {
    const double inv = y.fits_double() ? 1.0 / y.to_double() : 0.0;
    return ext(y.log() + std::log(2.0) - 0.25 * inv * inv);
  }
  return ext(std::acosh(y.to_double()));
}

inline XPiece build_piece(const PantsGraph& g, const FNPoint& x, CurveIndex i) {
  const CurveEdge& edge = g.curve(i);
  XPiece piece;
  piece.curve = i;
  piece.length = x.length(i);
  piece.twist = x.twist(i);
  const ExtScalar& l = piece.length;
  const double l_d = l.fits_double() ? l.to_double() : 0.0;
  piece.alpha = Mat2::diag(ExtScalar::from_log(l_d / 2.0), ExtScalar::from_log(-l_d / 2.0));
  const Mat2 minus_alpha = -piece.alpha;
  const Mat2 shift = translation(piece.twist);
  const ExtScalar sh = sinh_half(l);

  const Attachment e0 = edge.ends[0];
  const Attachment e1 = edge.ends[1];
  if (e0.pants == e1.pants) {
    piece.kind = PieceKind::Torus;
    const int third = 3 - e0.slot - e1.slot;
    const Slot hole = g.pants()[e0.pants].slots[third];
    const ExtScalar ch_hole = slot_cosh_half(x, hole);
    const ExtScalar cosh_l = l < ext(1e-4) ? ext(1.0 + l_d * l_d / 2.0) : ext_cosh(l_d);
    const ExtScalar ch = sqrt((ch_hole + cosh_l) / ext(2.0)) / sh;
    const ExtScalar sn = sqrt((ch_hole + ext(1.0)) / ext(2.0)) / sh;
    piece.dual = translation(-piece.twist) * Mat2{ch, sn, sn, ch};
    // A D A^-1 D^-1 written through lambda^2 - 1 = 2 sinh(l/2) lambda, which
    // keeps the 1/l^2-sized products from cancelling for short l.
    const Mat2& dm = piece.dual;
    const ExtScalar lam = ExtScalar::from_log(l_d / 2.0);
    const ExtScalar s2 = ext(2.0) * sh;
    const ExtScalar qr = dm.b * dm.c;
    const Mat2 comm{ext(1.0) - qr * s2 * lam, dm.a * dm.b * s2 * lam, -(dm.c * dm.d * s2) / lam,
                    ext(1.0) + qr * s2 / lam};
    piece.boundary.push_back({hole, slot_length(x, hole), comm});
    return piece;
  }

  piece.kind = PieceKind::Sphere;
  const auto right = other_slots(g.pants()[e0.pants], e0.slot);
  const auto left = other_slots(g.pants()[e1.pants], e1.slot);
  const ExtScalar tr_a = ext(2.0) * slot_cosh_half(x, right[0]);
  const ExtScalar tr_b = ext(2.0) * slot_cosh_half(x, right[1]);
  const ExtScalar tr_c = ext(2.0) * slot_cosh_half(x, left[0]);
  const ExtScalar tr_d = ext(2.0) * slot_cosh_half(x, left[1]);

  const Mat2 gb = seam_element(l, tr_a, tr_b);
  const Mat2 hc = seam_element(l, tr_d, tr_c);
  const Mat2 ga = minus_alpha * gb.inverse();
  const Mat2 hd = minus_alpha * hc.inverse();
  piece.gb = gb;
  piece.gc = flip(hc).conjugated_by(shift);
  piece.boundary.push_back({right[0], slot_length(x, right[0]), ga});
  piece.boundary.push_back({right[1], slot_length(x, right[1]), gb});
  piece.boundary.push_back({left[0], slot_length(x, left[0]), piece.gc});
  piece.boundary.push_back({left[1], slot_length(x, left[1]), flip(hd).conjugated_by(shift)});
  return piece;
}

}  // namespace detail

class Holonomy {
 public:
  Holonomy(PantsGraph g, FNPoint x) : graph_(std::move(g)), point_(std::move(x)) {
    if (point_.size() != graph_.curve_count())
      fail(ErrorKind::Configuration, "holonomy: point does not match the graph");
    pieces_.resize(graph_.curve_count());
    for (CurveIndex i : graph_.interior_curves()) pieces_[i - 1] = detail::build_piece(graph_, point_, i);
  }

  const PantsGraph& graph() const noexcept { return graph_; }
  const FNPoint& point() const noexcept { return point_; }
  const Mat2& frame() const noexcept { return frame_; }

  const XPiece& piece(CurveIndex i) const {
    if (i == 0 || i > pieces_.size()) fail(ErrorKind::Range, "holonomy: curve not in the truncation");
    if (!pieces_[i - 1]) fail(ErrorKind::Domain, "holonomy: boundary legs have no X-piece");
    return *pieces_[i - 1];
  }

  /// Same representation with every element replaced by g M g^-1.
  Holonomy conjugated(const Mat2& g) const {
    Holonomy out = *this;
    for (auto& p : out.pieces_) {
      if (!p) continue;
      p->alpha = p->alpha.conjugated_by(g);
      p->dual = p->dual.conjugated_by(g);
      p->gb = p->gb.conjugated_by(g);
      p->gc = p->gc.conjugated_by(g);
      for (auto& b : p->boundary) b.element = b.element.conjugated_by(g);
    }
    out.frame_ = g * frame_;
    return out;
  }

  /// Matrix of a curve class; twisted-dual(i,k) is the dual at twist tau_i + k l_i.
  Mat2 element(const CurveClass& c) const {
    const XPiece& p = piece(c.curve);
    if (c.kind == CurveKind::PantsCurve) return p.alpha;
    const double k = static_cast<double>(c.k);
    if (p.kind == PieceKind::Torus) {
      if (c.k == 0) return p.dual;
      return hyperbolic_power(p.alpha, -k, p.length) * p.dual;
    }
    if (c.k == 0) return p.gb * p.gc;
    return p.gb * hyperbolic_power(p.alpha, k, p.length) * p.gc * hyperbolic_power(p.alpha, -k, p.length);
  }

  ExtScalar trace(const CurveClass& c) const { return element(c).trace(); }

 private:
  PantsGraph graph_;
  FNPoint point_;
  std::vector<std::optional<XPiece>> pieces_;
  Mat2 frame_ = Mat2::identity();
};

inline Holonomy holonomy_build(const PantsGraph& g, const FNPoint& x) { return Holonomy(g, x); }

inline void check_in_truncation(const Holonomy& h, const CurveClass& c) {
  if (c.curve == 0 || c.curve > h.graph().curve_count())
    fail(ErrorKind::Range, "curve class not in the truncation");
}

/// Pants curves return their coordinate; other classes go through the trace.
inline ExtScalar geodesic_length(const Holonomy& h, const CurveClass& c, const BranchThresholds& th = {}) {
  check_in_truncation(h, c);
  if (c.kind == CurveKind::PantsCurve) return h.point().length(c.curve);
  return trace_to_length(h.trace(c), th);
}

inline std::vector<ExtScalar> geodesic_lengths(const Holonomy& h, const std::vector<CurveClass>& cs,
                                               const BranchThresholds& th = {}) {
  std::vector<ExtScalar> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(geodesic_length(h, c, th));
  return out;
}

/// Endpoints (x1 < 0 < x2) of a lift of the dual crossing the lift of C_i.
struct CrossingAxis {
  ExtScalar x1;
  ExtScalar x2;
  bool toward_x1 = true;  // orientation of the dual at this crossing
};

/// One crossing axis per intersection of beta_i with C_i, in the piece's normal form.
inline std::vector<CrossingAxis> dual_axes(const Holonomy& h, CurveIndex i) {
  const XPiece& p = h.piece(i);
  const Mat2 undo = h.frame().inverse();
  std::vector<Mat2> words;
  if (p.kind == PieceKind::Torus) {
    words.push_back(p.dual.conjugated_by(undo));
  } else {
    const Mat2 gb = p.gb.conjugated_by(undo);
    const Mat2 gc = p.gc.conjugated_by(undo);
    words.push_back(gb * gc);
    words.push_back(gc * gb);
  }
  std::vector<CrossingAxis> out;
  for (const Mat2& w : words) {
    const FixedPoints fp = fixed_points(w);
    if (fp.attracting.sign() * fp.repelling.sign() >= 0)
      fail(ErrorKind::InternalConsistency, "dual axis does not cross the curve");
    const bool att_neg = fp.attracting.sign() < 0;
    out.push_back({att_neg ? fp.attracting : fp.repelling, att_neg ? fp.repelling : fp.attracting, att_neg});
  }
  return out;
}

/// Angle at the crossing, from the upward lift of C_i to the dual line,
/// measured counterclockwise; scale invariant, so no normalization through i needed.
inline AngleData crossing_angle(const CrossingAxis& ax) {
  const ExtScalar a1 = ax.x1.abs();
  const ExtScalar a2 = ax.x2.abs();
  const ExtScalar sum = a1 + a2;
  const double s = (ext(2.0) * sqrt(a1 * a2) / sum).to_double();
  const double c = ((a1 - a2) / sum).to_double();
  return AngleData{std::atan2(s, c), s};
}

/// Angles between C_i and beta_i at each crossing (one or two).
inline std::vector<AngleData> intersection_data(const Holonomy& h, CurveIndex i) {
  std::vector<AngleData> out;
  for (const CrossingAxis& ax : dual_axes(h, i)) out.push_back(crossing_angle(ax));
  return out;
}

inline double min_sin_angle(const Holonomy& h, CurveIndex i) {
  double m = 1.0;
  for (const AngleData& a : intersection_data(h, i)) m = std::min(m, a.sin_theta);
  return m;
}

/// |central difference of l(beta_i) in tau_i - sum of cos theta| at x.
inline double wolpert_residual(const PantsGraph& g, const FNPoint& x, CurveIndex i, double step = 1e-4) {
  require(step > 0.0, ErrorKind::Domain, "wolpert_residual: step must be positive");
  const CurveClass beta = dual_curve(g, i);
  auto len = [&](double dt) {
    const Holonomy h(g, apply_twist(g, x, TwistVector::single(g.curve_count(), i, dt)));
    return geodesic_length(h, beta).to_double();
  };
  const double derivative = (len(step) - len(-step)) / (2.0 * step);
  double cos_sum = 0.0;
  for (const AngleData& a : intersection_data(Holonomy(g, x), i)) cos_sum += std::cos(a.theta);
  return std::fabs(derivative - cos_sum);
}

/// Lengths of the common perpendiculars from the lift of C_i to the next
/// lifts met by beta_i (one per pants crossed).
inline std::vector<ExtScalar> orthogeodesic_lengths(const Holonomy& h, CurveIndex i) {
  const XPiece& p = h.piece(i);
  const Mat2 undo = h.frame().inverse();
  // distance from the imaginary axis to its image under M: cosh D = |ad + bc|
  auto dist = [](const Mat2& m) { return detail::ext_acosh((m.a * m.d + m.b * m.c).abs()); };
  if (p.kind == PieceKind::Torus) return {dist(p.dual.conjugated_by(undo))};
  return {dist(p.gb.conjugated_by(undo)), dist(p.gc.conjugated_by(undo))};
}

}  // namespace fnls
