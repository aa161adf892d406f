#pragma once

// Combinatorial pants decompositions, Fenchel-Nielsen points, curve families
// and the chain-shaped infinite families with their finite truncations.
//
// Curve indices are 1-based throughout: curve i is C_i and is stored at
// position i - 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "fnls/error.hpp"
#include "fnls/ext_scalar.hpp"

namespace fnls {

using CurveIndex = std::size_t;

enum class SlotKind { Curve, Cusp };

struct Slot {
  SlotKind kind = SlotKind::Cusp;
  CurveIndex curve = 0;  // meaningful for SlotKind::Curve

  static Slot cusp() { return {}; }
  static Slot of(CurveIndex c) { return {SlotKind::Curve, c}; }
  friend bool operator==(const Slot&, const Slot&) = default;
};

struct Pants {
  std::array<Slot, 3> slots{};
  int level = 1;  // exhaustion level; truncation keeps levels <= n
  friend bool operator==(const Pants&, const Pants&) = default;
};

struct Attachment {
  std::size_t pants = 0;
  int slot = 0;
  friend bool operator==(const Attachment&, const Attachment&) = default;
};

struct CurveEdge {
  std::vector<Attachment> ends;  // 2 for interior curves, 1 for boundary legs
  bool boundary() const noexcept { return ends.size() == 1; }
  friend bool operator==(const CurveEdge&, const CurveEdge&) = default;
};

class PantsGraph {
 public:
  PantsGraph() = default;

  /// Builds the curve table from the slot references and validates it.
  PantsGraph(std::vector<Pants> pants, std::size_t curve_count, std::string family = "custom",
             int depth = 0)
      : pants_(std::move(pants)), curves_(curve_count), family_(std::move(family)), depth_(depth) {
    for (std::size_t p = 0; p < pants_.size(); ++p) {
      for (int s = 0; s < 3; ++s) {
        const Slot& slot = pants_[p].slots[s];
        if (slot.kind != SlotKind::Curve) continue;
        if (slot.curve == 0 || slot.curve > curve_count)
          fail(ErrorKind::Configuration, "PantsGraph: slot references unknown curve");
        curves_[slot.curve - 1].ends.push_back({p, s});
      }
    }
    validate();
  }

  const std::vector<Pants>& pants() const noexcept { return pants_; }
  const std::vector<CurveEdge>& curves() const noexcept { return curves_; }
  std::size_t curve_count() const noexcept { return curves_.size(); }
  const std::string& family() const noexcept { return family_; }
  int depth() const noexcept { return depth_; }

  const CurveEdge& curve(CurveIndex i) const {
    if (i == 0 || i > curves_.size()) fail(ErrorKind::Range, "curve index outside the graph");
    return curves_[i - 1];
  }

  bool is_interior(CurveIndex i) const { return !curve(i).boundary(); }

  std::vector<CurveIndex> interior_curves() const {
    std::vector<CurveIndex> out;
    for (CurveIndex i = 1; i <= curves_.size(); ++i)
      if (!curves_[i - 1].boundary()) out.push_back(i);
    return out;
  }

  friend bool operator==(const PantsGraph&, const PantsGraph&) = default;

 private:
  void validate() const {
    if (pants_.empty()) fail(ErrorKind::Configuration, "PantsGraph: no pants");
    for (const auto& c : curves_)
      if (c.ends.empty() || c.ends.size() > 2)
        fail(ErrorKind::Configuration, "PantsGraph: every curve needs one or two slot attachments");
    // connectivity over interior curves
    std::vector<bool> seen(pants_.size(), false);
    std::queue<std::size_t> todo;
    todo.push(0);
    seen[0] = true;
    while (!todo.empty()) {
      const std::size_t p = todo.front();
      todo.pop();
      for (const Slot& s : pants_[p].slots) {
        if (s.kind != SlotKind::Curve) continue;
        for (const Attachment& a : curves_[s.curve - 1].ends)
          if (!seen[a.pants]) {
            seen[a.pants] = true;
            todo.push(a.pants);
          }
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      fail(ErrorKind::Configuration, "PantsGraph: graph is not connected");
  }

  std::vector<Pants> pants_;
  std::vector<CurveEdge> curves_;
  std::string family_ = "custom";
  int depth_ = 0;
};

struct CurveCoord {
  ExtScalar length;
  double twist = 0.0;  // length units; always 0 on boundary legs
  friend bool operator==(const CurveCoord&, const CurveCoord&) = default;
};

/// Fenchel-Nielsen coordinates, one entry per curve of a PantsGraph.
class FNPoint {
 public:
  FNPoint() = default;

  FNPoint(const PantsGraph& g, std::vector<CurveCoord> coords) : coords_(std::move(coords)) {
    if (coords_.size() != g.curve_count())
      fail(ErrorKind::Configuration, "FNPoint: coordinate count does not match the graph");
    for (CurveIndex i = 1; i <= coords_.size(); ++i) {
      const CurveCoord& c = coords_[i - 1];
      if (c.length.sign() <= 0) fail(ErrorKind::Domain, "FNPoint: lengths must be positive");
      if (!std::isfinite(c.twist)) fail(ErrorKind::Domain, "FNPoint: twist must be finite");
      if (g.curve(i).boundary() && c.twist != 0.0)
        fail(ErrorKind::Domain, "FNPoint: boundary legs carry no twist");
    }
  }

  const std::vector<CurveCoord>& coords() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_.size(); }

  const CurveCoord& at(CurveIndex i) const {
    if (i == 0 || i > coords_.size()) fail(ErrorKind::Range, "curve index outside the point");
    return coords_[i - 1];
  }
  const ExtScalar& length(CurveIndex i) const { return at(i).length; }
  double twist(CurveIndex i) const { return at(i).twist; }

  /// Copy with the twist of curve i replaced; the caller guarantees i is interior.
  FNPoint with_twist(CurveIndex i, double tau) const {
    FNPoint out = *this;
    out.coords_.at(i - 1).twist = tau;
    return out;
  }

  FNPoint with_length(CurveIndex i, ExtScalar l) const {
    if (l.sign() <= 0) fail(ErrorKind::Domain, "FNPoint: lengths must be positive");
    FNPoint out = *this;
    out.coords_.at(i - 1).length = l;
    return out;
  }

  friend bool operator==(const FNPoint&, const FNPoint&) = default;

 private:
  std::vector<CurveCoord> coords_;
};

enum class CurveKind { PantsCurve, TwistedDual };

/// A pants curve C_i or a Dehn-twisted dual T^k_{C_i}(beta_i).
struct CurveClass {
  CurveKind kind = CurveKind::PantsCurve;
  CurveIndex curve = 1;
  long long k = 0;
  int crossings = 0;  // i(gamma, C_curve); 0 for pants curves

  int intersection_with(CurveIndex j) const noexcept { return j == curve ? crossings : 0; }

  static CurveClass pants_curve(CurveIndex i) { return {CurveKind::PantsCurve, i, 0, 0}; }
  static CurveClass twisted_dual(CurveIndex i, long long k, int crossings) {
    return {CurveKind::TwistedDual, i, k, crossings};
  }

  friend bool operator==(const CurveClass&, const CurveClass&) = default;
};

// ---------------------------------------------------------------------------
// Families

enum class LawKind { ExpLinear, ExpDouble, Constant, Linear, Table };

/// Index -> length law for the decomposition curves of a family (index >= 1).
struct LengthLaw {
  LawKind kind = LawKind::ExpLinear;
  double param = 1.0;         // rate for ExpLinear, value for Constant, slope for Linear
  std::vector<double> table;  // Table laws

  static LengthLaw exp_linear(double rate = 1.0) { return {LawKind::ExpLinear, rate, {}}; }
  static LengthLaw exp_double() { return {LawKind::ExpDouble, 1.0, {}}; }
  static LengthLaw constant(double c) { return {LawKind::Constant, c, {}}; }
  static LengthLaw linear(double slope) { return {LawKind::Linear, slope, {}}; }
  static LengthLaw from_table(std::vector<double> t) { return {LawKind::Table, 0.0, std::move(t)}; }

  /// |log l_n| without forming l_n; finite for exp-double up to n = 1023.
  double abs_log(std::size_t n) const {
    const double x = static_cast<double>(n);
    switch (kind) {
      case LawKind::ExpLinear: return param * x;
      case LawKind::ExpDouble: return std::ldexp(1.0, static_cast<int>(n));
      case LawKind::Constant: return std::fabs(std::log(param));
      case LawKind::Linear: return std::fabs(std::log(param * x));
      case LawKind::Table: return std::fabs(std::log(table_at(n)));
    }
    return 0.0;
  }

  ExtScalar length(std::size_t n) const {
    if (n == 0) fail(ErrorKind::Range, "length laws are indexed from 1");
    switch (kind) {
      case LawKind::ExpLinear: return ExtScalar::from_log(-param * static_cast<double>(n));
      case LawKind::ExpDouble:
        if (n > 62) fail(ErrorKind::Range, "exp-double law exceeds the extended exponent range");
        return ExtScalar::from_log(-std::ldexp(1.0, static_cast<int>(n)));
      case LawKind::Constant: return ext(param);
      case LawKind::Linear: return ext(param * static_cast<double>(n));
      case LawKind::Table: return ext(table_at(n));
    }
    return {};
  }

  /// Supremum over all indices; +inf when unbounded.
  double supremum() const {
    switch (kind) {
      case LawKind::ExpLinear: return param >= 0.0 ? std::exp(-param) : kInf;
      case LawKind::ExpDouble: return std::exp(-2.0);
      case LawKind::Constant: return param;
      case LawKind::Linear: return kInf;
      case LawKind::Table: return *std::max_element(table.begin(), table.end());
    }
    return kInf;
  }

  /// Infimum over all indices; 0 when the law decays.
  double infimum() const {
    switch (kind) {
      case LawKind::ExpLinear: return param > 0.0 ? 0.0 : std::exp(-param);
      case LawKind::ExpDouble: return 0.0;
      case LawKind::Constant: return param;
      case LawKind::Linear: return param;
      case LawKind::Table: return *std::min_element(table.begin(), table.end());
    }
    return 0.0;
  }

  /// Whether l_n -> 0 along the law (a table law is finite and never certifies this).
  bool tends_to_zero() const noexcept {
    return (kind == LawKind::ExpLinear && param > 0.0) || kind == LawKind::ExpDouble;
  }

  std::string name() const {
    switch (kind) {
      case LawKind::ExpLinear: return "exp-linear";
      case LawKind::ExpDouble: return "exp-double";
      case LawKind::Constant: return "constant";
      case LawKind::Linear: return "linear";
      case LawKind::Table: return "table";
    }
    return "unknown";
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  double table_at(std::size_t n) const {
    if (n == 0 || n > table.size()) fail(ErrorKind::Range, "table law index out of range");
    return table[n - 1];
  }
};

/// Base twists as a fraction of the curve length, which keeps |tau| < l.
struct TwistLaw {
  double fraction = 0.0;
  std::vector<double> table;  // absolute twists, overrides fraction when nonempty

  double twist(std::size_t n, const ExtScalar& length) const {
    if (!table.empty()) {
      if (n == 0 || n > table.size()) fail(ErrorKind::Range, "twist table index out of range");
      return table[n - 1];
    }
    return length.fits_double() ? fraction * length.to_double() : 0.0;
  }
};

enum class FamilyKind { Flute, TorusChain, CustomTable };

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::Flute: return "flute";
    case FamilyKind::TorusChain: return "torus-chain";
    case FamilyKind::CustomTable: return "custom-table";
  }
  return "unknown";
}

struct SurfaceFamily {
  FamilyKind kind = FamilyKind::Flute;
  LengthLaw length_law = LengthLaw::exp_linear();
  TwistLaw twist_law;
  double upper_bound = 2.0;  // the configured M

  /// custom-table: explicit per-index coordinates of a flute-shaped chain
  std::vector<CurveCoord> table;
};

struct Surface {
  PantsGraph graph;
  FNPoint point;
};

namespace detail {

inline Surface build_flute(const SurfaceFamily& fam, int depth) {
  std::vector<Pants> pants(static_cast<std::size_t>(depth));
  for (int j = 1; j <= depth; ++j) {
    Pants& p = pants[j - 1];
    p.level = j;
    p.slots[0] = j == 1 ? Slot::cusp() : Slot::of(static_cast<CurveIndex>(j - 1));
    p.slots[1] = Slot::cusp();
    p.slots[2] = Slot::of(static_cast<CurveIndex>(j));
  }
  PantsGraph g(std::move(pants), static_cast<std::size_t>(depth),
               fam.kind == FamilyKind::CustomTable ? "custom-table" : "flute", depth);
  std::vector<CurveCoord> coords;
  for (int i = 1; i <= depth; ++i) {
    CurveCoord c;
    if (fam.kind == FamilyKind::CustomTable) {
      if (static_cast<std::size_t>(i) > fam.table.size())
        fail(ErrorKind::Range, "custom table shorter than the requested depth");
      c = fam.table[i - 1];
    } else {
      c.length = fam.length_law.length(static_cast<std::size_t>(i));
      c.twist = fam.twist_law.twist(static_cast<std::size_t>(i), c.length);
    }
    if (i == depth) c.twist = 0.0;
    coords.push_back(c);
  }
  FNPoint x(g, std::move(coords));
  return {std::move(g), std::move(x)};
}

// Level j: chain pants (C_{j-1} | cusp, D_j, C_j), handle pants (D_j, h_j, h_j).
// Curve ids per level: D_j = 3j-2, h_j = 3j-1, C_j = 3j.
inline Surface build_torus_chain(const SurfaceFamily& fam, int depth) {
  std::vector<Pants> pants;
  for (int j = 1; j <= depth; ++j) {
    const auto d = static_cast<CurveIndex>(3 * j - 2);
    const auto h = static_cast<CurveIndex>(3 * j - 1);
    const auto c = static_cast<CurveIndex>(3 * j);
    Pants chain;
    chain.level = j;
    chain.slots = {j == 1 ? Slot::cusp() : Slot::of(static_cast<CurveIndex>(3 * j - 3)), Slot::of(d),
                   Slot::of(c)};
    Pants handle;
    handle.level = j;
    handle.slots = {Slot::of(d), Slot::of(h), Slot::of(h)};
    pants.push_back(chain);
    pants.push_back(handle);
  }
  PantsGraph g(std::move(pants), static_cast<std::size_t>(3 * depth), "torus-chain", depth);
  std::vector<CurveCoord> coords;
  for (int j = 1; j <= depth; ++j) {
    const ExtScalar l = fam.length_law.length(static_cast<std::size_t>(j));
    const double tw = fam.twist_law.twist(static_cast<std::size_t>(j), l);
    coords.push_back({l, tw});
    coords.push_back({l, tw});
    coords.push_back({l, j == depth ? 0.0 : tw});
  }
  FNPoint x(g, std::move(coords));
  return {std::move(g), std::move(x)};
}

}  // namespace detail

/// Depth-n member of a chain family with coordinates from the family laws.
///
/// Flute: n pants in a chain, the first closed off by two cusps, each later
/// one carrying one cusp, the last one ending in the boundary leg C_n.
/// Torus-chain: the flute's cusps replaced by one-holed tori (two pants per
/// level), so each handle curve h_j has a dual crossing it once.
inline Surface build_family(const SurfaceFamily& fam, int depth) {
  if (depth < 1) fail(ErrorKind::Range, "build_family: depth must be >= 1");
  Surface s = [&] {
    switch (fam.kind) {
      case FamilyKind::Flute:
      case FamilyKind::CustomTable: return detail::build_flute(fam, depth);
      case FamilyKind::TorusChain: return detail::build_torus_chain(fam, depth);
    }
    fail(ErrorKind::Configuration, "build_family: unknown family kind");
  }();
  for (CurveIndex i = 1; i <= s.graph.curve_count(); ++i) {
    if (s.point.length(i) > ext(fam.upper_bound))
      fail(ErrorKind::Configuration, "build_family: C_" + std::to_string(i) + " is longer than the upper bound M");
  }
  return s;
}

/// Restriction to the pants of level <= n. Curves cut by the restriction
/// become boundary legs keeping their length; their twist is dropped.
inline Surface truncate(const PantsGraph& g, const FNPoint& x, int n) {
  if (n < 1) fail(ErrorKind::Range, "truncate: n must be >= 1");
  const int max_level = std::max_element(g.pants().begin(), g.pants().end(), [](const Pants& a, const Pants& b) {
                          return a.level < b.level;
                        })->level;
  if (n > max_level) fail(ErrorKind::Range, "truncate: n exceeds the depth");

  std::vector<std::size_t> pants_map(g.pants().size(), SIZE_MAX);
  std::size_t kept = 0;
  for (std::size_t p = 0; p < g.pants().size(); ++p)
    if (g.pants()[p].level <= n) pants_map[p] = kept++;

  std::vector<CurveIndex> curve_map(g.curve_count() + 1, 0);
  std::vector<CurveCoord> coords;
  for (CurveIndex i = 1; i <= g.curve_count(); ++i) {
    const auto& ends = g.curve(i).ends;
    const auto inside = std::count_if(ends.begin(), ends.end(),
                                      [&](const Attachment& a) { return pants_map[a.pants] != SIZE_MAX; });
    if (inside == 0) continue;
    curve_map[i] = coords.size() + 1;
    CurveCoord c = x.at(i);
    if (inside == 1) c.twist = 0.0;
    coords.push_back(c);
  }

  std::vector<Pants> pants;
  for (std::size_t p = 0; p < g.pants().size(); ++p) {
    if (pants_map[p] == SIZE_MAX) continue;
    Pants np = g.pants()[p];
    for (Slot& s : np.slots)
      if (s.kind == SlotKind::Curve) s.curve = curve_map[s.curve];
    pants.push_back(np);
  }
  PantsGraph tg(std::move(pants), coords.size(), g.family(), n);
  FNPoint tx(tg, std::move(coords));
  return {std::move(tg), std::move(tx)};
}

inline Surface truncate(const Surface& s, int n) { return truncate(s.graph, s.point, n); }

/// The dual beta_i of interior curve C_i: it crosses C_i once when C_i is a
/// handle curve (both sides in the same pants) and twice otherwise.
inline CurveClass dual_curve(const PantsGraph& g, CurveIndex i) {
  const CurveEdge& c = g.curve(i);
  if (c.boundary()) fail(ErrorKind::Domain, "dual_curve: boundary legs have no dual");
  const int crossings = c.ends[0].pants == c.ends[1].pants ? 1 : 2;
  return CurveClass::twisted_dual(i, 0, crossings);
}

/// Pants curves and twisted duals |k| <= K, ordered by curve then k.
inline std::vector<CurveClass> enumerate_curves(const PantsGraph& g, long long K) {
  if (K < 0) fail(ErrorKind::Domain, "enumerate_curves: K must be >= 0");
  std::vector<CurveClass> out;
  for (CurveIndex i : g.interior_curves()) {
    out.push_back(CurveClass::pants_curve(i));
    const int crossings = dual_curve(g, i).crossings;
    for (long long k = -K; k <= K; ++k) out.push_back(CurveClass::twisted_dual(i, k, crossings));
  }
  return out;
}

/// Base R and target X on the same decomposition.
class MarkedPair {
 public:
  MarkedPair(PantsGraph graph, FNPoint base, FNPoint target)
      : graph_(std::move(graph)), base_(std::move(base)), target_(std::move(target)) {
    if (base_.size() != graph_.curve_count() || target_.size() != graph_.curve_count())
      fail(ErrorKind::Configuration, "MarkedPair: both points must live on the same graph");
  }

  const PantsGraph& graph() const noexcept { return graph_; }
  const FNPoint& base() const noexcept { return base_; }
  const FNPoint& target() const noexcept { return target_; }

 private:
  PantsGraph graph_;
  FNPoint base_;
  FNPoint target_;
};

struct FnDifference {
  std::vector<std::pair<double, double>> components;  // (log l_X/l_R, tau_X - tau_R)
  double sup_norm = 0.0;
};

inline FnDifference fn_difference(const MarkedPair& p) {
  FnDifference d;
  for (CurveIndex i = 1; i <= p.graph().curve_count(); ++i) {
    const double log_ratio = p.target().length(i).log() - p.base().length(i).log();
    const double dtw = p.target().twist(i) - p.base().twist(i);
    d.components.emplace_back(log_ratio, dtw);
    d.sup_norm = std::max({d.sup_norm, std::fabs(log_ratio), std::fabs(dtw)});
  }
  return d;
}

/// One-holed torus: a single pants with two slots glued along C_1 and C_2 as
/// the boundary leg (or a cusp when boundary_length is 0).
inline Surface one_holed_torus(double length, double twist, double boundary_length) {
  Pants p;
  const bool cusp = boundary_length == 0.0;
  p.slots = {Slot::of(1), Slot::of(1), cusp ? Slot::cusp() : Slot::of(2)};
  PantsGraph g({p}, cusp ? 1 : 2, "one-holed-torus", 1);
  std::vector<CurveCoord> coords{{ext(length), twist}};
  if (!cusp) coords.push_back({ext(boundary_length), 0.0});
  FNPoint x(g, std::move(coords));
  return {std::move(g), std::move(x)};
}

/// Four-holed sphere: pants (C_1, C_2, C_3) and (C_1, C_4, C_5), boundary legs
/// C_2..C_5 (a zero boundary length makes that hole a cusp and drops the leg).
inline Surface four_holed_sphere(double length, double twist, std::array<double, 4> boundary) {
  std::vector<CurveCoord> coords{{ext(length), twist}};
  std::array<Slot, 4> holes{};
  for (std::size_t k = 0; k < 4; ++k) {
    if (boundary[k] == 0.0) continue;
    coords.push_back({ext(boundary[k]), 0.0});
    holes[k] = Slot::of(coords.size());
  }
  Pants a;
  a.slots = {Slot::of(1), holes[0], holes[1]};
  Pants b;
  b.slots = {Slot::of(1), holes[2], holes[3]};
  PantsGraph g({a, b}, coords.size(), "four-holed-sphere", 1);
  FNPoint x(g, std::move(coords));
  return {std::move(g), std::move(x)};
}

}  // namespace fnls
