#pragma once

// JSON forms: surfaces and marked pairs (schema "fns-1", lengths as
// mantissa/exp2 pairs so extended values round-trip bit-exactly), constants
// profiles with a content hash, and sequence specs.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fnls/constructions.hpp"
#include "fnls/error.hpp"
#include "fnls/metrics.hpp"
#include "fnls/surface.hpp"

namespace fnls::io {

using nlohmann::json;

inline constexpr const char* kSchema = "fns-1";

inline json to_json(const ExtScalar& x) { return {{"mantissa", x.mantissa()}, {"exp2", x.exp2()}}; }

inline ExtScalar ext_from_json(const json& j) {
  return ExtScalar::from_parts(j.at("mantissa").get<double>(), j.at("exp2").get<std::int64_t>());
}

inline json pants_json(const PantsGraph& g) {
  json arr = json::array();
  for (const Pants& p : g.pants()) {
    json slots = json::array();
    for (const Slot& s : p.slots) {
      if (s.kind == SlotKind::Cusp) {
        slots.push_back({{"kind", "cusp"}});
      } else {
        slots.push_back({{"kind", "curve"}, {"curve", s.curve}});
      }
    }
    arr.push_back({{"level", p.level}, {"slots", slots}});
  }
  return arr;
}

inline json curves_json(const PantsGraph& g, const FNPoint& x) {
  json arr = json::array();
  for (CurveIndex i = 1; i <= g.curve_count(); ++i) {
    arr.push_back({{"id", i},
                   {"length", to_json(x.length(i))},
                   {"twist", x.twist(i)},
                   {"boundary", g.curve(i).boundary()}});
  }
  return arr;
}

inline json to_json(const PantsGraph& g, const FNPoint& x) {
  return {{"version", kSchema},
          {"family", g.family()},
          {"depth", g.depth()},
          {"pants", pants_json(g)},
          {"curves", curves_json(g, x)}};
}

inline json to_json(const Surface& s) { return to_json(s.graph, s.point); }

inline json to_json(const MarkedPair& p) {
  json j = to_json(p.graph(), p.base());
  j.erase("curves");
  j["base"] = curves_json(p.graph(), p.base());
  j["target"] = curves_json(p.graph(), p.target());
  return j;
}

inline void check_version(const json& j) {
  if (!j.contains("version") || j.at("version") != kSchema)
    fail(ErrorKind::Configuration, "unsupported or missing schema version (expected fns-1)");
}

inline PantsGraph graph_from_json(const json& j, std::size_t curve_count) {
  std::vector<Pants> pants;
  for (const json& pj : j.at("pants")) {
    Pants p;
    p.level = pj.at("level").get<int>();
    const json& slots = pj.at("slots");
    if (slots.size() != 3) fail(ErrorKind::Configuration, "pants need exactly three slots");
    for (std::size_t k = 0; k < 3; ++k) {
      const std::string kind = slots[k].at("kind").get<std::string>();
      if (kind == "cusp") {
        p.slots[k] = Slot::cusp();
      } else if (kind == "curve") {
        p.slots[k] = Slot::of(slots[k].at("curve").get<CurveIndex>());
      } else {
        fail(ErrorKind::Configuration, "unknown slot kind '" + kind + "'");
      }
    }
    pants.push_back(p);
  }
  return PantsGraph(std::move(pants), curve_count, j.value("family", std::string("custom")), j.value("depth", 0));
}

inline FNPoint point_from_json(const PantsGraph& g, const json& curves) {
  std::vector<CurveCoord> coords(g.curve_count());
  if (curves.size() != g.curve_count()) fail(ErrorKind::Configuration, "curve table size mismatch");
  for (const json& c : curves) {
    const auto id = c.at("id").get<CurveIndex>();
    if (id == 0 || id > g.curve_count()) fail(ErrorKind::Configuration, "curve id out of range");
    if (c.value("boundary", false) != g.curve(id).boundary())
      fail(ErrorKind::Configuration, "boundary flag disagrees with the pants graph");
    coords[id - 1] = {ext_from_json(c.at("length")), c.at("twist").get<double>()};
  }
  return FNPoint(g, std::move(coords));
}

inline Surface surface_from_json(const json& j) {
  check_version(j);
  PantsGraph g = graph_from_json(j, j.at("curves").size());
  FNPoint x = point_from_json(g, j.at("curves"));
  return {std::move(g), std::move(x)};
}

inline MarkedPair pair_from_json(const json& j) {
  check_version(j);
  PantsGraph g = graph_from_json(j, j.at("base").size());
  FNPoint base = point_from_json(g, j.at("base"));
  FNPoint target = point_from_json(g, j.at("target"));
  return MarkedPair(std::move(g), std::move(base), std::move(target));
}

/// Custom-table family whose chain coordinates come from a stored flute.
inline SurfaceFamily custom_table_family(const Surface& s) {
  SurfaceFamily fam;
  fam.kind = FamilyKind::CustomTable;
  fam.table = s.point.coords();
  return fam;
}

// ---------------------------------------------------------------------------
// profiles

inline std::string canonical_profile(const ConstantsProfile& cp) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "M=%.17g;eps0=%.17g;eps1=%.17g;rho=%.17g;ccr=%.17g;D=%.17g;N=%.17g;cap=%.17g;"
                "tr=%.17g;len=%.17g;mod=%.17g;cal=%d;fam=%s;grid=%s;pts=%zu",
                cp.M, cp.eps0, cp.eps1, cp.rho_floor, cp.c_cr, cp.defect, cp.membership_n, cp.membership_cap,
                cp.thresholds.trace, cp.thresholds.length, cp.thresholds.modulus, cp.calibrated ? 1 : 0,
                cp.family.c_str(), cp.grid_hash.c_str(), cp.grid_points);
  return buf;
}

inline std::string profile_hash(const ConstantsProfile& cp) { return hex64(fnv1a(canonical_profile(cp))); }

inline json to_json(const ConstantsProfile& cp) {
  return {{"version", "fns-profile-1"},
          {"M", cp.M},
          {"eps0", cp.eps0},
          {"eps1", cp.eps1},
          {"rho_floor", cp.rho_floor},
          {"c_cr", cp.c_cr},
          {"defect", cp.defect},
          {"membership_n", cp.membership_n},
          {"membership_cap", cp.membership_cap},
          {"thresholds", {{"trace", cp.thresholds.trace}, {"length", cp.thresholds.length}, {"modulus", cp.thresholds.modulus}}},
          {"calibration", {{"calibrated", cp.calibrated}, {"family", cp.family}, {"grid_hash", cp.grid_hash}, {"grid_points", cp.grid_points}}},
          {"hash", profile_hash(cp)}};
}

struct LoadedProfile {
  ConstantsProfile profile;
  std::string stored_hash;
  std::string computed_hash;
  bool hash_ok() const { return stored_hash == computed_hash; }
};

inline LoadedProfile profile_from_json(const json& j) {
  if (j.value("version", std::string()) != "fns-profile-1")
    fail(ErrorKind::Configuration, "unsupported profile version (expected fns-profile-1)");
  ConstantsProfile cp;
  cp.M = j.at("M").get<double>();
  cp.eps0 = j.at("eps0").get<double>();
  cp.eps1 = j.at("eps1").get<double>();
  cp.rho_floor = j.at("rho_floor").get<double>();
  cp.c_cr = j.at("c_cr").get<double>();
  cp.defect = j.at("defect").get<double>();
  cp.membership_n = j.at("membership_n").get<double>();
  cp.membership_cap = j.at("membership_cap").get<double>();
  const json& th = j.at("thresholds");
  cp.thresholds = {th.at("trace").get<double>(), th.at("length").get<double>(), th.at("modulus").get<double>()};
  const json& cal = j.at("calibration");
  cp.calibrated = cal.at("calibrated").get<bool>();
  cp.family = cal.at("family").get<std::string>();
  cp.grid_hash = cal.at("grid_hash").get<std::string>();
  cp.grid_points = cal.at("grid_points").get<std::size_t>();
  cp.validate();
  return {cp, j.at("hash").get<std::string>(), profile_hash(cp)};
}

// ---------------------------------------------------------------------------
// sequence specs

inline json to_json(const SequenceSpec& s) {
  json j = {{"kind", to_string(s.kind)}};
  if (s.kind == SequenceKind::Nondense) j["N"] = s.N;
  if (s.kind == SequenceKind::Zk) j["k"] = s.k;
  return j;
}

inline SequenceSpec sequence_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "prop-inv") return SequenceSpec::prop_inv();
  if (kind == "boundary-point") return SequenceSpec::boundary_point();
  if (kind == "nondense") return SequenceSpec::nondense(j.at("N").get<double>());
  if (kind == "zk") return SequenceSpec::zk(j.at("k").get<int>());
  fail(ErrorKind::Configuration, "unknown sequence kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// files

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Configuration, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Configuration, "malformed JSON in '" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Configuration, "cannot write '" + path + "'");
  out << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace fnls::io
