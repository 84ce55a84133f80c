#pragma once

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "pauli.hpp"

namespace mubforge {

using nlohmann::json;

// ---------------------------------------------------------------------------
// field / ring descriptors

inline json field_to_json(const FieldCtx& F) {
  return json{{"p", F.p()}, {"r", F.r()}, {"modulus", F.modulus()}};
}

inline const FieldCtx& field_from_json(const json& j) {
  u32 p = j.at("p").get<u32>(), r = j.at("r").get<u32>();
  std::vector<u32> modulus;
  if (j.contains("modulus")) modulus = j.at("modulus").get<std::vector<u32>>();
  return get_field(p, r, modulus);
}

inline json ring_to_json(const RingCtx& R) {
  return json{{"r", R.r()}, {"basic_modulus", R.basic_modulus()}};
}

inline json elem_to_json(const FieldCtx& F, u32 code) { return json(F.coeffs(code)); }

inline u32 elem_from_json(const FieldCtx& F, const json& j) {
  if (j.is_number_integer()) {
    i64 v = j.get<i64>();
    if (v < 0 || v >= F.q()) throw domain_error("element code out of range");
    return static_cast<u32>(v);
  }
  return F.from_coeffs(j.get<std::vector<u32>>());
}

// ---------------------------------------------------------------------------
// presemifields and planar functions

inline json presemifield_to_json(const Presemifield& s) {
  json j;
  j["type"] = "presemifield";
  j["field"] = field_to_json(*s.F);
  j["shape"] = s.ncoords;
  j["q"] = s.F->q();
  j["name"] = s.name;
  j["commutative"] = s.claim_commutative;
  j["symplectic"] = s.claim_symplectic;
  switch (s.repr) {
    case Presemifield::Repr::Formula: {
      static const std::map<Presemifield::Family, std::string> names = {
          {Presemifield::Family::Dickson, "dickson"},
          {Presemifield::Family::Knuth, "knuth"},
          {Presemifield::Family::CohenGanley, "cohen-ganley"},
          {Presemifield::Family::ThasPayne, "thas-payne"},
          {Presemifield::Family::Ganley, "ganley"},
          {Presemifield::Family::GanleySymplectic, "ganley-symplectic"},
          {Presemifield::Family::PenttilaWilliams, "penttila-williams"},
          {Presemifield::Family::PenttilaWilliamsCommutative, "penttila-williams-commutative"},
      };
      j["family"] = names.at(s.family);
      json params;
      params["rho"] = s.rho_k;
      params["sigma"] = s.sigma_k;
      params["j"] = elem_to_json(*s.F, s.j);
      params["alt_reading"] = s.alt_reading;
      j["params"] = params;
      break;
    }
    case Presemifield::Repr::Coeffs: {
      json rows = json::array();
      for (const auto& row : s.coeff) {
        json jr = json::array();
        for (u32 c : row) jr.push_back(elem_to_json(*s.F, c));
        rows.push_back(jr);
      }
      j["coeffs"] = rows;
      if (s.has_sym) {
        json sym = json::array();
        for (u32 c : s.sym) sym.push_back(elem_to_json(*s.F, c));
        j["sym"] = sym;
      }
      break;
    }
    case Presemifield::Repr::Table: {
      u32 n = s.space_size();
      json rows = json::array();
      for (u32 x = 0; x < n; ++x) {
        json jr = json::array();
        for (u32 y = 0; y < n; ++y) jr.push_back(s.table[u64(x) * n + y]);
        rows.push_back(jr);
      }
      j["table"] = rows;
      break;
    }
  }
  return j;
}

inline Presemifield presemifield_from_json(const json& j) {
  const FieldCtx& F = field_from_json(j.at("field"));
  if (j.contains("family")) {
    std::string fam = j.at("family").get<std::string>();
    std::optional<u32> rho, sigma, jj;
    bool alt = false;
    if (j.contains("params")) {
      const json& p = j.at("params");
      if (p.contains("rho")) rho = p.at("rho").get<u32>();
      if (p.contains("sigma")) sigma = p.at("sigma").get<u32>();
      if (p.contains("j")) jj = elem_from_json(F, p.at("j"));
      if (p.contains("alt_reading")) alt = p.at("alt_reading").get<bool>();
    }
    return make_presemifield(fam, F, rho, sigma, jj, alt);
  }
  if (j.contains("coeffs")) {
    Presemifield s;
    s.F = &F;
    s.ncoords = 1;
    s.repr = Presemifield::Repr::Coeffs;
    s.name = j.value("name", "imported coefficients");
    s.claim_commutative = j.value("commutative", false);
    s.claim_symplectic = j.value("symplectic", false);
    u32 r = F.r();
    const json& rows = j.at("coeffs");
    if (rows.size() != r) throw domain_error("coeffs: expected r rows");
    s.coeff.assign(r, std::vector<u32>(r, 0));
    for (u32 i = 0; i < r; ++i) {
      if (rows[i].size() != r) throw domain_error("coeffs: expected r columns");
      for (u32 c = 0; c < r; ++c) s.coeff[i][c] = elem_from_json(F, rows[i][c]);
    }
    if (j.contains("sym")) {
      const json& sym = j.at("sym");
      if (sym.size() != u64(r) * r) throw domain_error("sym: expected r*r entries");
      s.sym.resize(u64(r) * r);
      for (u32 i = 0; i < u64(r) * r; ++i) s.sym[i] = elem_from_json(F, sym[i]);
      s.has_sym = true;
    }
    return s;
  }
  if (j.contains("table")) {
    u32 shape = j.value("shape", 1u);
    const json& rows = j.at("table");
    u64 n = shape == 1 ? F.q() : u64(F.q()) * F.q();
    if (rows.size() != n) throw domain_error("table: wrong row count");
    std::vector<u32> table(n * n);
    for (u64 x = 0; x < n; ++x) {
      if (rows[x].size() != n) throw domain_error("table: wrong column count");
      for (u64 y = 0; y < n; ++y) table[x * n + y] = rows[x][y].get<u32>();
    }
    Presemifield s = presemifield_from_table(F, shape, std::move(table), j.value("name", "imported table"));
    s.claim_commutative = j.value("commutative", false);
    s.claim_symplectic = j.value("symplectic", false);
    return s;
  }
  throw domain_error("presemifield JSON needs one of: family, coeffs, table");
}

inline json planar_to_json(const PlanarFn& f) {
  json j;
  j["type"] = "planar";
  j["field"] = field_to_json(*f.F);
  j["kind"] = f.kind == PlanarFn::Kind::Planar ? "planar" : "pseudo-planar";
  j["name"] = f.name;
  if (!f.table.empty()) {
    j["table"] = f.table;
  } else {
    json monos = json::array();
    for (const auto& m : f.mono) {
      json jm;
      jm["coeff"] = elem_to_json(*f.F, m.coeff);
      if (m.i >= 0) {
        jm["i"] = m.i;
        jm["j"] = m.jj;
      } else {
        jm["e"] = m.e;
      }
      monos.push_back(jm);
    }
    j["monomials"] = monos;
  }
  return j;
}

inline PlanarFn planar_from_json(const json& j) {
  PlanarFn f;
  f.F = &field_from_json(j.at("field"));
  std::string kind = j.value("kind", "planar");
  f.kind = kind == "pseudo-planar" ? PlanarFn::Kind::PseudoPlanar : PlanarFn::Kind::Planar;
  f.name = j.value("name", "imported");
  if (j.contains("table")) {
    f.table = j.at("table").get<std::vector<u32>>();
    if (f.table.size() != f.F->q()) throw domain_error("planar table: wrong size");
    for (u32 v : f.table)
      if (v >= f.F->q()) throw domain_error("planar table: value out of range");
    return f;
  }
  for (const json& jm : j.at("monomials")) {
    PlanarFn::Monomial m;
    m.coeff = elem_from_json(*f.F, jm.at("coeff"));
    if (jm.contains("e")) {
      m.e = jm.at("e").get<u64>();
      m.i = m.jj = -1;
    } else {
      m.i = jm.at("i").get<int>();
      m.jj = jm.at("j").get<int>();
      u64 e1 = 1, e2 = 1;
      for (int t = 0; t < m.i; ++t) e1 *= f.F->p();
      for (int t = 0; t < m.jj; ++t) e2 *= f.F->p();
      m.e = e1 + e2;
    }
    f.mono.push_back(m);
  }
  return f;
}

// ---------------------------------------------------------------------------
// spreads

inline json spread_to_json(const Spread& sp) {
  json j;
  j["type"] = "spread";
  j["form"] = "eq1";
  j["p"] = sp.space.p();
  j["rprime"] = sp.rprime();
  j["field"] = field_to_json(sp.space.V.field());
  j["shape"] = sp.space.V.ncoords();
  j["provenance"] = sp.provenance;
  json members = json::array();
  json labels = json::array();
  u32 rp = sp.rprime(), width = 2 * rp;
  for (const auto& m : sp.members) {
    json rows = json::array();
    for (u32 i = 0; i < rp; ++i) {
      json row = json::array();
      for (u32 t = 0; t < width; ++t) row.push_back(m.rows[i * width + t]);
      rows.push_back(row);
    }
    members.push_back(rows);
    labels.push_back(m.label);
  }
  j["members"] = members;
  j["labels"] = labels;
  return j;
}

inline Spread spread_from_json(const json& j) {
  const FieldCtx& F = field_from_json(j.at("field"));
  u32 shape = j.value("shape", 1u);
  VSpace V(F, shape);
  SymplecticSpace space(V);
  if (j.value("form", "eq1") != "eq1") throw domain_error("spread: unknown form tag");
  if (j.contains("p") && j.at("p").get<u32>() != F.p()) throw domain_error("spread: p mismatch");
  u32 rp = space.rprime();
  if (j.contains("rprime") && j.at("rprime").get<u32>() != rp) throw domain_error("spread: rprime mismatch");
  Spread sp{space, {}, j.value("provenance", "imported")};
  const json& members = j.at("members");
  json labels = j.value("labels", json::array());
  for (size_t i = 0; i < members.size(); ++i) {
    const json& rows = members[i];
    std::vector<std::pair<u32, u32>> pts;
    for (const json& row : rows) {
      if (row.size() != 2 * rp) throw domain_error("spread member row has wrong width");
      std::vector<u8> digits(2 * rp);
      for (u32 t = 0; t < 2 * rp; ++t) {
        u32 d = row[t].get<u32>();
        if (d >= F.p()) throw domain_error("spread member digit out of range");
        digits[t] = static_cast<u8>(d);
      }
      pts.push_back({V.from_gfp(digits.data()), V.from_gfp(digits.data() + rp)});
    }
    std::string label = i < labels.size() ? labels[i].get<std::string>() : ("member" + std::to_string(i));
    sp.members.push_back(make_member(space, pts, label));
  }
  return sp;
}

// ---------------------------------------------------------------------------
// MUB sets

inline json mub_to_json(const MubSet& ms, bool include_tables = true) {
  json j;
  j["type"] = "mub";
  j["n"] = ms.n;
  j["m"] = ms.m;
  j["provenance"] = ms.provenance;
  if (!include_tables) j["tables_omitted"] = true;
  json bases = json::array();
  for (const auto& b : ms.bases) {
    json jb;
    jb["label"] = b.label;
    if (b.standard) {
      jb["standard"] = true;
    } else if (include_tables) {
      json rows = json::array();
      for (u32 v = 0; v < ms.n; ++v) {
        json row = json::array();
        for (u32 w = 0; w < ms.n; ++w) row.push_back(b.table[u64(v) * ms.n + w]);
        rows.push_back(row);
      }
      jb["table"] = rows;
    }
    bases.push_back(jb);
  }
  j["bases"] = bases;
  return j;
}

inline MubSet mub_from_json(const json& j) {
  MubSet ms;
  ms.n = j.at("n").get<u32>();
  ms.m = j.at("m").get<u32>();
  ms.provenance = j.value("provenance", "imported");
  for (const json& jb : j.at("bases")) {
    MubBasis b;
    b.n = ms.n;
    b.m = ms.m;
    b.label = jb.value("label", "");
    if (jb.value("standard", false)) {
      b.standard = true;
    } else {
      const json& rows = jb.at("table");
      if (rows.size() != ms.n) throw domain_error("mub basis: wrong row count");
      b.table.resize(u64(ms.n) * ms.n);
      for (u32 v = 0; v < ms.n; ++v) {
        if (rows[v].size() != ms.n) throw domain_error("mub basis: wrong column count");
        for (u32 w = 0; w < ms.n; ++w) {
          u32 e = rows[v][w].get<u32>();
          if (e >= ms.m) throw domain_error("mub basis: exponent out of range");
          b.table[u64(v) * ms.n + w] = static_cast<u16>(e);
        }
      }
    }
    ms.bases.push_back(std::move(b));
  }
  return ms;
}

// ---------------------------------------------------------------------------
// reports and CSV export

inline json report_to_json(const Report& rep, bool include_timing = false) {
  json j;
  j["type"] = "report";
  j["subject"] = rep.subject;
  j["mode"] = rep.mode;
  j["passed"] = rep.passed();
  j["checks"] = rep.checks;
  j["failure_count"] = rep.failure_count;
  j["failures"] = rep.failures;
  if (rep.mode == "sampled") {
    j["seed"] = rep.seed;
    j["samples"] = rep.samples;
  }
  json tel;
  for (const auto& [k, v] : rep.telemetry) tel[k] = v;
  j["telemetry"] = tel;
  if (include_timing) j["time_ms"] = rep.time_ms;
  return j;
}

/// Dense complex export. Floating point and therefore non-authoritative;
/// the exponent tables are the exact object.
inline void write_mub_csv(std::ostream& os, const MubSet& ms) {
  os << "# dense complex MUB export; floating point values are derived from the exact\n";
  os << "# exponent tables and are not the verification arbiter\n";
  os << "# n=" << ms.n << " root_order=" << ms.m << " scale=1/sqrt(n)\n";
  os << "basis,vector";
  for (u32 w = 0; w < ms.n; ++w) os << ",re" << w << ",im" << w;
  os << "\n";
  const double pi = 3.14159265358979323846;
  double scale = 1.0 / std::sqrt(static_cast<double>(ms.n));
  os.precision(17);
  for (const auto& b : ms.bases) {
    for (u32 v = 0; v < ms.n; ++v) {
      os << b.label << "," << v;
      for (u32 w = 0; w < ms.n; ++w) {
        double re, im;
        if (b.standard) {
          re = v == w ? 1.0 : 0.0;
          im = 0.0;
        } else {
          double ang = 2.0 * pi * b.table[u64(v) * ms.n + w] / ms.m;
          re = std::cos(ang) * scale;
          im = std::sin(ang) * scale;
        }
        os << "," << re << "," << im;
      }
      os << "\n";
    }
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw domain_error("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw domain_error("cannot write file: " + path);
  out << j.dump(1) << "\n";
}

}  // namespace mubforge
