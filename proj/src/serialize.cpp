#include "bfree/serialize.hpp"

#include "bfree/error.hpp"

namespace bfree {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Json lattices_to_json(const std::vector<Lattice>& v) {
  Json out = Json::array();
  for (const Lattice& l : v) out.push_back(lattice_to_json(l));
  return out;
}

std::vector<Lattice> lattices_from_json(const Json& j) {
  std::vector<Lattice> out;
  for (const Json& e : j) out.push_back(lattice_from_json(e));
  return out;
}

Status status_from_name(const std::string& s) {
  if (s == "Proximal") return Status::Proximal;
  if (s == "NotProximal") return Status::NotProximal;
  if (s == "Inconclusive") return Status::Inconclusive;
  fail(Errc::ParseError, "unknown status '" + s + "'");
}

}  // namespace

Json to_json(const BigInt& v) {
  if (fits_int64(v)) return Json(static_cast<std::int64_t>(v.get_si()));
  return Json(to_string(v));
}

BigInt bigint_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) return parse_bigint(j.get<std::string>());
  fail(Errc::ParseError, "expected an integer");
}

Json point_to_json(const Point& p) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back(to_json(p(i)));
  return out;
}

Point point_from_json(const Json& j) {
  if (!j.is_array()) fail(Errc::ParseError, "expected a point array");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p(static_cast<Eigen::Index>(i)) = bigint_from_json(j[i]);
  return p;
}

Json lattice_to_json(const Lattice& l) {
  Json out = Json::array();
  for (Eigen::Index c = 0; c < l.basis().cols(); ++c) out.push_back(point_to_json(l.basis().col(c)));
  return out;
}

Lattice lattice_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail(Errc::ParseError, "expected an array of basis columns");
  std::vector<std::vector<BigInt>> cols;
  for (const Json& c : j) {
    const Point p = point_from_json(c);
    cols.emplace_back(p.data(), p.data() + p.size());
  }
  return Lattice::from_generators(int_matrix_from_columns(cols));
}

Json ring_to_json(const QuadraticRing& r) { return Json{{"d", r.d()}}; }

Json ideal_to_json(const QuadIdeal& i) {
  return Json{{"ring", ring_to_json(i.ring())}, {"basis", lattice_to_json(i.module())}};
}

Json certificate_to_json(const Certificate& c) {
  Json data = std::visit(
      overloaded{
          [](const std::monostate&) { return Json::object(); },
          [](const CoprimeSubscheme& s) {
            return Json{{"entry", s.entry}, {"rule", s.rule}, {"witnesses", lattices_to_json(s.witnesses)}};
          },
          [](const CoprimeList& s) { return Json{{"lattices", lattices_to_json(s.lattices)}, {"extension", s.extension}}; },
          [](const Covering& s) {
            Json checked = Json::array();
            for (const CheckedMember& m : s.checked)
              checked.push_back({{"entry", m.entry}, {"member_plus_cover", lattice_to_json(m.member_plus_cover)}, {"cosets", m.cosets}});
            return Json{{"covers", lattices_to_json(s.covers)},
                        {"missed", point_to_json(s.missed)},
                        {"verified", s.verified},
                        {"checked", checked}};
          },
          [](const FixedTranslate& s) {
            return Json{{"a", point_to_json(s.a)}, {"lattice", lattice_to_json(s.lattice)}, {"exact", s.exact}};
          },
          [](const FullUnion& s) { return Json{{"members", lattices_to_json(s.members)}}; },
      },
      c);
  return Json{{"kind", std::string(certificate_kind(c))}, {"data", data}};
}

Certificate certificate_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const Json& d = j.at("data");
  if (kind == "Evidence") return std::monostate{};
  if (kind == "CoprimeSubscheme")
    return CoprimeSubscheme{d.at("entry").get<std::size_t>(), d.at("rule").get<std::string>(),
                            lattices_from_json(d.at("witnesses"))};
  if (kind == "CoprimeList") return CoprimeList{lattices_from_json(d.at("lattices")), d.at("extension").get<std::string>()};
  if (kind == "Covering") {
    Covering c;
    c.covers = lattices_from_json(d.at("covers"));
    c.missed = point_from_json(d.at("missed"));
    c.verified = d.at("verified").get<bool>();
    for (const Json& m : d.at("checked"))
      c.checked.push_back({m.at("entry").get<std::size_t>(), lattice_from_json(m.at("member_plus_cover")),
                           m.at("cosets").get<std::size_t>()});
    return c;
  }
  if (kind == "FixedTranslate")
    return FixedTranslate{point_from_json(d.at("a")), lattice_from_json(d.at("lattice")), d.at("exact").get<bool>()};
  if (kind == "FullUnion") return FullUnion{lattices_from_json(d.at("members"))};
  fail(Errc::ParseError, "unknown certificate kind '" + kind + "'");
}

Json verdict_to_json(const ProximalityVerdict& v) {
  Json windows = Json::array();
  for (const ZeroWindowRecord& r : v.evidence.windows) {
    Json w{{"side", r.side}};
    w["translate"] = r.translate ? point_to_json(*r.translate) : Json(nullptr);
    w["period"] = r.period ? lattice_to_json(*r.period) : Json(nullptr);
    w["period_checks"] = r.period_checks;
    windows.push_back(std::move(w));
  }
  return Json{{"status", std::string(status_name(v.status))},
              {"reason", v.reason},
              {"certificate", certificate_to_json(v.certificate)},
              {"evidence", {{"zero_window_sides", v.evidence.zero_window_sides()}, {"windows", windows}}}};
}

ProximalityVerdict verdict_from_json(const Json& j) {
  try {
    ProximalityVerdict v;
    v.status = status_from_name(j.at("status").get<std::string>());
    v.reason = j.value("reason", "");
    v.certificate = certificate_from_json(j.at("certificate"));
    if (j.contains("evidence") && j.at("evidence").contains("windows")) {
      for (const Json& w : j.at("evidence").at("windows")) {
        ZeroWindowRecord r;
        r.side = w.at("side").get<long>();
        if (!w.at("translate").is_null()) r.translate = point_from_json(w.at("translate"));
        if (!w.at("period").is_null()) r.period = lattice_from_json(w.at("period"));
        r.period_checks = w.at("period_checks").get<std::size_t>();
        v.evidence.windows.push_back(std::move(r));
      }
    }
    return v;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("verdict JSON: ") + e.what());
  }
}

Json density_to_json(const DensityProfile& p) {
  Json rows = Json::array();
  for (const DensityRow& r : p.rows)
    rows.push_back({{"side", r.side},
                    {"best_shift", point_to_json(r.best_shift)},
                    {"ratio", r.ratio.get_str()},
                    {"from_seed", r.from_seed}});
  return rows;
}

Json report_to_json(const FamilySpec& spec, const ConditionsReport& r) {
  Json conditions = Json::array();
  for (const ConditionResult& c : r.conditions)
    conditions.push_back({{"name", c.name}, {"truth", std::string(truth_name(c.truth))}, {"detail", c.detail}});
  Json dprime{{"candidate", r.dprime.candidate},
              {"pairwise_coprime", r.dprime.pairwise_coprime},
              {"pairwise_coprime_exact", r.dprime.pairwise_coprime_exact},
              {"members_checked", r.dprime.members_checked},
              {"truth", std::string(truth_name(r.dprime.truth))}};
  dprime["counterexample"] = r.dprime.counterexample ? point_to_json(*r.dprime.counterexample) : Json(nullptr);
  dprime["counterexample_member"] =
      r.dprime.counterexample_member ? lattice_to_json(*r.dprime.counterexample_member) : Json(nullptr);
  // Proximality is condition (a); its grade says whether it is proved.
  const Truth a = r.at("a").truth;
  Json proximal = a == Truth::ExactTrue || a == Truth::EvidenceTrue     ? Json(true)
                  : a == Truth::ExactFalse || a == Truth::EvidenceFalse ? Json(false)
                                                                        : Json(nullptr);
  const std::string grade = a == Truth::ExactTrue || a == Truth::ExactFalse ? "exact"
                            : a == Truth::Unknown                          ? "unknown"
                                                                           : "evidence";
  return Json{{"family", to_text(spec)},
              {"proximal", proximal},
              {"proximal_grade", grade},
              {"verdict", verdict_to_json(r.verdict)},
              {"conditions", conditions},
              {"dprime", dprime},
              {"density", density_to_json(r.density)}};
}

}  // namespace bfree
