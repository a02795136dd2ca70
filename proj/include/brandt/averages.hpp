#pragma once

// Average value identities for triple product central values: each eigen-side
// sum of L^alg values is compared with its closed form.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "brandt/arith.hpp"
#include "brandt/brandt_matrix.hpp"
#include "brandt/eigenforms.hpp"
#include "brandt/ideals.hpp"
#include "brandt/rational.hpp"
#include "brandt/report.hpp"
#include "brandt/special_values.hpp"

namespace brandt {

struct PreconditionViolation : std::domain_error {
  using std::domain_error::domain_error;
};

inline bool averages_apply(std::int64_t N) { return N == 11 || N > 13; }

inline void require_average_level(std::int64_t N, const char* what) {
  if (!averages_apply(N))
    throw PreconditionViolation(std::string(what) + ": requires N = 11 or N > 13, got " + std::to_string(N));
}

// sum_i w_i^3 lambda_i(g)^2 lambda_i(h)^2 - 12/(N-1) delta_{g,h}
inline Real lemma41_rhs(const Eigenform& g, const Eigenform& h, const IdealClassData& data) {
  detail::require_same_level(data, {&g, &h});
  Real s = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Real w(data.classes[i].weight);
    s += w * w * w * g.lambda[i] * g.lambda[i] * h.lambda[i] * h.lambda[i];
  }
  if (&g == &h || g.label == h.label) s -= Real(12) / Real(data.level - 1);
  return s;
}

// sum_i w_i^2 B_ii(m) lambda_i(h)^2 - 12 sigma(m)_N/(N-1) - 12 a_m(h)/(N-1)
inline Real thm42_rhs(const Eigenform& h, std::int64_t m, const BrandtFamily& family) {
  const IdealClassData& data = *family.classdata;
  require_average_level(data.level, "thm42_rhs");
  detail::require_same_level(data, {&h});
  const BrandtMatrix& B = family.at(m);
  Real s = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Real w(data.classes[i].weight);
    s += w * w * Real(B(i, i)) * h.lambda[i] * h.lambda[i];
  }
  const Real scale = Real(12) / Real(data.level - 1);
  return s - scale * Real(sigma_N(m, data.level)) - scale * h.a(m);
}

// (1 - 24/(N-1)) + 6 lambda_{w=3}(h)^2 + 2 lambda_{w=2}(h)^2, the terms present as N's residue class allows.
inline Real cor44_rhs(const Eigenform& h, const IdealClassData& data) {
  const std::int64_t N = data.level;
  require_average_level(N, "cor44_rhs");
  Real s = 1 - Real(24) / Real(N - 1);
  if (N % 3 == 2) s += 6 * gross_value(h, 3, data).value;
  if (N % 4 == 3) s += 2 * gross_value(h, 4, data).value;
  return s;
}

namespace detail {

// Closed form with the quadratic ideal counts R_{-3}(m), R_{-4}(m) supplied by the caller.
inline Rational prop45_form(std::int64_t N, std::int64_t m, const Rational& r3, const Rational& r4) {
  const Rational c = 1 - make_rational(24, N - 1);
  const Rational sigma(sigma_N(m, N));
  Rational v = c * (trace_brandt_closed_form(N, m) - sigma);
  switch (N % 12) {
    case 5: v += 2 * r3 - make_rational(8, N - 1) * sigma; break;
    case 7: v += r4 - make_rational(6, N - 1) * sigma; break;
    case 11: v += 2 * r3 + r4 - make_rational(14, N - 1) * sigma; break;
    default: break;
  }
  return v;
}

}  // namespace detail

inline Rational prop45_rhs(std::int64_t N, std::int64_t m) {
  require_level(N);
  require_average_level(N, "prop45_rhs");
  if (m < 1) throw std::invalid_argument("prop45_rhs: m must be positive");
  return detail::prop45_form(N, m, Rational(ideal_count(3, m)), Rational(ideal_count(4, m)));
}

// The same closed form with R_{-d}(m) replaced by the diagonal entry B_kk(m) at
// the class with w_k = 2 (d = 4) or 3 (d = 3).
inline Rational prop45_brandt_rhs(const BrandtFamily& family, std::int64_t m) {
  const IdealClassData& data = *family.classdata;
  require_average_level(data.level, "prop45_brandt_rhs");
  Rational r3(0), r4(0);
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (data.classes[k].weight == 3) r3 = family.at(m)(k, k);
    if (data.classes[k].weight == 2) r4 = family.at(m)(k, k);
  }
  return detail::prop45_form(data.level, m, r3, r4);
}

struct Cor46Value {
  Rational derived;  // prop45_rhs(N, 1)
  Rational printed;  // the four-case closed form
  bool discrepancy = false;
};

inline Rational cor46_printed(std::int64_t N) {
  switch (N % 12) {
    case 1: return make_rational(N - 25, 12);
    case 5: return make_rational(N - 5, 12);
    case 7: return make_rational((N - 7) * (N - 13), 12 * (N - 1));
    default: return make_rational(N * N + 12 * N - 229, 12 * (N - 1));
  }
}

inline Cor46Value cor46_value(std::int64_t N) {
  Cor46Value v;
  v.derived = prop45_rhs(N, 1);
  v.printed = cor46_printed(N);
  v.discrepancy = v.derived != v.printed;
  return v;
}

// (1 - 24/(N-1)) (h(-4N)/2 - 1) for N = 1 mod 12.
inline Rational cor47_value(std::int64_t N) {
  require_level(N);
  if (N % 12 != 1) throw PreconditionViolation("cor47_value: requires N = 1 mod 12, got " + std::to_string(N));
  return (1 - make_rational(24, N - 1)) * (make_rational(class_number(-4 * N), 2) - 1);
}

// Fixed-h double sum for N = 1 mod 12.
inline Rational sec5_double_sum(std::int64_t N) { return make_rational(N - 25, N - 1); }

namespace detail {

inline ReportRow reconstructed_row(std::string identity, std::string params, const Real& lhs, const Rational& rhs,
                                   const Real& tol, std::int64_t max_den) {
  const auto rec = reconstruct(lhs, tol, Int(max_den));
  ReportRow row = real_row(std::move(identity), std::move(params), lhs, to_real(rhs), tol);
  row.rhs = to_string(rhs);
  if (rec) {
    row.lhs = to_string(*rec);
    if (*rec != rhs) row.status = Status::fail;
  } else {
    row.status = Status::fail;
    row.note = "no stable rational reconstruction of " + format_real(lhs);
  }
  return row;
}

inline std::string prm(const std::string& key, const std::string& value) { return key + "=" + value; }

}  // namespace detail

// Every average identity at one level, from an already computed eigenbasis.
// `family` must contain B(1..max(m_max, N)).
inline VerificationReport verify_averages(const BrandtFamily& family, const std::vector<Eigenform>& forms,
                                          std::int64_t m_max, double tol) {
  const IdealClassData& data = *family.classdata;
  const std::int64_t N = data.level;
  const std::size_t F = forms.size();
  VerificationReport rep;
  rep.level = N;
  const Real t = real_from_double(tol) * std::max<Real>(Real(1), Real(F * F * F));
  const std::int64_t max_den = 12 * (N - 1);
  using detail::prm;

  const TripleTable table(forms, data);
  auto double_sum = [&](std::size_t h, auto&& weight) {
    Real s = 0;
    for (std::size_t f = 0; f < F; ++f)
      for (std::size_t g = 0; g < F; ++g) s += table.lalg(f, g, h) * weight(f, g);
    return s;
  };

  Real triple = 0;
  for (std::size_t h = 0; h < F; ++h) triple += double_sum(h, [](std::size_t, std::size_t) { return Real(1); });

  if (!averages_apply(N)) {
    const std::string note = "requires N = 11 or N > 13";
    for (const char* id : {"lemma41", "thm42", "cor44", "prop45", "cor46"})
      rep.rows.push_back(not_applicable_row(id, prm("N", std::to_string(N)), note));
  } else {
    for (std::size_t g = 0; g < F; ++g)
      for (std::size_t h = g; h < F; ++h) {
        Real lhs = 0;
        for (std::size_t f = 0; f < F; ++f) lhs += table.lalg(f, g, h);
        rep.rows.push_back(real_row("lemma41", "g=" + forms[g].label + ",h=" + forms[h].label, lhs,
                                    lemma41_rhs(forms[g], forms[h], data), t));
      }

    for (std::size_t h = 0; h < F; ++h)
      for (std::int64_t m = 1; m <= m_max; ++m) {
        const Real lhs = double_sum(h, [&](std::size_t, std::size_t g) { return forms[g].a(m); });
        rep.rows.push_back(real_row("thm42", "h=" + forms[h].label + ",m=" + std::to_string(m), lhs,
                                    thm42_rhs(forms[h], m, family), t));
      }

    for (std::size_t h = 0; h < F; ++h) {
      const Real lhs = double_sum(h, [](std::size_t, std::size_t) { return Real(1); });
      rep.rows.push_back(real_row("cor44", prm("h", forms[h].label), lhs, cor44_rhs(forms[h], data), t));
    }

    for (std::int64_t m = 1; m <= m_max; ++m) {
      Real lhs = 0;
      for (std::size_t h = 0; h < F; ++h)
        lhs += double_sum(h, [](std::size_t, std::size_t) { return Real(1); }) * forms[h].a(m);
      const Rational closed = prop45_rhs(N, m);
      const Rational diag = prop45_brandt_rhs(family, m);
      ReportRow row = detail::reconstructed_row("prop45", prm("m", std::to_string(m)), lhs, closed, t, max_den);
      if (row.status == Status::fail && closed != diag)
        row.note = "ideal count R_{-d}(m) differs from the diagonal Brandt entry at the w > 1 class; with that entry the "
                   "closed form is " + to_string(diag);
      rep.rows.push_back(std::move(row));
      rep.rows.push_back(detail::reconstructed_row("prop45_brandt", prm("m", std::to_string(m)), lhs, diag, t, max_den));
    }

    const Cor46Value c46 = cor46_value(N);
    ReportRow row = detail::reconstructed_row("cor46", prm("N", std::to_string(N)), triple, c46.derived, t, max_den);
    if (c46.discrepancy) {
      row.discrepancy = true;
      row.note = "printed closed form gives " + to_string(c46.printed);
    }
    rep.rows.push_back(std::move(row));
  }

  if (N % 12 == 1) {
    Real lhs = 0;
    for (std::size_t h = 0; h < F; ++h)
      lhs += double_sum(h, [](std::size_t, std::size_t) { return Real(1); }) * forms[h].a(N);
    rep.rows.push_back(
        detail::reconstructed_row("cor47", prm("m", std::to_string(N)), lhs, cor47_value(N), t, max_den));
    for (std::size_t h = 0; h < F; ++h) {
      const Real ds = double_sum(h, [](std::size_t, std::size_t) { return Real(1); });
      rep.rows.push_back(
          detail::reconstructed_row("sec5_double", prm("h", forms[h].label), ds, sec5_double_sum(N), t, max_den));
    }
  }

  // Central vanishing forced by a root number of -1.
  Real worst = 0;
  std::int64_t minus = 0, unknown = 0;
  for (std::size_t a = 0; a < F; ++a)
    for (std::size_t b = a; b < F; ++b)
      for (std::size_t c = b; c < F; ++c) {
        const auto ea = forms[a].sign_at_level(tol), eb = forms[b].sign_at_level(tol), ec = forms[c].sign_at_level(tol);
        if (!ea || !eb || !ec) {
          ++unknown;
          continue;
        }
        if (*ea * *eb * *ec != -1) continue;
        ++minus;
        worst = std::max(worst, Real(boost::multiprecision::abs(table.period(a, b, c))));
      }
  {
    ReportRow row = real_row("epsilon_vanishing", "max |P| over triples with epsilon = -1", worst, Real(0),
                             100 * real_from_double(tol));
    row.note = std::to_string(minus) + " triples with epsilon = -1";
    if (unknown) {
      row.note += ", " + std::to_string(unknown) + " with unknown epsilon";
    }
    rep.rows.push_back(std::move(row));
  }

  const auto rec = reconstruct(triple, t, Int(max_den));
  rep.summary["forms"] = F;
  rep.summary["triple_sum"] = rec ? to_string(*rec) : format_real(triple);
  nlohmann::ordered_json doubles = nlohmann::ordered_json::object();
  for (std::size_t h = 0; h < F; ++h) {
    const Real ds = double_sum(h, [](std::size_t, std::size_t) { return Real(1); });
    const auto r = reconstruct(ds, t, Int(max_den));
    doubles[forms[h].label] = r ? to_string(*r) : format_real(ds);
  }
  rep.summary["double_sums"] = doubles;
  if (averages_apply(N)) {
    const Cor46Value c46 = cor46_value(N);
    rep.summary["cor46"] = {{"derived", to_string(c46.derived)},
                            {"printed", to_string(c46.printed)},
                            {"discrepancy", c46.discrepancy}};
  }
  return rep;
}

inline nlohmann::ordered_json classes_json(const IdealClassData& data) {
  nlohmann::ordered_json j;
  j["n"] = data.size();
  j["weights"] = data.weights();
  j["mass"] = to_string(data.mass());
  j["mass_expected"] = to_string(make_rational(data.level - 1, 12));
  return j;
}

// Everything at one level: classes, the Brandt family up to max(m_max, N), eigenforms and averages.
struct LevelData {
  std::shared_ptr<const IdealClassData> classdata;
  BrandtFamily family;
  std::vector<Eigenform> forms;
};

inline LevelData compute_level(std::int64_t N, std::int64_t m_max, double tol) {
  require_level(N);
  LevelData L;
  L.classdata = std::make_shared<const IdealClassData>(left_ideal_classes(N));
  L.family = make_family(L.classdata, std::max({m_max, N, std::int64_t{50}}));
  L.forms = eigenbasis(L.family, tol);
  return L;
}

inline VerificationReport verify_level(const LevelData& L, std::int64_t m_max, double tol) {
  VerificationReport rep = verify_averages(L.family, L.forms, m_max, tol);
  rep.summary["classes"] = classes_json(*L.classdata);
  return rep;
}

inline VerificationReport verify_level(std::int64_t N, std::int64_t m_max, double tol) {
  return verify_level(compute_level(N, m_max, tol), m_max, tol);
}

struct NonvanishingEntry {
  std::string label;
  std::int64_t count = 0;  // pairs (f, g) with L^alg(f, g, h) above the threshold
};

struct NonvanishingReport {
  std::int64_t level = 0;
  Real threshold = 0;
  std::vector<NonvanishingEntry> entries;
  std::optional<Rational> double_sum;  // (N-25)/(N-1) when N = 1 mod 12
  std::string numerator_factors;    // N - 25
  std::string denominator_factors;  // N - 1
};

inline std::string factor_string(const Int& x) {
  if (x == 0) return "0";
  std::string out = x < 0 ? "-" : "";
  const Int a = x < 0 ? Int(-x) : x;
  if (a == 1) return out + "1";
  bool first = true;
  for (const auto& [p, e] : factor(a)) {
    if (!first) out += " * ";
    first = false;
    out += p.str();
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

inline NonvanishingReport nonvanishing_report(const LevelData& L, double tol) {
  NonvanishingReport r;
  r.level = L.classdata->level;
  r.threshold = 100 * real_from_double(tol);
  const TripleTable table(L.forms, *L.classdata);
  for (std::size_t h = 0; h < L.forms.size(); ++h) {
    NonvanishingEntry e{L.forms[h].label, 0};
    for (std::size_t f = 0; f < L.forms.size(); ++f)
      for (std::size_t g = 0; g < L.forms.size(); ++g) e.count += table.lalg(f, g, h) > r.threshold;
    r.entries.push_back(e);
  }
  if (r.level % 12 == 1) {
    r.double_sum = sec5_double_sum(r.level);
    r.numerator_factors = factor_string(Int(r.level - 25));
    r.denominator_factors = factor_string(Int(r.level - 1));
  }
  return r;
}

inline nlohmann::ordered_json to_json(const NonvanishingReport& r) {
  nlohmann::ordered_json j;
  j["threshold"] = format_real(r.threshold);
  j["counts"] = nlohmann::ordered_json::object();
  for (const auto& e : r.entries) j["counts"][e.label] = e.count;
  if (r.double_sum) {
    j["double_sum"] = to_string(*r.double_sum);
    j["N_minus_25"] = r.numerator_factors;
    j["N_minus_1"] = r.denominator_factors;
  }
  return j;
}

}  // namespace brandt
