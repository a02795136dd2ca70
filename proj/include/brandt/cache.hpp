#pragma once

// On-disk cache of per-level results: one JSON file level_<N>.json holding the
// algebra, maximal order, class representatives, Brandt matrices and eigenforms.
// Rationals are stored as "p/q" strings so everything exact round-trips.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <unistd.h>

#include "json.hpp"

#include "brandt/averages.hpp"

namespace brandt {

inline constexpr int cache_schema_version = 1;

inline std::filesystem::path default_cache_dir() {
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "brandt";
  if (const char* home = std::getenv("HOME"); home && *home) return std::filesystem::path(home) / ".cache" / "brandt";
  return std::filesystem::temp_directory_path() / "brandt-cache";
}

inline std::filesystem::path cache_file(const std::filesystem::path& dir, std::int64_t N) {
  return dir / ("level_" + std::to_string(N) + ".json");
}

namespace detail {

inline nlohmann::ordered_json element_json(const QuaternionElement& x) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& c : x.coords) j.push_back(to_string(c));
  return j;
}

inline QuaternionElement element_from_json(const nlohmann::ordered_json& j) {
  QuaternionElement x;
  for (int t = 0; t < 4; ++t) x.coords[t] = parse_rational(j.at(t).get<std::string>());
  return x;
}

inline nlohmann::ordered_json lattice_json(const Lattice& L) {
  return {{"rows", L.basis}, {"denominator", L.denominator}};
}

inline Lattice lattice_from_json(const nlohmann::ordered_json& j) {
  Lattice L;
  L.basis = j.at("rows").get<Mat4>();
  L.denominator = j.at("denominator").get<std::int64_t>();
  return L;
}

// Basis of a lattice in the coordinates 1, i, j, k.
inline nlohmann::ordered_json ambient_basis_json(const Order& O, const Lattice& L) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& row : L.basis) j.push_back(element_json(make_rational(1, L.denominator) * O.element(row)));
  return j;
}

}  // namespace detail

inline nlohmann::ordered_json serialize_level(const LevelData& L) {
  const IdealClassData& data = *L.classdata;
  const Order& O = data.maximal_order;
  nlohmann::ordered_json j;
  j["schema_version"] = cache_schema_version;
  j["level"] = data.level;
  j["algebra"] = {{"a", data.algebra.a}, {"b", data.algebra.b}};
  j["maximal_order"] = nlohmann::ordered_json::array();
  for (const auto& e : O.basis()) j["maximal_order"].push_back(detail::element_json(e));

  j["classes"] = nlohmann::ordered_json::array();
  for (const auto& c : data.classes) {
    nlohmann::ordered_json cj;
    cj["ideal"] = detail::lattice_json(c.ideal);
    cj["ideal_basis"] = detail::ambient_basis_json(O, c.ideal);
    cj["norm"] = c.norm;
    cj["right_order_basis"] = detail::ambient_basis_json(O, c.right_order);
    cj["weight"] = c.weight;
    j["classes"].push_back(cj);
  }

  j["brandt"] = nlohmann::ordered_json::object();
  for (const auto& [m, B] : L.family.matrices) j["brandt"][std::to_string(m)] = B.entries;

  j["eigenforms"] = nlohmann::ordered_json::array();
  for (const auto& f : L.forms) {
    nlohmann::ordered_json fj;
    fj["label"] = f.label;
    fj["lambda"] = nlohmann::ordered_json::array();
    for (const auto& x : f.lambda) fj["lambda"].push_back(to_decimal(x, 30));
    fj["error_bound"] = format_real(f.error_bound);
    fj["eigenvalues"] = nlohmann::ordered_json::object();
    for (const auto& [m, a] : f.eigenvalues) fj["eigenvalues"][std::to_string(m)] = to_decimal(a, 30);
    j["eigenforms"].push_back(fj);
  }
  return j;
}

// Rebuilds a level from its cache entry, or nullopt if the entry is stale,
// corrupt, too short in m, or disagrees with a fresh eigenform computation.
inline std::optional<LevelData> deserialize_level(const nlohmann::ordered_json& j, std::int64_t N, std::int64_t m_needed,
                                                  double tol) {
  try {
    if (j.at("schema_version").get<int>() != cache_schema_version) return std::nullopt;
    if (j.at("level").get<std::int64_t>() != N) return std::nullopt;

    IdealClassData data;
    data.level = N;
    data.algebra = QuaternionAlgebra{j.at("algebra").at("a").get<std::int64_t>(),
                                     j.at("algebra").at("b").get<std::int64_t>(), N};
    if (data.algebra != build_algebra(N)) return std::nullopt;
    std::array<QuaternionElement, 4> basis;
    for (int t = 0; t < 4; ++t) basis[t] = detail::element_from_json(j.at("maximal_order").at(t));
    data.maximal_order = Order(data.algebra, basis);
    if (reduced_discriminant_squared(data.maximal_order) != Int(N) * N) return std::nullopt;

    for (const auto& cj : j.at("classes")) {
      IdealClass c;
      c.ideal = detail::lattice_from_json(cj.at("ideal"));
      c.norm = cj.at("norm").get<std::int64_t>();
      c.weight = cj.at("weight").get<std::int64_t>();
      if (!is_left_ideal(data.maximal_order, c.ideal) || ideal_norm(c.ideal) != c.norm) return std::nullopt;
      c.right_order = right_order(data.maximal_order, c.ideal);
      if (unit_half_count(data.maximal_order, c.right_order) != c.weight) return std::nullopt;
      data.classes.push_back(std::move(c));
    }
    if (data.mass() != make_rational(N - 1, 12)) return std::nullopt;

    LevelData L;
    L.classdata = std::make_shared<const IdealClassData>(std::move(data));
    L.family.classdata = L.classdata;
    const std::size_t n = L.classdata->size();
    for (const auto& [key, entries] : j.at("brandt").items()) {
      BrandtMatrix B{N, std::stoll(key), n, entries.get<std::vector<std::int64_t>>()};
      if (B.entries.size() != n * n) return std::nullopt;
      L.family.matrices.emplace(B.index, std::move(B));
    }
    const std::int64_t want = std::max({m_needed, N, std::int64_t{50}});
    if (L.family.max_index() < want) return std::nullopt;
    for (std::int64_t m = 1; m <= L.family.max_index(); ++m)
      if (!L.family.matrices.count(m)) return std::nullopt;
    if (!verify_brandt_family(L.family, L.family.max_index()).all_pass()) return std::nullopt;

    L.forms = eigenbasis(L.family, tol);
    const auto& stored = j.at("eigenforms");
    if (stored.size() != L.forms.size()) return std::nullopt;
    const Real agree("1e-25");
    for (std::size_t k = 0; k < L.forms.size(); ++k) {
      if (stored[k].at("label").get<std::string>() != L.forms[k].label) return std::nullopt;
      const auto& lam = stored[k].at("lambda");
      if (lam.size() != n) return std::nullopt;
      for (std::size_t i = 0; i < n; ++i)
        if (boost::multiprecision::abs(Real(lam[i].get<std::string>()) - L.forms[k].lambda[i]) > agree)
          return std::nullopt;
    }
    return L;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// Writes via a temporary file in the same directory and renames it into place.
inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// Loads level N from `dir` if a valid entry covers m_needed; otherwise computes
// it and, when a directory is given, stores the result. Cache failures never
// change the answer, only the time taken.
inline LevelData load_or_compute(std::int64_t N, std::int64_t m_needed, double tol,
                                 const std::optional<std::filesystem::path>& dir) {
  require_level(N);
  if (dir) {
    const auto path = cache_file(*dir, N);
    std::ifstream in(path);
    if (in) {
      try {
        const auto j = nlohmann::ordered_json::parse(in);
        if (auto L = deserialize_level(j, N, m_needed, tol)) return std::move(*L);
      } catch (const std::exception&) {
      }
    }
  }
  LevelData L = compute_level(N, m_needed, tol);
  if (dir) {
    try {
      write_atomically(cache_file(*dir, N), serialize_level(L).dump(1) + "\n");
    } catch (const std::exception&) {
    }
  }
  return L;
}

}  // namespace brandt
