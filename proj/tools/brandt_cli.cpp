// brandt: command-line front end for ideal classes, Brandt matrices,
// eigenforms, triple product central values and the average identities.
//
// Exit status: 0 on success, 1 if any verification row fails, 2 on bad input.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "brandt/averages.hpp"
#include "brandt/cache.hpp"

namespace {

using namespace brandt;
using nlohmann::ordered_json;

struct Options {
  std::int64_t level = 0;
  std::int64_t m = 0;
  std::int64_t m_max = 20;
  double tol = 1e-9;
  std::string format = "table";
  std::string cache_dir;
  bool no_cache = false;
};

struct BadInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void validate(const Options& o) {
  if (o.level < 5 || !is_prime(o.level))
    throw BadInput("--level must be a prime >= 5, got " + std::to_string(o.level));
  if (o.m_max < 1) throw BadInput("--m-max must be positive");
  if (!(o.tol > 0)) throw BadInput("--tol must be positive");
}

std::optional<std::filesystem::path> cache_dir(const Options& o) {
  if (o.no_cache) return std::nullopt;
  return o.cache_dir.empty() ? default_cache_dir() : std::filesystem::path(o.cache_dir);
}

LevelData level_data(const Options& o, std::int64_t m_needed) {
  return load_or_compute(o.level, m_needed, o.tol, cache_dir(o));
}

std::string rational_or_decimal(const Real& x, const Real& tol, std::int64_t max_den) {
  if (const auto r = reconstruct(x, tol, Int(max_den))) return to_string(*r);
  return format_real(x);
}

std::string matrix_text(const BrandtMatrix& B) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < B.n; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < B.n; ++j) os << (j ? "," : "") << B(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

void emit_report(const VerificationReport& rep, const std::string& format) {
  if (format == "json") {
    std::cout << to_json(rep).dump(2) << '\n';
  } else if (format == "csv") {
    std::cout << to_csv(rep);
  } else {
    std::cout << "level " << rep.level << '\n' << to_table(rep);
    for (const auto& [k, v] : rep.summary.items()) std::cout << k << ": " << v.dump() << '\n';
  }
}

int cmd_classes(const Options& o) {
  const IdealClassData data = left_ideal_classes(o.level);
  const bool ok = data.mass() == make_rational(o.level - 1, 12);
  if (o.format == "json") {
    ordered_json j;
    j["level"] = o.level;
    j["classes"] = classes_json(data);
    j["classes"]["mass_ok"] = ok;
    j["classes"]["representatives"] = ordered_json::array();
    for (const auto& c : data.classes) {
      ordered_json cj;
      cj["norm"] = c.norm;
      cj["weight"] = c.weight;
      cj["basis"] = detail::ambient_basis_json(data.maximal_order, c.ideal);
      j["classes"]["representatives"].push_back(cj);
    }
    std::cout << j.dump(2) << '\n';
  } else if (o.format == "csv") {
    std::cout << "index,norm,weight\n";
    for (std::size_t i = 0; i < data.size(); ++i)
      std::cout << i + 1 << ',' << data.classes[i].norm << ',' << data.classes[i].weight << '\n';
  } else {
    std::cout << "level " << o.level << "\nn=" << data.size() << "\nweights [";
    for (std::size_t i = 0; i < data.size(); ++i) std::cout << (i ? "," : "") << data.classes[i].weight;
    std::cout << "]\nmass " << to_string(data.mass()) << (ok ? " ok" : " MISMATCH") << '\n';
    std::cout << "algebra (" << data.algebra.a << "," << data.algebra.b << ")\n";
    for (std::size_t i = 0; i < data.size(); ++i)
      std::cout << "  I" << i + 1 << "  norm " << data.classes[i].norm << "  w " << data.classes[i].weight << '\n';
  }
  return ok ? 0 : 1;
}

int cmd_verify(const Options& o) {
  const LevelData L = level_data(o, o.m_max);
  VerificationReport rep = verify_brandt_family(L.family, o.m_max);
  rep.append(verify_eigenforms(L.family, L.forms, o.tol));
  const VerificationReport avg = verify_level(L, o.m_max, o.tol);
  rep.append(avg);
  rep.summary = avg.summary;
  rep.summary["nonvanishing"] = to_json(nonvanishing_report(L, o.tol));
  emit_report(rep, o.format);
  return rep.all_pass() ? 0 : 1;
}

int cmd_brandt(const Options& o) {
  if (o.m < 1) throw BadInput("--m must be a positive integer");
  const auto data = std::make_shared<const IdealClassData>(left_ideal_classes(o.level));
  const BrandtMatrix B = brandt_matrix(*data, o.m);
  if (o.format == "json") {
    ordered_json j;
    j["level"] = o.level;
    j["m"] = o.m;
    j["weights"] = data->weights();
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < B.n; ++i) {
      std::vector<std::int64_t> row(B.entries.begin() + static_cast<std::ptrdiff_t>(i * B.n),
                                    B.entries.begin() + static_cast<std::ptrdiff_t>((i + 1) * B.n));
      rows.push_back(row);
    }
    j["matrix"] = rows;
    std::cout << j.dump(2) << '\n';
  } else if (o.format == "csv") {
    for (std::size_t i = 0; i < B.n; ++i) {
      for (std::size_t j = 0; j < B.n; ++j) std::cout << (j ? "," : "") << B(i, j);
      std::cout << '\n';
    }
  } else {
    std::cout << matrix_text(B) << '\n';
  }
  return 0;
}

int cmd_eigen(const Options& o) {
  const LevelData L = level_data(o, o.m_max);
  std::vector<std::int64_t> primes;
  for (std::int64_t p = 2; p <= o.m_max; ++p)
    if (is_prime(p)) primes.push_back(p);
  if (o.format == "json") {
    ordered_json j;
    j["level"] = o.level;
    j["eigenforms"] = ordered_json::array();
    for (const auto& f : L.forms) {
      ordered_json fj;
      fj["label"] = f.label;
      fj["lambda"] = ordered_json::array();
      for (const auto& x : f.lambda) fj["lambda"].push_back(format_real(x));
      fj["error_bound"] = format_real(f.error_bound);
      fj["a_p"] = ordered_json::object();
      for (auto p : primes) fj["a_p"][std::to_string(p)] = format_real(f.a(p));
      fj["a_N"] = format_real(f.a(o.level));
      j["eigenforms"].push_back(fj);
    }
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  if (o.format == "csv") {
    std::cout << "label,kind,index,value\n";
    for (const auto& f : L.forms) {
      for (std::size_t i = 0; i < f.lambda.size(); ++i)
        std::cout << f.label << ",lambda," << i + 1 << ',' << format_real(f.lambda[i]) << '\n';
      for (auto p : primes) std::cout << f.label << ",a," << p << ',' << format_real(f.a(p)) << '\n';
      std::cout << f.label << ",a," << o.level << ',' << format_real(f.a(o.level)) << '\n';
    }
    return 0;
  }
  std::cout << "level " << o.level << ": " << L.forms.size() << " eigenform(s)\n";
  for (const auto& f : L.forms) {
    std::cout << f.label << "  lambda (";
    for (std::size_t i = 0; i < f.lambda.size(); ++i) std::cout << (i ? ", " : "") << f.lambda[i].str(12);
    std::cout << ")\n   ";
    for (auto p : primes) std::cout << " a_" << p << "=" << f.a(p).str(8);
    std::cout << "  a_" << o.level << "=" << f.a(o.level).str(8) << '\n';
  }
  return 0;
}

int cmd_triple(const Options& o) {
  const LevelData L = level_data(o, o.m_max);
  const auto triples = unordered_triples(L.forms, *L.classdata, o.tol);
  const Real tol = real_from_double(o.tol);
  const std::int64_t max_den = 12 * (o.level - 1);
  auto eps = [](const TripleCentralValue& t) { return t.epsilon ? std::to_string(*t.epsilon) : std::string("unknown"); };
  if (o.format == "json") {
    ordered_json j;
    j["level"] = o.level;
    j["triples"] = ordered_json::array();
    for (const auto& t : triples) {
      ordered_json tj;
      tj["labels"] = t.value.labels;
      tj["multiplicity"] = t.multiplicity;
      tj["period_sum"] = format_real(t.value.period_sum);
      tj["lalg"] = rational_or_decimal(t.value.lalg, tol, max_den);
      tj["epsilon"] = eps(t.value);
      j["triples"].push_back(tj);
    }
    j["nonvanishing"] = to_json(nonvanishing_report(L, o.tol));
    std::cout << j.dump(2) << '\n';
  } else if (o.format == "csv") {
    std::cout << "f,g,h,multiplicity,period_sum,lalg,epsilon\n";
    for (const auto& t : triples)
      std::cout << t.value.labels[0] << ',' << t.value.labels[1] << ',' << t.value.labels[2] << ',' << t.multiplicity
                << ',' << format_real(t.value.period_sum) << ',' << rational_or_decimal(t.value.lalg, tol, max_den)
                << ',' << eps(t.value) << '\n';
  } else {
    std::cout << "level " << o.level << ": " << triples.size() << " unordered triple(s)\n";
    for (const auto& t : triples)
      std::cout << "  (" << t.value.labels[0] << ", " << t.value.labels[1] << ", " << t.value.labels[2] << ")  x"
                << t.multiplicity << "  L^alg " << rational_or_decimal(t.value.lalg, tol, max_den) << "  epsilon "
                << eps(t.value) << '\n';
  }
  return 0;
}

int cmd_gross(const Options& o) {
  const LevelData L = level_data(o, o.m_max);
  std::vector<int> ds;
  if (o.level % 3 == 2) ds.push_back(3);
  if (o.level % 4 == 3) ds.push_back(4);
  const Real tol = real_from_double(o.tol);
  const std::int64_t max_den = 12 * (o.level - 1);
  ordered_json j;
  j["level"] = o.level;
  j["values"] = ordered_json::array();
  for (const auto& f : L.forms)
    for (int d : ds) {
      const GrossValue g = gross_value(f, d, *L.classdata);
      j["values"].push_back({{"label", g.label},
                             {"d", d},
                             {"class", g.class_index + 1},
                             {"value", rational_or_decimal(g.value, tol, max_den)}});
    }
  if (ds.empty()) j["note"] = "no class with w > 1 at this level";
  if (o.format == "json") {
    std::cout << j.dump(2) << '\n';
  } else if (o.format == "csv") {
    std::cout << "label,d,class,value\n";
    for (const auto& v : j["values"])
      std::cout << v["label"].get<std::string>() << ',' << v["d"] << ',' << v["class"] << ','
                << v["value"].get<std::string>() << '\n';
  } else {
    std::cout << "level " << o.level << '\n';
    if (ds.empty()) std::cout << "no class with w > 1 at this level\n";
    for (const auto& v : j["values"])
      std::cout << "  " << v["label"].get<std::string>() << "  d=" << v["d"] << "  class " << v["class"]
                << "  lambda^2 " << v["value"].get<std::string>() << '\n';
  }
  return 0;
}

int cmd_trace_check(const Options& o) {
  const auto data = std::make_shared<const IdealClassData>(left_ideal_classes(o.level));
  const auto matrices = brandt_matrices(*data, o.m_max);
  VerificationReport rep;
  rep.level = o.level;
  for (const auto& [m, B] : matrices)
    rep.rows.push_back(exact_row("trace_formula", "m=" + std::to_string(m), Rational(B.trace()),
                                 trace_brandt_closed_form(o.level, m)));
  emit_report(rep, o.format);
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brandt matrices, quaternionic eigenforms and triple product central values"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool with_m_max) {
    sub->add_option("--level", o.level, "prime level N >= 5")->required();
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();
    sub->add_option("--tol", o.tol, "numerical tolerance")->capture_default_str();
    sub->add_option("--cache-dir", o.cache_dir, "cache directory");
    sub->add_flag("--no-cache", o.no_cache, "do not read or write the cache");
    if (with_m_max) sub->add_option("--m-max", o.m_max, "largest Hecke index")->capture_default_str();
  };

  auto* classes = app.add_subcommand("classes", "left ideal classes, weights and the mass check");
  add_common(classes, false);
  auto* verify = app.add_subcommand("verify", "all identities at one level");
  add_common(verify, true);
  auto* triple = app.add_subcommand("triple", "L^alg for every unordered triple of eigenforms");
  add_common(triple, true);
  auto* brandt_cmd = app.add_subcommand("brandt", "one Brandt matrix B(m)");
  add_common(brandt_cmd, false);
  brandt_cmd->add_option("--m", o.m, "Hecke index m")->required();
  auto* eigen = app.add_subcommand("eigen", "normalized eigenforms and Hecke eigenvalues");
  add_common(eigen, true);
  auto* gross = app.add_subcommand("gross", "lambda_k(f)^2 at the classes with w = 2, 3");
  add_common(gross, true);
  auto* trace = app.add_subcommand("trace-check", "trace of B(m) against the class number formula");
  add_common(trace, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    validate(o);
    if (*classes) return cmd_classes(o);
    if (*verify) return cmd_verify(o);
    if (*triple) return cmd_triple(o);
    if (*brandt_cmd) return cmd_brandt(o);
    if (*eigen) return cmd_eigen(o);
    if (*gross) return cmd_gross(o);
    if (*trace) return cmd_trace_check(o);
  } catch (const BadInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
