// destab: batch front end over the library. One command per invocation;
// reads JSON documents, writes a JSON report.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "destab/corpus.hpp"
#include "destab/destab.hpp"
#include "destab/io.hpp"

namespace {

using destab::io::json;
using namespace destab;

enum Exit : int { Ok = 0, Usage = 1, Schema = 2, Precondition = 3, Unsupported = 4, Invariant = 5 };

struct Request {
  std::string command;
  std::string group_path, rep_path, input_path, config_path, out_path, profile;
  std::uint64_t seed = 1;
  std::optional<std::size_t> size;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("missing --") + what);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

std::string fingerprint(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Witness replay: the limit must reproduce and admit no R_u conjugator.
void replay(const GroupSpec& group, const Representation& rep, const Point& v, const Cocharacter& lambda,
            const Point& claimed) {
  auto lim = limit(rep, v, lambda);
  if (!lim || *lim != claimed) throw InvariantError("witness limit does not replay");
  if (find_ru_conjugator(group, rep, v, *lim, lambda)) throw InvariantError("witness limit is R_u-conjugate to the input");
}

struct Context {
  json request;
  json result;
  int status = Ok;
};

Context run(const Request& r) {
  Context ctx;
  ctx.request = {{"command", r.command}};
  if (r.command == "corpus") {
    if (r.profile.empty()) throw UsageError("corpus needs --profile");
    const auto& profile = corpus::find_profile(r.profile);
    ctx.request["profile"] = r.profile;
    ctx.request["seed"] = r.seed;
    ctx.request["size"] = r.size.value_or(profile.default_size);
    auto report = corpus::run(profile, r.seed, r.size, threads_from_env());
    ctx.result = corpus::to_json(report);
    if (!report.ok()) ctx.status = Invariant;
    return ctx;
  }

  const json gdoc = load(r.group_path, "group");
  const auto group = io::group_from_json(gdoc);
  ctx.request["group"] = gdoc;
  const json input = load(r.input_path, "input");
  ctx.request["input"] = input;
  json cdoc = r.config_path.empty() ? json::object() : load(r.config_path, "config");
  auto config = [&] {
    auto cfg = io::config_from_json(group, cdoc);
    json full = cdoc;
    const json resolved = io::to_json(cfg);
    for (const auto& [k, v] : resolved.items()) full[k] = v;
    if (!cdoc.contains("family")) full["family_kind"] = "weyl_shear";
    ctx.request["config"] = full;
    return cfg;
  };
  auto representation = [&] {
    const json rdoc = load(r.rep_path, "rep");
    ctx.request["rep"] = rdoc;
    auto rep = io::representation_from_json(rdoc);
    rep.check_compatible(group);
    return rep;
  };
  auto subvariety = [&](const Representation& rep) {
    if (!input.contains("subvariety")) return SubvarietySpec::zero_locus(rep);
    return io::subvariety_from_json(rep, input.at("subvariety"));
  };

  if (r.command == "limit") {
    const auto rep = representation();
    const auto v = io::point_from_json(rep, io::detail::field(input, "point"));
    const auto lambda = io::cocharacter_from_json(group, io::detail::field(input, "lambda"));
    const auto lim = limit(rep, v, lambda);
    json grading = json::object();
    for (const auto& [n, c] : grade(rep, v, lambda).components) grading[std::to_string(n)] = io::to_json(rep, c);
    ctx.result = {{"exists", lim.has_value()}, {"grading", grading}};
    if (lim) {
      ctx.result["limit"] = io::to_json(rep, *lim);
      if (rep.is_conjugation()) {
        const Point target = input.contains("target") ? io::point_from_json(rep, input.at("target")) : *lim;
        auto u = find_ru_conjugator(group, rep, v, target, lambda);
        ctx.result["ru_conjugator"] = u ? io::to_json(*u) : json(nullptr);
      }
    }
  } else if (r.command == "classify") {
    const auto lambda = io::cocharacter_from_json(group, io::detail::field(input, "lambda"));
    const auto g = io::matrix_from_json(io::detail::field(input, "element"));
    const auto cls = classify(group, g, lambda);
    ctx.result = {{"class", to_string(cls)}, {"parabolic", io::to_json(ParabolicDescriptor(group, lambda))}};
    if (cls != MembershipClass::NotInP) ctx.result["c_lambda"] = io::to_json(c_lambda(group, g, lambda));
  } else if (r.command == "optimize" || r.command == "oracle") {
    const auto rep = representation();
    std::vector<Point> xs;
    for (const auto& p : io::detail::array(io::detail::field(input, "points"), "points"))
      xs.push_back(io::point_from_json(rep, p));
    const auto s = subvariety(rep);
    if (r.command == "oracle") cdoc["oracle_mode"] = true;
    const auto cfg = config();
    const auto res = optimize(group, rep, xs, s, cfg);
    ctx.result = io::to_json(res);
    if (r.command == "oracle") {
      ctx.result["oracle_agrees"] = res.global_verified;
      if (!res.global_verified) ctx.status = Invariant;
    }
  } else if (r.command == "cochar-closed") {
    const auto rep = representation();
    const auto v = io::point_from_json(rep, io::detail::field(input, "point"));
    const auto verdict = is_cochar_closed(group, rep, v, config());
    if (!verdict.closed) replay(group, rep, v, *verdict.witness, *verdict.witness_limit);
    ctx.result = io::to_json(rep, verdict);
  } else if (r.command == "gcr") {
    const auto cfg = config();
    if (input.contains("basis")) {
      const auto h = io::lie_from_json(input);
      const auto rep = Representation::conjugation_tuples(group.dimension(), h.basis.size());
      const auto v = lie_is_gcr(group, h, cfg);
      if (v.witness) replay(group, rep, point_from_matrices(h.basis), *v.witness, *v.witness_limit);
      ctx.result = {{"route", "lie"}, {"status", to_string(v.status)}, {"search", io::to_json(rep, v)}};
    } else {
      const auto h = io::subgroup_from_json(input);
      const auto rep = Representation::conjugation_tuples(group.dimension(), h.generators.size());
      const auto search = is_gcr_search(group, h, cfg);
      if (search.witness) replay(group, rep, h.tuple(), *search.witness, *search.witness_limit);
      ctx.result = {{"route", "group"}, {"status", to_string(search.status)}, {"search", io::to_json(rep, search)}};
      if (group.is_single_gl()) {
        const auto alg = is_gcr_algebra(group, h);
        ctx.result["algebra"] = io::to_json(rep, alg);
        if (alg.status != search.status) throw InvariantError("algebra criterion and cocharacter search disagree");
      }
    }
  } else if (r.command == "reduce") {
    ctx.result = io::to_json(reduce_to_gcr(group, io::subgroup_from_json(input), config()));
  } else if (r.command == "centre") {
    const auto h = io::subgroup_from_json(input);
    auto mode = ParabolicMode::UnipotentIdentity;
    std::optional<SubvarietySpec> custom;
    if (input.contains("mode")) {
      const auto& m = io::detail::string(input.at("mode"), "mode");
      if (m == "custom")
        mode = ParabolicMode::Custom;
      else if (m != "unipotent_identity")
        throw SchemaError("mode must be \"unipotent_identity\" or \"custom\"");
    }
    if (input.contains("subvariety")) {
      const auto rep = Representation::conjugation_tuples(group.dimension(), h.generators.size());
      custom = io::subvariety_from_json(rep, input.at("subvariety"));
    }
    ctx.result = io::to_json(building_centre(group, h, mode, config(), custom));
  } else {
    throw UsageError("unknown command \"" + r.command + "\"");
  }
  return ctx;
}

int emit_error(const char* kind, const std::string& msg, int code) {
  json e{{"error", kind}, {"message", msg}};
  std::cerr << e.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact instability and complete-reducibility toolkit"};
  app.set_version_flag("--version", destab::version);
  Request r;
  app.add_option("command", r.command, "limit | classify | optimize | cochar-closed | gcr | reduce | centre | oracle | corpus")
      ->required();
  app.add_option("--group", r.group_path, "group document");
  app.add_option("--rep", r.rep_path, "representation document");
  app.add_option("--input", r.input_path, "points / subgroup / subvariety document");
  app.add_option("--config", r.config_path, "search configuration document");
  app.add_option("--seed", r.seed, "corpus seed");
  app.add_option("--out", r.out_path, "report path (default: stdout)");
  app.add_option("--profile", r.profile, "corpus profile");
  app.add_option("--size", r.size, "corpus size");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? Ok : Usage;
  }

  Context ctx;
  try {
    ctx = run(r);
  } catch (const UsageError& e) {
    return emit_error("usage", e.what(), Usage);
  } catch (const destab::SchemaError& e) {
    return emit_error("schema", e.what(), Schema);
  } catch (const nlohmann::json::exception& e) {
    return emit_error("schema", e.what(), Schema);
  } catch (const destab::UnsupportedError& e) {
    return emit_error("unsupported", e.what(), Unsupported);
  } catch (const destab::InvariantError& e) {
    return emit_error("invariant", e.what(), Invariant);
  } catch (const destab::Error& e) {
    return emit_error("precondition", e.what(), Precondition);
  }

  json report{{"command", r.command},
              {"version", destab::version},
              {"request", ctx.request},
              {"fingerprint", fingerprint(ctx.request.dump())},
              {"result", ctx.result},
              {"replayed", true}};
  const std::string text = report.dump(2) + "\n";
  if (r.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(r.out_path);
    if (!out) return emit_error("usage", "cannot write " + r.out_path, Usage);
    out << text;
  }
  return ctx.status;
}
