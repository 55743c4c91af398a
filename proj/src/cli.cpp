#include "chole/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "chole/balayage.hpp"
#include "chole/constants.hpp"
#include "chole/errors.hpp"
#include "chole/identities.hpp"
#include "chole/oracle.hpp"

namespace chole::cli {

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Shape {
  std::vector<std::string> required, optional;
};

const std::map<std::string, Shape>& potential_shapes() {
  static const std::map<std::string, Shape> m = {
      {"ginibre", {{}, {}}},
      {"eg", {{"tau"}, {}}},
      {"ml", {{"b"}, {}}},
      {"spherical", {{}, {}}},
  };
  return m;
}

const std::map<std::string, Shape>& region_shapes() {
  static const std::map<std::string, Shape> m = {
      {"disk", {{"a"}, {"x0", "y0"}}},
      {"annulus", {{"rho1", "rho2"}, {}}},
      {"disk_complement", {{"a"}, {"x0", "y0"}}},
      {"sector", {{"a", "p"}, {}}},
      {"ellipse", {{"a", "c"}, {"x0", "y0", "theta0"}}},
      {"ellipse_complement", {{"a", "c"}, {}}},
      {"rectangle", {{"a1", "a2", "c1", "c2"}, {"theta0"}}},
      {"square", {{"c"}, {}}},
      {"triangle", {{"a"}, {"x0", "y0", "theta0"}}},
      {"cardioid", {{"a", "c"}, {"x0", "y0", "theta0"}}},
  };
  return m;
}

void check_shape(const NamedSpec& s, const std::map<std::string, Shape>& shapes, const char* what) {
  auto it = shapes.find(s.name);
  if (it == shapes.end()) throw ValidationError(std::string("unknown ") + what + " '" + s.name + "'");
  const Shape& sh = it->second;
  for (const auto& k : sh.required)
    if (!s.params.count(k))
      throw ValidationError(std::string(what) + " '" + s.name + "' needs '" + k + "'");
  for (const auto& [k, v] : s.params) {
    bool known = std::count(sh.required.begin(), sh.required.end(), k) ||
                 std::count(sh.optional.begin(), sh.optional.end(), k);
    if (!known) throw ValidationError(std::string(what) + " '" + s.name + "' has no field '" + k + "'");
    if (!std::isfinite(v)) throw ValidationError("non-finite value for '" + k + "'");
  }
}

double get(const NamedSpec& s, const std::string& k, double dflt = 0.0) {
  auto it = s.params.find(k);
  return it == s.params.end() ? dflt : it->second;
}

double parse_number(const std::string& t) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw ValidationError("not a number: '" + t + "'");
  return v;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

// ---------------------------------------------------------------- mini-syntax

NamedSpec parse_named(const std::string& text) {
  NamedSpec s;
  auto colon = text.find(':');
  s.name = trim(text.substr(0, colon));
  if (s.name.empty()) throw ValidationError("empty name in '" + text + "'");
  if (colon == std::string::npos) return s;
  std::string rest = text.substr(colon + 1);
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("expected key=value in '" + item + "'");
    std::string k = trim(item.substr(0, eq));
    if (k.empty()) throw ValidationError("empty key in '" + text + "'");
    if (s.params.count(k)) throw ValidationError("duplicate key '" + k + "'");
    s.params[k] = parse_number(trim(item.substr(eq + 1)));
  }
  return s;
}

std::string format_named(const NamedSpec& s) {
  std::string out = s.name;
  char sep = ':';
  for (const auto& [k, v] : s.params) {
    out += sep;
    out += k + "=" + format_double(v);
    sep = ',';
  }
  return out;
}

json named_to_json(const NamedSpec& s) {
  json j = json::object();
  j["name"] = s.name;
  for (const auto& [k, v] : s.params) j[k] = v;
  return j;
}

NamedSpec named_from_json(const json& j) {
  if (j.is_string()) return parse_named(j.get<std::string>());
  if (!j.is_object()) throw ValidationError("expected an object or a mini-syntax string");
  NamedSpec s;
  if (!j.contains("name") || !j["name"].is_string()) throw ValidationError("missing string field 'name'");
  s.name = j["name"].get<std::string>();
  for (const auto& [k, v] : j.items()) {
    if (k == "name") continue;
    if (!v.is_number()) throw ValidationError("field '" + k + "' must be a number");
    s.params[k] = v.get<double>();
  }
  return s;
}

Potential make_potential(const NamedSpec& s) {
  check_shape(s, potential_shapes(), "potential");
  if (s.name == "ginibre") return Potential::ginibre();
  if (s.name == "eg") return Potential::elliptic_ginibre(get(s, "tau"));
  if (s.name == "ml") return Potential::mittag_leffler(get(s, "b"));
  return Potential::spherical();
}

HoleRegion make_region(const NamedSpec& s) {
  check_shape(s, region_shapes(), "region");
  cplx z0(get(s, "x0"), get(s, "y0"));
  double th = get(s, "theta0");
  const std::string& n = s.name;
  if (n == "disk") return HoleRegion::disk(z0, get(s, "a"));
  if (n == "annulus") return HoleRegion::annulus(get(s, "rho1"), get(s, "rho2"));
  if (n == "disk_complement") return HoleRegion::disk_complement(z0, get(s, "a"));
  if (n == "sector") return HoleRegion::sector(get(s, "a"), get(s, "p"));
  if (n == "ellipse") return HoleRegion::ellipse(get(s, "a"), get(s, "c"), z0, th);
  if (n == "ellipse_complement") return HoleRegion::ellipse_complement(get(s, "a"), get(s, "c"));
  if (n == "rectangle")
    return HoleRegion::rectangle(get(s, "a1"), get(s, "a2"), get(s, "c1"), get(s, "c2"), th);
  if (n == "square") return HoleRegion::square(get(s, "c"));
  if (n == "triangle") return HoleRegion::triangle(z0, th, get(s, "a"));
  return HoleRegion::cardioid(get(s, "a"), get(s, "c"), z0, th);
}

// ---------------------------------------------------------------- JSON

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, p);
}

namespace {

void dump_rec(const json& j, int indent, int depth, std::string& out) {
  auto nl = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(std::size_t(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        nl(depth + 1);
        out += json(k).dump();
        out += indent < 0 ? ":" : ": ";
        dump_rec(v, indent, depth + 1, out);
      }
      nl(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        nl(depth + 1);
        dump_rec(v, indent, depth + 1, out);
      }
      nl(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  return out;
}

json to_json(const JobSpec& s) {
  json j = json::object();
  j["command"] = s.command;
  if (s.potential) j["potential"] = named_to_json(*s.potential);
  if (s.region) j["region"] = named_to_json(*s.region);
  if (s.beta) j["beta"] = *s.beta;
  if (s.tol) j["tol"] = *s.tol;
  if (s.out) j["out"] = *s.out;
  if (s.format) j["format"] = *s.format;
  if (s.sweep) j["sweep"] = *s.sweep;
  if (s.matrix) j["matrix"] = *s.matrix;
  if (s.seed) j["seed"] = *s.seed;
  if (s.nmax) j["nmax"] = *s.nmax;
  if (s.family) j["family"] = *s.family;
  if (s.v) j["v"] = *s.v;
  if (s.alpha) j["alpha"] = *s.alpha;
  if (s.points) j["points"] = *s.points;
  if (s.max_iter) j["max_iter"] = *s.max_iter;
  if (s.step) j["step"] = *s.step;
  return j;
}

JobSpec job_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("job spec must be a JSON object");
  static const std::set<std::string> known = {"command", "potential", "region", "beta", "tol",
                                              "out", "format", "sweep", "matrix", "seed",
                                              "nmax", "family", "v", "alpha", "points",
                                              "max_iter", "step"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ValidationError("unknown field '" + k + "' in job spec");
  JobSpec s;
  auto str = [&](const char* k) -> std::optional<std::string> {
    if (!j.contains(k)) return std::nullopt;
    if (!j[k].is_string()) throw ValidationError(std::string("field '") + k + "' must be a string");
    return j[k].get<std::string>();
  };
  auto num = [&](const char* k) -> std::optional<double> {
    if (!j.contains(k)) return std::nullopt;
    if (!j[k].is_number()) throw ValidationError(std::string("field '") + k + "' must be a number");
    return j[k].get<double>();
  };
  auto integer = [&](const char* k) -> std::optional<long long> {
    if (!j.contains(k)) return std::nullopt;
    if (!j[k].is_number_integer()) throw ValidationError(std::string("field '") + k + "' must be an integer");
    return j[k].get<long long>();
  };
  auto c = str("command");
  if (!c) throw ValidationError("job spec needs 'command'");
  s.command = *c;
  if (j.contains("potential")) s.potential = named_from_json(j["potential"]);
  if (j.contains("region")) s.region = named_from_json(j["region"]);
  s.beta = num("beta");
  s.tol = num("tol");
  s.out = str("out");
  s.format = str("format");
  s.sweep = str("sweep");
  s.matrix = str("matrix");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ValidationError("field 'seed' must be a nonnegative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (auto n = integer("nmax")) s.nmax = int(*n);
  s.family = str("family");
  s.v = num("v");
  s.alpha = num("alpha");
  if (auto n = integer("points")) s.points = int(*n);
  if (auto n = integer("max_iter")) s.max_iter = int(*n);
  s.step = num("step");
  return s;
}

void write_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp);
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename onto " + path);
  }
}

// ---------------------------------------------------------------- commands

namespace {

struct Emit {
  std::string body;
  // extra files (path, content), written atomically next to the main output
  std::vector<std::pair<std::string, std::string>> side;
  int code = kOk;
};

std::string fmt(const JobSpec& job) { return job.format.value_or("json"); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

const NamedSpec& need_potential(const JobSpec& job) {
  require(job.potential.has_value(), job.command + ": --potential is required");
  return *job.potential;
}
const NamedSpec& need_region(const JobSpec& job) {
  require(job.region.has_value(), job.command + ": --region is required");
  return *job.region;
}

// `key=v1,v2,...` or `key=lo:hi:n`.
std::pair<std::string, std::vector<double>> parse_sweep(const std::string& s) {
  auto eq = s.find('=');
  if (eq == std::string::npos) throw ValidationError("--sweep expects key=values");
  std::string key = trim(s.substr(0, eq)), rest = s.substr(eq + 1);
  std::vector<double> vals;
  if (rest.find(':') != std::string::npos) {
    std::stringstream ss(rest);
    std::string a, b, n;
    std::getline(ss, a, ':');
    std::getline(ss, b, ':');
    std::getline(ss, n, ':');
    double lo = parse_number(trim(a)), hi = parse_number(trim(b));
    double cnt = parse_number(trim(n));
    if (!(cnt >= 1 && cnt == std::floor(cnt) && cnt <= 100000)) throw ValidationError("bad sweep count");
    int k = int(cnt);
    for (int i = 0; i < k; ++i) vals.push_back(k == 1 ? lo : lo + (hi - lo) * i / (k - 1));
  } else {
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(parse_number(trim(item)));
  }
  if (vals.empty()) throw ValidationError("empty sweep");
  return {key, vals};
}

// Region key, then potential key, then beta.
std::vector<JobSpec> expand_sweep(const JobSpec& job) {
  if (!job.sweep) return {job};
  auto [key, vals] = parse_sweep(*job.sweep);
  std::vector<JobSpec> jobs;
  for (double v : vals) {
    JobSpec j = job;
    j.sweep.reset();
    if (key == "beta") {
      j.beta = v;
    } else if (j.region && region_shapes().count(j.region->name) &&
               [&] {
                 const auto& sh = region_shapes().at(j.region->name);
                 return std::count(sh.required.begin(), sh.required.end(), key) +
                            std::count(sh.optional.begin(), sh.optional.end(), key) > 0;
               }()) {
      j.region->params[key] = v;
    } else if (j.potential && j.potential->params.count(key)) {
      j.potential->params[key] = v;
    } else {
      throw ValidationError("sweep key '" + key + "' matches no parameter");
    }
    jobs.push_back(std::move(j));
  }
  return jobs;
}

// Runs f over [0, n) on the worker pool; results stay in input order.
template <class R, class F>
std::vector<R> fan_out(int n, F f) {
  std::vector<R> res(n);
  std::atomic<int> next{0};
  int t = std::max(1, std::min(worker_threads(), n));
  auto work = [&] {
    for (int i; (i = next.fetch_add(1)) < n;) res[i] = f(i);
  };
  if (t == 1) {
    work();
    return res;
  }
  std::vector<std::thread> pool;
  for (int k = 0; k < t; ++k) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  return res;
}

json constant_json(const JobSpec& job, const HoleConstant& h) {
  json j = json::object();
  j["potential"] = named_to_json(*job.potential);
  j["region"] = named_to_json(*job.region);
  j["beta"] = h.beta;
  j["C"] = h.C;
  j["method"] = to_string(h.method);
  if (!h.note.empty()) j["note"] = h.note;
  if (h.breakdown) {
    j["breakdown"] = {{"integral_Q_dnu", h.breakdown->integral_Q_dnu},
                      {"c_U_mu", h.breakdown->c_U_mu},
                      {"integral_Q_dmu", h.breakdown->integral_Q_dmu}};
  }
  return j;
}

struct Outcome {
  json value;
  std::string error;
  int code = kOk;
};

template <class F>
Outcome guarded(F f) {
  Outcome o;
  try {
    o.value = f();
  } catch (const ToleranceError& e) {
    o.error = e.what();
    o.code = kTolerance;
  } catch (const ValidationError& e) {
    o.error = e.what();
    o.code = kValidation;
  } catch (const std::domain_error& e) {
    o.error = e.what();
    o.code = kValidation;
  } catch (const std::logic_error& e) {
    o.error = e.what();
    o.code = kValidation;
  } catch (const PoleError& e) {
    o.error = e.what();
    o.code = kValidation;
  } catch (const std::exception& e) {
    o.error = e.what();
    o.code = kInternal;
  }
  return o;
}

Emit cmd_constant(const JobSpec& job, std::ostream& err) {
  need_potential(job);
  need_region(job);
  auto jobs = expand_sweep(job);
  auto outs = fan_out<Outcome>(int(jobs.size()), [&](int i) {
    return guarded([&] {
      const JobSpec& jj = jobs[i];
      Potential pot = make_potential(*jj.potential);
      HoleRegion reg = make_region(*jj.region);
      return constant_json(jj, hole_constant(pot, reg, jj.beta.value_or(2.0)));
    });
  });
  Emit e;
  for (const auto& o : outs)
    if (o.code != kOk) {
      err << "constant: " << o.error << "\n";
      e.code = std::max(e.code, o.code);
    }
  if (e.code != kOk && jobs.size() == 1) return e;
  if (fmt(job) == "csv") {
    e.body = "potential,region,beta,C,method\n";
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (outs[i].code != kOk) continue;
      const json& v = outs[i].value;
      e.body += "\"" + format_named(*jobs[i].potential) + "\",\"" + format_named(*jobs[i].region) +
                "\"," + format_double(v["beta"].get<double>()) + "," +
                format_double(v["C"].get<double>()) + "," + v["method"].get<std::string>() + "\n";
    }
  } else if (!job.sweep) {
    e.body = dump_json(outs[0].value) + "\n";
  } else {
    json arr = json::array();
    for (const auto& o : outs) arr.push_back(o.code == kOk ? o.value : json{{"error", o.error}});
    e.body = dump_json(arr) + "\n";
  }
  return e;
}

Emit cmd_density(const JobSpec& job) {
  Potential pot = make_potential(need_potential(job));
  HoleRegion reg = make_region(need_region(job));
  int n = job.nmax.value_or(64);
  require(n >= 1 && n <= 1000000, "density: --nmax must be in [1, 1e6]");
  BalayageDensity nu = balayage(pot, reg);
  const bool csv = fmt(job) == "csv";
  json head = {{"potential", named_to_json(*job.potential)},
               {"region", named_to_json(*job.region)},
               {"total_mass", nu.total_mass}};
  if (!nu.note.empty()) head["note"] = nu.note;
  json tails = json::array();
  for (const auto& seg : nu.segments) tails.push_back(seg.tail_bound);
  head["tail_bounds"] = tails;
  Emit e;
  // CSV: one JSON header line behind '#', then the samples
  if (csv) e.body = "# " + dump_json(head, -1) + "\nchart_id,t,x,y,density,measure_kind\n";
  json segs = json::array();
  for (const auto& seg : nu.segments) {
    json t = json::array(), x = json::array(), y = json::array(), d = json::array();
    for (int i = 0; i < n; ++i) {
      double tt = seg.chart.t0 + (i + 0.5) * (seg.chart.t1 - seg.chart.t0) / n;
      cplx z = seg.chart.point(tt);
      double dv = seg.density(tt);
      if (csv) {
        e.body += std::to_string(seg.chart.id) + "," + format_double(tt) + "," + format_double(z.real()) +
                  "," + format_double(z.imag()) + "," + format_double(dv) + "," +
                  to_string(seg.chart.kind) + "\n";
      } else {
        t.push_back(tt);
        x.push_back(z.real());
        y.push_back(z.imag());
        d.push_back(dv);
      }
    }
    if (!csv)
      segs.push_back({{"chart_id", seg.chart.id}, {"chart", seg.chart.name},
                      {"measure_kind", to_string(seg.chart.kind)}, {"t0", seg.chart.t0},
                      {"t1", seg.chart.t1}, {"t", t}, {"x", x}, {"y", y}, {"density", d}});
  }
  if (!csv) {
    head["segments"] = segs;
    e.body = dump_json(head) + "\n";
  }
  return e;
}

json report_json(const MomentReport& r) {
  json res = json::array();
  for (std::size_t n = 0; n < r.residuals.size(); ++n)
    res.push_back({{"n", r.inverse && n > 0 ? -int(n) : int(n)},
                   {"re", r.residuals[n].real()},
                   {"im", r.residuals[n].imag()}});
  json j = {{"n_max", r.n_max},
            {"max_abs_residual", r.max_abs_residual},
            {"inverse", r.inverse},
            {"residuals", res}};
  if (r.log_residual) j["log_residual"] = *r.log_residual;
  return j;
}

Emit cmd_verify(const JobSpec& job, std::ostream& err) {
  Potential pot = make_potential(need_potential(job));
  HoleRegion reg = make_region(need_region(job));
  int n = job.nmax.value_or(8);
  require(n >= 0 && n <= 64, "verify: --nmax must be in [0, 64]");
  double tol = job.tol.value_or(reg.bounded() ? 1e-6 : 1e-5);
  require(tol > 0.0, "verify: --tol must be positive");
  MomentReport r = verify_moments(pot, reg, balayage(pot, reg), n);
  json j = report_json(r);
  j["potential"] = named_to_json(*job.potential);
  j["region"] = named_to_json(*job.region);
  j["tol"] = tol;
  bool pass = r.max_abs_residual <= tol;
  j["pass"] = pass;
  Emit e;
  if (fmt(job) == "csv") {
    e.body = "n,re,im\n";
    for (const auto& row : j["residuals"])
      e.body += std::to_string(row["n"].get<int>()) + "," + format_double(row["re"].get<double>()) +
                "," + format_double(row["im"].get<double>()) + "\n";
    if (r.log_residual) e.body += "log," + format_double(*r.log_residual) + ",0\n";
  } else {
    e.body = dump_json(j) + "\n";
  }
  if (!pass) {
    err << "verify: max residual " << format_double(r.max_abs_residual) << " exceeds " << format_double(tol)
        << "\n";
    e.code = kTolerance;
  }
  return e;
}

Emit cmd_fekete(const JobSpec& job) {
  Potential pot = make_potential(need_potential(job));
  std::optional<HoleRegion> reg;
  if (job.region) reg = make_region(*job.region);
  FeketeConfig cfg;
  cfg.n_points = job.points.value_or(256);
  cfg.max_iter = job.max_iter.value_or(2000);
  cfg.step = job.step.value_or(cfg.step);
  cfg.seed = job.seed.value_or(1);
  PointCloud pc = fekete_minimize(pot, reg ? &*reg : nullptr, cfg);
  std::string csv = "x,y\n";
  for (auto z : pc.points) csv += format_double(z.real()) + "," + format_double(z.imag()) + "\n";
  json meta = {{"potential", named_to_json(*job.potential)},
               {"n_points", cfg.n_points},
               {"energy", pc.final_energy},
               {"iterations", pc.iterations},
               {"converged", pc.converged},
               {"seed", cfg.seed},
               {"step", cfg.step}};
  if (job.region) meta["region"] = named_to_json(*job.region);
  Emit e;
  if (job.out) {
    e.body = csv;
    e.side.push_back({*job.out + ".json", dump_json(meta) + "\n"});
  } else if (fmt(job) == "csv") {
    e.body = csv;
  } else {
    json pts = json::array();
    for (auto z : pc.points) pts.push_back({z.real(), z.imag()});
    meta["points"] = pts;
    e.body = dump_json(meta) + "\n";
  }
  return e;
}

Emit cmd_series(const JobSpec& job) {
  std::string fam = job.family.value_or("T");
  Emit e;
  if (fam == "T") {
    require(job.alpha.has_value(), "series: --alpha is required for family T");
    double a = *job.alpha;
    require(a > 0.0, "series: --alpha must be positive");
    // one v, or the table v = 0, 2, ..., nmax
    std::vector<double> vs;
    if (job.v) {
      require(*job.v >= 0.0, "series: --v must be nonnegative");
      vs.push_back(*job.v);
    } else {
      int top = job.nmax.value_or(12);
      require(top >= 0 && top <= 200, "series: --nmax must be in [0, 200]");
      for (int v = 0; v <= top; v += 2) vs.push_back(v);
    }
    json rows = json::array();
    std::string csv = "v,alpha,direct,recursive,abs_diff\n";
    for (double v : vs) {
      SeriesValue s = T_direct(v, a);
      json r = {{"v", v}, {"alpha", a}, {"direct", s.value}, {"terms_used", s.terms_used},
                {"tail_bound", s.tail_bound}};
      std::string rec = "", diff = "";
      if (v == std::floor(v) && int(v) % 2 == 0) {
        double tr = T_recursive(int(v), a);
        r["recursive"] = tr;
        r["abs_diff"] = std::abs(tr - s.value);
        rec = format_double(tr);
        diff = format_double(std::abs(tr - s.value));
      }
      csv += format_double(v) + "," + format_double(a) + "," + format_double(s.value) + "," + rec + "," +
             diff + "\n";
      rows.push_back(r);
    }
    if (fmt(job) == "csv") {
      e.body = csv;
    } else if (job.v) {
      json r = rows[0];
      r["family"] = "T";
      r["value"] = r["direct"];
      e.body = dump_json(r) + "\n";
    } else {
      e.body = dump_json(json{{"family", "T"}, {"rows", rows}}) + "\n";
    }
  } else if (fam == "Tplain") {
    require(job.v.has_value(), "series: --v is required for family Tplain");
    SeriesValue s = T_plain(*job.v);
    if (fmt(job) == "csv") {
      e.body = "v,value,tail_bound\n" + format_double(*job.v) + "," + format_double(s.value) + "," +
               format_double(s.tail_bound) + "\n";
    } else {
      e.body = dump_json(json{{"family", "Tplain"}, {"v", *job.v}, {"value", s.value},
                              {"terms_used", s.terms_used}, {"tail_bound", s.tail_bound}}) + "\n";
    }
  } else {
    throw ValidationError("series: unknown family '" + fam + "' (T, Tplain)");
  }
  return e;
}

// Scalar result of a matrix row's job.
double row_value(const JobSpec& job) {
  if (job.command == "constant") {
    return hole_constant(make_potential(need_potential(job)), make_region(need_region(job)),
                         job.beta.value_or(2.0))
        .C;
  }
  if (job.command == "series") {
    require(job.v.has_value(), "series row needs 'v'");
    std::string fam = job.family.value_or("T");
    if (fam == "T") {
      require(job.alpha.has_value(), "series row needs 'alpha'");
      return T_direct(*job.v, *job.alpha).value;
    }
    if (fam == "Tplain") return T_plain(*job.v).value;
    throw ValidationError("unknown series family '" + fam + "'");
  }
  if (job.command == "verify") {
    Potential pot = make_potential(need_potential(job));
    HoleRegion reg = make_region(need_region(job));
    return verify_moments(pot, reg, balayage(pot, reg), job.nmax.value_or(8)).max_abs_residual;
  }
  if (job.command == "kappa") return square_modulus();
  throw ValidationError("matrix rows support constant, series, verify, kappa");
}

Emit cmd_regression(const JobSpec& job, std::ostream& err) {
  json m;
  if (job.matrix) {
    std::ifstream f(*job.matrix);
    if (!f) throw ValidationError("cannot read matrix file " + *job.matrix);
    try {
      m = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("matrix: ") + e.what());
    }
  } else {
    m = builtin_matrix();
  }
  if (m.is_object()) {
    for (const auto& [k, v] : m.items())
      if (k != "rows") throw ValidationError("matrix: unknown field '" + k + "'");
    m = m.value("rows", json::array());
  }
  require(m.is_array(), "matrix must be an array of rows or {\"rows\": [...]}");
  struct Row {
    std::string name;
    JobSpec job;
    double expected, tol;
    bool rel;
  };
  std::vector<Row> rows;
  for (const auto& r : m) {
    require(r.is_object(), "matrix row must be an object");
    for (const auto& [k, v] : r.items())
      if (k != "name" && k != "job" && k != "expected" && k != "tol" && k != "mode")
        throw ValidationError("matrix row: unknown field '" + k + "'");
    require(r.contains("job") && r.contains("expected") && r.contains("tol"),
            "matrix row needs job, expected and tol");
    require(r["expected"].is_number() && r["tol"].is_number(), "expected and tol must be numbers");
    std::string mode = r.value("mode", std::string("abs"));
    require(mode == "abs" || mode == "rel", "mode must be abs or rel");
    rows.push_back({r.value("name", std::string()), job_from_json(r["job"]), r["expected"].get<double>(),
                    r["tol"].get<double>(), mode == "rel"});
  }
  auto outs = fan_out<Outcome>(int(rows.size()), [&](int i) {
    return guarded([&] { return json(row_value(rows[i].job)); });
  });
  Emit e;
  json table = json::array();
  std::string csv = "name,value,expected,deviation,tol,mode,pass\n";
  int failed = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    json t = {{"name", r.name}, {"expected", r.expected}, {"tol", r.tol}, {"mode", r.rel ? "rel" : "abs"}};
    bool pass = false;
    double dev = std::numeric_limits<double>::quiet_NaN(), val = dev;
    if (outs[i].code == kOk) {
      val = outs[i].value.get<double>();
      dev = std::abs(val - r.expected);
      if (r.rel) dev /= std::abs(r.expected);
      pass = dev <= r.tol;
      t["value"] = val;
      t["deviation"] = dev;
    } else {
      t["error"] = outs[i].error;
    }
    t["pass"] = pass;
    if (!pass) {
      ++failed;
      err << "regression: row '" << r.name << "' failed"
          << (outs[i].code == kOk ? "" : ": " + outs[i].error) << "\n";
    }
    table.push_back(t);
    csv += "\"" + r.name + "\"," + format_double(val) + "," + format_double(r.expected) + "," +
           format_double(dev) + "," + format_double(r.tol) + "," + (r.rel ? "rel" : "abs") + "," +
           (pass ? "true" : "false") + "\n";
  }
  if (fmt(job) == "csv") {
    e.body = csv;
  } else {
    e.body = dump_json(json{{"rows", table}, {"total", rows.size()}, {"failed", failed}}) + "\n";
  }
  if (failed) e.code = kTolerance;
  return e;
}

}  // namespace

json builtin_matrix() {
  auto row = [](std::string name, json job, double expected, double tol, const char* mode) {
    return json{{"name", std::move(name)}, {"job", std::move(job)}, {"expected", expected},
                {"tol", tol}, {"mode", mode}};
  };
  auto constant = [](const char* pot, const char* reg, double beta) {
    return json{{"command", "constant"}, {"potential", pot}, {"region", reg}, {"beta", beta}};
  };
  const double pi = kPi, pi2 = kPi * kPi, l2 = std::log(2.0);
  json rows = json::array();
  rows.push_back(row("ginibre disk a=0.5", constant("ginibre", "disk:a=0.5", 2.0), 0.015625, 1e-12, "rel"));
  rows.push_back(row("EG square ratio tau=0", constant("eg:tau=0", "square:c=1", 1.0), 1.1187e-2, 1e-6, "abs"));
  rows.push_back(row("EG square ratio tau=0.3", constant("eg:tau=0.3", "square:c=1", 0.91 * 0.91),
                     1.1187e-2, 1e-6, "abs"));
  rows.push_back(row("ML square b=2", constant("ml:b=2", "square:c=1", 1.0), 2.3057e-3, 1e-7, "abs"));
  rows.push_back(row("ML square b=3", constant("ml:b=3", "square:c=1", 1.0), 4.2438e-4, 1e-7, "abs"));
  rows.push_back(row("ML square b=4", constant("ml:b=4", "square:c=1", 1.0), 8.2742e-5, 1e-7, "abs"));
  rows.push_back(row("sector b/p=1/4", constant("ml:b=1", "sector:a=1,p=4", 1.0),
                     1.0 / 24 - l2 / (2 * pi2), 1e-12, "rel"));
  rows.push_back(row("sector b/p=1/2", constant("ml:b=1", "sector:a=1,p=2", 1.0), 1.0 / 8 - 1 / pi2,
                     1e-12, "rel"));
  rows.push_back(row("sector b/p=3/4", constant("ml:b=3", "sector:a=0.5,p=4", 1.0),
                     std::pow(0.5, 12) * (1.0 / 8 - l2 / (2 * pi2) - 7 / (16 * pi2)), 1e-12, "rel"));
  rows.push_back(row("sector b/p=1", constant("ml:b=2", "sector:a=0.5,p=2", 1.0),
                     std::pow(0.5, 8) * (0.25 - 16 / (9 * pi2)), 1e-12, "rel"));
  rows.push_back(row("sector b/p=2", constant("ml:b=4", "sector:a=0.5,p=2", 1.0),
                     std::pow(0.5, 16) * (0.5 - 35072 / (11025 * pi2)), 1e-12, "rel"));
  rows.push_back(row("EG ellipse complement on the droplet",
                     constant("eg:tau=0.3", "ellipse_complement:a=1.3,c=0.7", 2.0), 0.0, 1e-10, "abs"));
  auto series = [](double v, double a) {
    return json{{"command", "series"}, {"family", "T"}, {"v", v}, {"alpha", a}};
  };
  rows.push_back(row("T_0", series(0, 1.7), std::pow(pi, 3) / 32, 1e-12, "rel"));
  rows.push_back(row("T_2 alpha=2", series(2, 2.0), std::pow(pi, 5) * (0.5 - 2.0) / 384, 1e-12, "rel"));
  rows.push_back(row("T_4", series(4, 1.0), 7 * std::pow(pi, 7) / 23040, 1e-12, "rel"));
  rows.push_back(row("T_8", series(8, 1.0), 181 * std::pow(pi, 11) / 58060800, 1e-12, "rel"));
  rows.push_back(row("T_12", series(12, 1.0), 178559 * std::pow(pi, 15) / 5579410636800.0, 1e-12, "rel"));
  rows.push_back(row("square modulus", json{{"command", "kappa"}}, 0.171573, 1e-6, "abs"));
  rows.push_back(row("ML ellipse moments",
                     json{{"command", "verify"}, {"potential", "ml:b=2"}, {"region", "ellipse:a=0.3,c=0.5"},
                          {"nmax", 8}},
                     0.0, 1e-6, "abs"));
  return json{{"rows", rows}};
}

int execute(const JobSpec& job, std::ostream& out, std::ostream& err) {
  Emit e;
  Outcome o = guarded([&] {
    if (job.format && *job.format != "json" && *job.format != "csv")
      throw ValidationError("--format must be json or csv");
    if (job.sweep && job.command != "constant") throw ValidationError("--sweep applies to constant only");
    if (job.command == "constant") e = cmd_constant(job, err);
    else if (job.command == "density") e = cmd_density(job);
    else if (job.command == "verify") e = cmd_verify(job, err);
    else if (job.command == "fekete") e = cmd_fekete(job);
    else if (job.command == "series") e = cmd_series(job);
    else if (job.command == "regression") e = cmd_regression(job, err);
    else throw ValidationError("unknown command '" + job.command + "'");
    if (!e.body.empty()) {
      if (job.out) write_atomic(*job.out, e.body);
      else out << e.body;
    }
    for (const auto& [p, c] : e.side) write_atomic(p, c);
    return json();
  });
  if (o.code != kOk) {
    err << job.command << ": " << o.error << "\n";
    return o.code;
  }
  return e.code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hole constants and balayage measures for planar Coulomb gases", "coulomb_hole"};
  app.require_subcommand(0, 1);
  std::string spec_path;
  app.add_option("--spec", spec_path, "JSON job spec");

  JobSpec flags;
  std::string pot_s, reg_s;
  double beta = 0, tol = 0, v = 0, alpha = 0, step = 0;
  std::uint64_t seed = 0;
  int nmax = 0, points = 0, max_iter = 0;
  std::string outp, format, sweep, family, matrix;

  std::vector<CLI::App*> subs;
  auto add = [&](const char* name, const char* desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    subs.push_back(s);
    return s;
  };
  auto common = [&](CLI::App* s) {
    s->add_option("--out", outp, "output path (atomic write)");
    s->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--spec", spec_path, "JSON job spec");
  };
  auto geo = [&](CLI::App* s) {
    s->add_option("--potential", pot_s, "ginibre | eg:tau=.. | ml:b=.. | spherical");
    s->add_option("--region", reg_s, "e.g. disk:a=0.5  ellipse:a=0.3,c=0.5");
  };
  CLI::App* c_const = add("constant", "hole constant C");
  geo(c_const);
  common(c_const);
  c_const->add_option("--beta", beta, "inverse temperature");
  c_const->add_option("--sweep", sweep, "key=v1,v2,... or key=lo:hi:n");

  CLI::App* c_dens = add("density", "balayage density samples");
  geo(c_dens);
  common(c_dens);
  c_dens->add_option("--nmax", nmax, "samples per boundary chart");

  CLI::App* c_ver = add("verify", "moment-matching residuals");
  geo(c_ver);
  common(c_ver);
  c_ver->add_option("--nmax", nmax, "largest moment order");
  c_ver->add_option("--tol", tol, "residual tolerance");

  CLI::App* c_fek = add("fekete", "weighted Fekete points");
  geo(c_fek);
  common(c_fek);
  c_fek->add_option("--seed", seed, "RNG seed");
  c_fek->add_option("--points", points, "number of points");
  c_fek->add_option("--max-iter", max_iter, "iteration cap");
  c_fek->add_option("--step", step, "initial step");

  CLI::App* c_ser = add("series", "T-series values");
  common(c_ser);
  c_ser->add_option("--family", family, "T or Tplain");
  c_ser->add_option("--v", v, "index v");
  c_ser->add_option("--alpha", alpha, "aspect ratio");
  c_ser->add_option("--nmax", nmax, "largest v of the table when --v is absent");

  CLI::App* c_reg = add("regression", "reference-value regression matrix");
  common(c_reg);
  c_reg->add_option("matrix", matrix, "matrix JSON (default: built-in)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kValidation;
  }

  JobSpec job;
  try {
    if (!spec_path.empty()) {
      std::ifstream f(spec_path);
      if (!f) throw ValidationError("cannot read spec file " + spec_path);
      json j;
      try {
        j = json::parse(f);
      } catch (const json::parse_error& e) {
        throw ValidationError(std::string("spec: ") + e.what());
      }
      job = job_from_json(j);
    }
    CLI::App* chosen = nullptr;
    for (auto* s : subs)
      if (s->parsed()) chosen = s;
    if (chosen) {
      if (!spec_path.empty() && job.command != chosen->get_name())
        throw ValidationError("spec command '" + job.command + "' does not match '" + chosen->get_name() + "'");
      job.command = chosen->get_name();
      auto given = [&](const char* opt) {
        auto* o = chosen->get_option_no_throw(opt);
        return o && o->count() > 0;
      };
      if (given("--potential")) job.potential = parse_named(pot_s);
      if (given("--region")) job.region = parse_named(reg_s);
      if (given("--beta")) job.beta = beta;
      if (given("--tol")) job.tol = tol;
      if (given("--out")) job.out = outp;
      if (given("--format")) job.format = format;
      if (given("--sweep")) job.sweep = sweep;
      if (given("--seed")) job.seed = seed;
      if (given("--nmax")) job.nmax = nmax;
      if (given("--family")) job.family = family;
      if (given("--v")) job.v = v;
      if (given("--alpha")) job.alpha = alpha;
      if (given("--points")) job.points = points;
      if (given("--max-iter")) job.max_iter = max_iter;
      if (given("--step")) job.step = step;
      if (given("matrix")) job.matrix = matrix;
    } else if (spec_path.empty()) {
      out << app.help();
      return kValidation;
    }
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return kValidation;
  }
  return execute(job, out, err);
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace chole::cli
