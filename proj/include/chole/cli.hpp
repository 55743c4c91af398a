#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "chole/model.hpp"

namespace chole::cli {

enum ExitCode { kOk = 0, kInternal = 1, kValidation = 2, kTolerance = 3 };

// `name:key=val,...`, one-to-one with {"name": ..., "key": val, ...}.
struct NamedSpec {
  std::string name;
  std::map<std::string, double> params;
  bool operator==(const NamedSpec&) const = default;
};

NamedSpec parse_named(const std::string& text);
std::string format_named(const NamedSpec& s);
nlohmann::json named_to_json(const NamedSpec& s);
NamedSpec named_from_json(const nlohmann::json& j);

Potential make_potential(const NamedSpec& s);
HoleRegion make_region(const NamedSpec& s);

struct JobSpec {
  std::string command;
  std::optional<NamedSpec> potential, region;
  std::optional<double> beta, tol;
  std::optional<std::string> out, format, sweep, matrix;
  std::optional<std::uint64_t> seed;
  std::optional<int> nmax;
  // series
  std::optional<std::string> family;
  std::optional<double> v, alpha;
  // fekete
  std::optional<int> points, max_iter;
  std::optional<double> step;

  bool operator==(const JobSpec&) const = default;
};

nlohmann::json to_json(const JobSpec& j);
// Throws ValidationError on unknown fields or bad types.
JobSpec job_from_json(const nlohmann::json& j);

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numbers at 17 significant digits.
std::string dump_json(const nlohmann::json& j, int indent = 2);
std::string format_double(double x);

// temp file + rename
void write_atomic(const std::string& path, const std::string& content);

// Executes one job; output goes to job.out or `out`.
int execute(const JobSpec& job, std::ostream& out, std::ostream& err);

// Built-in regression matrix of reference values.
nlohmann::json builtin_matrix();

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace chole::cli
