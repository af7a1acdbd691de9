#pragma once
// Case registry: every headline result is bound to a (method path, oracle
// path, tolerance) triple and runs as a named case producing one CaseRecord.
// Reports are deterministic for fixed (filter, tol, seed); the seconds column
// is the only field outside that contract.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibd/special.hpp"

namespace ibd {

// Unknown case ids, unknown or invalid parameters, and parameter values that
// drive a method outside its validity class all surface as RegistryError
// (usage-error semantics, exit code 2 in the driver).
struct RegistryError : std::runtime_error {
  explicit RegistryError(const std::string& what) : std::runtime_error(what) {}
};

struct CaseInfo {
  std::string id;
  std::string description;  // one line, shown by `list`
  std::string anchor;       // where the target value comes from
  double default_tol = 0.0;
};

struct RunOptions {
  double tol = -1.0;     // < 0: use the case default (or its runtime bound)
  uint64_t seed = 20240817;
  bool heaviside_midpoint = false;  // H(0) = 1/2 instead of 1
  std::map<std::string, double> params;  // overrides of case defaults
};

struct CaseRecord {
  std::string case_id;
  std::string params;  // "k=v;k=v", keys sorted
  cplx method_value{0.0, 0.0};
  cplx oracle_value{0.0, 0.0};
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tol = 0.0;
  std::string status;  // pass | fail | flagged
  std::string note;
  double seconds = 0.0;
};

const std::vector<CaseInfo>& case_catalog();

// Runs one case: method path and oracle path, then the tolerance check.
// status = pass iff abs_err <= tol or rel_err <= tol; flagged marks
// regularized results that pass but carry a mathematical caveat in the note.
CaseRecord run_case(const std::string& id, const RunOptions& opts = {});

// Runs every case whose id matches the glob, sorted by case_id.
std::vector<CaseRecord> verify_all(const std::string& filter,
                                   const RunOptions& opts = {});

bool any_failed(const std::vector<CaseRecord>& records);

// `*` and `?` wildcards, anchored at both ends.
bool glob_match(const std::string& pattern, const std::string& text);

// 17 significant digits, lowercase e exponent; -0 normalized to 0.
std::string format_sig(double x);
std::string format_cplx(const cplx& z);

// Fixed column order: case_id, params, method_value, oracle_value, abs_err,
// rel_err, tol, status, note, seconds.
std::string to_csv(const std::vector<CaseRecord>& records);
std::string to_json(const std::vector<CaseRecord>& records);
std::string to_markdown(const std::vector<CaseRecord>& records);

// Flat key=value config text ('#' comments, blank lines skipped).
std::map<std::string, std::string> parse_config(const std::string& text);

}  // namespace ibd
