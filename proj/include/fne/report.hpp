#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace fne {

// One verified claim. `margin` is signed so that margin >= -tol means pass;
// larger is safer.
struct CheckRecord {
  std::string check_id;
  nlohmann::json params = nlohmann::json::object();
  double margin = 0.0;
  double tol = 0.0;
  bool pass = false;
};

class VerificationReport {
 public:
  VerificationReport() = default;
  explicit VerificationReport(std::string name, std::uint64_t seed = 0)
      : name_(std::move(name)), seed_(seed) {}

  // Appends a record; pass is derived from margin and tol. A NaN margin fails.
  const CheckRecord& add(std::string check_id, double margin, double tol,
                         nlohmann::json params = nlohmann::json::object());

  // Appends every record of another report, keeping its order.
  void merge(const VerificationReport& other);

  const std::vector<CheckRecord>& records() const { return records_; }
  const std::string& name() const { return name_; }
  std::uint64_t seed() const { return seed_; }

  std::size_t passed() const;
  std::size_t total() const { return records_.size(); }
  bool all_passed() const { return passed() == total(); }
  double worst_margin() const;

  // Records whose check_id matches exactly, in order.
  std::vector<const CheckRecord*> find(const std::string& check_id) const;
  const CheckRecord* first(const std::string& check_id) const;

  // JSON array of {check_id, params, margin, pass, tol}.
  nlohmann::json to_json() const;
  std::string dump_json() const;

  // "SUITE <name>: <passed>/<total> worst_margin=<value>"
  std::string summary_line() const;

 private:
  std::string name_;
  std::uint64_t seed_ = 0;
  std::vector<CheckRecord> records_;
};

// Shortest decimal string that parses back to the same binary64 value.
std::string format_double(double x);

}  // namespace fne
