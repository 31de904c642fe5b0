#include "fne/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace fne {

const CheckRecord& VerificationReport::add(std::string check_id, double margin, double tol,
                                           nlohmann::json params) {
  CheckRecord rec;
  rec.check_id = std::move(check_id);
  rec.params = std::move(params);
  rec.margin = margin;
  rec.tol = tol;
  rec.pass = !std::isnan(margin) && margin >= -tol;
  records_.push_back(std::move(rec));
  return records_.back();
}

void VerificationReport::merge(const VerificationReport& other) {
  records_.insert(records_.end(), other.records_.begin(), other.records_.end());
}

std::size_t VerificationReport::passed() const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [](const CheckRecord& r) { return r.pass; }));
}

double VerificationReport::worst_margin() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : records_) {
    if (std::isnan(r.margin)) return r.margin;
    worst = std::min(worst, r.margin);
  }
  return worst;
}

std::vector<const CheckRecord*> VerificationReport::find(const std::string& check_id) const {
  std::vector<const CheckRecord*> out;
  for (const auto& r : records_)
    if (r.check_id == check_id) out.push_back(&r);
  return out;
}

const CheckRecord* VerificationReport::first(const std::string& check_id) const {
  for (const auto& r : records_)
    if (r.check_id == check_id) return &r;
  return nullptr;
}

nlohmann::json VerificationReport::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& r : records_) {
    nlohmann::json j;
    j["check_id"] = r.check_id;
    j["params"] = r.params;
    j["margin"] = r.margin;
    j["pass"] = r.pass;
    j["tol"] = r.tol;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string VerificationReport::dump_json() const { return to_json().dump(2) + "\n"; }

std::string VerificationReport::summary_line() const {
  return "SUITE " + name_ + ": " + std::to_string(passed()) + "/" + std::to_string(total()) +
         " worst_margin=" + format_double(worst_margin());
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace fne
