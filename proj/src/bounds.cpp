#include "entloss/bounds.hpp"

#include <utility>

namespace entloss {

const char* bound_status_name(BoundStatus status) {
  switch (status) {
    case BoundStatus::pass: return "pass";
    case BoundStatus::fail: return "fail";
    case BoundStatus::skipped: return "skipped";
    case BoundStatus::conditional: return "conditional";
  }
  return "unknown";
}

BoundCheckRecord make_bound_record(std::string name, double lhs, double rhs,
                                   double tolerance, std::string instance,
                                   BoundStatus fail_mode) {
  BoundCheckRecord rec;
  rec.name = std::move(name);
  rec.lhs = lhs;
  rec.rhs = rhs;
  rec.slack = rhs - lhs;
  rec.status = rec.slack >= -tolerance ? BoundStatus::pass : fail_mode;
  rec.instance = std::move(instance);
  return rec;
}

} // namespace entloss
