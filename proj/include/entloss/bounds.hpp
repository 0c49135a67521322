#pragma once

#include <string>

namespace entloss {

enum class BoundStatus {
  pass,
  fail,
  skipped,
  conditional,
};

const char* bound_status_name(BoundStatus status);

// One checked inequality lhs <= rhs. slack = rhs - lhs; the check passes
// when slack >= -tolerance. `instance` describes the channel/state the
// record was evaluated on.
struct BoundCheckRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  BoundStatus status = BoundStatus::pass;
  std::string instance;
};

// fail_mode is the status recorded when the inequality is violated beyond
// tolerance: hard checks use fail, checks whose sides are themselves
// one-sided estimates use conditional.
BoundCheckRecord make_bound_record(std::string name, double lhs, double rhs,
                                   double tolerance, std::string instance,
                                   BoundStatus fail_mode = BoundStatus::fail);

} // namespace entloss
