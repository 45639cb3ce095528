#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bpl {

struct SelfTestResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Quick versions of the documented trivial and derived examples (small
/// grids, short horizons). `scratch_dir` receives the files written by the
/// persistence checks. `on_result` is called as each check finishes.
std::vector<SelfTestResult> run_selftest(const std::string& scratch_dir,
                                         const std::function<void(const SelfTestResult&)>& on_result = {});

}  // namespace bpl
