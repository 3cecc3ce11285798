#pragma once

#include "slr/model.hpp"
#include "slr/wp.hpp"

namespace slr {

// Executable reference semantics of the generic language over record-path
// heaps: nondeterministic big-step evaluation returning every (value, heap)
// outcome. Faulting runs (missing cells, insufficient permission) produce no
// outcomes, matching the powerset-of-results monad.
struct ExecConfig {
  const std::map<std::string, ProcSpec>* procs = nullptr;
  long long alloc_blocks = 4;  // candidate fresh block ids 0..n-1
  int fuel = 10000;
  Value perm_cap = v_rat(1, 1);
};

std::vector<std::pair<Value, Value>> exec_program(const ExecConfig& cfg, const Prog& c,
                                                  const Value& u, const Value& heap);

}  // namespace slr
