#pragma once

#include <cstddef>
#include <functional>

namespace pf {

// Worker count for sample batteries. 1 = serial. Work items write disjoint
// output slots so results are identical for any count.
void set_worker_count(int workers);
int worker_count();

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace pf
