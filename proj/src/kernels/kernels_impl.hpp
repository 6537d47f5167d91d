#pragma once

#include "risid/kernels.hpp"

namespace risid::kernels::detail {

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in

}  // namespace risid::kernels::detail
