// SPDX-License-Identifier: Apache-2.0
#include "multinoc/ips/memory_bank.hpp"

namespace multinoc::ips {

MemCycleResult mem_cycle(MemoryBank& m, const std::optional<MemRequest>& proc,
                         const std::optional<MemRequest>& noc) {
    m.begin_cycle();
    MemCycleResult r;
    if (proc) {
        if (proc->write) {
            m.proc_write(proc->offset, proc->value);
            r.proc = proc->value;
        } else {
            r.proc = m.proc_read(proc->offset);
        }
    }
    if (noc) {
        if (noc->write) {
            if (m.noc_write(noc->offset, noc->value)) r.noc = noc->value;
            else r.noc_deferred = true;
        } else {
            if (auto v = m.noc_read(noc->offset)) r.noc = *v;
            else r.noc_deferred = true;
        }
    }
    return r;
}

} // namespace multinoc::ips
