#pragma once

#include "maslov/normal_form.hpp"
#include "maslov/report.hpp"

#include <string>

namespace maslov {

// One closed characteristic. `tau_over_pi` is the minimal period divided by π;
// `mean_index` is derived and refreshed by make_record.
struct PathRecord {
    std::string label;
    int n = 0;
    int i1 = 0;
    int nu1 = 0;
    NormalFormDescriptor descriptor;
    Scalar tau_over_pi = Scalar(2);
    Scalar mean_index;
};

// Fills mean_index and checks n, nu1 and the descriptor. Throws InputError.
PathRecord make_record(std::string label, int i1, NormalFormDescriptor d, Scalar tau_over_pi = Scalar(2));
void validate_record(const PathRecord& rec);

// i(γ, m) from the rewritten closed form; cross-checked against the
// splitting-number form, ConsistencyError on mismatch.
int index_iterate(const PathRecord& rec, long m);
// The two evaluations separately, for tests and traces.
Integer index_iterate_rewritten(const PathRecord& rec, long m);
Integer index_iterate_abstract(const PathRecord& rec, long m);

int nullity_iterate(const PathRecord& rec, long m);
// Formula value compared with dim ker(realize(d)^m − I); ConsistencyError on mismatch.
int nullity_iterate_checked(const PathRecord& rec, long m);
// dim ker(realize(d)^m − I) for m = 1..m_max by repeated multiplication.
std::vector<int> power_kernel_dims(const NormalFormDescriptor& d, long m_max);

Scalar mean_index(const NormalFormDescriptor& d, int i1);
Scalar mean_index(const PathRecord& rec);

// |i(γ,m) − m·î| never exceeds this.
int mean_index_deviation_bound(const NormalFormDescriptor& d);

Report check_convex_constraints(const PathRecord& rec);

}  // namespace maslov
