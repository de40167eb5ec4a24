#pragma once

#include <string>

#include "psdyn/core.hpp"

namespace psdyn {

// CSV field format: one header line
//   # meta: hbar=..., t=..., method=..., grid=qmin,qmax,pmin,pmax,nq,np
// then rows q,p,re,im printed with 17 significant digits (doubles round-trip
// exactly).
void write_field_csv(const ComplexField& field, const std::string& path);
ComplexField read_field_csv(const std::string& path);

// Binary twin: the same header line, then a little-endian float64 record
// stream (q, p, re, im) in row-major grid order.
void write_field_bin(const ComplexField& field, const std::string& path);
ComplexField read_field_bin(const std::string& path);

struct ComparisonReport {
    std::string method_a, method_b;
    double rel_l2 = 0, sup = 0, phase_sup = 0;
    long runtime_ms = 0;
};

void write_report(const ComparisonReport& rep, const std::string& path);

}  // namespace psdyn
