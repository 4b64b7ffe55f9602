#pragma once

#include <string>
#include <vector>

#include "nf/state.hpp"

namespace nf {

/// NFLD1 snapshot: ASCII header (magic, version, dim, shape, field list,
/// time, frame, epsilon) followed by little-endian 64-bit float arrays in
/// declared order.  Documented in docs/formats.md.
struct Snapshot {
    Grid grid;
    double time = 0;
    Frame frame = Frame::tau;
    bool gauged = false;
    double epsilon = 0;
    std::vector<std::string> field_names;
    std::vector<ArrayXd> field_data;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

Snapshot snapshot_of(const RealPairState& s, const Grid& g, double epsilon);
Snapshot snapshot_of(const ComplexState& s, const Grid& g, double epsilon);

RealPairState real_pair_from(const Snapshot& s);
ComplexState complex_from(const Snapshot& s);

}  // namespace nf
