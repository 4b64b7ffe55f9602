#include "nf/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "NFLD1 writer assumes a little-endian host");

namespace nf {

void write_snapshot(const std::string& path, const Snapshot& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    std::ostringstream head;
    head.precision(17);
    head << "NFLD1 1\n";
    head << "dim " << s.grid.dim << "\n";
    head << "shape";
    for (int d = 0; d < s.grid.dim; ++d) head << " " << s.grid.n;
    head << "\n";
    head << "length " << s.grid.length << "\n";
    head << "fields";
    for (const auto& f : s.field_names) head << " " << f;
    head << "\n";
    head << "time " << s.time << "\n";
    head << "frame " << (s.frame == Frame::tau ? "tau" : "T") << "\n";
    head << "gauged " << (s.gauged ? 1 : 0) << "\n";
    head << "epsilon " << s.epsilon << "\n";
    head << "end\n";
    out << head.str();
    for (const auto& a : s.field_data) {
        out.write(reinterpret_cast<const char*>(a.data()),
                  static_cast<std::streamsize>(a.size() * sizeof(double)));
    }
    if (!out) throw IoError("short write on " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    Snapshot s;
    std::string line;
    if (!std::getline(in, line) || line.rfind("NFLD1", 0) != 0)
        throw IoError(path + ": bad magic, expected NFLD1");
    while (std::getline(in, line)) {
        if (line == "end") break;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "dim") ls >> s.grid.dim;
        else if (key == "shape") {
            ls >> s.grid.n;
            int extra;
            while (ls >> extra)
                if (extra != s.grid.n) throw IoError(path + ": non-cubic shape");
        }
        else if (key == "length") ls >> s.grid.length;
        else if (key == "fields") {
            std::string f;
            while (ls >> f) s.field_names.push_back(f);
        } else if (key == "time") ls >> s.time;
        else if (key == "frame") {
            std::string f;
            ls >> f;
            s.frame = (f == "tau") ? Frame::tau : Frame::T;
        } else if (key == "gauged") {
            int g;
            ls >> g;
            s.gauged = g != 0;
        } else if (key == "epsilon") ls >> s.epsilon;
        else throw IoError(path + ": unknown header key '" + key + "'");
    }
    if (!s.grid.valid()) throw IoError(path + ": invalid grid in header");
    const std::size_t total = s.grid.size();
    for (std::size_t f = 0; f < s.field_names.size(); ++f) {
        ArrayXd a(total);
        in.read(reinterpret_cast<char*>(a.data()),
                static_cast<std::streamsize>(total * sizeof(double)));
        if (!in) throw IoError(path + ": truncated field data");
        s.field_data.push_back(std::move(a));
    }
    return s;
}

Snapshot snapshot_of(const RealPairState& s, const Grid& g, double epsilon) {
    Snapshot sn;
    sn.grid = g;
    sn.time = s.time;
    sn.frame = Frame::tau;
    sn.gauged = false;
    sn.epsilon = epsilon;
    sn.field_names = {"u", "pu", "phi", "pphi"};
    sn.field_data = {s.u, s.pu, s.phi, s.pphi};
    return sn;
}

Snapshot snapshot_of(const ComplexState& s, const Grid& g, double epsilon) {
    Snapshot sn;
    sn.grid = g;
    sn.time = s.time;
    sn.frame = s.frame;
    sn.gauged = s.gauged;
    sn.epsilon = epsilon;
    sn.field_names = {"psi_re", "psi_im", "phi", "pphi"};
    sn.field_data = {s.psi.real(), s.psi.imag(), s.phi, s.pphi};
    return sn;
}

RealPairState real_pair_from(const Snapshot& s) {
    if (s.field_names != std::vector<std::string>{"u", "pu", "phi", "pphi"})
        throw IoError("snapshot does not hold a real-pair state");
    RealPairState r;
    r.u = s.field_data[0];
    r.pu = s.field_data[1];
    r.phi = s.field_data[2];
    r.pphi = s.field_data[3];
    r.time = s.time;
    return r;
}

ComplexState complex_from(const Snapshot& s) {
    if (s.field_names == std::vector<std::string>{"psi_re", "psi_im", "phi", "pphi"}) {
        ComplexState c;
        c.psi = s.field_data[0].cast<cplx>() + cplx(0, 1) * s.field_data[1].cast<cplx>();
        c.phi = s.field_data[2];
        c.pphi = s.field_data[3];
        c.time = s.time;
        c.frame = s.frame;
        c.gauged = s.gauged;
        return c;
    }
    if (s.field_names == std::vector<std::string>{"u", "pu", "phi", "pphi"})
        return to_complex(real_pair_from(s));
    throw IoError("snapshot does not hold a complex state");
}

}  // namespace nf
