#include "psdyn/field_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace psdyn {

namespace {

std::string meta_line(const ComplexField& f) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "# meta: hbar=%.17g, t=%.17g, method=%s, grid=%.17g,%.17g,%.17g,%.17g,%d,%d",
                  f.hbar, f.time, method_name(f.method), f.grid.qmin, f.grid.qmax, f.grid.pmin, f.grid.pmax,
                  f.grid.nq, f.grid.np);
    return buf;
}

ComplexField parse_meta(const std::string& line) {
    ComplexField f;
    char method[32] = {0};
    GridSpec g;
    const int n = std::sscanf(line.c_str(), "# meta: hbar=%lg, t=%lg, method=%31[^,], grid=%lg,%lg,%lg,%lg,%d,%d",
                              &f.hbar, &f.time, method, &g.qmin, &g.qmax, &g.pmin, &g.pmax, &g.nq, &g.np);
    if (n != 9) throw Error(ErrorKind::config, "malformed field header: " + line);
    f.method = method_from_name(method);
    f.grid = g;
    f.values.assign(static_cast<size_t>(g.nq) * g.np, Complex(0, 0));
    return f;
}

}  // namespace

void write_field_csv(const ComplexField& field, const std::string& path) {
    field.validate();
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw Error(ErrorKind::config, "cannot open for writing: " + path);
    std::fprintf(fp, "%s\n", meta_line(field).c_str());
    std::fprintf(fp, "q,p,re,im\n");
    for (int i = 0; i < field.grid.nq; ++i)
        for (int j = 0; j < field.grid.np; ++j)
            std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g\n", field.grid.q(i), field.grid.p(j),
                         field.at(i, j).real(), field.at(i, j).imag());
    std::fclose(fp);
}

ComplexField read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::config, "empty field file: " + path);
    ComplexField f = parse_meta(line);
    std::getline(in, line);  // column header
    size_t k = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (k >= f.values.size()) throw Error(ErrorKind::config, "too many rows in " + path);
        double q, p, re, im;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg", &q, &p, &re, &im) != 4)
            throw Error(ErrorKind::config, "malformed row in " + path + ": " + line);
        f.values[k++] = Complex(re, im);
    }
    if (k != f.values.size()) throw Error(ErrorKind::config, "row count mismatch in " + path);
    return f;
}

void write_field_bin(const ComplexField& field, const std::string& path) {
    field.validate();
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw Error(ErrorKind::config, "cannot open for writing: " + path);
    const std::string hdr = meta_line(field) + "\n";
    std::fwrite(hdr.data(), 1, hdr.size(), fp);
    for (int i = 0; i < field.grid.nq; ++i)
        for (int j = 0; j < field.grid.np; ++j) {
            const double rec[4] = {field.grid.q(i), field.grid.p(j), field.at(i, j).real(),
                                   field.at(i, j).imag()};
            std::fwrite(rec, sizeof(double), 4, fp);
        }
    std::fclose(fp);
}

ComplexField read_field_bin(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::config, "cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::config, "empty field file: " + path);
    ComplexField f = parse_meta(line);
    for (size_t k = 0; k < f.values.size(); ++k) {
        double rec[4];
        in.read(reinterpret_cast<char*>(rec), sizeof(rec));
        if (!in) throw Error(ErrorKind::config, "truncated binary field: " + path);
        f.values[k] = Complex(rec[2], rec[3]);
    }
    return f;
}

void write_report(const ComparisonReport& rep, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw Error(ErrorKind::config, "cannot open for writing: " + path);
    std::fprintf(fp, "method_a = %s\n", rep.method_a.c_str());
    std::fprintf(fp, "method_b = %s\n", rep.method_b.c_str());
    std::fprintf(fp, "rel_l2 = %.17g\n", rep.rel_l2);
    std::fprintf(fp, "sup = %.17g\n", rep.sup);
    std::fprintf(fp, "phase_sup = %.17g\n", rep.phase_sup);
    std::fprintf(fp, "runtime_ms = %ld\n", rep.runtime_ms);
    std::fclose(fp);
}

}  // namespace psdyn
