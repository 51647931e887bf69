#include "grid.hpp"

#include "errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace nlskt {

namespace {

void check_axis(double lo, double hi, int cells) {
    if (!(hi > lo))
        throw ConfigError("domain axis has non-positive extent");
    if (cells < 3)
        throw ConfigError("domain needs at least 3 cells per axis");
}

} // namespace

Domain::Domain(double lo, double hi, int cells) : dim_(1) {
    check_axis(lo, hi, cells);
    lo_ = {lo, 0.0};
    hi_ = {hi, 0.0};
    cells_ = {cells, 1};
    h_ = {(hi - lo) / cells, 0.0};
    total_ = static_cast<std::size_t>(cells);
    cell_volume_ = h_[0];
}

Domain::Domain(std::array<double, 2> lo, std::array<double, 2> hi,
               std::array<int, 2> cells)
    : dim_(2), lo_(lo), hi_(hi), cells_(cells) {
    check_axis(lo[0], hi[0], cells[0]);
    check_axis(lo[1], hi[1], cells[1]);
    h_ = {(hi[0] - lo[0]) / cells[0], (hi[1] - lo[1]) / cells[1]};
    total_ = static_cast<std::size_t>(cells[0]) * static_cast<std::size_t>(cells[1]);
    cell_volume_ = h_[0] * h_[1];
}

double Domain::diameter() const {
    double dx = hi_[0] - lo_[0];
    if (dim_ == 1)
        return dx;
    double dy = hi_[1] - lo_[1];
    return std::sqrt(dx * dx + dy * dy);
}

bool Domain::operator==(const Domain& other) const {
    return dim_ == other.dim_ && lo_ == other.lo_ && hi_ == other.hi_ &&
           cells_ == other.cells_;
}

Field::Field(const Domain& domain, double fill)
    : domain_(&domain), values_(domain.total_cells(), fill) {}

Field::Field(const Domain& domain, std::vector<double> values)
    : domain_(&domain), values_(std::move(values)) {
    if (values_.size() != domain.total_cells())
        throw ConfigError("field value count does not match domain cell count");
}

Field Field::sample(const Domain& domain, const std::function<double(double)>& fn) {
    if (domain.dim() != 1)
        throw ConfigError("1D sampler used on a non-1D domain");
    Field f(domain);
    for (int i = 0; i < domain.cells(0); ++i)
        f[domain.flat_index(i)] = fn(domain.center(0, i));
    return f;
}

Field Field::sample(const Domain& domain,
                    const std::function<double(double, double)>& fn) {
    if (domain.dim() != 2)
        throw ConfigError("2D sampler used on a non-2D domain");
    Field f(domain);
    for (int iy = 0; iy < domain.cells(1); ++iy)
        for (int ix = 0; ix < domain.cells(0); ++ix)
            f[domain.flat_index(ix, iy)] = fn(domain.center(0, ix), domain.center(1, iy));
    return f;
}

bool Field::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v))
            return false;
    return true;
}

State::State(Field a, Field b, double time) : u1(std::move(a)), u2(std::move(b)), t(time) {
    if (u1.domain() != u2.domain())
        throw ConfigError("state species live on different domains");
}

double integrate(const Field& f) {
    double sum = 0.0;
    for (double v : f.values())
        sum += v;
    return sum * f.domain().cell_volume();
}

Norms norms(const Field& f) {
    double l1 = 0.0, l2 = 0.0, linf = 0.0;
    for (double v : f.values()) {
        double a = std::fabs(v);
        l1 += a;
        l2 += v * v;
        if (a > linf)
            linf = a;
    }
    double vol = f.domain().cell_volume();
    return {l1 * vol, l2 * vol, linf};
}

SignSplit split_signs(const Field& f) {
    Field plus(f.domain());
    Field minus(f.domain());
    for (std::size_t i = 0; i < f.size(); ++i) {
        double v = f[i];
        plus[i] = v > 0.0 ? v : 0.0;
        minus[i] = v < 0.0 ? -v : 0.0;
    }
    return {std::move(plus), std::move(minus)};
}

Field positive_part(const Field& f) {
    Field plus(f.domain());
    for (std::size_t i = 0; i < f.size(); ++i)
        plus[i] = f[i] > 0.0 ? f[i] : 0.0;
    return plus;
}

double min_value(const Field& f) {
    double m = f[0];
    for (double v : f.values())
        if (v < m)
            m = v;
    return m;
}

double max_value(const Field& f) {
    double m = f[0];
    for (double v : f.values())
        if (v > m)
            m = v;
    return m;
}

double sup_norm(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) {
        double a = std::fabs(v);
        if (a > m)
            m = a;
    }
    return m;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_snapshot(std::ostream& out, const Field& f) {
    const Domain& d = f.domain();
    out << "# dim=" << d.dim();
    for (int a = 0; a < d.dim(); ++a)
        out << " lo" << a << "=" << fmt(d.lower(a)) << " hi" << a << "=" << fmt(d.upper(a))
            << " cells" << a << "=" << d.cells(a);
    out << "\n";
    if (d.dim() == 1) {
        out << "x,value\n";
        for (int i = 0; i < d.cells(0); ++i)
            out << fmt(d.center(0, i)) << "," << fmt(f[d.flat_index(i)]) << "\n";
    } else {
        out << "x,y,value\n";
        for (int iy = 0; iy < d.cells(1); ++iy)
            for (int ix = 0; ix < d.cells(0); ++ix)
                out << fmt(d.center(0, ix)) << "," << fmt(d.center(1, iy)) << ","
                    << fmt(f[d.flat_index(ix, iy)]) << "\n";
    }
}

void write_snapshot_file(const std::string& path, const Field& f) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot open snapshot file for writing: " + path);
    write_snapshot(out, f);
}

Field read_snapshot_file(const std::string& path, const Domain& domain) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open snapshot file: " + path);
    Field f(domain);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (line.find("value") != std::string::npos)
            continue; // column header
        auto pos = line.rfind(',');
        if (pos == std::string::npos)
            throw ConfigError("malformed snapshot row: " + line);
        if (row >= f.size())
            throw ConfigError("snapshot has more rows than domain cells: " + path);
        f[row++] = std::stod(line.substr(pos + 1));
    }
    if (row != f.size())
        throw ConfigError("snapshot has fewer rows than domain cells: " + path);
    return f;
}

} // namespace nlskt
