#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

namespace nlskt {

/// Uniform cell-centered grid over a box domain in 1 or 2 dimensions.
/// Cell centers sit at lo + (i + 1/2) h on each axis; there are no ghost
/// cells, the nonlocal operator needs no boundary condition.
class Domain {
public:
    Domain(double lo, double hi, int cells);                       // 1D
    Domain(std::array<double, 2> lo, std::array<double, 2> hi,
           std::array<int, 2> cells);                              // 2D

    int dim() const { return dim_; }
    int cells(int axis) const { return cells_[axis]; }
    std::size_t total_cells() const { return total_; }
    double lower(int axis) const { return lo_[axis]; }
    double upper(int axis) const { return hi_[axis]; }
    double spacing(int axis) const { return h_[axis]; }
    double cell_volume() const { return cell_volume_; }
    double volume() const { return cell_volume_ * static_cast<double>(total_); }
    double diameter() const;

    // Cell center coordinate along one axis.
    double center(int axis, int index) const {
        return lo_[axis] + (index + 0.5) * h_[axis];
    }

    std::size_t flat_index(int ix, int iy = 0) const {
        return static_cast<std::size_t>(ix) +
               static_cast<std::size_t>(cells_[0]) * static_cast<std::size_t>(iy);
    }

    bool operator==(const Domain& other) const;
    bool operator!=(const Domain& other) const { return !(*this == other); }

private:
    int dim_;
    std::array<double, 2> lo_{};
    std::array<double, 2> hi_{};
    std::array<int, 2> cells_{};
    std::array<double, 2> h_{};
    std::size_t total_;
    double cell_volume_;
};

/// Per-cell scalar values on a Domain. Immutable by convention after
/// construction; the mutating accessors are for single-owner assembly.
class Field {
public:
    Field(const Domain& domain, double fill = 0.0);
    Field(const Domain& domain, std::vector<double> values);

    // Evaluate fn at every cell center (1D signature fn(x), 2D fn(x,y)).
    static Field sample(const Domain& domain, const std::function<double(double)>& fn);
    static Field sample(const Domain& domain,
                        const std::function<double(double, double)>& fn);

    const Domain& domain() const { return *domain_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool all_finite() const;

private:
    const Domain* domain_;
    std::vector<double> values_;
};

/// Two species densities on one Domain at a time stamp.
struct State {
    Field u1;
    Field u2;
    double t = 0.0;

    State(Field a, Field b, double time = 0.0);
    const Domain& domain() const { return u1.domain(); }
    const Field& species(int i) const { return i == 0 ? u1 : u2; }
    Field& species(int i) { return i == 0 ? u1 : u2; }
};

struct Norms {
    double l1;
    double l2sq;
    double linf;
};

// Midpoint quadrature: sum of cell values times cell volume.
double integrate(const Field& f);

Norms norms(const Field& f);

struct SignSplit {
    Field plus;
    Field minus;
};

SignSplit split_signs(const Field& f);

Field positive_part(const Field& f);
double min_value(const Field& f);
double max_value(const Field& f);
double sup_norm(const Field& f);

// Field snapshot: header with domain metadata, then one row per cell with
// coordinates followed by the value.
void write_snapshot(std::ostream& out, const Field& f);
void write_snapshot_file(const std::string& path, const Field& f);
Field read_snapshot_file(const std::string& path, const Domain& domain);

} // namespace nlskt
