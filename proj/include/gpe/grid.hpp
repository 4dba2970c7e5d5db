#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpe {

using Complex = std::complex<double>;

/// Thrown when two grid objects with different specs are combined.
struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown for invalid configuration values (grid sizes, time steps, files).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Uniform periodic box in 1, 2 or 3 dimensions.
///
/// Points along axis a sit at x_i = lo[a] + i*h[a], i = 0..n[a]-1; the point
/// at hi[a] is identified with lo[a]. Values are stored row-major in axis
/// order (x,y,z), so the last axis varies fastest.
class GridSpec {
public:
    /// Empty spec (dim 0, no points); assign a made spec before use.
    GridSpec() = default;

    static GridSpec make(int dim,
                         std::span<const int> n,
                         std::span<const double> lo,
                         std::span<const double> hi);

    /// Convenience for cubic boxes: same n and bounds on every axis.
    static GridSpec make_uniform(int dim, int n, double lo, double hi);

    int dim() const { return dim_; }
    int n(int axis) const { return n_[axis]; }
    double lo(int axis) const { return lo_[axis]; }
    double hi(int axis) const { return hi_[axis]; }
    double h(int axis) const { return h_[axis]; }

    /// Total number of grid points.
    std::size_t size() const { return size_; }

    /// Flat-index stride of axis a (row-major, last axis fastest).
    std::size_t stride(int axis) const { return stride_[axis]; }

    /// Product of spacings, the weight of the discrete inner product.
    double cell_volume() const;
    /// Product of box lengths |Omega|.
    double domain_volume() const;

    /// Physical coordinate of point index i along an axis.
    double coord(int axis, int i) const { return lo_[axis] + i * h_[axis]; }

    bool operator==(const GridSpec& other) const;
    bool operator!=(const GridSpec& other) const { return !(*this == other); }

private:
    int dim_ = 0;
    std::array<int, 3> n_{};
    std::array<double, 3> lo_{}, hi_{}, h_{};
    std::array<std::size_t, 3> stride_{};
    std::size_t size_ = 0;
};

/// Complex-valued function sampled on the grid points of a GridSpec.
/// Periodicity lives in the index arithmetic of the operators, never in
/// duplicated storage.
class GridFunction {
public:
    explicit GridFunction(GridSpec spec)
        : spec_(spec), values_(spec.size(), Complex{0.0, 0.0}) {}

    static GridFunction constant(const GridSpec& spec, Complex value);

    /// Sample a callback f(x) at every grid point; unused coordinates are 0.
    static GridFunction sample(const GridSpec& spec,
                               const std::function<Complex(const std::array<double, 3>&)>& f);

    const GridSpec& spec() const { return spec_; }
    std::size_t size() const { return values_.size(); }

    std::span<const Complex> values() const { return values_; }
    std::span<Complex> values() { return values_; }

    Complex operator[](std::size_t i) const { return values_[i]; }
    Complex& operator[](std::size_t i) { return values_[i]; }

private:
    GridSpec spec_;
    std::vector<Complex> values_;
};

/// Face-centered vector field: component a holds forward differences living
/// at the staggered points (i + 1/2) along axis a, one array per axis.
struct StaggeredField {
    GridSpec spec;
    std::array<std::vector<Complex>, 3> component;

    explicit StaggeredField(GridSpec s) : spec(s) {
        for (int a = 0; a < spec.dim(); ++a)
            component[a].assign(spec.size(), Complex{0.0, 0.0});
    }
};

struct Norms {
    double l2;
    double l4;
    double linf;
};

struct SobolevNorms {
    double h1;
    double h2;
};

/// Discrete L2 inner product h^d * sum conj(f) * g (conjugate on the first
/// argument). Throws ShapeError if the specs differ.
Complex inner_product(const GridFunction& f, const GridFunction& g);

Norms norms(const GridFunction& f);
double norm_l2(const GridFunction& f);
double norm_linf(const GridFunction& f);

/// Forward differences (f_{i+1} - f_i)/h per axis, at the faces.
StaggeredField gradient(const GridFunction& f);

/// Discrete divergence of a face-centered field; composes with gradient to
/// the standard 2d+1 point Laplacian.
GridFunction divergence(const StaggeredField& v);

/// Standard second-order periodic Laplacian stencil, pure real space.
GridFunction laplacian(const GridFunction& f);

/// Second difference (f_{i+1} - 2 f_i + f_{i-1})/h^2 along one axis.
GridFunction second_difference(const GridFunction& f, int axis);

/// Staggered inner product: h^d-weighted sum of face-value products over all
/// components. On periodic grids this equals the averaged-to-centers form.
Complex staggered_inner(const StaggeredField& a, const StaggeredField& b);

/// || grad_h f ||_2^2 as a real number.
double grad_norm_sq(const GridFunction& f);

SobolevNorms h1h2_norms(const GridFunction& f);

}  // namespace gpe
