#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace detquas {

/// Which ambient lattice a finite window samples.
enum class AmbientModel { HalfLine, FullLine, Finite };

class GroundWindow;
using WindowPtr = std::shared_ptr<const GroundWindow>;

/// A finite ordered window of a countable ground set in R.
///
/// Sites are strictly increasing; the enumeration nu increases by 1 along
/// them. Windows are order intervals of their ambient lattice, so nu parity
/// differences are meaningful across the whole lattice.
class GroundWindow {
public:
    /// General constructor: arbitrary strictly increasing sites, nu assigned
    /// consecutively starting at nu_first.
    GroundWindow(AmbientModel model, std::vector<double> points, long nu_first);

    /// Integer interval [lo, hi]. Half-line windows require lo >= 0 and carry
    /// nu(x) = x; full-line windows carry the anchor nu(0) = 0 (so nu(x) = x);
    /// finite windows enumerate from nu = 0 at lo.
    static WindowPtr integer_interval(AmbientModel model, long lo, long hi);

    std::size_t size() const { return points_.size(); }
    double site(std::size_t i) const { return points_[i]; }
    long nu(std::size_t i) const { return nu_first_ + static_cast<long>(i); }
    AmbientModel model() const { return model_; }
    std::span<const double> sites() const { return points_; }

    /// Index of an exact site value, if present.
    std::optional<std::size_t> index_of(double site) const;

    /// index_of that throws on a miss.
    std::size_t require_index(double site) const;

private:
    AmbientModel model_;
    std::vector<double> points_;
    long nu_first_;
};

/// Occupation pattern on a window (bit i <-> window site i). Windows are
/// capped at 64 sites for configuration-level work.
struct Configuration {
    WindowPtr window;
    std::uint64_t mask = 0;

    std::size_t count() const;
    bool contains_index(std::size_t i) const { return (mask >> i) & 1u; }
    bool contains_site(double site) const;
    std::vector<double> sites() const;
};

Configuration make_configuration(WindowPtr window, std::span<const double> occupied);

/// Elementary cylinder data: required-occupied sites X, required-empty X'.
struct CylinderSpec {
    std::vector<double> occupied;  // X
    std::vector<double> vacant;    // X'
};

/// +1 if x > y, -1 if x < y; equal sites are a domain error.
int sgn_pair(double x, double y);

/// Signed coefficient of the basis action of a normal-ordered monomial:
/// 0 unless omega contains Y and (omega \ Y) avoids X; otherwise the product
/// of pair signs over u in omega \ Y and over index pairs inside X and Y.
/// Antisymmetric under transposing entries within X or within Y.
int fermionic_sign(std::span<const double> X, std::span<const double> Y,
                   const Configuration& omega);

/// True iff omega contains every site of spec.occupied and none of spec.vacant.
bool cylinder_contains(const Configuration& omega, const CylinderSpec& spec);

/// All n-point configurations of the window, in lexicographic index order.
std::vector<Configuration> enumerate_configurations(const WindowPtr& window, std::size_t n);

}  // namespace detquas
