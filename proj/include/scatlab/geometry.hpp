#pragma once

// Smooth closed boundary curves, rigid motions, and the set distances
// (diameter, Hausdorff distance) used by the overlap experiments.

#include <cmath>
#include <string>
#include <variant>
#include <vector>

namespace scatlab {

struct Point {
    double x = 0.0;
    double y = 0.0;

    Point& operator+=(const Point& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Point& operator-=(const Point& o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator*(double s, const Point& p) { return {s * p.x, s * p.y}; }
    friend Point operator-(const Point& p) { return {-p.x, -p.y}; }
    friend bool operator==(const Point&, const Point&) = default;
};

inline double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point& p) { return std::hypot(p.x, p.y); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }

/// Unit vector at the given polar angle.
inline Point direction(double angle) { return {std::cos(angle), std::sin(angle)}; }

struct Circle {
    double radius = 1.0;
};

struct Ellipse {
    double a = 1.0;  // semi-axis along x
    double b = 1.0;  // semi-axis along y
};

/// x(t) = sum_k x_cos[k] cos(kt) + x_sin[k] sin(kt), likewise for y.
/// Index 0 of the cosine lists is the constant term; x_sin[0], y_sin[0] are ignored.
struct TrigCurve {
    std::vector<double> x_cos;
    std::vector<double> x_sin;
    std::vector<double> y_cos;
    std::vector<double> y_sin;
};

/// Geometry of a boundary at one parameter value.
struct CurveSample {
    Point point;
    Point tangent;  // unit, in the direction of increasing t
    Point normal;   // unit, exterior
    double speed = 0.0;  // |x'(t)|
};

/// A smooth, simple, counterclockwise closed curve t in [0, 2pi) -> R^2.
/// Construction validates orientation and simplicity.
class ParametricCurve {
  public:
    using Family = std::variant<Circle, Ellipse, TrigCurve>;

    explicit ParametricCurve(Family family);

    const Family& family() const { return family_; }
    std::string family_name() const;

    Point point(double t) const;
    Point derivative(double t) const;
    CurveSample eval(double t) const;

    /// Re x(t + i tau) - Im y(t + i tau), Im x(t + i tau) + Re y(t + i tau):
    /// for small tau > 0 a point inside the curve at distance about tau |x'(t)|.
    Point complexified_point(double t, double tau) const;

    /// Uniform samples x(2 pi i / n), i = 0..n-1.
    std::vector<Point> sample(int n) const;

  private:
    Family family_;
};

/// Rotation by theta about the origin followed by translation by z.
struct RigidMotion {
    double theta = 0.0;
    Point z{};

    /// The canonical representative with theta wrapped into [0, 2pi).
    RigidMotion wrapped() const;

    Point apply(const Point& p) const;
    Point rotate(const Point& v) const;
};

/// Wraps an angle into [0, 2pi).
double wrap_angle(double angle);

/// A base curve placed by a rigid motion: { U(theta) x + z : x on the base }.
class PlacedCurve {
  public:
    PlacedCurve(ParametricCurve base, RigidMotion motion);
    // NOLINTNEXTLINE(google-explicit-constructor)
    PlacedCurve(const ParametricCurve& base) : PlacedCurve(base, RigidMotion{}) {}

    const ParametricCurve& base() const { return base_; }
    const RigidMotion& motion() const { return motion_; }

    Point point(double t) const;
    CurveSample eval(double t) const;
    std::vector<Point> sample(int n) const;

    /// Area centroid of the enclosed region.
    Point centroid() const;

  private:
    ParametricCurve base_;
    RigidMotion motion_;
};

CurveSample eval_curve(const ParametricCurve& c, double t);
PlacedCurve apply_motion(const ParametricCurve& c, const RigidMotion& m);

/// Signed area of the polygon through the given vertices (positive when counterclockwise).
double signed_area(const std::vector<Point>& polygon);

/// True when no two non-adjacent edges of the closed polyline intersect.
bool is_simple_polyline(const std::vector<Point>& polygon);

inline constexpr int kDefaultGeometrySamples = 1024;

/// Largest pairwise distance between n boundary samples (a lower bound of the true diameter).
double diameter(const PlacedCurve& c, int samples = kDefaultGeometrySamples);

/// Hausdorff distance between the two closed regions bounded by the curves,
/// approximated from boundary samples.  A boundary sample lying inside the
/// other region contributes zero to its directed term.
double hausdorff_distance(const PlacedCurve& a, const PlacedCurve& b,
                          int samples = kDefaultGeometrySamples);

enum class PointLocation { inside, outside, boundary };

/// Winding-number classification against a 2048-vertex polyline; points within
/// `tolerance` of the polyline are reported as boundary points.
PointLocation locate(const PlacedCurve& c, const Point& p, double tolerance);

/// Winding-number containment test against a 2048-vertex polyline.
/// Throws DomainError when p is within 1e-9 of that polyline.
bool contains(const PlacedCurve& c, const Point& p);

/// Distance from p to the closed polyline through the given vertices.
double polyline_distance(const std::vector<Point>& polygon, const Point& p);

/// Order m of the largest rotation group {2 pi j / m} about the origin that maps
/// the curve onto itself (1 when there is none), or 0 when the curve is
/// invariant under arbitrary rotations.
int rotational_symmetry_order(const ParametricCurve& c);

namespace catalog {

ParametricCurve circle(double radius);
ParametricCurve ellipse(double a, double b);
/// x(t) = (cos t + 0.65 cos 2t - 0.65, 1.5 sin t).
ParametricCurve kite();
/// Polar curve r(t) = 1 + 0.2 cos 3t.
ParametricCurve rounded_triangle();

}  // namespace catalog

}  // namespace scatlab
