#include "scatlab/geometry.hpp"

#include <algorithm>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>

#include "scatlab/errors.hpp"

namespace scatlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kValidationSegments = 256;
constexpr int kContainmentSamples = 2048;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

template <class T>
T trig_value(const std::vector<double>& cos_c, const std::vector<double>& sin_c, T t) {
    T v = 0.0;
    for (std::size_t k = 0; k < cos_c.size(); ++k) v += cos_c[k] * std::cos(static_cast<double>(k) * t);
    for (std::size_t k = 1; k < sin_c.size(); ++k) v += sin_c[k] * std::sin(static_cast<double>(k) * t);
    return v;
}

double trig_slope(const std::vector<double>& cos_c, const std::vector<double>& sin_c, double t) {
    double v = 0.0;
    for (std::size_t k = 1; k < cos_c.size(); ++k) v -= k * cos_c[k] * std::sin(k * t);
    for (std::size_t k = 1; k < sin_c.size(); ++k) v += k * sin_c[k] * std::cos(k * t);
    return v;
}

int orientation(const Point& a, const Point& b, const Point& c) {
    const double v = cross(b - a, c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

double segment_distance(const Point& a, const Point& b, const Point& p) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    double s = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return distance(a + s * ab, p);
}

int winding_number(const std::vector<Point>& poly, const Point& p) {
    int wn = 0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        if (a.y <= p.y) {
            if (b.y > p.y && cross(b - a, p - a) > 0.0) ++wn;
        } else {
            if (b.y <= p.y && cross(b - a, p - a) < 0.0) --wn;
        }
    }
    return wn;
}

double directed_region_distance(const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
        if (winding_number(to, p) != 0) continue;
        worst = std::max(worst, polyline_distance(to, p));
    }
    return worst;
}

void validate(const ParametricCurve::Family& family) {
    std::visit(Overloaded{
                   [](const Circle& c) {
                       if (!(c.radius > 0.0) || !std::isfinite(c.radius))
                           throw ConfigError("circle radius must be a positive real");
                   },
                   [](const Ellipse& e) {
                       if (!(e.a > 0.0) || !(e.b > 0.0) || !std::isfinite(e.a) || !std::isfinite(e.b))
                           throw ConfigError("ellipse semi-axes must be positive reals");
                   },
                   [](const TrigCurve& c) {
                       if (c.x_cos.empty() && c.x_sin.size() < 2)
                           throw ConfigError("trig curve needs coefficients for x(t)");
                       if (c.y_cos.empty() && c.y_sin.size() < 2)
                           throw ConfigError("trig curve needs coefficients for y(t)");
                       for (const auto* list : {&c.x_cos, &c.x_sin, &c.y_cos, &c.y_sin})
                           for (double v : *list)
                               if (!std::isfinite(v)) throw ConfigError("trig coefficient is not finite");
                   },
               },
               family);
}

}  // namespace

double wrap_angle(double angle) {
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

ParametricCurve::ParametricCurve(Family family) : family_(std::move(family)) {
    validate(family_);
    const auto poly = sample(kValidationSegments);
    if (!(signed_area(poly) > 0.0)) {
        throw ConfigError(family_name() + " curve is not counterclockwise (signed area <= 0)");
    }
    if (!is_simple_polyline(poly)) {
        throw ConfigError(family_name() + " curve intersects itself");
    }
}

std::string ParametricCurve::family_name() const {
    return std::visit(Overloaded{
                          [](const Circle&) { return std::string("circle"); },
                          [](const Ellipse&) { return std::string("ellipse"); },
                          [](const TrigCurve&) { return std::string("trig"); },
                      },
                      family_);
}

Point ParametricCurve::point(double t) const {
    return std::visit(Overloaded{
                          [t](const Circle& c) { return Point{c.radius * std::cos(t), c.radius * std::sin(t)}; },
                          [t](const Ellipse& e) { return Point{e.a * std::cos(t), e.b * std::sin(t)}; },
                          [t](const TrigCurve& c) {
                              return Point{trig_value(c.x_cos, c.x_sin, t), trig_value(c.y_cos, c.y_sin, t)};
                          },
                      },
                      family_);
}

Point ParametricCurve::complexified_point(double t, double tau) const {
    using C = std::complex<double>;
    const C tt(t, tau);
    const auto [x, y] = std::visit(
        Overloaded{
            [tt](const Circle& c) { return std::pair{c.radius * std::cos(tt), c.radius * std::sin(tt)}; },
            [tt](const Ellipse& e) { return std::pair{e.a * std::cos(tt), e.b * std::sin(tt)}; },
            [tt](const TrigCurve& c) {
                return std::pair{trig_value(c.x_cos, c.x_sin, tt), trig_value(c.y_cos, c.y_sin, tt)};
            },
        },
        family_);
    return {x.real() - y.imag(), x.imag() + y.real()};
}

Point ParametricCurve::derivative(double t) const {
    return std::visit(Overloaded{
                          [t](const Circle& c) { return Point{-c.radius * std::sin(t), c.radius * std::cos(t)}; },
                          [t](const Ellipse& e) { return Point{-e.a * std::sin(t), e.b * std::cos(t)}; },
                          [t](const TrigCurve& c) {
                              return Point{trig_slope(c.x_cos, c.x_sin, t), trig_slope(c.y_cos, c.y_sin, t)};
                          },
                      },
                      family_);
}

CurveSample ParametricCurve::eval(double t) const {
    t = wrap_angle(t);
    CurveSample s;
    s.point = point(t);
    const Point d = derivative(t);
    s.speed = norm(d);
    s.tangent = (1.0 / s.speed) * d;
    // Counterclockwise orientation puts the exterior on the right of the tangent.
    s.normal = {s.tangent.y, -s.tangent.x};
    return s;
}

std::vector<Point> ParametricCurve::sample(int n) const {
    std::vector<Point> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[i] = point(kTwoPi * i / n);
    return out;
}

RigidMotion RigidMotion::wrapped() const { return {wrap_angle(theta), z}; }

Point RigidMotion::rotate(const Point& v) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

Point RigidMotion::apply(const Point& p) const { return rotate(p) + z; }

PlacedCurve::PlacedCurve(ParametricCurve base, RigidMotion motion)
    : base_(std::move(base)), motion_(motion) {}

Point PlacedCurve::point(double t) const { return motion_.apply(base_.point(t)); }

CurveSample PlacedCurve::eval(double t) const {
    CurveSample s = base_.eval(t);
    s.point = motion_.apply(s.point);
    s.tangent = motion_.rotate(s.tangent);
    s.normal = motion_.rotate(s.normal);
    return s;
}

std::vector<Point> PlacedCurve::sample(int n) const {
    auto pts = base_.sample(n);
    for (auto& p : pts) p = motion_.apply(p);
    return pts;
}

Point PlacedCurve::centroid() const {
    const auto poly = sample(kContainmentSamples);
    double area2 = 0.0;
    Point acc{};
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % poly.size()];
        const double w = cross(a, b);
        area2 += w;
        acc += w * (a + b);
    }
    return (1.0 / (3.0 * area2)) * acc;
}

CurveSample eval_curve(const ParametricCurve& c, double t) { return c.eval(t); }

PlacedCurve apply_motion(const ParametricCurve& c, const RigidMotion& m) { return {c, m}; }

double signed_area(const std::vector<Point>& polygon) {
    double a = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        a += cross(polygon[i], polygon[(i + 1) % polygon.size()]);
    }
    return 0.5 * a;
}

bool is_simple_polyline(const std::vector<Point>& polygon) {
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p1 = polygon[i];
        const Point& p2 = polygon[(i + 1) % n];
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
            if (segments_intersect(p1, p2, polygon[j], polygon[(j + 1) % n])) return false;
        }
    }
    return true;
}

double polyline_distance(const std::vector<Point>& polygon, const Point& p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        best = std::min(best, segment_distance(polygon[i], polygon[(i + 1) % polygon.size()], p));
    }
    return best;
}

double diameter(const PlacedCurve& c, int samples) {
    const auto pts = c.sample(samples);
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, distance(pts[i], pts[j]));
    }
    return best;
}

double hausdorff_distance(const PlacedCurve& a, const PlacedCurve& b, int samples) {
    const auto pa = a.sample(samples);
    const auto pb = b.sample(samples);
    return std::max(directed_region_distance(pa, pb), directed_region_distance(pb, pa));
}

PointLocation locate(const PlacedCurve& c, const Point& p, double tolerance) {
    const auto poly = c.sample(kContainmentSamples);
    if (polyline_distance(poly, p) < tolerance) return PointLocation::boundary;
    return winding_number(poly, p) == 1 ? PointLocation::inside : PointLocation::outside;
}

bool contains(const PlacedCurve& c, const Point& p) {
    const auto where = locate(c, p, 1e-9);
    if (where == PointLocation::boundary) {
        throw DomainError("containment query lies within 1e-9 of the boundary");
    }
    return where == PointLocation::inside;
}

int rotational_symmetry_order(const ParametricCurve& c) {
    const auto poly = c.sample(kDefaultGeometrySamples);
    const double tol = 1e-3 * diameter(c, 256);
    auto invariant_under = [&](double angle) {
        const RigidMotion r{angle, {}};
        for (std::size_t i = 0; i < poly.size(); i += 4) {
            if (polyline_distance(poly, r.rotate(poly[i])) > tol) return false;
        }
        return true;
    };
    if (invariant_under(1.0)) return 0;
    for (int m = 12; m >= 2; --m) {
        if (invariant_under(kTwoPi / m)) return m;
    }
    return 1;
}

namespace catalog {

ParametricCurve circle(double radius) { return ParametricCurve{Circle{radius}}; }

ParametricCurve ellipse(double a, double b) { return ParametricCurve{Ellipse{a, b}}; }

ParametricCurve kite() {
    TrigCurve c;
    c.x_cos = {-0.65, 1.0, 0.65};
    c.y_sin = {0.0, 1.5};
    return ParametricCurve{std::move(c)};
}

ParametricCurve rounded_triangle() {
    // r(t) cos t and r(t) sin t expanded with product-to-sum identities.
    TrigCurve c;
    c.x_cos = {0.0, 1.0, 0.1, 0.0, 0.1};
    c.y_sin = {0.0, 1.0, -0.1, 0.0, 0.1};
    return ParametricCurve{std::move(c)};
}

}  // namespace catalog

}  // namespace scatlab
