#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "subcity/errors.hpp"
#include "subcity/graph.hpp"

namespace subcity {

// IUGG mean Earth radius, used by the haversine distance.
inline constexpr double kEarthRadiusKm = 6371.0088;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
};

struct UtmCoord {
  double easting = 0.0;   // meters, (0, 1e6)
  double northing = 0.0;  // meters, [0, 1e7]
  int zone = 19;          // 1..60
  bool south = true;
};

// Per-node coordinates plus distance to the city center.
struct GeoTable {
  std::vector<NodeId> ids;
  std::vector<GeoPoint> points;
  GeoPoint center;
  std::vector<double> distance_km;
};

namespace geodetail {

// WGS84 ellipsoid and standard UTM parameters.
inline constexpr double kSemiMajorM = 6378137.0;
inline constexpr double kFlattening = 1.0 / 298.257223563;
inline constexpr double kScale = 0.9996;
inline constexpr double kFalseEastingM = 500000.0;
inline constexpr double kFalseNorthingSouthM = 10000000.0;

inline constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

// Krueger series for the transverse Mercator projection, expanded to sixth
// order in the third flattening n. Good to well under a millimeter anywhere
// inside a UTM zone.
struct TmConstants {
  double rectifying_radius;  // k0 * A
  double alpha[6];           // forward (conformal -> TM) coefficients
  double beta[6];            // inverse coefficients
  double eccentricity;       // first eccentricity e
};

inline const TmConstants& tm_constants() {
  static const TmConstants c = [] {
    TmConstants k{};
    const double f = kFlattening;
    const double n = f / (2.0 - f);
    const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
    const double a_rect =
        kSemiMajorM / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
    k.rectifying_radius = kScale * a_rect;
    k.alpha[0] = n / 2.0 - 2.0 / 3.0 * n2 + 5.0 / 16.0 * n3 + 41.0 / 180.0 * n4 -
                 127.0 / 288.0 * n5 + 7891.0 / 37800.0 * n6;
    k.alpha[1] = 13.0 / 48.0 * n2 - 3.0 / 5.0 * n3 + 557.0 / 1440.0 * n4 +
                 281.0 / 630.0 * n5 - 1983433.0 / 1935360.0 * n6;
    k.alpha[2] = 61.0 / 240.0 * n3 - 103.0 / 140.0 * n4 + 15061.0 / 26880.0 * n5 +
                 167603.0 / 181440.0 * n6;
    k.alpha[3] = 49561.0 / 161280.0 * n4 - 179.0 / 168.0 * n5 +
                 6601661.0 / 7257600.0 * n6;
    k.alpha[4] = 34729.0 / 80640.0 * n5 - 3418889.0 / 1995840.0 * n6;
    k.alpha[5] = 212378941.0 / 319334400.0 * n6;
    k.beta[0] = n / 2.0 - 2.0 / 3.0 * n2 + 37.0 / 96.0 * n3 - 1.0 / 360.0 * n4 -
                81.0 / 512.0 * n5 + 96199.0 / 604800.0 * n6;
    k.beta[1] = 1.0 / 48.0 * n2 + 1.0 / 15.0 * n3 - 437.0 / 1440.0 * n4 +
                46.0 / 105.0 * n5 - 1118711.0 / 3870720.0 * n6;
    k.beta[2] = 17.0 / 480.0 * n3 - 37.0 / 840.0 * n4 - 209.0 / 4480.0 * n5 +
                5569.0 / 90720.0 * n6;
    k.beta[3] = 4397.0 / 161280.0 * n4 - 11.0 / 504.0 * n5 -
                830251.0 / 7257600.0 * n6;
    k.beta[4] = 4583.0 / 161280.0 * n5 - 108847.0 / 3991680.0 * n6;
    k.beta[5] = 20648693.0 / 638668800.0 * n6;
    k.eccentricity = std::sqrt(f * (2.0 - f));
    return k;
  }();
  return c;
}

// Geodetic tangent -> conformal tangent.
inline double conformal_tangent(double tau, double e) {
  const double sigma = std::sinh(e * std::atanh(e * tau / std::hypot(1.0, tau)));
  return std::hypot(1.0, sigma) * tau - sigma * std::hypot(1.0, tau);
}

// Conformal tangent -> geodetic tangent, by Newton iteration.
inline double geodetic_tangent(double taup, double e) {
  const double e2m = 1.0 - e * e;
  double tau = taup / e2m;
  const double stol = 1e-13 * std::max(1.0, std::fabs(taup));
  for (int i = 0; i < 8; ++i) {
    const double taupa = conformal_tangent(tau, e);
    const double dtau = (taup - taupa) * (1.0 + e2m * tau * tau) /
                        (e2m * std::hypot(1.0, tau) * std::hypot(1.0, taupa));
    tau += dtau;
    if (std::fabs(dtau) < stol) break;
  }
  return tau;
}

inline double central_meridian_deg(int zone) { return 6.0 * zone - 183.0; }

inline void check_zone(int zone) {
  if (zone < 1 || zone > 60)
    throw input_error("UTM zone must be in 1..60 (got " + std::to_string(zone) + ")");
}

}  // namespace geodetail

inline void validate(const GeoPoint& p) {
  if (!(p.lat >= -90.0 && p.lat <= 90.0))
    throw input_error("latitude out of range [-90, 90]: " + std::to_string(p.lat));
  if (!(p.lon >= -180.0 && p.lon <= 180.0))
    throw input_error("longitude out of range [-180, 180]: " + std::to_string(p.lon));
}

inline void validate(const UtmCoord& c) {
  geodetail::check_zone(c.zone);
  if (!(c.easting > 0.0 && c.easting < 1e6))
    throw input_error("UTM easting out of range (0, 1e6): " + std::to_string(c.easting));
  if (!(c.northing >= 0.0 && c.northing <= 1e7))
    throw input_error("UTM northing out of range [0, 1e7]: " + std::to_string(c.northing));
}

inline UtmCoord geo_to_utm(const GeoPoint& p, int zone, bool south) {
  using namespace geodetail;
  validate(p);
  check_zone(zone);
  if (std::fabs(p.lat) >= 84.0)
    throw input_error("transverse Mercator not supported for polar latitudes (|lat| >= 84)");
  const TmConstants& k = tm_constants();

  double dlon = p.lon - central_meridian_deg(zone);
  while (dlon > 180.0) dlon -= 360.0;
  while (dlon < -180.0) dlon += 360.0;
  const double lam = deg2rad(dlon);
  const double phi = deg2rad(p.lat);

  const double taup = conformal_tangent(std::tan(phi), k.eccentricity);
  const double xi0 = std::atan2(taup, std::cos(lam));
  const double eta0 = std::asinh(std::sin(lam) / std::hypot(taup, std::cos(lam)));
  double xi = xi0, eta = eta0;
  for (int j = 0; j < 6; ++j) {
    const double arg = 2.0 * (j + 1);
    xi += k.alpha[j] * std::sin(arg * xi0) * std::cosh(arg * eta0);
    eta += k.alpha[j] * std::cos(arg * xi0) * std::sinh(arg * eta0);
  }

  UtmCoord out;
  out.zone = zone;
  out.south = south;
  out.easting = kFalseEastingM + k.rectifying_radius * eta;
  out.northing = (south ? kFalseNorthingSouthM : 0.0) + k.rectifying_radius * xi;
  return out;
}

inline GeoPoint utm_to_geo(const UtmCoord& c) {
  using namespace geodetail;
  validate(c);
  const TmConstants& k = tm_constants();

  const double xi = (c.northing - (c.south ? kFalseNorthingSouthM : 0.0)) / k.rectifying_radius;
  const double eta = (c.easting - kFalseEastingM) / k.rectifying_radius;
  double xi0 = xi, eta0 = eta;
  for (int j = 0; j < 6; ++j) {
    const double arg = 2.0 * (j + 1);
    xi0 -= k.beta[j] * std::sin(arg * xi) * std::cosh(arg * eta);
    eta0 -= k.beta[j] * std::cos(arg * xi) * std::sinh(arg * eta);
  }
  const double taup = std::sin(xi0) / std::hypot(std::sinh(eta0), std::cos(xi0));
  const double lam = std::atan2(std::sinh(eta0), std::cos(xi0));
  const double tau = geodetic_tangent(taup, k.eccentricity);

  GeoPoint out;
  out.lat = rad2deg(std::atan(tau));
  out.lon = central_meridian_deg(c.zone) + rad2deg(lam);
  return out;
}

// Great-circle distance on the mean-radius sphere.
inline double haversine_km(const GeoPoint& p, const GeoPoint& q) {
  using geodetail::deg2rad;
  const double dphi = deg2rad(q.lat - p.lat);
  const double dlam = deg2rad(q.lon - p.lon);
  const double s = std::sin(dphi / 2.0), t = std::sin(dlam / 2.0);
  const double h = s * s + std::cos(deg2rad(p.lat)) * std::cos(deg2rad(q.lat)) * t * t;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

// City center as the plain arithmetic mean of latitudes and longitudes.
// Deliberately not a spherical centroid; see spherical_mean_center.
inline GeoPoint mean_center(std::span<const GeoPoint> points) {
  if (points.empty()) throw input_error("mean_center: empty point list");
  double lat = 0.0, lon = 0.0;
  for (const auto& p : points) {
    lat += p.lat;
    lon += p.lon;
  }
  const double n = static_cast<double>(points.size());
  return {lat / n, lon / n};
}

// 3D unit-vector mean, for sensitivity checks against the naive center.
inline GeoPoint spherical_mean_center(std::span<const GeoPoint> points) {
  using namespace geodetail;
  if (points.empty()) throw input_error("spherical_mean_center: empty point list");
  double x = 0.0, y = 0.0, z = 0.0;
  for (const auto& p : points) {
    const double phi = deg2rad(p.lat), lam = deg2rad(p.lon);
    x += std::cos(phi) * std::cos(lam);
    y += std::cos(phi) * std::sin(lam);
    z += std::sin(phi);
  }
  return {rad2deg(std::atan2(z, std::hypot(x, y))), rad2deg(std::atan2(y, x))};
}

inline GeoTable distances_to_center(std::span<const NodeId> ids, std::span<const GeoPoint> points,
                                    bool spherical = false) {
  if (ids.size() != points.size())
    throw input_error("distances_to_center: id/point count mismatch");
  for (const auto& p : points) validate(p);
  GeoTable table;
  table.ids.assign(ids.begin(), ids.end());
  table.points.assign(points.begin(), points.end());
  table.center = spherical ? spherical_mean_center(points) : mean_center(points);
  table.distance_km.reserve(points.size());
  for (const auto& p : points) table.distance_km.push_back(haversine_km(table.center, p));
  return table;
}

}  // namespace subcity
