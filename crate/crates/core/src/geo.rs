//! Points, axis-aligned boxes and great-circle distance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Mean Earth radius (IUGG), kilometers.
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error("latitude {0} outside [-90, 90]")]
    Latitude(f64),
    #[error("longitude {0} outside [-180, 180]")]
    Longitude(f64),
    #[error("bounding box has min_lat {min} > max_lat {max}")]
    InvertedLatitude { min: f64, max: f64 },
    #[error("bounding box crosses the antimeridian (min_lon {min} > max_lon {max})")]
    Antimeridian { min: f64, max: f64 },
}

/// A validated WGS84 coordinate in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatLon {
    pub lat: f64,
    pub lon: f64,
}

impl LatLon {
    pub fn new(lat: f64, lon: f64) -> Result<Self, GeoError> {
        if !(-90.0..=90.0).contains(&lat) {
            return Err(GeoError::Latitude(lat));
        }
        if !(-180.0..=180.0).contains(&lon) {
            return Err(GeoError::Longitude(lon));
        }
        Ok(LatLon { lat, lon })
    }

    /// Haversine distance on a sphere of radius [`EARTH_RADIUS_KM`].
    pub fn distance_km(&self, other: &LatLon) -> f64 {
        let (phi1, phi2) = (self.lat.to_radians(), other.lat.to_radians());
        let dphi = phi2 - phi1;
        let dlambda = (other.lon - self.lon).to_radians();
        let h = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
        2.0 * EARTH_RADIUS_KM * h.clamp(0.0, 1.0).sqrt().asin()
    }
}

/// Great-circle distance between two `(lat, lon)` pairs in degrees.
pub fn haversine_km(a: (f64, f64), b: (f64, f64)) -> Result<f64, GeoError> {
    let a = LatLon::new(a.0, a.1)?;
    let b = LatLon::new(b.0, b.1)?;
    Ok(a.distance_km(&b))
}

/// Axis-aligned box. Boxes that wrap the antimeridian are not representable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_lat: f64,
    pub min_lon: f64,
    pub max_lat: f64,
    pub max_lon: f64,
}

impl BoundingBox {
    pub fn new(min_lat: f64, min_lon: f64, max_lat: f64, max_lon: f64) -> Result<Self, GeoError> {
        LatLon::new(min_lat, min_lon)?;
        LatLon::new(max_lat, max_lon)?;
        if min_lat > max_lat {
            return Err(GeoError::InvertedLatitude { min: min_lat, max: max_lat });
        }
        if min_lon > max_lon {
            return Err(GeoError::Antimeridian { min: min_lon, max: max_lon });
        }
        Ok(BoundingBox { min_lat, min_lon, max_lat, max_lon })
    }

    /// Closed-interval containment: points on an edge are inside.
    pub fn contains(&self, p: &LatLon) -> bool {
        in_bounding_box((p.lat, p.lon), self)
    }
}

pub fn in_bounding_box(point: (f64, f64), bbox: &BoundingBox) -> bool {
    let (lat, lon) = point;
    bbox.min_lat <= lat && lat <= bbox.max_lat && bbox.min_lon <= lon && lon <= bbox.max_lon
}
