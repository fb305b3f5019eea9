//! Accuracy response curves of the two models.
//!
//! The cloud curve maps residual-data bits per pixel to cloud mAP; the edge
//! curve maps model-update rate (bit/s) to edge mAP. Both come either as a
//! saturating exponential or as a breakpoint table fitted from experiments.
//! Every curve is non-decreasing and concave on its domain.

use std::path::Path;

use crate::columns;
use crate::error::{Error, Result};

const CONCAVITY_TOL: f64 = 1e-12;

/// Piecewise-linear curve through validated breakpoints, flat past the last one.
#[derive(Debug, Clone, PartialEq)]
pub struct Breakpoints {
    points: Vec<(f64, f64)>,
}

impl Breakpoints {
    /// Requires at least two points, strictly increasing abscissae, values in
    /// `[0, 1]`, non-decreasing values and non-increasing segment slopes.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid(
                "a response table needs at least two breakpoints",
            ));
        }
        for &(x, y) in &points {
            if !x.is_finite() || !(0.0..=1.0).contains(&y) {
                return Err(Error::invalid(format!(
                    "breakpoint ({x}, {y}) is out of range"
                )));
            }
        }
        let mut prev_slope = f64::INFINITY;
        for pair in points.windows(2) {
            let ((x0, y0), (x1, y1)) = (pair[0], pair[1]);
            if x1 <= x0 {
                return Err(Error::invalid(format!(
                    "breakpoints must be strictly increasing, got {x0} then {x1}"
                )));
            }
            if y1 < y0 {
                return Err(Error::invalid(format!(
                    "response decreases between {x0} and {x1}"
                )));
            }
            let slope = (y1 - y0) / (x1 - x0);
            if slope > prev_slope + CONCAVITY_TOL {
                return Err(Error::invalid(format!(
                    "response is not concave at {x0}: slope rises from {prev_slope} to {slope}"
                )));
            }
            prev_slope = slope;
        }
        Ok(Self { points })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::new(columns::load_pairs(path.as_ref())?)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn first(&self) -> (f64, f64) {
        self.points[0]
    }

    fn last(&self) -> (f64, f64) {
        self.points[self.points.len() - 1]
    }

    /// Linear interpolation; clamps to the end values outside the table.
    fn value(&self, x: f64) -> f64 {
        let (x0, y0) = self.first();
        if x <= x0 {
            return y0;
        }
        let (xn, yn) = self.last();
        if x >= xn {
            return yn;
        }
        let i = self.segment(x);
        let ((xa, ya), (xb, yb)) = (self.points[i], self.points[i + 1]);
        ya + (yb - ya) * (x - xa) / (xb - xa)
    }

    /// Slope of the segment starting at or before `x`; zero past the table.
    fn slope(&self, x: f64) -> f64 {
        if x < self.first().0 || x >= self.last().0 {
            return 0.0;
        }
        let i = self.segment(x);
        let ((xa, ya), (xb, yb)) = (self.points[i], self.points[i + 1]);
        (yb - ya) / (xb - xa)
    }

    // index i with points[i].0 <= x < points[i+1].0
    fn segment(&self, x: f64) -> usize {
        let upper = self.points.partition_point(|&(px, _)| px <= x);
        upper.saturating_sub(1).min(self.points.len() - 2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CloudShape {
    /// `feature_only + (ceiling − feature_only)·(1 − e^{−κ·b̂})`
    Exponential { kappa: f64 },
    /// Breakpoints over bits per pixel, the first at `b̂ = 0`.
    Table(Breakpoints),
}

/// Cloud mAP as a function of residual-data bits per pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct CloudResponseModel {
    map_feature_only: f64,
    map_ceiling: f64,
    shape: CloudShape,
}

impl CloudResponseModel {
    pub fn exponential(map_feature_only: f64, map_ceiling: f64, kappa: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&map_feature_only)
            || !(0.0..=1.0).contains(&map_ceiling)
            || map_feature_only > map_ceiling
        {
            return Err(Error::invalid(format!(
                "cloud response needs 0 <= feature-only ({map_feature_only}) <= ceiling ({map_ceiling}) <= 1"
            )));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::invalid(format!(
                "cloud kappa must be positive, got {kappa}"
            )));
        }
        Ok(Self {
            map_feature_only,
            map_ceiling,
            shape: CloudShape::Exponential { kappa },
        })
    }

    pub fn table(table: Breakpoints) -> Result<Self> {
        if table.first().0 != 0.0 {
            return Err(Error::invalid(
                "cloud response table must start at 0 bits per pixel",
            ));
        }
        Ok(Self {
            map_feature_only: table.first().1,
            map_ceiling: table.last().1,
            shape: CloudShape::Table(table),
        })
    }

    pub fn map_feature_only(&self) -> f64 {
        self.map_feature_only
    }

    pub fn map_ceiling(&self) -> f64 {
        self.map_ceiling
    }

    pub fn shape(&self) -> &CloudShape {
        &self.shape
    }

    /// mAP with every cloud frame carrying `bits_per_pixel` of residual data.
    pub fn eval(&self, bits_per_pixel: f64) -> Result<f64> {
        check_non_negative("bits_per_pixel", bits_per_pixel)?;
        Ok(self.at(bits_per_pixel))
    }

    /// d mAP / d b̂; analytic for the exponential, segment slope for tables.
    pub fn derivative(&self, bits_per_pixel: f64) -> Result<f64> {
        check_non_negative("bits_per_pixel", bits_per_pixel)?;
        Ok(match &self.shape {
            CloudShape::Exponential { kappa } => {
                kappa * (self.map_ceiling - self.map_feature_only) * (-kappa * bits_per_pixel).exp()
            }
            CloudShape::Table(t) => t.slope(bits_per_pixel),
        })
    }

    pub(crate) fn at(&self, bits_per_pixel: f64) -> f64 {
        match &self.shape {
            CloudShape::Exponential { kappa } => {
                self.map_feature_only
                    + (self.map_ceiling - self.map_feature_only)
                        * (1.0 - (-kappa * bits_per_pixel).exp())
            }
            CloudShape::Table(t) => t.value(bits_per_pixel),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EdgeShape {
    /// Normalised exponential rise from baseline at `m_min` to max at `m_max`.
    Exponential { kappa: f64 },
    /// Breakpoints over bit/s; the first and last define `m_min` and `m_max`.
    Table(Breakpoints),
}

/// Edge mAP as a function of the model-update rate.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeResponseModel {
    map_baseline: f64,
    map_max: f64,
    m_min: f64,
    m_max: f64,
    shape: EdgeShape,
}

impl EdgeResponseModel {
    pub fn exponential(
        map_baseline: f64,
        map_max: f64,
        m_min: f64,
        m_max: f64,
        kappa: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&map_baseline)
            || !(0.0..=1.0).contains(&map_max)
            || map_baseline > map_max
        {
            return Err(Error::invalid(format!(
                "edge response needs 0 <= baseline ({map_baseline}) <= max ({map_max}) <= 1"
            )));
        }
        check_update_bounds(m_min, m_max)?;
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::invalid(format!(
                "edge kappa must be positive, got {kappa}"
            )));
        }
        Ok(Self {
            map_baseline,
            map_max,
            m_min,
            m_max,
            shape: EdgeShape::Exponential { kappa },
        })
    }

    pub fn table(table: Breakpoints) -> Result<Self> {
        let ((m_min, map_baseline), (m_max, map_max)) = (table.first(), table.last());
        check_update_bounds(m_min, m_max)?;
        Ok(Self {
            map_baseline,
            map_max,
            m_min,
            m_max,
            shape: EdgeShape::Table(table),
        })
    }

    pub fn map_baseline(&self) -> f64 {
        self.map_baseline
    }

    pub fn map_max(&self) -> f64 {
        self.map_max
    }

    pub fn m_min(&self) -> f64 {
        self.m_min
    }

    pub fn m_max(&self) -> f64 {
        self.m_max
    }

    pub fn shape(&self) -> &EdgeShape {
        &self.shape
    }

    /// Same model with new update-rate bounds; tables cannot be rescaled.
    pub fn with_update_bounds(&self, m_min: f64, m_max: f64) -> Result<Self> {
        match self.shape {
            EdgeShape::Exponential { kappa } => {
                Self::exponential(self.map_baseline, self.map_max, m_min, m_max, kappa)
            }
            EdgeShape::Table(_) if m_min == self.m_min && m_max == self.m_max => Ok(self.clone()),
            EdgeShape::Table(_) => Err(Error::invalid(
                "update bounds of a tabulated edge response come from its first and last breakpoints",
            )),
        }
    }

    /// mAP after receiving updates at `m` bit/s. Below `m_min` the edge keeps
    /// its baseline model; above `m_max` the response is flat.
    pub fn eval(&self, m: f64) -> f64 {
        if m < self.m_min {
            return self.map_baseline;
        }
        if m >= self.m_max {
            return self.map_max;
        }
        match &self.shape {
            EdgeShape::Exponential { kappa } => {
                let t = (m - self.m_min) / (self.m_max - self.m_min);
                self.map_baseline
                    + (self.map_max - self.map_baseline) * (1.0 - (-kappa * t).exp())
                        / (1.0 - (-kappa).exp())
            }
            EdgeShape::Table(t) => t.value(m),
        }
    }

    /// d mAP / dM, zero outside `[m_min, m_max)`.
    pub fn derivative(&self, m: f64) -> f64 {
        if m < self.m_min || m >= self.m_max {
            return 0.0;
        }
        match &self.shape {
            EdgeShape::Exponential { kappa } => {
                let span = self.m_max - self.m_min;
                let t = (m - self.m_min) / span;
                (self.map_max - self.map_baseline) * kappa * (-kappa * t).exp()
                    / ((1.0 - (-kappa).exp()) * span)
            }
            EdgeShape::Table(t) => t.slope(m),
        }
    }
}

fn check_update_bounds(m_min: f64, m_max: f64) -> Result<()> {
    if !(m_min > 0.0 && m_max > m_min && m_max.is_finite()) {
        return Err(Error::invalid(format!(
            "update bounds need 0 < m_min ({m_min}) < m_max ({m_max})"
        )));
    }
    Ok(())
}

fn check_non_negative(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) {
        return Err(Error::invalid(format!(
            "{name} must be non-negative, got {v}"
        )));
    }
    Ok(())
}
