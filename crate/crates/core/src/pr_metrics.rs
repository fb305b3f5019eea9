//! Precision-recall curves, their mAP, and the fusion of a cloud and an edge
//! model into one joint detector.
//!
//! A curve holds one (recall, precision) pair per IoU threshold. Its mAP is
//! the trapezoid area with an implicit anchor `(0, p¹)` at the origin of the
//! recall axis, so a curve of constant precision `p` reaching recall 1 scores
//! exactly `p`.
//!
//! When a share `β` of frames goes to the cloud and `1 − β` stays on the
//! edge, the joint precision and recall at each threshold are weighted
//! harmonic means of the two models' values.

use std::path::Path;

use crate::columns;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrPoint {
    pub recall: f64,
    pub precision: f64,
}

impl PrPoint {
    pub fn new(recall: f64, precision: f64) -> Result<Self> {
        check_fraction("recall", recall)?;
        check_fraction("precision", precision)?;
        Ok(Self { recall, precision })
    }
}

/// A non-empty precision-recall curve sorted by recall.
#[derive(Debug, Clone, PartialEq)]
pub struct PrCurve {
    points: Vec<PrPoint>,
}

impl PrCurve {
    /// Builds a curve, stably sorting the points by recall.
    pub fn new(mut points: Vec<PrPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("a PR curve needs at least one point"));
        }
        for p in &points {
            PrPoint::new(p.recall, p.precision)?;
        }
        points.sort_by(|a, b| a.recall.total_cmp(&b.recall));
        Ok(Self { points })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let points = pairs
            .iter()
            .map(|&(r, p)| PrPoint::new(r, p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    /// Parses the two-column `recall precision` text format.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_pairs(&columns::parse_pairs(text, Path::new("<text>"))?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_pairs(&columns::load_pairs(path.as_ref())?)
    }

    pub fn points(&self) -> &[PrPoint] {
        &self.points
    }

    /// Number of IoU thresholds `K`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn map(&self) -> f64 {
        map_from_curve(self)
    }
}

/// Share `β` of frames analysed by the cloud model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionWeights {
    beta: f64,
}

impl FusionWeights {
    pub fn new(beta: f64) -> Result<Self> {
        check_fraction("beta", beta)?;
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Trapezoid area under the curve, anchored at `(0, p¹)`, clamped to `[0, 1]`.
pub fn map_from_curve(curve: &PrCurve) -> f64 {
    let pts = curve.points();
    let (mut prev_r, mut prev_p) = (0.0, pts[0].precision);
    let mut area = 0.0;
    for pt in pts {
        area += (pt.recall - prev_r) * (pt.precision + prev_p) / 2.0;
        prev_r = pt.recall;
        prev_p = pt.precision;
    }
    area.clamp(0.0, 1.0)
}

/// Joint precision `1 / (β/p_cloud + (1−β)/p_edge)`.
pub fn fuse_precision(p_cloud: f64, p_edge: f64, w: FusionWeights) -> Result<f64> {
    check_fraction("p_cloud", p_cloud)?;
    check_fraction("p_edge", p_edge)?;
    Ok(weighted_harmonic(p_cloud, p_edge, w.beta))
}

/// Joint recall; same harmonic form as [`fuse_precision`].
pub fn fuse_recall(r_cloud: f64, r_edge: f64, w: FusionWeights) -> Result<f64> {
    check_fraction("r_cloud", r_cloud)?;
    check_fraction("r_edge", r_edge)?;
    Ok(weighted_harmonic(r_cloud, r_edge, w.beta))
}

/// mAP of the joint system computed from both curves threshold by threshold.
///
/// Both curves must be sampled on the same IoU grid.
pub fn joint_map_exact(cloud: &PrCurve, edge: &PrCurve, w: FusionWeights) -> Result<f64> {
    if cloud.len() != edge.len() {
        return Err(Error::invalid(format!(
            "curves have {} and {} thresholds",
            cloud.len(),
            edge.len()
        )));
    }
    let fused = cloud
        .points()
        .iter()
        .zip(edge.points())
        .map(|(c, e)| PrPoint {
            recall: weighted_harmonic(c.recall, e.recall, w.beta),
            precision: weighted_harmonic(c.precision, e.precision, w.beta),
        })
        .collect();
    // fusion is monotone in each argument, so the fused recalls stay sorted
    Ok(map_from_curve(&PrCurve { points: fused }))
}

/// Closed-form joint mAP from the two models' mAPs:
/// `mAP_L·mAP_S / ((1−β)·mAP_L + β·mAP_S)`.
pub fn joint_map_lower_bound(map_cloud: f64, map_edge: f64, w: FusionWeights) -> f64 {
    let beta = w.beta;
    if beta == 0.0 {
        return map_edge.clamp(0.0, 1.0);
    }
    if beta == 1.0 {
        return map_cloud.clamp(0.0, 1.0);
    }
    let denom = (1.0 - beta) * map_cloud + beta * map_edge;
    if map_cloud <= 0.0 || map_edge <= 0.0 || denom <= 0.0 {
        return 0.0;
    }
    (map_cloud * map_edge / denom).clamp(0.0, 1.0)
}

/// `Δ = (p_L − p_S)·(r_L − r_S)` at threshold `k` (1-based).
pub fn delta_gap(cloud: &PrCurve, edge: &PrCurve, k: usize) -> Result<f64> {
    let len = cloud.len().min(edge.len());
    if k == 0 || k > len {
        return Err(Error::IndexOutOfRange { index: k, len });
    }
    let (c, e) = (cloud.points[k - 1], edge.points[k - 1]);
    Ok((c.precision - e.precision) * (c.recall - e.recall))
}

/// `1 / (β/a + (1−β)/b)`, with the limit 0 when a zero value carries weight.
pub(crate) fn weighted_harmonic(cloud: f64, edge: f64, beta: f64) -> f64 {
    if beta == 0.0 {
        return edge;
    }
    if beta == 1.0 {
        return cloud;
    }
    if cloud == 0.0 || edge == 0.0 {
        return 0.0;
    }
    1.0 / (beta / cloud + (1.0 - beta) / edge)
}

fn check_fraction(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::invalid(format!("{name} = {v} is outside [0, 1]")));
    }
    Ok(())
}
