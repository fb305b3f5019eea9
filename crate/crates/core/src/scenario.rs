use crate::error::{Error, Result};
use crate::quantization::QuantizationLadder;
use crate::response::{CloudResponseModel, EdgeResponseModel};

/// Physical and model parameters of one UAV–cloud link.
///
/// Fields are public so sweeps can override them; call [`Scenario::validate`]
/// after editing. The planners assume a valid scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Frames captured per second.
    pub n_frames: f64,
    /// Pixels per frame.
    pub pixels: f64,
    /// Raw capture depth, bits per pixel.
    pub raw_bits: f64,
    /// Extracted-feature size, bits per frame.
    pub feature_bits: f64,
    /// Total OTA bandwidth, Hz.
    pub bandwidth: f64,
    /// Uplink spectrum efficiency, bit/s/Hz.
    pub se_up: f64,
    /// Downlink spectrum efficiency, bit/s/Hz.
    pub se_down: f64,
    pub ladder: QuantizationLadder,
    pub cloud_model: CloudResponseModel,
    /// Carries the update-rate bounds `m_min`/`m_max`.
    pub edge_model: EdgeResponseModel,
    /// Per-frame cloud responses, cycled over the cloud frames. When set the
    /// data stream is planned by the greedy per-frame heuristic.
    pub frame_models: Vec<CloudResponseModel>,
}

impl Default for Scenario {
    /// 10 frames/s of 10⁷ pixels, 860-bit features, 10 MHz at 2.55/5 bit/s/Hz,
    /// model updates between 230 kbit/s and 23 Mbit/s.
    fn default() -> Self {
        Self {
            n_frames: 10.0,
            pixels: 1e7,
            raw_bits: 8.0,
            feature_bits: 860.0,
            bandwidth: 10e6,
            se_up: 2.55,
            se_down: 5.0,
            ladder: QuantizationLadder::default(),
            cloud_model: CloudResponseModel::exponential(0.70, 0.92, 3.0)
                .expect("default cloud response is valid"),
            edge_model: EdgeResponseModel::exponential(0.75, 0.85, 230e3, 23e6, 3.0)
                .expect("default edge response is valid"),
            frame_models: Vec::new(),
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("n_frames", self.n_frames),
            ("pixels", self.pixels),
            ("raw_bits", self.raw_bits),
            ("feature_bits", self.feature_bits),
            ("se_up", self.se_up),
            ("se_down", self.se_down),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::field(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.bandwidth >= 0.0 && self.bandwidth.is_finite()) {
            return Err(Error::field(
                "bandwidth",
                format!("must be non-negative, got {}", self.bandwidth),
            ));
        }
        Ok(())
    }

    pub fn m_min(&self) -> f64 {
        self.edge_model.m_min()
    }

    pub fn m_max(&self) -> f64 {
        self.edge_model.m_max()
    }

    /// Raw visual data rate `N·x·b`, bit/s.
    pub fn data_rate(&self) -> f64 {
        self.n_frames * self.pixels * self.raw_bits
    }

    /// Feature-stream rate for cloud share `beta`, bit/s.
    pub fn feature_rate(&self, beta: f64) -> f64 {
        self.feature_bits * beta * self.n_frames
    }

    /// Largest cloud share whose feature stream fits in `b_up` Hz of uplink.
    pub fn beta_cap(&self, b_up: f64) -> f64 {
        (b_up * self.se_up / (self.feature_bits * self.n_frames)).min(1.0)
    }
}
